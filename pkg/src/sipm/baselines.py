"""Projection baselines and the simplified neighborhood-projection variant.

PSGM clamps a plain (stochastic) gradient step back onto the box.  The
simplified interior-point variant replaces the ratio test with an orthogonal
projection onto the inner neighborhood and pays for it with the conservative
curvature-bound step size, whose recurrence stalls at a positive floor; the
``recurrence_ratio`` diagnostic exposes that floor numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ThetaLinkViolation
from .geometry import (KktCertificate, barrier_gradient, kkt_certificate,
                       project_to_neighborhood, projected_gradient_norm,
                       range_gap, slacks)
from .problems import batch_sampler
from .solver import RunResult

C_CAP = 1e6


@dataclass(frozen=True)
class BaselineConfig:
    kind: str                       # "psgm" | "simplified_ipm"
    step_schedule: tuple = ()
    schedule_link: str = "explicit"  # or "match_sipm_endpoints"
    theta_link_c: float | None = None


def psgm_step(x, g, alpha, bounds):
    """Projected gradient step: clamp x - alpha * g onto [l, u]."""
    x = np.asarray(x, dtype=float)
    return np.clip(x - alpha * np.asarray(g, dtype=float), bounds.lower, bounds.upper)


def c_constant(bounds, kappa_inf, mu1):
    """Neighborhood link constant min_i 1 / (kappa_inf + 2*mu1/(u_i - l_i)).

    The minimum runs over coordinates with at least one finite bound; a
    coordinate with one infinite side contributes 1/kappa_inf.  Degenerate
    inputs that would make the constant infinite are capped at 1e6.
    """
    finite_any = bounds.finite_lower | bounds.finite_upper
    gaps = bounds.gaps()[finite_any]
    terms = kappa_inf + np.where(np.isfinite(gaps), 2.0 * mu1 / gaps, 0.0)
    largest = float(np.max(terms))  # min of reciprocals
    if largest <= 0.0:
        return C_CAP
    return min(1.0 / largest, C_CAP)


def simplified_ipm_step(x, grad_f, bounds, mu, theta, ell_f, theta_link_c=None):
    """One step of the projection variant with the conservative step size.

    q is the barrier gradient, alpha = 1/(ell_f + 2*mu/theta**2), and the
    update is the orthogonal projection of x - alpha*q onto the theta
    neighborhood.  When ``theta_link_c`` is given the precondition
    theta <= c * mu is enforced.
    """
    if theta_link_c is not None and theta > theta_link_c * mu:
        raise ThetaLinkViolation(f"theta={theta} exceeds c*mu={theta_link_c * mu}")
    q = barrier_gradient(grad_f, x, bounds, mu)
    alpha = 1.0 / (ell_f + 2.0 * mu / theta ** 2)
    return project_to_neighborhood(np.asarray(x, dtype=float) - alpha * q, bounds, theta)


def recurrence_ratio(mu_seq, c, psi, ell_f, C):
    """The non-vanishing error-to-contraction ratio of the simplified variant.

    For each mu in the sequence, with alpha = 1/(ell_f + 2*mu/(c*mu)**2) and
    contraction v = sqrt(1 - alpha*psi), returns C*mu / (1 - v).  As mu
    vanishes the ratio tends to 4*C/(c**2 * psi) instead of zero, which is
    why the plain contraction argument cannot close.
    """
    mu = np.asarray(mu_seq, dtype=float)
    alpha_psi = psi / (ell_f + 2.0 / (c ** 2 * mu))
    if np.any(alpha_psi > 1.0):
        raise DomainError("alpha*psi exceeds 1 somewhere; need psi <= ell_f")
    v = np.sqrt(1.0 - alpha_psi)
    return C * mu / (1.0 - v)


def _active_set_certificate(x, g, bounds):
    """KKT residuals at a possibly-boundary point, multipliers from the
    active set.  Complementarity is exact: multipliers live only on active
    bounds, where the slack is zero."""
    g = np.asarray(g, dtype=float)
    lo, up = slacks(x, bounds)
    y = np.where(bounds.finite_lower & (lo <= 0.0), np.maximum(g, 0.0), 0.0)
    z = np.where(bounds.finite_upper & (up <= 0.0), np.maximum(-g, 0.0), 0.0)
    residual = float(np.max(np.abs(g - y + z)))
    return KktCertificate(y=y, z=z, stationarity_residual=residual,
                          complementarity_residual=0.0)


def _final_metrics(objective, bounds, x, mu_last=None):
    """Final metrics with true gradients.  Interior iterates (mu_last given)
    get barrier multipliers; boundary-capable iterates get active-set ones."""
    g = objective.gradient(x)
    if mu_last is None:
        cert = _active_set_certificate(x, g, bounds)
    else:
        cert = kkt_certificate(x, g, bounds, mu_last)
    return dict(final_objective=float(objective.value(x)),
                final_projected_grad_norm=projected_gradient_norm(x, g, bounds),
                final_kkt=cert)


def match_sipm_endpoints(shape, alpha_first, alpha_last):
    """Rescale a decreasing shape sequence (starting at 1) geometrically so the
    produced steps match the given first and last values."""
    shape = np.asarray(shape, dtype=float)
    if shape.size == 0:
        return shape
    s_end = shape[-1]
    if s_end >= 1.0 or alpha_first <= 0.0 or alpha_last <= 0.0 or alpha_last == alpha_first:
        return np.full(shape.size, alpha_first)
    exponent = np.log(shape) / np.log(s_end)
    return alpha_first * (alpha_last / alpha_first) ** exponent


def run_psgm(objective, bounds, steps, x1, maxiter, mode="deterministic",
             batch_fraction=0.01, seed=0):
    """Run the projected-(stochastic-)gradient baseline for maxiter iterations.

    ``steps`` is the per-iteration step-size sequence (length >= maxiter).
    Final metrics use true gradients, mirroring the interior-point runs.
    """
    x = np.asarray(x1, dtype=float).copy()
    batches = None
    if mode == "stochastic":
        m = objective.sample_count
        batches = batch_sampler(m, max(1, math.ceil(batch_fraction * m)), seed)
    for k in range(1, maxiter + 1):
        if mode == "stochastic":
            g = objective.stochastic_gradient(x, next(batches))
        else:
            g = objective.gradient(x)
        x = psgm_step(x, g, steps[k - 1], bounds)
    # the final iterate may sit on the box boundary: active-set certificate
    metrics = _final_metrics(objective, bounds, x)
    return RunResult(final_x=x, records=[], stall_count=0,
                     alpha_first=float(steps[0]) if maxiter else math.nan,
                     alpha_last=float(steps[maxiter - 1]) if maxiter else math.nan,
                     **metrics)


def run_simplified(objective, bounds, mu_seq, ell_f, c, x1, maxiter,
                   mode="deterministic", batch_fraction=0.01, seed=0):
    """Run the simplified projection variant with theta_k = c * mu_k.

    theta is clamped just below half the box width so the projection target
    stays nonempty when mu is still large.
    """
    x = np.asarray(x1, dtype=float).copy()
    delta = range_gap(bounds, 100.0)
    theta_cap = 0.499 * delta
    batches = None
    if mode == "stochastic":
        m = objective.sample_count
        batches = batch_sampler(m, max(1, math.ceil(batch_fraction * m)), seed)
    alpha_first = math.nan
    alpha_last = math.nan
    for k in range(1, maxiter + 1):
        mu = float(mu_seq[k - 1])
        theta = min(c * mu, theta_cap)
        if mode == "stochastic":
            g = objective.stochastic_gradient(x, next(batches))
        else:
            g = objective.gradient(x)
        q = barrier_gradient(g, x, bounds, mu)
        alpha = 1.0 / (ell_f + 2.0 * mu / theta ** 2)
        x = project_to_neighborhood(x - alpha * q, bounds, theta)
        if math.isnan(alpha_first):
            alpha_first = alpha
        alpha_last = alpha
    mu_last = float(mu_seq[maxiter - 1]) if maxiter >= 1 else None
    metrics = _final_metrics(objective, bounds, x, mu_last=mu_last)
    return RunResult(final_x=x, records=[], stall_count=0,
                     alpha_first=alpha_first, alpha_last=alpha_last, **metrics)
