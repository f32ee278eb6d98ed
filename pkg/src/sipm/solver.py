"""Interior-point main loop with prescribed parameter sequences.

Every iterate is kept inside a shrinking inner neighborhood of the box by a
closed-form ratio test, so no fraction-to-the-boundary rule, line search, or
step acceptance test is needed.  The loop runs with either exact gradients
or seeded mini-batch estimates; with auditing enabled each iteration is
checked against the contracts the step-size rules are supposed to guarantee
and any failure raises InvariantViolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (EigenvalueBoundViolation, HorizonExceeded, InfeasibleStart,
                     InvariantViolation, ThetaTooLarge)
from .geometry import (Bounds, barrier_gradient, default_chi, in_neighborhood,
                       kkt_certificate, projected_gradient_norm, range_gap,
                       require_interior, shifted_barrier_value, slacks)
from .problems import batch_sampler
from .schedules import BufferSequences, PowerSchedule, StaircaseSchedule, validate_exponents
from .stepsize import (Constants, ScheduleContext, local_lipschitz, ratio_test,
                       step_size_bundle)


@dataclass(frozen=True)
class SolverConfig:
    mode: str                         # "deterministic" | "stochastic"
    bounds: Bounds
    schedule: PowerSchedule | StaircaseSchedule
    buffers: BufferSequences
    constants: Constants
    maxiter: int
    rng_seed: int = 0
    batch_fraction: float = 0.01
    hk_strategy: str = "practical"    # "practical" | "identity" | "custom"
    hk_custom: object = None          # callable (x, mu) -> diagonal, for "custom"
    hk_eigen_bounds: tuple | None = None
    audit_level: str = "off"          # "off" | "invariants" | "full_trace"
    chi: float | None = None          # shift constant for the decrease audit


@dataclass
class SolverState:
    x: np.ndarray
    k: int


@dataclass(frozen=True)
class IterationRecord:
    k: int
    mu_k: float
    theta_k: float
    alpha_k: float
    gamma_k: float
    ell_k: float
    q_norm: float
    phi_tilde: float
    stalled: bool


@dataclass
class RunResult:
    final_x: np.ndarray
    records: list
    final_objective: float
    final_projected_grad_norm: float
    final_kkt: object
    stall_count: int
    alpha_first: float = math.nan
    alpha_last: float = math.nan


def build_hk(x, bounds, mu, ell_f_bar, strategy, custom_diag=None, eigen_bounds=None):
    """Diagonal scaling for one iteration, with its extreme eigenvalues.

    practical: ell_f_bar + mu/(x_i - l_i)^2 + mu/(u_i - x_i)^2 per coordinate
    (infinite sides contribute nothing), identity: all ones, custom: the given
    diagonal validated against the declared eigenvalue interval.
    """
    require_interior(x, bounds)
    x = np.asarray(x, dtype=float)
    if strategy == "practical":
        lo, up = slacks(x, bounds)
        diag = np.full(x.size, float(ell_f_bar))
        diag[bounds.finite_lower] += mu / lo[bounds.finite_lower] ** 2
        diag[bounds.finite_upper] += mu / up[bounds.finite_upper] ** 2
    elif strategy == "identity":
        diag = np.ones(x.size)
    elif strategy == "custom":
        diag = np.asarray(custom_diag, dtype=float)
        if eigen_bounds is None:
            raise ValueError("custom scaling needs declared eigenvalue bounds")
        lam_lo, lam_hi = eigen_bounds
        if lam_lo <= 0.0 or np.any(diag < lam_lo) or np.any(diag > lam_hi):
            raise EigenvalueBoundViolation(
                f"diagonal escapes [{lam_lo}, {lam_hi}] or the floor is nonpositive")
    else:
        raise ValueError(f"unknown scaling strategy {strategy!r}")
    return diag, float(np.min(diag)), float(np.max(diag))


def _rel_ok(lhs, rhs, tol):
    """lhs <= rhs up to a relative slack of tol."""
    return lhs <= rhs + tol * (1.0 + abs(rhs))


def sipm_step(state, oracle_gradient, config, delta, f_value=None, observer=None):
    """One iteration: scaling, barrier gradient, step sizes, ratio test, update.

    ``f_value`` (the objective at the current iterate) is only needed to fill
    the shifted-barrier field of the trace record.  The returned state holds
    the next iterate and the incremented counter.
    """
    k = state.k
    sched = config.schedule
    mu_k = sched.mu(k)
    theta_k = sched.theta(k)
    theta_prev = sched.theta(k - 1)
    bounds = config.bounds

    custom = config.hk_custom(state.x, mu_k) if config.hk_strategy == "custom" else None
    h_diag, lam_min, lam_max = build_hk(state.x, bounds, mu_k, config.constants.ell_f,
                                        config.hk_strategy, custom_diag=custom,
                                        eigen_bounds=config.hk_eigen_bounds)
    q = barrier_gradient(oracle_gradient, state.x, bounds, mu_k)
    ctx = ScheduleContext(mu_k=mu_k, theta_k=theta_k, theta_prev=theta_prev,
                          t_alpha=sched.t_alpha,
                          alpha_buff=config.buffers.alpha(k),
                          gamma_buff=config.buffers.gamma(k))
    bundle = step_size_bundle(state.x, q, h_diag, k, bounds, ctx, config.constants,
                              delta, stochastic=config.mode == "stochastic")
    d = -q / h_diag
    gamma_k = ratio_test(state.x, d, bundle.alpha_k, bounds, theta_k, bundle.gamma_max)
    x_next = state.x + (gamma_k * bundle.alpha_k) * d
    # The binding ratio is exact in real arithmetic; the fused update can land
    # an ulp outside the neighborhood, so snap it back.
    x_next = np.clip(x_next, bounds.lower + theta_k, bounds.upper - theta_k)

    stalled = gamma_k == 0.0 and bool(np.any(d != 0.0))

    if config.audit_level != "off":
        _audit_step(config, k, state.x, x_next, q, d, bundle, gamma_k, mu_k, theta_k)

    phi = math.nan
    if f_value is not None:
        chi = config.chi if config.chi is not None else default_chi(bounds)
        phi = shifted_barrier_value(f_value, state.x, bounds, mu_k, chi)

    record = IterationRecord(k=k, mu_k=mu_k, theta_k=theta_k, alpha_k=bundle.alpha_k,
                             gamma_k=gamma_k, ell_k=bundle.ell_k,
                             q_norm=float(np.linalg.norm(q)), phi_tilde=phi,
                             stalled=stalled)
    if observer is not None:
        observer(dict(k=k, x=state.x.copy(), x_next=x_next.copy(), q=q, d=d,
                      h_diag=h_diag, lam_min=lam_min, lam_max=lam_max,
                      bundle=bundle, gamma_k=gamma_k, mu_k=mu_k,
                      theta_k=theta_k, theta_prev=theta_prev))
    return SolverState(x=x_next, k=k + 1), record


def _audit_step(config, k, x, x_next, q, d, bundle, gamma_k, mu_k, theta_k):
    bounds = config.bounds
    if not in_neighborhood(x_next, bounds, theta_k):
        raise InvariantViolation(k, "next iterate left the theta_k neighborhood")
    tol = 1e-12
    ell_pair = local_lipschitz(mu_k, x, x_next, bounds, config.constants.ell_f)
    ell_cap = config.constants.ell_f + 2.0 * mu_k / theta_k ** 2
    if not _rel_ok(ell_pair, bundle.ell_k, tol):
        raise InvariantViolation(k, "segment Lipschitz constant exceeds ell_k")
    if not _rel_ok(bundle.ell_k, ell_cap, tol):
        raise InvariantViolation(k, "ell_k exceeds the conservative curvature cap")
    if not _rel_ok(bundle.alpha_min, bundle.alpha_k, tol) \
            or not _rel_ok(bundle.alpha_k, bundle.alpha_max, tol):
        raise InvariantViolation(k, "alpha_k escaped [alpha_min, alpha_max]")
    if not _rel_ok(bundle.gamma_min, gamma_k, tol) \
            or not _rel_ok(gamma_k, bundle.gamma_max, tol):
        raise InvariantViolation(k, "gamma_k escaped [gamma_min, gamma_max]")
    if not _rel_ok(gamma_k * bundle.alpha_k, bundle.gamma_bar * bundle.alpha_pre, tol):
        raise InvariantViolation(k, "realized step exceeds the look-ahead step")
    if np.any(q != 0.0) and not float(q @ d) < 0.0:
        raise InvariantViolation(k, "direction is not a descent direction for q")


def run(objective, config, x1, observer=None):
    """Execute ``config.maxiter`` iterations from x1 and report final metrics.

    The final objective value, projected-gradient norm, and KKT certificate
    are always computed with the true gradient, also in stochastic mode.
    Seeded stochastic runs are exactly reproducible.  ``observer``, when
    given, receives one dict per iteration with the internal quantities.
    """
    bounds = config.bounds
    x1 = np.asarray(x1, dtype=float).copy()
    delta = range_gap(bounds, config.constants.delta_cap)
    theta0 = config.schedule.theta(0)
    if theta0 >= 0.5 * delta:
        raise ThetaTooLarge(f"theta0={theta0} must be below delta/2={0.5 * delta}")
    if not in_neighborhood(x1, bounds, theta0):
        raise InfeasibleStart("x1 is outside the theta0 neighborhood")
    if isinstance(config.schedule, StaircaseSchedule) and config.maxiter > config.schedule.maxiter:
        raise HorizonExceeded(
            f"maxiter={config.maxiter} exceeds staircase horizon {config.schedule.maxiter}")
    if config.mode == "stochastic" and isinstance(config.schedule, PowerSchedule):
        violations = validate_exponents(config.schedule.exponents, "stochastic")
        if violations:
            raise ValueError("exponents invalid for the stochastic setting: "
                             + "; ".join(violations))

    batches = None
    if config.mode == "stochastic":
        if not 0.0 < config.batch_fraction <= 1.0:
            raise ValueError("batch_fraction must lie in (0, 1]")
        if config.constants.sigma_inf < 0.0:
            raise ValueError("stochastic mode needs sigma_inf >= 0")
        m = objective.sample_count
        batch_size = max(1, math.ceil(config.batch_fraction * m))
        batches = batch_sampler(m, batch_size, config.rng_seed)

    audit_decrease = config.audit_level != "off" and config.mode == "deterministic"
    keep_trace = config.audit_level == "full_trace"
    need_f = audit_decrease or keep_trace
    chi = config.chi if config.chi is not None else default_chi(bounds)

    captured = {}

    def capture(info):
        captured.update(info)
        if observer is not None:
            observer(info)

    state = SolverState(x=x1, k=1)
    records = []
    stall_count = 0
    alpha_first = math.nan
    alpha_last = math.nan
    f_curr = objective.value(state.x) if need_f else None
    phi_curr = (shifted_barrier_value(f_curr, state.x, bounds, config.schedule.mu(1), chi)
                if audit_decrease and config.maxiter > 0 else None)

    for k in range(1, config.maxiter + 1):
        if config.mode == "stochastic":
            gradient = objective.stochastic_gradient(state.x, next(batches))
        else:
            gradient = objective.gradient(state.x)
        state, record = sipm_step(state, gradient, config, delta,
                                  f_value=f_curr, observer=capture)
        if record.stalled:
            stall_count += 1
        if keep_trace:
            records.append(record)
        if math.isnan(alpha_first):
            alpha_first = record.alpha_k
        alpha_last = record.alpha_k

        if need_f:
            f_curr = objective.value(state.x)
        if audit_decrease:
            try:
                mu_next = config.schedule.mu(k + 1)
            except HorizonExceeded:
                mu_next = record.mu_k
            phi_next = shifted_barrier_value(f_curr, state.x, bounds, mu_next, chi)
            q, h_diag = captured["q"], captured["h_diag"]
            descent = 0.5 * record.gamma_k * record.alpha_k * float(np.sum(q * q / h_diag))
            if phi_next - phi_curr > -descent + 1e-10 * (1.0 + abs(phi_curr)):
                raise InvariantViolation(k, "barrier decrease inequality failed")
            phi_curr = phi_next

    g_true = objective.gradient(state.x)
    mu_last = config.schedule.mu(config.maxiter) if config.maxiter >= 1 else config.schedule.mu(1)
    return RunResult(final_x=state.x,
                     records=records,
                     final_objective=float(objective.value(state.x)),
                     final_projected_grad_norm=projected_gradient_norm(state.x, g_true, bounds),
                     final_kkt=kkt_certificate(state.x, g_true, bounds, mu_last),
                     stall_count=stall_count,
                     alpha_first=alpha_first,
                     alpha_last=alpha_last)
