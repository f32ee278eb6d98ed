from fractions import Fraction as F

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sipm import (Bounds, BufferSequences, Constants, SolverConfig, build_staircase,
                  c_constant, in_neighborhood, match_sipm_endpoints, psgm_step,
                  quadratic_objective, recurrence_ratio, run, run_psgm,
                  run_simplified, simplified_ipm_step, theta0_init)
from sipm.errors import DomainError, ThetaLinkViolation


def test_psgm_step_examples():
    bounds = Bounds.cube(1, 0.0, 1.0)
    assert_allclose(psgm_step([0.5], [1.0], 0.7, bounds), [0.0])
    assert_allclose(psgm_step([0.5], [1.0], 0.0, bounds), [0.5])
    assert_allclose(psgm_step([0.5], [0.0], 0.7, bounds), [0.5])


def test_psgm_stays_in_box():
    rng = np.random.default_rng(3)
    bounds = Bounds.cube(4, -1.0, 1.0)
    for _ in range(100):
        x = rng.uniform(-1.0, 1.0, size=4)
        g = rng.normal(size=4) * 10.0
        out = psgm_step(x, g, rng.uniform(0.0, 2.0), bounds)
        assert np.all(out >= -1.0) and np.all(out <= 1.0)


def test_c_constant():
    assert_allclose(c_constant(Bounds.cube(1, 0.0, 2.0), 1.0, 1.0), 0.5)
    two = Bounds(np.array([0.0, 0.0]), np.array([1.0, 4.0]))
    assert_allclose(c_constant(two, 1.0, 1.0), 1.0 / 3.0)
    one_sided = Bounds(np.array([0.0]), np.array([np.inf]))
    assert_allclose(c_constant(one_sided, 2.0, 1.0), 0.5)
    # degenerate inputs cap instead of overflowing
    assert c_constant(one_sided, 0.0, 1.0) == 1e6


def test_simplified_step_matches_symbolic_trace():
    obj = quadratic_objective([0.0], [1.0])
    bounds = Bounds.cube(1, -1.0, 1.0)
    x = np.array([0.5])
    got = simplified_ipm_step(x, obj.gradient(x), bounds, 0.1, 0.01, 1.0)

    mu, theta, ell = F(1, 10), F(1, 100), F(1)
    q = F(1, 2) - mu / (F(1, 2) + F(1)) + mu / (F(1) - F(1, 2))
    alpha = F(1) / (ell + 2 * mu / theta ** 2)
    x_next = F(1, 2) - alpha * q   # projection inactive here
    assert q == F(19, 30) and alpha == F(1, 2001)
    assert abs(got[0] - float(x_next)) <= 1e-12


def test_simplified_step_clamps_and_links():
    obj = quadratic_objective([-5.0], [1.0])
    bounds = Bounds.cube(1, 0.0, 2.0)
    out = simplified_ipm_step(np.array([0.2]), obj.gradient(np.array([0.2])),
                              bounds, 0.05, 0.2, 1.0)
    assert_allclose(out, [0.2])  # clamp lands exactly on lower + theta
    with pytest.raises(ThetaLinkViolation):
        simplified_ipm_step(np.array([0.5]), np.zeros(1), bounds, mu=0.01,
                            theta=0.5, ell_f=1.0, theta_link_c=1.0)


def test_simplified_fixed_point():
    bounds = Bounds.cube(1, -1.0, 1.0)
    # gradient exactly balancing the barrier terms gives q = 0
    mu, x = 0.1, np.array([0.3])
    g = mu / (x - (-1.0)) - mu / (1.0 - x)
    out = simplified_ipm_step(x, g, bounds, mu, 0.01, 1.0)
    assert_allclose(out, x)


def test_simplified_output_in_neighborhood():
    rng = np.random.default_rng(9)
    bounds = Bounds.cube(3, -1.0, 1.0)
    for _ in range(100):
        theta = rng.uniform(0.005, 0.05)
        mu = rng.uniform(0.01, 0.2)
        x = rng.uniform(-0.9, 0.9, size=3)
        g = rng.normal(size=3)
        out = simplified_ipm_step(x, g, bounds, mu, theta, 1.0)
        assert in_neighborhood(out, bounds, theta)


def test_recurrence_ratio_limit():
    ks = np.arange(1, 100001)
    c, psi, ell, C = 0.5, 1.0, 1.0, 2.0
    ratios = recurrence_ratio(1.0 / ks, c, psi, ell, C)
    limit = 4.0 * C / (c ** 2 * psi)
    assert abs(ratios[-1] - limit) / limit <= 0.05
    assert_allclose(recurrence_ratio(1.0 / ks[:100], c, psi, ell, 0.0), 0.0)
    with pytest.raises(DomainError):
        recurrence_ratio([10.0], c=10.0, psi=5.0, ell_f=1.0, C=1.0)


def test_recurrence_ratio_large_mu_segment():
    # with psi = ell_f and huge mu the contraction saturates: ratio ~ C*mu
    mus = np.array([1e4, 1e5, 1e6])
    ratios = recurrence_ratio(mus, c=1.0, psi=1.0, ell_f=1.0, C=3.0)
    assert np.all(np.diff(ratios) > 0.0)
    assert_allclose(ratios, 3.0 * mus, rtol=2e-2)


def test_match_sipm_endpoints():
    shape = np.array([1.0, 0.1, 0.01])
    steps = match_sipm_endpoints(shape, 0.5, 0.005)
    assert_allclose(steps[0], 0.5)
    assert_allclose(steps[-1], 0.005)
    assert np.all(np.diff(steps) < 0.0)
    flat = match_sipm_endpoints(np.array([1.0, 1.0]), 0.5, 0.5)
    assert_allclose(flat, [0.5, 0.5])


def test_sipm_beats_simplified_on_strongly_convex_problem():
    obj = quadratic_objective([0.5], [1.0])
    bounds = Bounds.cube(1, -1.0, 1.0)
    x1 = np.zeros(1)
    maxiter, mu1, kappa = 400, 0.1, 1.5
    theta0 = theta0_init(x1, bounds, kappa, 0.0, mu1, 2.0)
    sched = build_staircase(mu1, maxiter, theta0=theta0)
    config = SolverConfig(mode="deterministic", bounds=bounds, schedule=sched,
                          buffers=BufferSequences(mode="practical", maxiter=maxiter),
                          constants=Constants(ell_f=1.0, kappa_inf=kappa),
                          maxiter=maxiter, audit_level="invariants")
    d_sipm = abs(run(obj, config, x1).final_x[0] - 0.5)

    c = c_constant(bounds, kappa, mu1)
    mu_seq = mu1 / np.arange(1.0, maxiter + 1)
    d_simplified = abs(run_simplified(obj, bounds, mu_seq, 1.0, c, x1,
                                      maxiter).final_x[0] - 0.5)
    assert d_sipm < d_simplified


def test_psgm_boundary_certificate():
    # a pull toward a center outside the box parks the iterate on the bound;
    # the active-set certificate absorbs the gradient there
    obj = quadratic_objective([5.0], [1.0])
    bounds = Bounds.cube(1, -1.0, 1.0)
    result = run_psgm(obj, bounds, np.full(50, 0.9), np.zeros(1), 50)
    assert result.final_x[0] == 1.0
    assert result.final_projected_grad_norm == 0.0
    assert result.final_kkt.stationarity_residual == 0.0
    assert result.final_kkt.complementarity_residual == 0.0


def test_run_psgm_converges_on_quadratic():
    obj = quadratic_objective([0.25, -0.4], [1.0, 1.0])
    bounds = Bounds.cube(2, -1.0, 1.0)
    steps = np.full(500, 0.5)
    result = run_psgm(obj, bounds, steps, np.zeros(2), 500)
    assert result.final_projected_grad_norm <= 1e-8
    assert_allclose(result.final_x, [0.25, -0.4], atol=1e-8)
