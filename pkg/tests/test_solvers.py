import math

import numpy as np
import pytest

from conftest import centered, random_qp
from oracles import brute_force_optimum, dual_barrier_newton, gauss_solve, primal_barrier_newton
from logqp.core import QPInstance, Status
from logqp.instances import GeneratorSpec, generate_random_qp
from logqp.newton import divergence, newton_direction
from logqp.path import decompose_direction, min_mu_feasible, select_shortstep_params
from logqp.solvers import (
    Algorithm,
    SolverConfig,
    barrier_longstep,
    dual_barrier_step,
    initial_mu,
    longstep,
    primal_barrier_step,
    recover_solution,
    shortstep,
    solve,
)

ALL_LONG = [Algorithm.LOG_DOMAIN_LONG, Algorithm.PRIMAL_BARRIER, Algorithm.DUAL_BARRIER]


def test_gauss_oracle_sanity():
    M = np.array([[0.0, 2.0], [3.0, 1.0]])
    np.testing.assert_allclose(gauss_solve(M, [4.0, 5.0]), [1.0, 2.0])


def test_config_ranges():
    with pytest.raises(ValueError):
        SolverConfig(beta=0.4)
    with pytest.raises(ValueError):
        SolverConfig(mu_f=0.0)
    with pytest.raises(ValueError):
        SolverConfig(barrier_eps=1.0)


@pytest.mark.parametrize("algo", ALL_LONG)
def test_longstep_anchor(anchor, algo):
    qp, path = anchor
    rep = longstep(qp, [0.0], 1.0, SolverConfig(mu_f=1e-3, algorithm=algo))
    assert rep.status is Status.SOLVED
    assert rep.final_mu <= 1e-3
    assert abs(rep.x[0]) <= math.sqrt(2e-3)
    assert qp.objective(rep.x) <= path.optimal_value + rep.final_mu * qp.m + 1e-8
    assert rep.gap == pytest.approx(rep.final_mu * (1 - rep.d_inf**2), rel=1e-8)


def test_longstep_shifted(shifted):
    qp, path = shifted
    rep = longstep(qp, [0.0], 1.0, SolverConfig(mu_f=1e-6))
    assert rep.solved
    assert qp.objective(rep.x) <= path.optimal_value + rep.final_mu + 1e-8
    assert rep.x[0] == pytest.approx(2.0, abs=1e-3)


def test_longstep_from_centered_start():
    qp = random_qp(9)
    mu_f = 1e-3
    v0 = centered(qp, mu_f)
    rep = longstep(qp, v0, mu_f * 1.0001, SolverConfig(mu_f=mu_f))
    assert rep.solved
    assert rep.newton_steps <= 2
    assert rep.d_inf <= 1.0


def test_longstep_paper_sized_instance():
    qp = generate_random_qp(GeneratorSpec(n=100, m=200, r=0, seed=7))
    mu0 = initial_mu(qp, np.zeros(qp.m))
    rep = longstep(qp, np.zeros(qp.m), mu0, SolverConfig(mu_f=1e-3))
    assert rep.solved
    assert rep.gap == pytest.approx(rep.final_mu * (qp.m - _dnorm2(qp, rep)), rel=1e-8)
    assert 6 <= rep.newton_steps <= 12
    assert np.all(qp.A @ rep.x + qp.b >= -1e-9)


def _dnorm2(qp, rep):
    d = newton_direction(qp, rep.v, rep.final_mu).d
    return float(d @ d)


def test_iteration_limit_status():
    qp = random_qp(2)
    rep = longstep(qp, np.zeros(qp.m), 10.0, SolverConfig(max_newton_steps=1))
    assert rep.status is Status.ITERATION_LIMIT
    assert rep.newton_steps == 1


def test_numerical_failure_status():
    qp = QPInstance(W=[[0.0]], c=[0.0], A=[[0.0]], b=[1.0])
    rep = longstep(qp, [0.0], 1.0)
    assert rep.status is Status.NUMERICAL_FAILURE
    assert rep.message


@pytest.mark.parametrize("algo", ALL_LONG)
@pytest.mark.parametrize("seed", range(4))
def test_mu_non_increasing(algo, seed):
    qp = random_qp(300 + seed, n=10, m=25, r=4)
    rep = solve(qp, cfg=SolverConfig(algorithm=algo))
    assert rep.solved
    mus = [t[0] for t in rep.trace] + [rep.final_mu]
    assert all(a >= b for a, b in zip(mus, mus[1:]))


@pytest.mark.parametrize("seed", range(6))
def test_certificate_against_brute_force(seed):
    qp = generate_random_qp(GeneratorSpec(n=2, m=5, r=2, seed=seed))
    v_star = brute_force_optimum(qp)
    assert v_star is not None
    for algo in ALL_LONG:
        rep = solve(qp, cfg=SolverConfig(algorithm=algo, mu_f=1e-4))
        assert rep.solved
        assert np.all(qp.A @ rep.x + qp.b >= -1e-9)
        assert qp.objective(rep.x) <= v_star + rep.final_mu * qp.m + 1e-8
        # weak duality: the gap bounds suboptimality from the other side too
        assert qp.objective(rep.x) >= v_star - 1e-8


def test_recover_at_centered_point():
    qp = random_qp(12)
    mu = 0.3
    step = newton_direction(qp, centered(qp, mu), mu)
    rec = recover_solution(qp, step)
    np.testing.assert_allclose(rec.s * rec.lam, mu, rtol=1e-9)
    assert rec.gap == pytest.approx(mu * qp.m, rel=1e-9)


def test_recover_anchor(anchor):
    qp, _ = anchor
    rec = recover_solution(qp, newton_direction(qp, [0.0], 1.0))
    np.testing.assert_allclose([rec.x[0], rec.s[0], rec.lam[0], rec.gap], [1, 1, 1, 1], rtol=1e-14)


def test_recover_refuses_large_direction():
    qp = random_qp(15)
    step = newton_direction(qp, np.full(qp.m, 2.0), 1.0)
    assert step.d_inf > 1
    assert recover_solution(qp, step) is None


def test_recover_on_boundary():
    rng = np.random.default_rng(0)
    qp = random_qp(13)
    v = rng.normal(size=qp.m)
    dd = decompose_direction(qp, v, 1.0)
    mu_star = min_mu_feasible(dd)
    assert 0 < mu_star < math.inf
    step = newton_direction(qp, v, mu_star * (1 + 1e-14))
    assert step.d_inf == pytest.approx(1.0, abs=1e-9)
    rec = recover_solution(qp, step)
    scale = np.sqrt(mu_star) * np.exp(np.abs(v))
    assert min(np.min(rec.s / scale), np.min(rec.lam / scale)) <= 1e-8
    assert rec.gap == pytest.approx(mu_star * (qp.m - step.d @ step.d), rel=1e-8)


def test_gap_identity_along_path():
    qp = random_qp(14, n=8, m=20, r=5)
    rep = solve(qp, cfg=SolverConfig(mu_f=1e-5))
    for mu, d_inf, gap in rep.trace:
        if d_inf <= 1:
            assert gap >= -1e-12


def test_barrier_step_examples():
    np.testing.assert_array_equal(primal_barrier_step([0.3, -1.0], [0.0, 0.0], 1.0), [0.3, -1.0])
    np.testing.assert_array_equal(dual_barrier_step([0.3, -1.0], [0.0, 0.0], 1.0), [0.3, -1.0])
    assert primal_barrier_step([0.0], [-0.6], 1.0)[0] == pytest.approx(-math.log(1.6), rel=1e-14)
    assert primal_barrier_step([0.0], [0.5], 1.0)[0] == pytest.approx(math.log(2), rel=1e-14)
    assert dual_barrier_step([0.0], [-0.6], 1.0)[0] == pytest.approx(math.log(0.4), rel=1e-14)


def test_barrier_steps_reject_nonpositive_argument():
    from logqp.core import NumericalFailure

    with pytest.raises(NumericalFailure):
        primal_barrier_step([0.0], [1.0], 1.0)
    with pytest.raises(NumericalFailure):
        dual_barrier_step([0.0], [-1.5], 1.0)


def test_barrier_steps_first_order_agreement():
    rng = np.random.default_rng(1)
    v = rng.normal(size=10)
    d = rng.uniform(-1e-4, 1e-4, size=10)
    for alpha in (1.0, 2.5):
        assert np.max(np.abs(primal_barrier_step(v, d, alpha) - (v + d / alpha))) <= 1e-7
        assert np.max(np.abs(dual_barrier_step(v, d, alpha) - (v + d / alpha))) <= 1e-7


def test_barrier_longstep_requires_barrier_algorithm(anchor):
    qp, _ = anchor
    with pytest.raises(ValueError):
        barrier_longstep(qp, [0.0], 1.0, SolverConfig())


@pytest.mark.parametrize("seed", range(5))
def test_primal_barrier_matches_kkt_solve(seed):
    rng = np.random.default_rng(seed)
    qp = generate_random_qp(GeneratorSpec(n=2, m=4, r=2, seed=seed))
    mu = 10 ** rng.uniform(-1, 1)
    x = rng.normal(size=2)
    lam = rng.uniform(0.5, 2.0, size=4)
    v = centered(qp, mu) + rng.normal(scale=0.1, size=4)
    s = math.sqrt(mu) * np.exp(-v)
    dx, ds, dlam = primal_barrier_newton(qp, x, s, lam, mu)
    d = newton_direction(qp, v, mu).d
    np.testing.assert_allclose(s + ds, s * (1 - d), atol=1e-9)
    v_new = primal_barrier_step(v, d, 1.0)
    np.testing.assert_allclose(math.sqrt(mu) * np.exp(-v_new), s + ds, atol=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_dual_barrier_matches_kkt_solve(seed):
    rng = np.random.default_rng(100 + seed)
    qp = generate_random_qp(GeneratorSpec(n=2, m=4, r=2, seed=seed))
    mu = 10 ** rng.uniform(-1, 1)
    gamma = rng.normal(size=2)
    u = rng.normal(size=2)
    v = centered(qp, mu) + rng.normal(scale=0.1, size=4)
    lam = math.sqrt(mu) * np.exp(v)
    dgamma, du, dlam = dual_barrier_newton(qp, gamma, u, lam, mu)
    d = newton_direction(qp, v, mu).d
    np.testing.assert_allclose(lam + dlam, lam * (1 + d), atol=1e-9)
    v_new = dual_barrier_step(v, d, 1.0)
    np.testing.assert_allclose(math.sqrt(mu) * np.exp(v_new), lam + dlam, atol=1e-9)


def test_shortstep_anchor(anchor):
    qp, _ = anchor
    params = select_shortstep_params(0.5, 0.25, 1)
    rep = shortstep(qp, [0.0], 1.0, SolverConfig(mu_f=1e-2), params)
    assert rep.solved
    outer = math.ceil(math.log(100) / math.log(params.k))
    assert outer == 6
    assert rep.newton_steps == 12 == outer * params.N
    assert abs(rep.v[0]) <= 1e-8
    assert rep.final_mu <= 1e-2


def test_shortstep_no_iterations_when_already_below_target(anchor):
    qp, _ = anchor
    params = select_shortstep_params(0.5, 0.25, 1)
    rep = shortstep(qp, [0.0], 1e-3, SolverConfig(mu_f=1e-2), params)
    assert rep.newton_steps == 0
    assert rep.final_mu == 1e-3
    np.testing.assert_array_equal(rep.v, [0.0])


def test_shortstep_precenters_arbitrary_start(anchor):
    qp, _ = anchor
    params = select_shortstep_params(0.5, 0.25, 1)
    rep = shortstep(qp, [3.0], 1.0, SolverConfig(mu_f=1e-2), params)
    assert rep.solved and rep.newton_steps == 12


def test_shortstep_random_bound_and_interior_invariant():
    qp = generate_random_qp(GeneratorSpec(n=20, m=40, r=5, seed=3))
    params = select_shortstep_params(0.5, 0.25, qp.m)
    mu0, mu_f = 1.0, 1e-2
    cfg = SolverConfig(mu_f=mu_f)
    rep = shortstep(qp, np.zeros(qp.m), mu0, cfg, params)
    assert rep.solved
    assert rep.newton_steps <= params.step_bound(mu0, mu_f)
    assert np.linalg.norm(rep.v - centered(qp, rep.final_mu, rep.v)) <= params.epsilon
    # replay the trace: before each round the iterate is within theta of the new center
    v = centered(qp, mu0)
    for i in range(0, len(rep.trace), params.N):
        mu = rep.trace[i][0]
        assert divergence(centered(qp, mu, v), v) <= params.theta + 1e-6
        for _ in range(params.N):
            v = v + newton_direction(qp, v, mu).d


def test_solve_dispatches_shortstep(anchor):
    qp, _ = anchor
    rep = solve(qp, cfg=SolverConfig(mu_f=1e-2, algorithm=Algorithm.LOG_DOMAIN_SHORT), mu0=1.0)
    assert rep.solved and rep.newton_steps == 12
