"""Short-step and long-step log-domain interior-point methods.

Also provides the primal and dual barrier variants, which differ from the
long-step method only in how ``v`` is updated from the Newton direction.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .core import NumericalFailure, QPInstance, SolveReport, Status
from .newton import NewtonStep, center, direction_from, factor_at, newton_direction, step_size
from .path import (
    ShortstepParams,
    decompose_direction,
    least_squares_mu,
    min_mu_feasible,
    select_shortstep_params,
)

logger = logging.getLogger(__name__)


class Algorithm(enum.Enum):
    LOG_DOMAIN_LONG = "longstep"
    LOG_DOMAIN_SHORT = "shortstep"
    PRIMAL_BARRIER = "primal-barrier"
    DUAL_BARRIER = "dual-barrier"


@dataclass(frozen=True)
class SolverConfig:
    """Tunable parameters with their defaults.

    beta : step-size parameter in [1/2, 1)
    mu_f : target centering parameter
    max_newton_steps : cap on v-updates before giving up
    barrier_eps : barrier variants select mu with |d|_inf <= 1 - barrier_eps
    d_tol_center : centering tolerance on |d|_inf
    """

    beta: float = 0.5
    mu_f: float = 1e-3
    max_newton_steps: int = 10000
    barrier_eps: float = 0.01
    d_tol_center: float = 1e-10
    algorithm: Algorithm = Algorithm.LOG_DOMAIN_LONG

    def __post_init__(self):
        if not 0.5 <= self.beta < 1.0:
            raise ValueError(f"beta must lie in [1/2, 1), got {self.beta}")
        if not self.mu_f > 0:
            raise ValueError(f"mu_f must be positive, got {self.mu_f}")
        if self.max_newton_steps < 0:
            raise ValueError("max_newton_steps must be nonnegative")
        if not 0.0 < self.barrier_eps < 1.0:
            raise ValueError(f"barrier_eps must lie in (0, 1), got {self.barrier_eps}")
        if not self.d_tol_center > 0:
            raise ValueError("d_tol_center must be positive")


class Recovery(NamedTuple):
    x: np.ndarray
    s: np.ndarray
    lam: np.ndarray
    gap: float


# tolerance on the equality residuals of a recovered point, relative to data scale
_RECOVERY_RTOL = 1e-6


def recover_solution(qp: QPInstance, step: NewtonStep) -> Recovery | None:
    """Primal-dual point certified by a Newton step with ``|d|_inf <= 1``.

    ``lambda = sqrt(mu) e^v (1 + d)`` and ``s = sqrt(mu) e^-v (1 - d)`` are
    nonnegative, ``(x, s, lambda)`` is primal-dual feasible and the gap
    ``<s, lambda>`` equals ``mu (m - |d|^2)``.

    Returns ``None`` when ``|d|_inf > 1`` (no certificate available). Raises
    :class:`NumericalFailure` when the recovered point misses the equality
    constraints by more than the solve accuracy allows.
    """
    d = step.d
    if step.d_inf > 1.0:
        return None
    w = np.exp(step.v)
    rmu = math.sqrt(step.mu)
    lam = rmu * w * (1.0 + d)
    s = rmu / w * (1.0 - d)
    x = step.x
    primal = qp.A @ x + qp.b - s
    dual = qp.A.T @ lam - qp.W @ x - qp.c
    pscale = 1.0 + max(np.max(np.abs(s)), np.max(np.abs(qp.b)))
    dscale = 1.0 + max(np.max(np.abs(qp.W @ x)), np.max(np.abs(qp.c)))
    if np.max(np.abs(primal)) > _RECOVERY_RTOL * pscale:
        raise NumericalFailure(f"recovered point violates Ax + b = s by {np.max(np.abs(primal)):.3g}")
    if np.max(np.abs(dual)) > _RECOVERY_RTOL * dscale:
        raise NumericalFailure(f"recovered point violates A^T lam = Wx + c by {np.max(np.abs(dual)):.3g}")
    return Recovery(x=x, s=s, lam=lam, gap=float(s @ lam))


def primal_barrier_step(v, d, alpha: float):
    """``v <- -log(e^-v (1 - d/alpha))``: the primal barrier update of the slack."""
    arg = 1.0 - np.asarray(d, dtype=float) / alpha
    if np.any(arg <= 0.0):
        raise NumericalFailure("primal barrier step leaves the positive orthant")
    return np.asarray(v, dtype=float) - np.log(arg)


def dual_barrier_step(v, d, alpha: float):
    """``v <- log(e^v (1 + d/alpha))``: the dual barrier update of the multiplier."""
    arg = 1.0 + np.asarray(d, dtype=float) / alpha
    if np.any(arg <= 0.0):
        raise NumericalFailure("dual barrier step leaves the positive orthant")
    return np.asarray(v, dtype=float) + np.log(arg)


def _log_domain_step(v, d, alpha):
    return v + d / alpha


_UPDATES = {
    Algorithm.LOG_DOMAIN_LONG: _log_domain_step,
    Algorithm.PRIMAL_BARRIER: primal_barrier_step,
    Algorithm.DUAL_BARRIER: dual_barrier_step,
}


def initial_mu(qp: QPInstance, v0, fallback: float = 1.0) -> float:
    """Least-squares ``mu`` at ``v0``, or ``fallback`` when it is undefined."""
    dd = decompose_direction(qp, v0, 1.0)
    mu = least_squares_mu(dd)
    return fallback if mu is None else mu


def _report(qp, status, step, n_steps, trace, message=""):
    rec = None
    if step is not None:
        rec = recover_solution(qp, step)
    if rec is None:
        # no certificate: fall back to the log-domain point itself
        if step is None:
            nan_m = np.full(qp.m, np.nan)
            return SolveReport(status=status, x=np.full(qp.n, np.nan), s=nan_m, lam=nan_m.copy(),
                               final_mu=float("nan"), gap=float("nan"), newton_steps=n_steps,
                               v=nan_m.copy(), trace=trace, message=message)
        w = np.exp(step.v)
        rmu = math.sqrt(step.mu)
        s, lam = rmu / w, rmu * w
        return SolveReport(status=status, x=step.x, s=s, lam=lam, final_mu=step.mu,
                           gap=float(s @ lam), newton_steps=n_steps, v=step.v,
                           d_inf=step.d_inf, trace=trace, message=message)
    return SolveReport(status=status, x=rec.x, s=rec.s, lam=rec.lam, final_mu=step.mu,
                       gap=rec.gap, newton_steps=n_steps, v=step.v, d_inf=step.d_inf,
                       trace=trace, message=message)


def longstep(qp: QPInstance, v0, mu0: float, cfg: SolverConfig = SolverConfig()) -> SolveReport:
    """Long-step method with aggressive mu reduction and damped Newton steps.

    Each iteration lowers ``mu`` to the smallest value keeping
    ``|d(v, mu)|_inf <= 1`` (never raising it), then updates
    ``v <- v + d / alpha``.  Stops once ``mu <= mu_f`` and
    ``|d(v, mu)|_inf <= 1``, at which point the recovered ``x`` is feasible
    and within ``mu * m`` of the optimal value.

    ``cfg.algorithm`` selects the v-update: the log-domain step or one of the
    barrier approximations (which also tighten the mu-rule to
    ``1 - barrier_eps``).
    """
    algo = cfg.algorithm
    if algo is Algorithm.LOG_DOMAIN_SHORT:
        raise ValueError("use shortstep() for the short-step method")
    update = _UPDATES[algo]
    bound = 1.0 if algo is Algorithm.LOG_DOMAIN_LONG else 1.0 - cfg.barrier_eps
    if not mu0 > 0:
        raise ValueError(f"mu0 must be positive, got {mu0}")

    v = np.array(v0, dtype=float)
    if v.shape != (qp.m,):
        raise ValueError(f"v0 has shape {v.shape}, expected ({qp.m},)")
    mu = float(mu0)
    trace = []
    n_steps = 0
    step = None
    try:
        while True:
            fact = factor_at(qp, v)
            d, x = direction_from(qp, v, mu, fact)
            step = NewtonStep(d=d, x=x, factorization=fact, mu=mu, v=v)
            d_inf = step.d_inf
            if mu <= cfg.mu_f and d_inf <= 1.0:
                break
            if n_steps >= cfg.max_newton_steps:
                return _report(qp, Status.ITERATION_LIMIT, step, n_steps, trace,
                               f"reached {cfg.max_newton_steps} Newton steps")
            dd = decompose_direction(qp, v, mu, fact=fact)
            mu_star = min_mu_feasible(dd, bound)
            new_mu = min(mu, mu_star) if mu_star > 0.0 else min(mu, cfg.mu_f)
            if new_mu != mu:
                mu = new_mu
                d, x = direction_from(qp, v, mu, fact)
                step = NewtonStep(d=d, x=x, factorization=fact, mu=mu, v=v)
            gap = mu * (qp.m - float(d @ d)) if step.d_inf <= 1.0 else float("nan")
            trace.append((mu, step.d_inf, gap))
            alpha = step_size(d, cfg.beta)
            v = update(v, d, alpha)
            n_steps += 1
            logger.debug("iter %d mu=%.3e |d|=%.3e alpha=%.3g", n_steps, mu, step.d_inf, alpha)
        return _report(qp, Status.SOLVED, step, n_steps, trace)
    except NumericalFailure as exc:
        return _report_failure(qp, step, n_steps, trace, str(exc))


def _report_failure(qp, step, n_steps, trace, message):
    try:
        return _report(qp, Status.NUMERICAL_FAILURE, step, n_steps, trace, message)
    except NumericalFailure:
        return _report(qp, Status.NUMERICAL_FAILURE, None, n_steps, trace, message)


def barrier_longstep(qp: QPInstance, v0, mu0: float, cfg: SolverConfig) -> SolveReport:
    """Long-step control flow with a primal or dual barrier v-update."""
    if cfg.algorithm not in (Algorithm.PRIMAL_BARRIER, Algorithm.DUAL_BARRIER):
        raise ValueError(f"barrier_longstep needs a barrier algorithm, got {cfg.algorithm}")
    return longstep(qp, v0, mu0, cfg)


def shortstep(qp: QPInstance, v0, mu0: float, cfg: SolverConfig, params: ShortstepParams,
              precenter: bool = True) -> SolveReport:
    """Short-step method: divide mu by ``k``, then take ``N`` full Newton steps.

    ``v0`` is first centered at ``mu0`` (the step-count guarantee assumes a
    centered start).  Centering steps are not counted in ``newton_steps``.
    """
    if not mu0 > 0:
        raise ValueError(f"mu0 must be positive, got {mu0}")
    if params.m != qp.m:
        raise ValueError(f"params were selected for m={params.m}, instance has m={qp.m}")
    v = np.array(v0, dtype=float)
    mu = float(mu0)
    trace = []
    n_steps = 0
    step = None
    try:
        if precenter:
            v = center(qp, v, mu, cfg.d_tol_center, beta=cfg.beta)
        while mu > cfg.mu_f:
            mu = mu / params.k
            for _ in range(params.N):
                step = newton_direction(qp, v, mu)
                if n_steps >= cfg.max_newton_steps:
                    return _report(qp, Status.ITERATION_LIMIT, step, n_steps, trace,
                                   f"reached {cfg.max_newton_steps} Newton steps")
                gap = mu * (qp.m - float(step.d @ step.d)) if step.d_inf <= 1.0 else float("nan")
                trace.append((mu, step.d_inf, gap))
                v = v + step.d
                n_steps += 1
        step = newton_direction(qp, v, mu)
        status = Status.SOLVED if step.d_inf <= 1.0 else Status.NUMERICAL_FAILURE
        return _report(qp, status, step, n_steps, trace)
    except NumericalFailure as exc:
        return _report_failure(qp, step, n_steps, trace, str(exc))


def solve(qp: QPInstance, v0=None, mu0: float | None = None, cfg: SolverConfig = SolverConfig(),
          params: ShortstepParams | None = None) -> SolveReport:
    """Dispatch on ``cfg.algorithm`` with the benchmark defaults.

    ``v0`` defaults to zero and ``mu0`` to the least-squares ``mu`` at ``v0``
    (falling back to 1).  The short-step method uses ``theta=0.5,
    epsilon=0.25`` unless ``params`` is given.
    """
    v0 = np.zeros(qp.m) if v0 is None else np.asarray(v0, dtype=float)
    if mu0 is None:
        mu0 = initial_mu(qp, v0)
    if cfg.algorithm is Algorithm.LOG_DOMAIN_SHORT:
        if params is None:
            params = select_shortstep_params(0.5, 0.25, qp.m)
        return shortstep(qp, v0, mu0, cfg, params)
    return longstep(qp, v0, mu0, cfg)


def with_algorithm(cfg: SolverConfig, algorithm: Algorithm) -> SolverConfig:
    return replace(cfg, algorithm=algorithm)
