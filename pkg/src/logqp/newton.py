"""Newton's method on the log-domain central-path equations.

With ``lambda = sqrt(mu) e^v`` and ``s = sqrt(mu) e^-v`` the central path is

    sqrt(mu) A^T e^v = W x + c,    sqrt(mu) e^-v = A x + b.

Linearizing the exponentials in ``v`` gives a Newton direction ``d`` that is
recovered from a single ``n x n`` SPD solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import NumericalFailure, QPInstance, SpdFactorization, spd_factor

# entries of 2v beyond this would overflow exp() in double precision
EXP_CLAMP = 700.0


@dataclass(frozen=True)
class NewtonStep:
    """Newton direction ``d`` at ``(v, mu)`` with its primal point ``x``.

    ``factorization`` is the Cholesky factor of ``A^T Q(v) A + W`` and can be
    reused for other values of ``mu`` at the same ``v``.
    """

    d: np.ndarray
    x: np.ndarray
    factorization: SpdFactorization
    mu: float
    v: np.ndarray

    @property
    def d_inf(self) -> float:
        return float(np.max(np.abs(self.d)))


def _exp_v(v):
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise NumericalFailure("iterate v has non-finite entries")
    if np.max(np.abs(2.0 * v), initial=0.0) > EXP_CLAMP:
        raise NumericalFailure(f"|2v| exceeds {EXP_CLAMP}; e^(2v) would overflow")
    return np.exp(v)


def newton_matrix(qp: QPInstance, v) -> np.ndarray:
    """``A^T Q(v) A + W`` with ``Q(v) = diag(e^(2v))``."""
    w = _exp_v(v)
    Aw = qp.A * w[:, None]
    return Aw.T @ Aw + qp.W


def factor_at(qp: QPInstance, v) -> SpdFactorization:
    return spd_factor(newton_matrix(qp, v))


def _rhs_parts(qp, w):
    # x(v, mu) = sqrt(mu) * xa + xb with M xa = 2 A^T w, M xb = -(c + A^T Q b)
    return 2.0 * (qp.A.T @ w), -(qp.c + qp.A.T @ (w * w * qp.b))


def direction_from(qp: QPInstance, v, mu, fact: SpdFactorization):
    """Newton direction and primal point at ``(v, mu)`` using an existing factor."""
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    w = _exp_v(v)
    rmu = np.sqrt(mu)
    ra, rb = _rhs_parts(qp, w)
    x = fact.solve(rmu * ra + rb)
    d = 1.0 - w * (qp.A @ x + qp.b) / rmu
    return d, x


def newton_direction(qp: QPInstance, v, mu: float, fact: SpdFactorization | None = None) -> NewtonStep:
    """Compute ``d(v, mu)`` and ``x(v, mu)``.

    Solves ``(A^T Q(v) A + W) x = 2 sqrt(mu) A^T e^v - (c + A^T Q(v) b)`` and
    sets ``d = 1 - e^v * (A x + b) / sqrt(mu)``.  Pass ``fact`` to reuse a
    factorization computed at the same ``v``.
    """
    v = np.array(v, dtype=float)
    if v.shape != (qp.m,):
        raise ValueError(f"v has shape {v.shape}, expected ({qp.m},)")
    if fact is None:
        fact = factor_at(qp, v)
    d, x = direction_from(qp, v, mu, fact)
    return NewtonStep(d=d, x=x, factorization=fact, mu=float(mu), v=v)


def divergence(u, v) -> float:
    """``h(u, v) = <e^u, e^-v> + <e^-u, e^v> - 2m``.

    Evaluated as ``sum 4 sinh((v-u)/2)^2``, which is the same quantity
    without the cancellation of the direct form.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    return float(max(0.0, np.sum(4.0 * np.sinh(0.5 * (v - u)) ** 2)))


def divergence_gradient(v, v_center):
    """Gradient of ``v -> h(v_center, v)``: ``e^(v - vc) - e^(vc - v)``."""
    a = np.exp(np.asarray(v) - np.asarray(v_center))
    return a - 1.0 / a


def step_size(d, beta: float = 0.5) -> float:
    """Damping ``alpha = max(1, |d|_inf^2 / (2 beta))``; the update is ``v + d / alpha``."""
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    dinf = float(np.max(np.abs(d), initial=0.0))
    return max(1.0, dinf * dinf / (2.0 * beta))


def center(qp: QPInstance, v0, mu: float, d_tol: float = 1e-10, beta: float = 0.5,
           max_iter: int = 500) -> np.ndarray:
    """Damped Newton iterations at fixed ``mu`` until ``|d(v, mu)|_inf <= d_tol``.

    Converges to the centered point from any start.  Raises
    :class:`NumericalFailure` if ``max_iter`` steps are not enough.
    """
    if not d_tol > 0:
        raise ValueError("d_tol must be positive")
    v = np.array(v0, dtype=float)
    for _ in range(max_iter + 1):
        step = newton_direction(qp, v, mu)
        if step.d_inf <= d_tol:
            return v
        v = v + step.d / step_size(step.d, beta)
    raise NumericalFailure(f"centering did not reach |d|_inf <= {d_tol} in {max_iter} steps")


def logdomain_residual(qp: QPInstance, v, x, mu: float) -> tuple[float, float]:
    """Infinity-norm residuals of the log-domain central-path equations."""
    w = np.exp(np.asarray(v, dtype=float))
    x = np.asarray(x, dtype=float)
    rmu = np.sqrt(mu)
    dual = rmu * (qp.A.T @ w) - qp.W @ x - qp.c
    primal = rmu / w - qp.A @ x - qp.b
    return float(np.max(np.abs(dual))), float(np.max(np.abs(primal)))
