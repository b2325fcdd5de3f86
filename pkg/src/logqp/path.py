"""Choosing mu along the path.

At a fixed ``v`` the Newton direction is affine in ``1/sqrt(mu)``:
``d(mu) = d0 + d1 / sqrt(mu)``.  Two solves with one factorization give
``(d0, d1)``, after which the smallest admissible ``mu`` and the
least-squares ``mu`` are cheap O(m) computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import QPInstance
from .newton import direction_from, factor_at


def q(t):
    """``q(t) = 2 (cosh t - 1)``, evaluated as ``4 sinh(t/2)^2``."""
    return 4.0 * np.sinh(0.5 * np.asarray(t, dtype=float)) ** 2


def q_inverse(y):
    """Nonnegative inverse of :func:`q`: ``arccosh(1 + y/2) = 2 asinh(sqrt(y)/2)``."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("q_inverse is only defined for y >= 0")
    return 2.0 * np.arcsinh(0.5 * np.sqrt(y))


@dataclass(frozen=True)
class DirectionDecomposition:
    """``d(v, mu) = d0 + d1 / sqrt(mu)`` for every ``mu > 0`` at fixed ``v``."""

    d0: np.ndarray
    d1: np.ndarray
    v: np.ndarray

    def at(self, mu: float) -> np.ndarray:
        return self.d0 + self.d1 / math.sqrt(mu)

    def scaled(self, factor: float) -> "DirectionDecomposition":
        return DirectionDecomposition(self.d0 * factor, self.d1 * factor, self.v)


def decompose_from_directions(d_hat1, d_hat2, mu1, mu2, v) -> DirectionDecomposition:
    """Build ``(d0, d1)`` from the directions at two distinct ``mu`` values."""
    if mu1 == mu2:
        raise ValueError("decomposition needs two distinct mu values")
    k1, k2 = 1.0 / math.sqrt(mu1), 1.0 / math.sqrt(mu2)
    c1 = 1.0 / (k1 - k2)
    c0 = -k2 * c1
    d1 = c1 * (d_hat1 - d_hat2)
    d0 = c0 * d_hat1 + (1.0 - c0) * d_hat2
    return DirectionDecomposition(d0=d0, d1=d1, v=np.asarray(v, dtype=float))


def decompose_direction(qp: QPInstance, v, mu1: float, mu2: float | None = None,
                        fact=None) -> DirectionDecomposition:
    """Affine decomposition of the Newton direction at ``v``.

    Probes ``mu1`` and ``mu2`` (default ``mu1 / 4``) with a single Cholesky
    factorization of ``A^T Q(v) A + W``.
    """
    if mu2 is None:
        mu2 = mu1 / 4.0
    if not (mu1 > 0 and mu2 > 0):
        raise ValueError("probe values of mu must be positive")
    if mu1 == mu2:
        raise ValueError("decomposition needs two distinct mu values")
    if fact is None:
        fact = factor_at(qp, v)
    d_hat1, _ = direction_from(qp, v, mu1, fact)
    d_hat2, _ = direction_from(qp, v, mu2, fact)
    return decompose_from_directions(d_hat1, d_hat2, mu1, mu2, v)


def min_mu_feasible(dd: DirectionDecomposition, bound: float = 1.0) -> float:
    """Smallest ``mu > 0`` with ``|d0 + d1/sqrt(mu)|_inf <= bound``.

    Works in ``t = 1/sqrt(mu)``: each component restricts ``t`` to an
    interval and the answer is ``t_max^-2`` for the largest feasible ``t``.

    Returns ``math.inf`` when no ``mu > 0`` is feasible (so that
    ``min(mu, result)`` keeps ``mu``) and ``0.0`` when every small ``mu``
    is feasible (``d1 == 0`` and ``|d0|_inf <= bound``).
    """
    d0 = np.asarray(dd.d0, dtype=float)
    d1 = np.asarray(dd.d1, dtype=float)
    lo, hi = 0.0, math.inf
    for a, g in zip(d0, d1):
        if g == 0.0:
            if abs(a) > bound:
                return math.inf
            continue
        t1 = (-bound - a) / g
        t2 = (bound - a) / g
        if t1 > t2:
            t1, t2 = t2, t1
        lo = max(lo, t1)
        hi = min(hi, t2)
    if hi <= 0.0 or hi < lo:
        return math.inf
    if hi == math.inf:
        return 0.0
    return 1.0 / (hi * hi)


def least_squares_mu(dd: DirectionDecomposition) -> float | None:
    """``mu`` minimizing ``|d0 + d1/sqrt(mu)|_2``, or ``None`` if ``d0^T d1 >= 0``.

    The minimizer in ``t = 1/sqrt(mu)`` is ``-d0^T d1 / |d1|^2``; it is a
    valid ``mu`` only when that is positive.
    """
    inner = float(dd.d0 @ dd.d1)
    nrm2 = float(dd.d1 @ dd.d1)
    if inner >= 0.0 or nrm2 == 0.0:
        return None
    return (nrm2 / -inner) ** 2


@dataclass(frozen=True)
class ShortstepParams:
    """``(k, N)`` for the short-step method and the constants behind them.

    ``k`` is the per-round reduction factor of ``mu`` and ``N`` the number of
    full Newton steps per round; ``c_rate`` enters the step-count bound.
    """

    theta: float
    epsilon: float
    N: int
    k: float
    zeta: float
    c_rate: float
    m: int

    def step_bound(self, mu0: float, mu_f: float) -> int:
        """Upper bound ``N * ceil(sqrt(m) log(mu0/mu_f) / c_rate)`` on Newton steps."""
        if mu0 <= mu_f:
            return 0
        return self.N * math.ceil(math.sqrt(self.m) * math.log(mu0 / mu_f) / self.c_rate)


def select_shortstep_params(theta: float, epsilon: float, m: int) -> ShortstepParams:
    """Pick ``N`` and ``k`` so the short-step iterates stay in the quadratic region.

    ``N`` is the least positive integer with ``theta^(2^N) <= epsilon^2`` and
    ``k = exp(2 q^-1(zeta^2 / m))`` with ``zeta = q^-1(theta) - epsilon``.
    """
    if not 0.0 < theta <= 0.5:
        raise ValueError(f"theta must lie in (0, 1/2], got {theta}")
    qi_theta = float(q_inverse(theta))
    if not 0.0 < epsilon < qi_theta:
        raise ValueError(f"epsilon must lie in (0, q^-1(theta) = {qi_theta:.6g}), got {epsilon}")
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    N = 1
    while theta ** (2 ** N) > epsilon ** 2:
        N += 1
    zeta = qi_theta - epsilon
    k = math.exp(2.0 * float(q_inverse(zeta * zeta / m)))
    c_rate = 2.0 * float(q_inverse(zeta * zeta))
    return ShortstepParams(theta=theta, epsilon=epsilon, N=N, k=k, zeta=zeta,
                           c_rate=c_rate, m=int(m))
