"""Problem data, validation and the dense SPD solve shared by every solver.

A QP instance is

    minimize    1/2 x^T W x + c^T x
    subject to  A x + b >= 0

with ``W`` symmetric positive semidefinite and ``A^T A + W`` positive
definite.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg


class NumericalFailure(RuntimeError):
    """A factorization or update broke down numerically.

    ``pivot`` is the (0-based) index of the first non-positive Cholesky pivot
    when the failure came from :func:`spd_factor`, otherwise ``None``.
    """

    def __init__(self, message: str, pivot: int | None = None):
        super().__init__(message)
        self.pivot = pivot


class Status(enum.Enum):
    SOLVED = "Solved"
    ITERATION_LIMIT = "IterationLimit"
    NUMERICAL_FAILURE = "NumericalFailure"


def _as_matrix(name, value, shape=None):
    arr = np.array(value, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got ndim={arr.ndim}")
    if shape is not None and arr.shape != shape:
        raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
    return arr


def _as_vector(name, value, size):
    arr = np.array(value, dtype=float)
    if arr.shape != (size,):
        raise ValueError(f"{name} has shape {arr.shape}, expected ({size},)")
    return arr


@dataclass(frozen=True, eq=False)
class QPInstance:
    """Dense convex QP data ``(W, c, A, b)``.

    Arrays are copied, symmetrized (``W <- (W + W^T) / 2``) and marked
    read-only, so an instance can be shared freely.
    """

    W: np.ndarray
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = _as_matrix("A", self.A)
        m, n = A.shape
        if m < 1 or n < 1:
            raise ValueError(f"A must have at least one row and column, got {A.shape}")
        W = _as_matrix("W", self.W, (n, n))
        W = 0.5 * (W + W.T)
        c = _as_vector("c", self.c, n)
        b = _as_vector("b", self.b, m)
        for name, arr in (("W", W), ("c", c), ("A", A), ("b", b)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains NaN or Inf")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def m(self) -> int:
        return self.A.shape[0]

    def objective(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * x @ self.W @ x + self.c @ x


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _cholesky_ok(M, rel_pivot=0.0) -> bool:
    try:
        L = linalg.cholesky(M, lower=True, check_finite=False)
    except linalg.LinAlgError:
        return False
    # rank-deficient PSD matrices can factor with rounding-sized pivots
    scale = max(1.0, float(np.max(np.diag(M))))
    return bool(np.min(np.diag(L)) ** 2 > rel_pivot * scale)


def validate(qp: QPInstance) -> ValidationReport:
    """Check the data-verifiable part of the standing assumptions.

    Only two conditions can be decided from the data: ``W`` is PSD (tested
    by Cholesky of ``W + delta*I`` with ``delta = 1e-10 * max(1, max|W|)``,
    advisory) and ``A^T A + W`` is positive definite (Cholesky with every
    squared pivot above ``n * eps`` times the largest diagonal entry).
    Existence of a strictly feasible point and boundedness of sublevel sets
    are not checked.
    """
    if qp.W.shape != (qp.n, qp.n) or qp.c.shape != (qp.n,) or qp.b.shape != (qp.m,):
        raise ValueError("inconsistent QP dimensions")
    violations = []
    if not np.array_equal(qp.W, qp.W.T):
        violations.append("W is not symmetric")
    delta = 1e-10 * max(1.0, float(np.max(np.abs(qp.W), initial=0.0)))
    if not _cholesky_ok(qp.W + delta * np.eye(qp.n)):
        violations.append("W is not positive semidefinite")
    if not _cholesky_ok(qp.A.T @ qp.A + qp.W, rel_pivot=qp.n * np.finfo(float).eps):
        violations.append("A^T A + W is not positive definite (singular or indefinite)")
    return ValidationReport(tuple(violations))


class SpdFactorization:
    """Cholesky factor of a symmetric positive definite matrix.

    Immutable once built; ``solve`` may be called any number of times, which
    is what lets two Newton systems at the same ``v`` share one factorization.
    """

    def __init__(self, M):
        M = np.asarray(M, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {M.shape}")
        if not np.all(np.isfinite(M)):
            raise NumericalFailure("matrix to factor contains NaN or Inf")
        # dpotrf reports the failing leading minor through info
        c, info = linalg.lapack.dpotrf(M, lower=True, clean=True)
        if info > 0:
            raise NumericalFailure(
                f"matrix is not numerically positive definite (pivot {info - 1})",
                pivot=info - 1,
            )
        if info < 0:
            raise ValueError(f"dpotrf: illegal argument {-info}")
        self._L = c
        self._L.setflags(write=False)
        self.n = M.shape[0]

    def solve(self, f):
        f = np.asarray(f, dtype=float)
        x, info = linalg.lapack.dpotrs(self._L, f, lower=True)
        if info != 0:
            raise ValueError(f"dpotrs: illegal argument {-info}")
        return x

    @property
    def lower(self):
        return self._L


def spd_factor(M) -> SpdFactorization:
    """Factor a symmetric positive definite ``M``.

    Raises :class:`NumericalFailure` (with the failing pivot index) when ``M``
    is not numerically positive definite.
    """
    return SpdFactorization(M)


@dataclass
class SolveReport:
    """Result of a solver run.

    ``trace`` holds one ``(mu, |d|_inf, gap)`` tuple per iteration, recorded
    before the update. ``gap`` is ``<s, lambda>`` of the recovered point and
    ``d_inf`` the infinity norm of the final Newton direction.
    """

    status: Status
    x: np.ndarray
    s: np.ndarray
    lam: np.ndarray
    final_mu: float
    gap: float
    newton_steps: int
    v: np.ndarray
    d_inf: float = float("nan")
    trace: list = field(default_factory=list)
    message: str = ""

    @property
    def solved(self) -> bool:
        return self.status is Status.SOLVED
