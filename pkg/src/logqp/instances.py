"""Random and closed-form QP instances, and the JSON file format.

Random instances follow the usual construction for benchmarking IPMs: pick
a strictly feasible primal-dual pair first, then choose ``b`` and ``c`` so
that it is feasible.

JSON schema::

    {"n": int, "m": int, "W": [[...]], "c": [...], "A": [[...]], "b": [...]}
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import QPInstance, validate

MAX_RETRIES = 5


@dataclass(frozen=True)
class GeneratorSpec:
    n: int
    m: int
    r: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"n and m must be positive, got n={self.n}, m={self.m}")
        if not 0 <= self.r <= self.n:
            raise ValueError(f"rank parameter r must lie in [0, n], got {self.r}")


@dataclass(frozen=True)
class RawDraws:
    """Every random number one instance consumes, in stream order."""

    A: np.ndarray
    R: np.ndarray
    x: np.ndarray
    w_s: np.ndarray
    w_lam: np.ndarray


def draw(spec: GeneratorSpec) -> RawDraws:
    """Sample the raw normals for ``spec``.

    One ``numpy.random.Generator`` (PCG64 bit generator, seeded with
    ``spec.seed``) is consumed in the fixed order A (m x n, row-major),
    R (r x n), x (n), w for s (m), w for lambda (m).  Normals come from
    numpy's ``standard_normal`` (ziggurat transform of the uniform stream).
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    A = rng.standard_normal((spec.m, spec.n))
    R = rng.standard_normal((spec.r, spec.n))
    x = rng.standard_normal(spec.n)
    w_s = rng.standard_normal(spec.m)
    w_lam = rng.standard_normal(spec.m)
    return RawDraws(A=A, R=R, x=x, w_s=w_s, w_lam=w_lam)


def _normalize_rows(M):
    return M / np.linalg.norm(M, axis=1, keepdims=True)


def build_instance(raw: RawDraws) -> QPInstance:
    A = _normalize_rows(raw.A)
    R = _normalize_rows(raw.R) if raw.R.shape[0] else raw.R
    W = R.T @ R
    s = 1.0 + np.abs(raw.w_s) / 10.0
    lam = 1.0 + np.abs(raw.w_lam) / 10.0
    b = s - A @ raw.x
    c = A.T @ lam - W @ raw.x
    return QPInstance(W=W, c=c, A=A, b=b)


def generate_random_qp(spec: GeneratorSpec) -> QPInstance:
    """Random QP with unit-norm rows in ``A`` and ``R`` and ``W = R^T R``.

    A strictly feasible ``x`` (slack ``s = 1 + |w|/10``) and a positive dual
    ``lambda = 1 + |w'|/10`` are built in.  If the result fails
    :func:`validate`, the seed is bumped by one, up to ``MAX_RETRIES`` times.
    """
    seed = spec.seed
    for _ in range(MAX_RETRIES + 1):
        qp = build_instance(draw(GeneratorSpec(spec.n, spec.m, spec.r, seed)))
        report = validate(qp)
        if report.ok:
            return qp
        seed += 1
    raise ValueError(
        f"could not generate a valid instance from seed {spec.seed} "
        f"after {MAX_RETRIES} retries: {'; '.join(report.violations)}"
    )


def generating_point(spec: GeneratorSpec):
    """``(x, s, lambda)`` used to build the instance of ``spec`` (no retries)."""
    raw = draw(spec)
    return raw.x, 1.0 + np.abs(raw.w_s) / 10.0, 1.0 + np.abs(raw.w_lam) / 10.0


class AnalyticKind(enum.Enum):
    ANCHOR = "anchor"
    SHIFTED = "shifted"


@dataclass(frozen=True)
class CentralPath:
    """Closed-form central path of a one-dimensional instance."""

    kind: AnalyticKind
    optimal_value: float
    argmin: float

    def x(self, mu):
        if self.kind is AnalyticKind.ANCHOR:
            return math.sqrt(mu)
        return 1.0 + math.sqrt(1.0 + mu)

    def s(self, mu):
        return self.x(mu)

    def lam(self, mu):
        return mu / self.x(mu)

    def v(self, mu):
        # lambda = sqrt(mu) e^v, s = sqrt(mu) e^-v  =>  e^(2v) = lambda / s
        return np.array([0.5 * math.log(self.lam(mu) / self.s(mu))])


def analytic_instance(kind: AnalyticKind | str):
    """One-variable, one-constraint QPs with a known central path.

    ``ANCHOR``: minimize x^2/2 s.t. x >= 0. Central path ``x = sqrt(mu)``,
    ``v = 0``.  ``SHIFTED``: minimize x^2/2 - 2x s.t. x >= 0.  Central path
    ``x = 1 + sqrt(1 + mu)``, optimum ``-2`` at ``x = 2``.
    """
    kind = AnalyticKind(kind)
    c = 0.0 if kind is AnalyticKind.ANCHOR else -2.0
    qp = QPInstance(W=[[1.0]], c=[c], A=[[1.0]], b=[0.0])
    if kind is AnalyticKind.ANCHOR:
        return qp, CentralPath(kind, optimal_value=0.0, argmin=0.0)
    return qp, CentralPath(kind, optimal_value=-2.0, argmin=2.0)


class QPFormatError(ValueError):
    """A QP file could not be parsed or failed the schema checks."""


def _reject_constant(name):
    raise ValueError(f"non-finite number {name!r} is not allowed")


def _field(doc, name):
    if name not in doc:
        raise QPFormatError(f"missing field {name!r}")
    return doc[name]


def _float_array(name, value, ndim):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise QPFormatError(f"field {name!r}: not a numeric array ({exc})") from None
    if arr.ndim != ndim and not (ndim == 2 and arr.size == 0):
        raise QPFormatError(f"field {name!r}: expected a {ndim}-D array, got {arr.ndim}-D")
    if not np.all(np.isfinite(arr)):
        raise QPFormatError(f"field {name!r}: contains NaN or Inf")
    return arr


def qp_from_dict(doc) -> QPInstance:
    if not isinstance(doc, dict):
        raise QPFormatError("top-level JSON value must be an object")
    n = _field(doc, "n")
    m = _field(doc, "m")
    for name, val in (("n", n), ("m", m)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 1:
            raise QPFormatError(f"field {name!r}: expected a positive integer, got {val!r}")
    W = _float_array("W", _field(doc, "W"), 2)
    c = _float_array("c", _field(doc, "c"), 1)
    A = _float_array("A", _field(doc, "A"), 2)
    b = _float_array("b", _field(doc, "b"), 1)
    for name, arr, shape in (("W", W, (n, n)), ("c", c, (n,)), ("A", A, (m, n)), ("b", b, (m,))):
        if arr.shape != shape:
            raise QPFormatError(f"field {name!r}: shape {arr.shape} does not match {shape}")
    return QPInstance(W=W, c=c, A=A, b=b)


def qp_to_dict(qp: QPInstance) -> dict:
    return {
        "n": qp.n,
        "m": qp.m,
        "W": qp.W.tolist(),
        "c": qp.c.tolist(),
        "A": qp.A.tolist(),
        "b": qp.b.tolist(),
    }


def read_qp(path) -> QPInstance:
    """Load a QP from a JSON file; raises :class:`QPFormatError` on bad input."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise QPFormatError(f"{path}: {exc.strerror or exc}") from None
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise QPFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except ValueError as exc:
        raise QPFormatError(f"{path}: {exc}") from None
    try:
        return qp_from_dict(doc)
    except QPFormatError as exc:
        raise QPFormatError(f"{path}: {exc}") from None


def write_qp(qp: QPInstance, path) -> None:
    """Write ``qp`` as JSON; floats are written with full round-trip precision."""
    Path(path).write_text(json.dumps(qp_to_dict(qp), indent=1) + "\n", encoding="utf-8")
