"""Three-point inequality for norms of aligned vectors in R^n.

If ``a, b, c`` lie on one line with ``c`` outside the segment ``[a, b]``,
any norm satisfies ``||a|| + ||b|| <= ||c|| + ||a + b - c||``, which sharpens
the reverse triangle inequality to
``||a + b - c|| >= | ||a|| + ||b|| - ||c|| |``.

Vectors are plain 1-D numpy arrays.  The ``*_batch`` functions take
``(N, n)`` arrays and return gap arrays; they compute the same quantities as
the scalar checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .convexity import DEFAULT_TOL, CheckResult, scaled_tolerance
from .errors import BadP, DegenerateSegment, PreconditionError

__all__ = [
    "ALIGNMENT_TOL",
    "as_vec",
    "p_norm",
    "p_norm_batch",
    "AlignedTriple",
    "detect_alignment",
    "aligned_triple",
    "check_aligned_inequality",
    "refined_reverse_triangle",
    "ReverseTriangleResult",
    "check_equal_norm_shift",
    "aligned_gaps_batch",
    "refined_gaps_batch",
]

ALIGNMENT_TOL = 1e-8


def as_vec(v) -> np.ndarray:
    if isinstance(v, str):
        v = [float(s) for s in v.split(",")]
    arr = np.asarray(v, dtype=float).ravel()
    if arr.size < 1:
        raise ValueError("vector must have at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector coordinates must be finite")
    return arr


def _check_p(p):
    p = float(p)
    if not (p >= 1.0):
        raise BadP(f"p must be >= 1 or inf, got {p}")
    return p


def p_norm(v, p: float = 2.0) -> float:
    p = _check_p(p)
    x = np.abs(as_vec(v))
    if math.isinf(p):
        return float(x.max())
    if p == 1.0:
        return float(x.sum())
    if p == 2.0:
        return float(np.sqrt(np.dot(x, x)))
    return float((x**p).sum() ** (1.0 / p))


def p_norm_batch(V, p: float = 2.0) -> np.ndarray:
    """Row-wise :func:`p_norm` of an ``(N, n)`` array."""
    p = _check_p(p)
    x = np.abs(np.asarray(V, dtype=float))
    if math.isinf(p):
        return x.max(axis=-1)
    if p == 1.0:
        return x.sum(axis=-1)
    if p == 2.0:
        return np.sqrt(np.einsum("...i,...i->...", x, x))
    return (x**p).sum(axis=-1) ** (1.0 / p)


@dataclass(frozen=True)
class AlignedTriple:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    lam0: float  # c = (1 - lam0) a + lam0 b

    @property
    def outside(self) -> bool:
        return not (0.0 <= self.lam0 <= 1.0)


def _inf(v):
    return float(np.abs(v).max())


def detect_alignment(a, b, c, tol: float = ALIGNMENT_TOL) -> Optional[float]:
    """Least-squares ``lam0`` with ``c ~ a + lam0 (b - a)``, or None if off the line."""
    a, b, c = as_vec(a), as_vec(b), as_vec(c)
    u = b - a
    uu = float(np.dot(u, u))
    if uu == 0.0:
        raise DegenerateSegment("a == b; aligned iff c == a (lambda0 = 0 by convention)")
    lam0 = float(np.dot(c - a, u)) / uu
    residual = _inf(c - ((1 - lam0) * a + lam0 * b))
    if residual > tol * (1 + _inf(a) + _inf(b)):
        return None
    return lam0


def aligned_triple(a, b, c, tol: float = ALIGNMENT_TOL) -> AlignedTriple:
    a, b, c = as_vec(a), as_vec(b), as_vec(c)
    try:
        lam0 = detect_alignment(a, b, c, tol)
    except DegenerateSegment:
        if _inf(c - a) > tol * (1 + _inf(a)):
            raise PreconditionError("a == b and c differs from a: not aligned") from None
        lam0 = 0.0
    if lam0 is None:
        raise PreconditionError("points are not aligned")
    return AlignedTriple(a, b, c, lam0)


def _require_outside(t: AlignedTriple):
    if not t.outside:
        raise PreconditionError(f"c lies on the segment [a, b] (lambda0 = {t.lam0:g})")


def check_aligned_inequality(t: AlignedTriple, p: float = 2.0, tol: float = DEFAULT_TOL) -> CheckResult:
    """``||c|| + ||a+b-c|| - ||a|| - ||b||`` for c outside [a, b]."""
    _require_outside(t)
    na, nb, nc, nd = (p_norm(v, p) for v in (t.a, t.b, t.c, t.a + t.b - t.c))
    gap = (nc + nd) - (na + nb)
    return CheckResult.from_gap(gap, (t.a, t.b, t.c), scaled_tolerance(tol, na, nb, nc, nd))


@dataclass(frozen=True)
class ReverseTriangleResult(CheckResult):
    refined_bound: float
    classical_bound: float
    improvement: float


def refined_reverse_triangle(t: AlignedTriple, p: float = 2.0, tol: float = DEFAULT_TOL) -> ReverseTriangleResult:
    """``||a+b-c|| - | ||a|| + ||b|| - ||c|| |`` for c outside [a, b].

    Also reports the classical bound ``||a+b|| - ||c||`` and how much the
    refined bound exceeds ``max(classical, 0)``.
    """
    _require_outside(t)
    na, nb, nc = (p_norm(v, p) for v in (t.a, t.b, t.c))
    nd = p_norm(t.a + t.b - t.c, p)
    refined = abs(na + nb - nc)
    classical = p_norm(t.a + t.b, p) - nc
    gap = nd - refined
    tolerance = scaled_tolerance(tol, na, nb, nc, nd)
    return ReverseTriangleResult(
        bool(gap >= -tolerance),
        float(gap),
        (t.a, t.b, t.c),
        float(tolerance),
        float(refined),
        float(classical),
        float(refined - max(classical, 0.0)),
    )


def check_equal_norm_shift(a, b, lam: float, p: float = 2.0, tol: float = DEFAULT_TOL) -> CheckResult:
    """``||a + lam(a-b)|| >= ||b + lam(a-b)||`` whenever ``||a|| = ||b||``."""
    a, b = as_vec(a), as_vec(b)
    if not 0.0 <= lam <= 1.0:
        raise PreconditionError(f"lambda={lam} outside [0, 1]")
    na, nb = p_norm(a, p), p_norm(b, p)
    if abs(na - nb) > scaled_tolerance(tol, na, nb):
        raise PreconditionError(f"norms differ: {na} vs {nb}")
    shift = lam * (a - b)
    n1, n2 = p_norm(a + shift, p), p_norm(b + shift, p)
    return CheckResult.from_gap(n1 - n2, (a, b, lam), scaled_tolerance(tol, n1, n2))


def aligned_gaps_batch(A, B, C, p: float = 2.0):
    """Gaps and scales of :func:`check_aligned_inequality` for rows of A, B, C."""
    A, B, C = (np.asarray(v, dtype=float) for v in (A, B, C))
    na, nb, nc, nd = (p_norm_batch(v, p) for v in (A, B, C, A + B - C))
    return (nc + nd) - (na + nb), 1.0 + na + nb + nc + nd


def refined_gaps_batch(A, B, C, p: float = 2.0):
    """Gaps and scales of :func:`refined_reverse_triangle` for rows of A, B, C."""
    A, B, C = (np.asarray(v, dtype=float) for v in (A, B, C))
    na, nb, nc, nd = (p_norm_batch(v, p) for v in (A, B, C, A + B - C))
    return nd - np.abs(na + nb - nc), 1.0 + na + nb + nc + nd
