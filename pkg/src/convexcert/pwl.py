"""Polygonal functions and the monotone rearrangement inequalities they prove.

For a convex non-decreasing ``phi`` and ``a, b`` in ``[c, d]`` with
``a + b < c + d`` one has ``phi(a) + phi(b) <= phi(c) + phi(d)``.  The proof
threads a convex polygon ``psi`` through ``psi(0)=c, psi(1)=a, psi(s)=b,
psi(s+1)=d`` and applies the three-point inequality to ``phi o psi`` at
``(1, s, 0)``.  The checks here compute the gap directly and through that
construction and insist the two agree.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .convexity import (
    DEFAULT_TOL,
    CheckResult,
    Triple,
    Verdict,
    certify_convex,
    scaled_tolerance,
    three_point_gap,
)
from .errors import ConvexCertError, InfeasibleWindow, PreconditionError
from .fnspec import BinOp, Call, FunctionSpec, Interval, Neg, Node, Var

__all__ = [
    "PiecewiseLinear",
    "ComposedFunction",
    "RearrangementResult",
    "build_convex_interpolant",
    "build_concave_interpolant",
    "pwl_eval",
    "compose_eval",
    "compose_specs",
    "check_rearrangement_increasing",
    "check_rearrangement_decreasing",
]


@dataclass(frozen=True)
class PiecewiseLinear:
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    left_slope: float
    right_slope: float
    # parameter at which the interpolant reaches ``b`` (``s`` or ``r``), if built by us
    s: Optional[float] = None

    def __post_init__(self):
        if len(self.breakpoints) != len(self.values) or not self.breakpoints:
            raise ValueError("need matching, non-empty breakpoints and values")
        if any(t1 >= t2 for t1, t2 in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @classmethod
    def identity(cls) -> PiecewiseLinear:
        return cls((0.0, 1.0), (0.0, 1.0), 1.0, 1.0)

    @property
    def segment_slopes(self) -> tuple[float, ...]:
        t, v = self.breakpoints, self.values
        return tuple((v[i + 1] - v[i]) / (t[i + 1] - t[i]) for i in range(len(t) - 1))

    @property
    def slopes(self) -> tuple[float, ...]:
        """Left extension, each segment, right extension."""
        return (self.left_slope, *self.segment_slopes, self.right_slope)

    @property
    def is_convex(self) -> bool:
        s = self.slopes
        return all(x <= y for x, y in zip(s, s[1:]))

    @property
    def is_concave(self) -> bool:
        s = self.slopes
        return all(x >= y for x, y in zip(s, s[1:]))

    def __call__(self, t: float) -> float:
        return pwl_eval(self, t)

    def many(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        bp = np.asarray(self.breakpoints)
        vals = np.asarray(self.values)
        out = np.interp(ts, bp, vals)
        out = np.where(ts < bp[0], vals[0] + self.left_slope * (ts - bp[0]), out)
        out = np.where(ts > bp[-1], vals[-1] + self.right_slope * (ts - bp[-1]), out)
        return out


def pwl_eval(psi: PiecewiseLinear, t: float) -> float:
    t = float(t)
    bp, vals = psi.breakpoints, psi.values
    if t <= bp[0]:
        return vals[0] + psi.left_slope * (t - bp[0]) if t < bp[0] else vals[0]
    if t >= bp[-1]:
        return vals[-1] + psi.right_slope * (t - bp[-1]) if t > bp[-1] else vals[-1]
    i = bisect.bisect_right(bp, t) - 1
    if t == bp[i]:
        return vals[i]
    w = (t - bp[i]) / (bp[i + 1] - bp[i])
    return vals[i] + w * (vals[i + 1] - vals[i])


class ComposedFunction:
    """``t -> phi(psi(t))`` for a FunctionSpec ``phi`` and polygon ``psi``."""

    def __init__(self, phi: FunctionSpec, psi: PiecewiseLinear):
        self.phi = phi
        self.psi = psi
        self.domain = Interval.real_line()

    def __call__(self, t: float) -> float:
        return self.phi(self.psi(t))

    def many(self, ts) -> np.ndarray:
        return self.phi.many(self.psi.many(ts))


def compose_eval(phi: FunctionSpec, psi: PiecewiseLinear, t: float) -> float:
    return phi(psi(t))


def _substitute(node: Node, inner: Node) -> Node:
    if isinstance(node, Var):
        return inner
    if isinstance(node, Neg):
        return Neg(_substitute(node.operand, inner))
    if isinstance(node, Call):
        return Call(node.name, _substitute(node.arg, inner))
    if isinstance(node, BinOp):
        return BinOp(node.op, _substitute(node.left, inner), _substitute(node.right, inner))
    return node


def compose_specs(phi: FunctionSpec, psi: FunctionSpec) -> FunctionSpec:
    """Symbolic composition ``phi o psi`` on the domain of ``psi``."""
    from .fnspec import to_text

    ast = _substitute(phi.ast, psi.ast)
    return FunctionSpec(ast, psi.domain, to_text(ast))


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _ordered(c, a, b, d):
    c, a, b, d = (float(v) for v in (c, a, b, d))
    if a > b:
        a, b = b, a
    return c, a, b, d


def build_convex_interpolant(c: float, a: float, b: float, d: float) -> PiecewiseLinear:
    """Convex polygon with psi(0)=c, psi(1)=a, psi(s)=b, psi(s+1)=d.

    ``s`` is the midpoint of the open window
    ``(b-a)/(d-b) + 1 < s < (b-a)/(a-c) + 1``; left of 0 the polygon is flat,
    right of ``s+1`` its slope is ``2(d-b)``.
    """
    c, a, b, d = _ordered(c, a, b, d)
    if not (c <= a and b <= d) or not (a + b < c + d):
        raise InfeasibleWindow(f"need c <= a <= b <= d and a+b < c+d, got {(c, a, b, d)}")
    right = 2.0 * (d - b)
    if a == b:
        return PiecewiseLinear((0.0, 1.0, 2.0), (c, a, d), 0.0, right, s=1.0)
    if a == c:
        # window is unbounded above; pick the middle slope halfway between 0 and d-b
        s = 1.0 + 2.0 * (b - a) / (d - b)
    else:
        lo = (b - a) / (d - b) + 1.0
        hi = (b - a) / (a - c) + 1.0
        if not lo < hi:
            raise InfeasibleWindow(f"empty window ({lo}, {hi})")
        s = 0.5 * (lo + hi)
    return PiecewiseLinear((0.0, 1.0, s, s + 1.0), (c, a, b, d), 0.0, right, s=s)


def build_concave_interpolant(c: float, a: float, b: float, d: float) -> PiecewiseLinear:
    """Concave polygon with psi(0)=c, psi(1)=a, psi(r)=b, psi(r+1)=d.

    ``r`` is the midpoint of ``(b-a)/(a-c) + 1 < r < (b-a)/(d-b) + 1``; left of
    0 the slope is ``2(a-c)``, right of ``r+1`` the polygon is flat.
    """
    c, a, b, d = _ordered(c, a, b, d)
    if not (c <= a and b <= d) or not (a + b > c + d):
        raise InfeasibleWindow(f"need c <= a <= b <= d and a+b > c+d, got {(c, a, b, d)}")
    left = 2.0 * (a - c)
    if a == b:
        return PiecewiseLinear((0.0, 1.0, 2.0), (c, a, d), left, 0.0, s=1.0)
    if b == d:
        r = 1.0 + 2.0 * (b - a) / (a - c)
    else:
        lo = (b - a) / (a - c) + 1.0
        hi = (b - a) / (d - b) + 1.0
        if not lo < hi:
            raise InfeasibleWindow(f"empty window ({lo}, {hi})")
        r = 0.5 * (lo + hi)
    return PiecewiseLinear((0.0, 1.0, r, r + 1.0), (c, a, b, d), left, 0.0, s=r)


# ---------------------------------------------------------------------------
# rearrangement checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RearrangementResult(CheckResult):
    proof_gap: float
    psi: PiecewiseLinear


def _check_preconditions(phi, c, a, b, d, tol, n_grid, increasing):
    if not (c <= a <= d and c <= b <= d):
        raise PreconditionError(f"a={a}, b={b} must lie in [c, d] = [{c}, {d}]")
    if increasing and not a + b < c + d:
        raise PreconditionError("need a + b < c + d")
    if not increasing and not a + b > c + d:
        raise PreconditionError("need a + b > c + d")
    I = Interval.closed(c, d)
    cert = certify_convex(phi, I, n_grid, tol)
    if cert.verdict is Verdict.REFUTED:
        raise PreconditionError(f"phi is not convex on {I}: {cert.summary()}")
    grid = np.linspace(c, d, n_grid)
    fv = phi.many(grid)
    steps = np.diff(fv)
    thresh = tol * (1 + np.abs(fv[:-1]) + np.abs(fv[1:]))
    monotone = np.all(steps >= -thresh) if increasing else np.all(steps <= thresh)
    if not monotone:
        word = "non-decreasing" if increasing else "non-increasing"
        raise PreconditionError(f"phi is not {word} on {I}")


def _rearrangement(phi, c, a, b, d, tol, n_grid, increasing) -> RearrangementResult:
    c, a, b, d = _ordered(c, a, b, d)
    _check_preconditions(phi, c, a, b, d, tol, n_grid, increasing)
    vals = (phi(c), phi(d), phi(a), phi(b))
    gap = (vals[0] + vals[1]) - (vals[2] + vals[3])
    builder = build_convex_interpolant if increasing else build_concave_interpolant
    psi = builder(c, a, b, d)
    proof_gap = three_point_gap(ComposedFunction(phi, psi), Triple(1.0, psi.s, 0.0))
    tolerance = scaled_tolerance(tol, *vals)
    if abs(proof_gap - gap) > scaled_tolerance(1e-9, *vals):
        raise ConvexCertError(f"proof path gap {proof_gap} disagrees with direct gap {gap}")
    return RearrangementResult(
        bool(gap >= -tolerance), float(gap), (c, a, b, d), float(tolerance), float(proof_gap), psi
    )


def check_rearrangement_increasing(
    phi: FunctionSpec, c, a, b, d, tol: float = DEFAULT_TOL, n_grid: int = 21
) -> RearrangementResult:
    """``phi(c) + phi(d) - phi(a) - phi(b)`` for convex non-decreasing phi, a+b < c+d."""
    return _rearrangement(phi, c, a, b, d, tol, n_grid, increasing=True)


def check_rearrangement_decreasing(
    phi: FunctionSpec, c, a, b, d, tol: float = DEFAULT_TOL, n_grid: int = 21
) -> RearrangementResult:
    """Same gap for convex non-increasing phi, a+b > c+d."""
    return _rearrangement(phi, c, a, b, d, tol, n_grid, increasing=False)
