"""Three-point gaps, classical convexity characterizations, grid certification.

The central quantity is the *three-point gap* of a function ``f`` at a triple
``(a, b, c)`` whose point ``c`` lies on one side of both ``a`` and ``b``::

    gap = f(c) + f(a + b - c) - f(a) - f(b)

Convex functions have ``gap >= 0`` for every such triple.  When ``c`` sits
between ``a`` and ``b`` the inequality flips (``middle_point_gap``).

Every gap is tested against a mixed absolute/relative threshold
``tol * (1 + |f(p1)| + ... + |f(pk)|)`` so verdicts do not depend on the
scale of ``f``.

Functions passed in may be a :class:`~convexcert.fnspec.FunctionSpec` or any
callable that exposes a ``domain`` attribute and, optionally, a vectorized
``many`` method.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ClassificationError, DomainError, EmptyGrid, PreconditionError
from .fnspec import FunctionSpec, Interval, negate

__all__ = [
    "DEFAULT_TOL",
    "TripleClass",
    "Triple",
    "CheckResult",
    "Witness",
    "Verdict",
    "Certificate",
    "scaled_tolerance",
    "three_point_gap",
    "three_point_gaps",
    "middle_point_gap",
    "signed_three_point_gap",
    "midconvex_gap",
    "quasiconvex_gap",
    "lambda0_gap",
    "avg_rate_monotone_check",
    "equality_propagation_check",
    "certify_convex",
    "certify_concave",
    "find_violation_witness",
]

DEFAULT_TOL = 1e-9


class TripleClass(enum.Enum):
    LOWER = "LOWER"
    UPPER = "UPPER"
    MIDDLE = "MIDDLE"


@dataclass(frozen=True)
class Triple:
    a: float
    b: float
    c: float

    @property
    def d(self) -> float:
        """The reflected point ``a + b - c``."""
        return self.a + self.b - self.c

    @property
    def is_lower(self) -> bool:
        return self.c <= min(self.a, self.b)

    @property
    def is_upper(self) -> bool:
        return self.c >= max(self.a, self.b)

    @property
    def is_middle(self) -> bool:
        return min(self.a, self.b) <= self.c <= max(self.a, self.b)

    @property
    def classification(self) -> TripleClass:
        # boundary cases (c equal to a or b) are both outer and middle; outer wins
        if self.is_lower:
            return TripleClass.LOWER
        if self.is_upper:
            return TripleClass.UPPER
        return TripleClass.MIDDLE

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    gap: float
    points: tuple
    tolerance_used: float

    @classmethod
    def from_gap(cls, gap: float, points: tuple, tolerance_used: float) -> CheckResult:
        return cls(bool(gap >= -tolerance_used), float(gap), tuple(points), float(tolerance_used))


@dataclass(frozen=True)
class Witness:
    triple: Triple
    gap: float
    tolerance_used: float


class Verdict(enum.Enum):
    CERTIFIED_ON_GRID = "CERTIFIED_ON_GRID"
    REFUTED = "REFUTED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    witness: Optional[Witness]
    grid_points: int
    min_gap: float
    strict: bool
    tolerance: float
    n_triples: int = 0
    midconvex_min_gap: float = math.inf
    notes: tuple[str, ...] = field(default_factory=tuple)

    def summary(self) -> str:
        if self.verdict is Verdict.REFUTED:
            t = self.witness.triple
            return (
                f"REFUTED: gap {self.witness.gap:.6g} at (a, b, c) = "
                f"({t.a:.6g}, {t.b:.6g}, {t.c:.6g})"
            )
        if self.verdict is Verdict.CERTIFIED_ON_GRID:
            return (
                f"CERTIFIED_ON_GRID: {self.n_triples} triples on a {self.grid_points}-point "
                f"grid, min gap {self.min_gap:.6g}. Grid evidence only, not a proof of convexity."
            )
        return "INCONCLUSIVE: " + "; ".join(self.notes)


def scaled_tolerance(tol: float, *values) -> float:
    return tol * (1.0 + sum(abs(v) for v in values))


def _eval(f, x):
    return f(x)


def _eval_many(f, xs):
    many = getattr(f, "many", None)
    if many is not None:
        return many(xs)
    return np.array([f(x) for x in np.asarray(xs, dtype=float).ravel()]).reshape(np.shape(xs))


# ---------------------------------------------------------------------------
# pointwise gaps
# ---------------------------------------------------------------------------


def three_point_gap(f, t: Triple) -> float:
    """``f(c) + f(a+b-c) - f(a) - f(b)`` for an outer triple (c beyond both a and b)."""
    if not (t.is_lower or t.is_upper):
        raise ClassificationError(f"{t} is MIDDLE; use middle_point_gap")
    return (_eval(f, t.c) + _eval(f, t.d)) - (_eval(f, t.a) + _eval(f, t.b))


def middle_point_gap(f, t: Triple) -> float:
    """``f(a) + f(b) - f(c) - f(a+b-c)`` for c between a and b."""
    if not t.is_middle:
        raise ClassificationError(f"{t} is not MIDDLE; use three_point_gap")
    return (_eval(f, t.a) + _eval(f, t.b)) - (_eval(f, t.c) + _eval(f, t.d))


def signed_three_point_gap(f, t: Triple) -> float:
    """The gap in the direction a convex ``f`` makes non-negative, for any triple."""
    if t.is_lower or t.is_upper:
        return three_point_gap(f, t)
    return middle_point_gap(f, t)


def three_point_gaps(f, a, b, c, return_scale: bool = False):
    """Vectorized :func:`three_point_gap` over arrays of outer triples."""
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    outer = (c <= np.minimum(a, b)) | (c >= np.maximum(a, b))
    if not np.all(outer):
        raise ClassificationError("some triples are MIDDLE")
    d = a + b - c
    fa, fb, fc, fd = (_eval_many(f, v) for v in (a, b, c, d))
    gaps = (fc + fd) - (fa + fb)
    if return_scale:
        return gaps, 1.0 + np.abs(fa) + np.abs(fb) + np.abs(fc) + np.abs(fd)
    return gaps


def midconvex_gap(f, x: float, y: float) -> float:
    return 0.5 * _eval(f, x) + 0.5 * _eval(f, y) - _eval(f, 0.5 * (x + y))


def quasiconvex_gap(f, x: float, y: float, lam: float) -> float:
    if not 0.0 <= lam <= 1.0:
        raise PreconditionError(f"lambda={lam} outside [0, 1]")
    return max(_eval(f, x), _eval(f, y)) - _eval(f, lam * x + (1 - lam) * y)


def lambda0_gap(f, x: float, y: float, lam0: float) -> float:
    if not 0.0 <= lam0 <= 1.0:
        raise PreconditionError(f"lambda0={lam0} outside [0, 1]")
    return lam0 * _eval(f, x) + (1 - lam0) * _eval(f, y) - _eval(f, lam0 * x + (1 - lam0) * y)


# ---------------------------------------------------------------------------
# characterizations over grids
# ---------------------------------------------------------------------------


def avg_rate_monotone_check(f, eps: float, grid: Sequence[float], tol: float = DEFAULT_TOL) -> CheckResult:
    """Is ``t -> f(t + eps) - f(t)`` non-decreasing along ``grid``?

    ``gap`` is the smallest consecutive increment of that sequence.
    """
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    ts = np.asarray(grid, dtype=float)
    if ts.size == 0:
        raise EmptyGrid("grid is empty")
    if np.any(np.diff(ts) <= 0):
        raise PreconditionError("grid must be strictly increasing")
    f0 = _eval_many(f, ts)
    f1 = _eval_many(f, ts + eps)
    g = f1 - f0
    if ts.size == 1:
        return CheckResult(True, math.inf, (float(ts[0]),), float(tol))
    inc = np.diff(g)
    k = int(np.argmin(inc))
    tolerance = scaled_tolerance(tol, f0[k], f1[k], f0[k + 1], f1[k + 1])
    # per-pair thresholds; each increment is judged on its own four values
    thresholds = tol * (1 + np.abs(f0[:-1]) + np.abs(f1[:-1]) + np.abs(f0[1:]) + np.abs(f1[1:]))
    holds = bool(np.all(inc >= -thresholds))
    return CheckResult(holds, float(inc[k]), (float(ts[k]), float(ts[k + 1])), float(tolerance))


def equality_propagation_check(
    f,
    a: float,
    b: float,
    lam0: float,
    lam_grid: Sequence[float],
    tol: float = DEFAULT_TOL,
    n_grid: int = 21,
) -> CheckResult:
    """Equality of the convex combination at one interior weight forces it at all weights.

    Raises PreconditionError unless ``f`` certifies convex on ``[a, b]`` and the
    ``lam0`` gap vanishes within tolerance.
    """
    if not 0.0 < lam0 < 1.0:
        raise PreconditionError(f"lambda0={lam0} outside (0, 1)")
    lo, hi = min(a, b), max(a, b)
    if lo < hi:
        cert = certify_convex(f, Interval.closed(lo, hi), n_grid, tol)
        if cert.verdict is Verdict.REFUTED:
            raise PreconditionError(f"f is not convex on [{lo:g}, {hi:g}]: {cert.summary()}")
    g0 = lambda0_gap(f, a, b, lam0)
    tol0 = scaled_tolerance(tol, f(a), f(b), f(lam0 * a + (1 - lam0) * b))
    if abs(g0) > tol0:
        raise PreconditionError(f"gap at lambda0={lam0} is {g0:g}, not zero")
    worst, worst_lam, worst_tol = 0.0, None, tol0
    holds = True
    for lam in lam_grid:
        lam = float(lam)
        g = lambda0_gap(f, a, b, lam)
        t = scaled_tolerance(tol, f(a), f(b), f(lam * a + (1 - lam) * b))
        if abs(g) > t:
            holds = False
        if worst_lam is None or abs(g) > abs(worst):
            worst, worst_lam, worst_tol = g, lam, t
    # reported gap is -|deviation| so that "holds <=> gap >= -tol" reads as usual
    return CheckResult(holds, float(0.0 - abs(worst)), (a, b, worst_lam), float(worst_tol))


def _grid_for(I: Interval, n_grid: int) -> np.ndarray:
    grid = np.linspace(I.lo, I.hi, n_grid)
    keep = np.array([I.contains(x) for x in grid])
    return grid[keep]


def certify_convex(f, I: Interval, n_grid: int = 41, tol: float = DEFAULT_TOL) -> Certificate:
    """Probe every outer triple of a uniform grid on ``I``.

    Returns REFUTED with the most negative witness, otherwise
    CERTIFIED_ON_GRID, which is grid evidence and never a proof.
    """
    if not I.bounded:
        raise PreconditionError("certification interval must be bounded")
    if n_grid < 3:
        raise PreconditionError("n_grid must be at least 3")
    if not I.issubset(f.domain):
        raise DomainError(f"{I} is not contained in the domain {f.domain}")
    grid = _grid_for(I, n_grid)
    m = grid.size
    if m < 3:
        raise EmptyGrid("fewer than three grid points inside the interval")
    fv = _eval_many(f, grid)

    # c = x_k <= a = x_i <= b = x_j, and a + b - c = x_{i+j-k} on a uniform grid
    i, j, k = np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij")
    sel = (i <= j) & (k <= i) & (i + j - k < m)
    i, j, k = i[sel], j[sel], k[sel]
    l = i + j - k
    gaps = (fv[k] + fv[l]) - (fv[i] + fv[j])
    thresholds = tol * (1 + np.abs(fv[i]) + np.abs(fv[j]) + np.abs(fv[k]) + np.abs(fv[l]))

    # midconvexity pairs with a grid midpoint; their witnesses are (mid, mid, lower end)
    p, q = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    psel = (p < q) & ((p + q) % 2 == 0)
    p, q = p[psel], q[psel]
    mid = (p + q) // 2
    mgaps = 0.5 * fv[p] + 0.5 * fv[q] - fv[mid]
    mthresh = tol * (1 + np.abs(fv[p]) + np.abs(fv[q]) + np.abs(fv[mid]))
    midconvex_min = float(mgaps.min()) if mgaps.size else math.inf

    min_gap = float(gaps.min())
    bad = gaps < -thresholds
    nondegenerate = k < i
    strict = bool(np.any(nondegenerate) and np.all(gaps[nondegenerate] > thresholds[nondegenerate]))

    witness = None
    if np.any(bad):
        idx = np.flatnonzero(gaps == gaps[bad].min())
        # ties broken by lexicographic (a, b, c)
        order = np.lexsort((grid[k[idx]], grid[j[idx]], grid[i[idx]]))
        w = idx[order[0]]
        witness = Witness(
            Triple(float(grid[i[w]]), float(grid[j[w]]), float(grid[k[w]])),
            float(gaps[w]),
            float(thresholds[w]),
        )
    elif np.any(mgaps < -mthresh):
        w = int(np.argmin(mgaps))
        witness = Witness(
            Triple(float(grid[mid[w]]), float(grid[mid[w]]), float(grid[p[w]])),
            float(2 * mgaps[w]),
            float(2 * mthresh[w]),
        )

    if witness is not None:
        return Certificate(Verdict.REFUTED, witness, m, min_gap, False, tol, int(gaps.size), midconvex_min)
    return Certificate(
        Verdict.CERTIFIED_ON_GRID, None, m, min_gap, strict, tol, int(gaps.size), midconvex_min,
        ("grid evidence only; not a proof of convexity",),
    )


def certify_concave(f, I: Interval, n_grid: int = 41, tol: float = DEFAULT_TOL) -> Certificate:
    """Certify concavity of ``f`` by certifying convexity of ``-f``."""
    if isinstance(f, FunctionSpec):
        g = negate(f)
    else:
        g = _Negated(f)
    return certify_convex(g, I, n_grid, tol)


class _Negated:
    def __init__(self, f):
        self.f = f
        self.domain = f.domain

    def __call__(self, x):
        return -self.f(x)

    def many(self, xs):
        return -_eval_many(self.f, xs)


# ---------------------------------------------------------------------------
# witness search
# ---------------------------------------------------------------------------


def _outer_gap(f, c, d, a):
    b = c + d - a
    vals = (_eval(f, c), _eval(f, d), _eval(f, a), _eval(f, b))
    return (vals[0] + vals[1]) - (vals[2] + vals[3]), vals


def find_violation_witness(
    f,
    I: Interval,
    budget: int = 10_000,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    rounds: int = 20,
) -> Optional[Witness]:
    """Seeded search for an outer triple with negative three-point gap.

    Samples ``budget`` triples parameterized by their outer points ``c <= d``
    and an inner point ``a`` (so ``b = c + d - a`` is automatically in range),
    then refines the best one by coordinate descent with a halving step.
    Returns ``None`` when nothing falls below ``-tol`` (scaled).
    """
    if not I.bounded:
        raise PreconditionError("search interval must be bounded")
    if not I.issubset(f.domain):
        raise DomainError(f"{I} is not contained in the domain {f.domain}")
    if budget < 1:
        return None
    rng = np.random.default_rng(seed)
    u = rng.uniform(I.lo, I.hi, size=(budget, 2))
    w = rng.uniform(0.0, 1.0, size=budget)
    c = u.min(axis=1)
    d = u.max(axis=1)
    a = c + w * (d - c)
    b = c + d - a
    fc, fd, fa, fb = (_eval_many(f, v) for v in (c, d, a, b))
    gaps = (fc + fd) - (fa + fb)
    best = int(np.argmin(gaps))
    x = [float(c[best]), float(d[best]), float(a[best])]
    g, vals = _outer_gap(f, *x)

    def feasible(cc, dd, aa):
        if not (cc <= aa <= dd):
            return False
        return all(I.contains(v) for v in (cc, dd, aa, cc + dd - aa))

    step = 0.1 * I.width
    for _ in range(rounds):
        for coord in range(3):
            for sign in (1.0, -1.0):
                trial = list(x)
                trial[coord] += sign * step
                if not feasible(*trial):
                    continue
                tg, tvals = _outer_gap(f, *trial)
                if tg < g:
                    x, g, vals = trial, tg, tvals
        step *= 0.5

    threshold = scaled_tolerance(tol, *vals)
    if g < -threshold:
        cc, dd, aa = x
        return Witness(Triple(aa, cc + dd - aa, cc), g, threshold)
    return None
