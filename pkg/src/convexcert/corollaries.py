"""Closed-form scalar inequalities derived from the three-point inequality.

Each ``check_*`` returns a :class:`~convexcert.convexity.CheckResult` whose
gap is non-negative exactly when the inequality holds.  :func:`run_suite`
samples every inequality on its stated validity domain and reports the
worst gap it saw; inequalities that fail somewhere on that domain are
reported as failing.  Nothing is filtered out to make them pass.

Known outcomes on the stated domains (all confirmed with 50-digit
arithmetic):

* ``arcsin_first`` fails wherever
  ``arcsin(t) + arcsin(z) + arcsin(t + z - 1) > pi/2``, e.g. t = z = 0.75.
  Taking sines of the underlying angle inequality is only monotone while
  both angles stay at or below pi/2.
* ``arctan`` fails wherever ``x*y < 1 - (x + y)**2``, which is only possible
  with one coordinate negative (e.g. x = 1.5, y = -0.5).  It holds on
  ``x, y >= 0``.
* ``sum_product`` (the two-way equivalence) fails whenever
  ``a + b <= c + d`` but ``ab > cd``, e.g. (c, a, b, d) = (1, 2, 3, 4.2).
  The forward implication ``a + b > c + d  =>  ab > cd`` always holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .convexity import (
    DEFAULT_TOL,
    CheckResult,
    Triple,
    scaled_tolerance,
    signed_three_point_gap,
    three_point_gap,
)
from .errors import PreconditionError
from .fnspec import Interval, parse_function

__all__ = [
    "check_quadratic",
    "check_log",
    "log_branch",
    "check_abs_cos",
    "check_arcsin_pair",
    "check_arctan",
    "check_sum_product_equiv",
    "check_sum_product_forward",
    "generating_gap",
    "SuiteEntry",
    "SuiteReport",
    "SUITE_ENTRIES",
    "sample_entry",
    "run_suite",
]

HALF_PI = 0.5 * math.pi


def check_quadratic(a: float, b: float, c: float, tol: float = 0.0) -> CheckResult:
    """``c**2 + ab - (a+b)c = (c-a)(c-b)`` is >= 0 for outer c and <= 0 for middle c.

    The factored form keeps the sign exact in floating point, so the
    default tolerance is zero.  For middle triples the gap is negated.
    """
    t = Triple(a, b, c)
    gap = (c - a) * (c - b)
    if not (t.is_lower or t.is_upper):
        gap = -gap
    return CheckResult.from_gap(gap, (a, b, c), tol)


def log_branch(a: float, b: float, c: float) -> str:
    if min(a, b, c) <= 0 or a + b - c <= 0:
        raise PreconditionError(f"log inequality needs a, b, c, a+b-c > 0; got {(a, b, c)}")
    t = Triple(a, b, c)
    if t.is_lower:
        return "lower"
    if t.is_upper:
        return "upper"
    return "middle"


def check_log(a: float, b: float, c: float, tol: float = DEFAULT_TOL) -> CheckResult:
    """``log(a+b-c) <= log a + log b - log c`` for outer c; reversed for middle c."""
    branch = log_branch(a, b, c)
    la, lb, lc, ld = math.log(a), math.log(b), math.log(c), math.log(a + b - c)
    gap = (la + lb) - (lc + ld)
    if branch == "middle":
        gap = -gap
    return CheckResult.from_gap(gap, (a, b, c), scaled_tolerance(tol, la, lb, lc, ld))


def _quarter(k: int) -> tuple[float, float]:
    return (k - 1) * HALF_PI, k * HALF_PI


def check_abs_cos(a: float, b: float, k: int, tol: float = DEFAULT_TOL) -> CheckResult:
    """``|cos a| + |cos b| >= 1 + |cos(a+b)|`` with a, b, a+b in one quarter period."""
    lo, hi = _quarter(k)
    for name, v in (("a", a), ("b", b), ("a+b", a + b)):
        if not lo <= v <= hi:
            raise PreconditionError(f"{name}={v} outside [{lo}, {hi}] for k={k}")
    ca, cb, cs = abs(math.cos(a)), abs(math.cos(b)), abs(math.cos(a + b))
    gap = (ca + cb) - (1.0 + cs)
    return CheckResult.from_gap(gap, (a, b, k), scaled_tolerance(tol, ca, cb, 1.0, cs))


def _arcsin_pre(theta, zeta):
    if not (0.0 <= theta <= 1.0 and 0.0 <= zeta <= 1.0 and theta + zeta >= 1.0):
        raise PreconditionError(f"need 0 <= theta, zeta <= 1 and theta+zeta >= 1; got {(theta, zeta)}")


def check_arcsin_pair(theta: float, zeta: float, tol: float = DEFAULT_TOL) -> tuple[CheckResult, CheckResult]:
    """The two inequalities obtained by taking sine and cosine of
    ``arcsin(theta) + arcsin(zeta) <= pi/2 + arcsin(theta + zeta - 1)``.

    Only the cosine form holds on the whole stated domain; see the module
    docstring for where the sine form fails.
    """
    _arcsin_pre(theta, zeta)
    st, sz = math.sqrt(1 - theta * theta), math.sqrt(1 - zeta * zeta)
    s = theta + zeta
    rhs1 = math.sqrt(s * (2 - s))
    lhs1 = theta * sz + zeta * st
    first = CheckResult.from_gap(rhs1 - lhs1, (theta, zeta), scaled_tolerance(tol, rhs1, lhs1))
    lhs2 = st * sz + s
    rhs2 = 1 + theta * zeta
    second = CheckResult.from_gap(lhs2 - rhs2, (theta, zeta), scaled_tolerance(tol, lhs2, rhs2))
    return first, second


def check_arctan(x: float, y: float, tol: float = DEFAULT_TOL) -> CheckResult:
    """``(x+y)^2 >= (1+x^2)(1+y^2) / (1+(x+y)^2)`` for x + y >= 1."""
    if not x + y >= 1.0:
        raise PreconditionError(f"need x + y >= 1; got {x + y}")
    s2 = (x + y) ** 2
    rhs = (1 + x * x) * (1 + y * y) / (1 + s2)
    return CheckResult.from_gap(s2 - rhs, (x, y), scaled_tolerance(tol, s2, rhs))


def _sum_product_pre(a, b, c, d):
    if not 0 < c < a < b < d:
        raise PreconditionError(f"need 0 < c < a < b < d; got c={c}, a={a}, b={b}, d={d}")


def check_sum_product_equiv(a: float, b: float, c: float, d: float, tol: float = DEFAULT_TOL) -> CheckResult:
    """Do ``a + b > c + d`` and ``ab > cd`` have the same truth value?

    The gap is ``min(|a+b-c-d|, |ab-cd|)``, positive when the two agree and
    negative when they disagree.  Disagreement is common: the equivalence
    is false in the direction ``ab > cd  =>  a + b > c + d``.
    """
    _sum_product_pre(a, b, c, d)
    ds = (a + b) - (c + d)
    dp = a * b - c * d
    magnitude = min(abs(ds), abs(dp))
    agree = (ds > 0) == (dp > 0)
    gap = magnitude if agree else -magnitude
    return CheckResult.from_gap(gap, (a, b, c, d), scaled_tolerance(tol, a + b, c + d))


def check_sum_product_forward(
    a: float, b: float, c: float, d: float, tol: float = DEFAULT_TOL, via_rearrangement: bool = False
) -> CheckResult:
    """``a + b > c + d  =>  ab >= cd``, as ``log a + log b - log c - log d >= 0``.

    With ``via_rearrangement`` the gap comes from the decreasing-rearrangement
    check for ``-log``, including its polygonal proof path.
    """
    _sum_product_pre(a, b, c, d)
    if not a + b > c + d:
        raise PreconditionError("forward direction needs a + b > c + d")
    if via_rearrangement:
        from .pwl import check_rearrangement_decreasing

        res = check_rearrangement_decreasing(_neg_log, c, a, b, d, tol)
        return CheckResult(res.holds, res.gap, (a, b, c, d), res.tolerance_used)
    logs = [math.log(v) for v in (a, b, c, d)]
    gap = (logs[0] + logs[1]) - (logs[2] + logs[3])
    return CheckResult.from_gap(gap, (a, b, c, d), scaled_tolerance(tol, *logs))


# ---------------------------------------------------------------------------
# the same quantities through the generic three-point gap
# ---------------------------------------------------------------------------

_square = parse_function("x^2")
_neg_log = parse_function("-log(x)", Interval.open(0, math.inf))
_arcsin = parse_function("arcsin(x)", Interval.closed(-1, 1))
_neg_arctan = parse_function("-arctan(x)")
_neg_abs_cos = parse_function("-abs(cos(x))")


def _raw_gap(f, t: Triple) -> float:
    g = signed_three_point_gap(f, t)
    return g if (t.is_lower or t.is_upper) else -g


def generating_gap(name: str, inputs: tuple) -> float:
    """Recompute a corollary gap from the three-point gap of its generating function.

    ``name`` is a suite entry name; the value returned should equal the
    gap of the corresponding ``check_*`` call.
    """
    if name == "quadratic":
        a, b, c = inputs
        return 0.5 * signed_three_point_gap(_square, Triple(a, b, c))
    if name.startswith("log"):
        a, b, c = inputs
        return signed_three_point_gap(_neg_log, Triple(a, b, c))
    if name.startswith("abs_cos"):
        a, b, k = inputs
        if k not in (0, 1):
            raise ValueError("generating form only available for k in {0, 1}")
        return three_point_gap(_neg_abs_cos, Triple(a, b, 0.0))
    if name.startswith("arcsin"):
        theta, zeta = inputs
        angle_gap = three_point_gap(_arcsin, Triple(zeta, theta, 1.0))
        right = HALF_PI + math.asin(theta + zeta - 1)
        left = right - angle_gap
        if name == "arcsin_first":
            return math.sin(right) - math.sin(left)
        return math.cos(left) - math.cos(right)
    if name.startswith("arctan"):
        x, y = inputs
        zeta = math.atan(x + y)
        theta = zeta + _raw_gap(_neg_arctan, Triple(x, y, 0.0))
        return (1 + x * x) * (1 + y * y) * (math.sin(theta) ** 2 - math.cos(zeta) ** 2)
    if name.startswith("sum_product"):
        a, b, c, d = inputs
        return check_sum_product_forward(a, b, c, d, via_rearrangement=True).gap
    raise KeyError(name)


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

MAX_REJECTIONS = 100


def _draw(rng, box, accept):
    for _ in range(MAX_REJECTIONS + 1):
        point = tuple(float(rng.uniform(lo, hi)) for lo, hi in box)
        if accept(*point):
            return point
    raise RuntimeError("rejection sampler exceeded its cap")


def _positive(rng, hi=10.0):
    # uniform on (0, hi]
    return hi - float(rng.uniform(0.0, hi))


def _draw_positive(rng, n, accept):
    for _ in range(MAX_REJECTIONS + 1):
        point = tuple(_positive(rng) for _ in range(n))
        if accept(*point):
            return point
    raise RuntimeError("rejection sampler exceeded its cap")


def _sample_quadratic(rng):
    return _draw(rng, [(-10, 10)] * 3, lambda a, b, c: True)


def _sample_log(kind):
    tests = {
        "lower": lambda a, b, c: c <= min(a, b),
        "upper": lambda a, b, c: max(a, b) <= c < a + b,
        "middle": lambda a, b, c: min(a, b) <= c <= max(a, b),
    }
    return lambda rng: _draw_positive(rng, 3, tests[kind])


def _sample_abs_cos(k):
    lo, hi = _quarter(k)

    def sample(rng):
        a, b = _draw(rng, [(lo, hi)] * 2, lambda a, b: lo <= a + b <= hi)
        return (a, b, k)

    return sample


def _sample_arcsin(rng):
    return _draw(rng, [(0, 1)] * 2, lambda t, z: t + z >= 1)


def _sample_arctan(rng):
    return _draw(rng, [(-5, 5)] * 2, lambda x, y: x + y >= 1)


def _sample_arctan_nonneg(rng):
    return _draw(rng, [(0, 5)] * 2, lambda x, y: x + y >= 1)


def _sample_ordered4(rng):
    # sorting four uniforms gives the ordered region exactly; rejection only for ties
    for _ in range(MAX_REJECTIONS + 1):
        c, a, b, d = sorted(_positive(rng) for _ in range(4))
        if 0 < c < a < b < d:
            return (a, b, c, d)
    raise RuntimeError("rejection sampler exceeded its cap")


def _sample_forward(rng):
    for _ in range(MAX_REJECTIONS + 1):
        a, b, c, d = _sample_ordered4(rng)
        if a + b > c + d:
            return (a, b, c, d)
    raise RuntimeError("rejection sampler exceeded its cap")


def _first(check):
    return lambda *args, tol: check(*args, tol=tol)[0]


def _second(check):
    return lambda *args, tol: check(*args, tol=tol)[1]


# name -> (sampler, check(*inputs, tol=...), part of the stated-domain suite)
SUITE_ENTRIES = {
    "quadratic": (_sample_quadratic, lambda a, b, c, tol: check_quadratic(a, b, c), True),
    "log_lower": (_sample_log("lower"), check_log, True),
    "log_upper": (_sample_log("upper"), check_log, True),
    "log_middle": (_sample_log("middle"), check_log, True),
    "abs_cos_k0": (_sample_abs_cos(0), check_abs_cos, True),
    "abs_cos_k1": (_sample_abs_cos(1), check_abs_cos, True),
    "arcsin_first": (_sample_arcsin, _first(check_arcsin_pair), True),
    "arcsin_second": (_sample_arcsin, _second(check_arcsin_pair), True),
    "arctan": (_sample_arctan, check_arctan, True),
    "sum_product": (_sample_ordered4, check_sum_product_equiv, True),
    # restricted domains on which the derivations actually apply
    "arctan_nonneg": (_sample_arctan_nonneg, check_arctan, False),
    "sum_product_forward": (_sample_forward, check_sum_product_forward, False),
}


@dataclass
class SuiteEntry:
    name: str
    samples_tested: int = 0
    violations: list = field(default_factory=list)
    violation_count: int = 0
    min_gap: float = math.inf
    tolerance: float = DEFAULT_TOL
    stated_domain: bool = True

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "samples_tested": self.samples_tested,
            "violation_count": self.violation_count,
            "violations": [{"inputs": list(inp), "gap": gap} for inp, gap in self.violations],
            "min_gap": self.min_gap,
            "tolerance": self.tolerance,
            "stated_domain": self.stated_domain,
        }


@dataclass
class SuiteReport:
    seed: int
    samples_per_corollary: int
    tolerance: float
    entries: dict = field(default_factory=dict)

    @property
    def failing(self) -> list[str]:
        return [name for name, e in self.entries.items() if e.violation_count]

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "samples_per_corollary": self.samples_per_corollary,
            "tolerance": self.tolerance,
            "entries": [e.as_dict() for e in self.entries.values()],
        }


def sample_entry(name: str, seed: int, n: int) -> list[tuple]:
    """The exact samples :func:`run_suite` draws for ``name``."""
    sampler = SUITE_ENTRIES[name][0]
    index = list(SUITE_ENTRIES).index(name)
    rng = np.random.default_rng([seed, index])
    return [sampler(rng) for _ in range(n)]


def run_suite(
    seed: int = 0,
    samples_per_corollary: int = 10_000,
    tol: float = DEFAULT_TOL,
    entries=None,
    max_violations: int = 50,
) -> SuiteReport:
    """Sample each inequality on its domain and collect the worst gaps.

    A sample is a violation when its gap is below ``-tol`` (absolute), so
    ``violations`` is non-empty exactly when ``min_gap < -tol``.  Only the
    first ``max_violations`` are stored; ``violation_count`` has the total.
    Each entry has its own generator, seeded from ``(seed, entry index)``.
    """
    report = SuiteReport(seed, samples_per_corollary, tol)
    for name in entries or SUITE_ENTRIES:
        _, check, stated = SUITE_ENTRIES[name]
        entry = SuiteEntry(name, tolerance=tol, stated_domain=stated)
        for inputs in sample_entry(name, seed, samples_per_corollary):
            gap = check(*inputs, tol=tol).gap
            entry.samples_tested += 1
            entry.min_gap = min(entry.min_gap, gap)
            if gap < -tol:
                entry.violation_count += 1
                if len(entry.violations) < max_violations:
                    entry.violations.append((inputs, gap))
        report.entries[name] = entry
    return report
