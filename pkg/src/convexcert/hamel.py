"""Exact midconvex-but-not-convex counterexample on the lattice Q + Q*sqrt2 + Q*sqrt3.

The numbers 1, sqrt2, sqrt3 are linearly independent over Q, so the map

    f(p + q*sqrt2 + t*sqrt3) = p*sqrt2 + q + t*sqrt3

(swap 1 and sqrt2, fix sqrt3) is well defined and additive.  Its square
``g = f**2`` satisfies the midpoint identity

    (g(x) + g(y)) / 2 - g((x + y) / 2) = (f(x) - f(y))**2 / 4 >= 0

yet at ``(a, b, c) = (sqrt2, sqrt3, 1)``, with ``c`` below both ``a`` and
``b``, its three-point gap ``g(c) + g(a+b-c) - g(a) - g(b)`` is negative.

Values of ``f`` and ``g`` live in Q(sqrt2, sqrt3), represented exactly by
:class:`QuadFieldElem`.  Equality is decided coordinatewise; signs are
certified with rational enclosures of sqrt2, sqrt3, sqrt6 that are refined
until the enclosure of the value excludes zero.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

__all__ = [
    "QuadFieldElem",
    "LatticePoint",
    "sqrt_bounds",
    "f_swap",
    "f_swap_lattice",
    "g_square",
    "check_midconvex_exact",
    "check_additivity_exact",
    "small_lattice",
    "midconvex_scan",
    "HamelReport",
    "violation_demo",
]

START_BITS = 100  # enclosure width 2**-100 ~ 8e-31
MAX_BITS = 800  # 2**-800 ~ 1.5e-241


def _q(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@functools.lru_cache(maxsize=None)
def _isqrt_scaled(n: int, bits: int) -> int:
    return math.isqrt(n << (2 * bits))


def sqrt_bounds(n: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= sqrt(n) <= hi`` with ``hi - lo = 2**-bits``."""
    root = _isqrt_scaled(n, bits)
    scale = 1 << bits
    return Fraction(root, scale), Fraction(root + 1, scale)


# basis products: sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2 sqrt3, sqrt3*sqrt6 = 3 sqrt2
_PRODUCT = (
    ((1, 0), (1, 1), (1, 2), (1, 3)),
    ((1, 1), (2, 0), (1, 3), (2, 2)),
    ((1, 2), (1, 3), (3, 0), (3, 1)),
    ((1, 3), (2, 2), (3, 1), (6, 0)),
)


class QuadFieldElem:
    """``w + x*sqrt2 + y*sqrt3 + z*sqrt6`` with rational coordinates.

    Stored as four integer numerators over one positive common denominator
    in lowest terms, which keeps the arithmetic in plain integers.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, w=0, x=0, y=0, z=0):
        fr = [_q(v) for v in (w, x, y, z)]
        den = math.lcm(*(v.denominator for v in fr))
        self._set(tuple(v.numerator * (den // v.denominator) for v in fr), den)

    def _set(self, num, den):
        g = math.gcd(den, *num)
        if g > 1:
            num = tuple(n // g for n in num)
            den //= g
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)

    @classmethod
    def _raw(cls, num, den) -> QuadFieldElem:
        e = object.__new__(cls)
        e._set(num, den)
        return e

    def __setattr__(self, name, value):
        raise AttributeError("QuadFieldElem is immutable")

    def __repr__(self):
        return f"QuadFieldElem({', '.join(repr(c) for c in self.coords)})"

    @classmethod
    def coerce(cls, v) -> QuadFieldElem:
        if isinstance(v, QuadFieldElem):
            return v
        if isinstance(v, LatticePoint):
            return v.as_field()
        return cls(_q(v))

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(Fraction(n, self._den) for n in self._num)

    w = property(lambda self: Fraction(self._num[0], self._den))
    x = property(lambda self: Fraction(self._num[1], self._den))
    y = property(lambda self: Fraction(self._num[2], self._den))
    z = property(lambda self: Fraction(self._num[3], self._den))

    def __add__(self, other):
        o = QuadFieldElem.coerce(other)
        d1, d2 = self._den, o._den
        if d1 == d2:
            return QuadFieldElem._raw(tuple(a + b for a, b in zip(self._num, o._num)), d1)
        return QuadFieldElem._raw(tuple(a * d2 + b * d1 for a, b in zip(self._num, o._num)), d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return QuadFieldElem._raw(tuple(-n for n in self._num), self._den)

    def __sub__(self, other):
        return self + (-QuadFieldElem.coerce(other))

    def __rsub__(self, other):
        return QuadFieldElem.coerce(other) - self

    def __mul__(self, other):
        o = QuadFieldElem.coerce(other)
        out = [0, 0, 0, 0]
        # basis index: 0 -> 1, 1 -> sqrt2, 2 -> sqrt3, 3 -> sqrt6
        for i, u in enumerate(self._num):
            if not u:
                continue
            row = _PRODUCT[i]
            for j, v in enumerate(o._num):
                if v:
                    factor, k = row[j]
                    out[k] += factor * u * v
        return QuadFieldElem._raw(tuple(out), self._den * o._den)

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = _q(k)
        if k == 0:
            raise ZeroDivisionError("division by zero")
        num = tuple(n * k.denominator for n in self._num)
        den = self._den * k.numerator
        if den < 0:
            num, den = tuple(-n for n in num), -den
        return QuadFieldElem._raw(num, den)

    def __pow__(self, n: int):
        out = QuadFieldElem(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = QuadFieldElem.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._den == o._den and self._num == o._num

    def __hash__(self):
        return hash((self._num, self._den))

    def is_zero(self) -> bool:
        return not any(self._num)

    def _scaled_bounds(self, bits: int) -> tuple[int, int]:
        # integer bounds on 2**bits * (numerator value); the denominator is positive
        w, x, y, z = self._num
        lo = hi = w << bits
        for coef, n in ((x, 2), (y, 3), (z, 6)):
            if coef:
                r = _isqrt_scaled(n, bits)  # r <= 2**bits sqrt(n) < r + 1
                if coef > 0:
                    lo, hi = lo + coef * r, hi + coef * (r + 1)
                else:
                    lo, hi = lo + coef * (r + 1), hi + coef * r
        return lo, hi

    def enclosure(self, bits: int = START_BITS) -> tuple[Fraction, Fraction]:
        lo, hi = self._scaled_bounds(bits)
        scale = self._den << bits
        return Fraction(lo, scale), Fraction(hi, scale)

    def sign(self) -> int:
        """Certified sign: -1, 0 or +1."""
        if self.is_zero():
            return 0
        bits = START_BITS
        while bits <= MAX_BITS:
            lo, hi = self._scaled_bounds(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise ArithmeticError(f"could not separate {self} from zero at 2**-{MAX_BITS}")

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def to_decimal(self, digits: int = 50) -> str:
        bits = max(START_BITS, int(digits * 3.33) + 64)
        lo, hi = self.enclosure(bits)
        mid = (lo + hi) / 2
        with localcontext() as ctx:
            ctx.prec = digits
            return str(Decimal(mid.numerator) / Decimal(mid.denominator))

    def __float__(self):
        lo, hi = self.enclosure(64)
        return float((lo + hi) / 2)

    def __str__(self):
        w, x, y, z = self.coords
        parts = [str(w)]
        for coef, name in ((x, "√2"), (y, "√3"), (z, "√6")):
            if coef:
                parts.append(f"{'+' if coef > 0 else '-'} {abs(coef)}{name}")
        return " ".join(parts)


@dataclass(frozen=True)
class LatticePoint:
    """The real number ``p + q*sqrt2 + t*sqrt3``."""

    p: Fraction = Fraction(0)
    q: Fraction = Fraction(0)
    t: Fraction = Fraction(0)

    def __post_init__(self):
        for name in "pqt":
            object.__setattr__(self, name, _q(getattr(self, name)))

    @classmethod
    def from_field(cls, e: QuadFieldElem) -> LatticePoint:
        if e.z:
            raise ValueError(f"{e} has a sqrt6 component; not on the lattice")
        return cls(e.w, e.x, e.y)

    @property
    def coords(self):
        return (self.p, self.q, self.t)

    def as_field(self) -> QuadFieldElem:
        return QuadFieldElem(self.p, self.q, self.t, 0)

    def __add__(self, o: LatticePoint):
        return LatticePoint(self.p + o.p, self.q + o.q, self.t + o.t)

    def __sub__(self, o: LatticePoint):
        return LatticePoint(self.p - o.p, self.q - o.q, self.t - o.t)

    def __neg__(self):
        return LatticePoint(-self.p, -self.q, -self.t)

    def __mul__(self, k):
        k = _q(k)
        return LatticePoint(k * self.p, k * self.q, k * self.t)

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = _q(k)
        return LatticePoint(self.p / k, self.q / k, self.t / k)

    def __lt__(self, o: LatticePoint):
        return (self - o).as_field().sign() < 0

    def __le__(self, o: LatticePoint):
        return (self - o).as_field().sign() <= 0

    def __str__(self):
        return str(self.as_field())


ONE = LatticePoint(1, 0, 0)
SQRT2 = LatticePoint(0, 1, 0)
SQRT3 = LatticePoint(0, 0, 1)


def f_swap(x: LatticePoint) -> QuadFieldElem:
    """Additive map swapping 1 and sqrt2 and fixing sqrt3."""
    return QuadFieldElem(x.q, x.p, x.t, 0)


def f_swap_lattice(x: LatticePoint) -> LatticePoint:
    return LatticePoint.from_field(f_swap(x))


@functools.lru_cache(maxsize=4096)
def g_square(x: LatticePoint) -> QuadFieldElem:
    fx = f_swap(x)
    return fx * fx


def check_midconvex_exact(x: LatticePoint, y: LatticePoint) -> bool:
    mid = (x + y) / 2
    slack = (g_square(x) + g_square(y)) / 2 - g_square(mid)
    diff = f_swap(x) - f_swap(y)
    if slack != diff * diff / 4:
        raise ArithmeticError(f"midpoint identity failed at {x}, {y}")
    return slack.sign() >= 0


def check_additivity_exact(x: LatticePoint, y: LatticePoint) -> bool:
    return f_swap(x + y) == f_swap(x) + f_swap(y) and f_swap(x * 2) == f_swap(x) * 2


def small_lattice(values=(-2, -1, 0, 1, 2)) -> list[LatticePoint]:
    return [LatticePoint(p, q, t) for p, q, t in itertools.product(values, repeat=3)]


def midconvex_scan(points) -> tuple[int, int]:
    """Exhaustive midconvexity over all unordered pairs; returns (pairs, failures)."""
    pairs = failures = 0
    for x, y in itertools.combinations_with_replacement(points, 2):
        pairs += 1
        if not check_midconvex_exact(x, y):
            failures += 1
    return pairs, failures


# default scan: the cube with coordinates in {-2, ..., 2}; see violation_demo
DEMO_SCAN_VALUES = (-2, -1, 0, 1, 2)


def _frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class HamelReport:
    a: LatticePoint
    b: LatticePoint
    c: LatticePoint
    lhs: QuadFieldElem  # g(a) + g(b)
    rhs: QuadFieldElem  # g(c) + g(a + b - c)
    difference: QuadFieldElem  # lhs - rhs
    sign: int
    enclosure: tuple[Fraction, Fraction]
    decimal: str
    c_below_both: bool
    scan_pairs: int
    scan_failures: int

    @property
    def three_point_gap(self) -> QuadFieldElem:
        return -self.difference

    @property
    def inequality_violated(self) -> bool:
        return self.c_below_both and self.sign > 0

    def as_dict(self) -> dict:
        def coords(e):
            return [_frac_str(v) for v in e.coords]

        return {
            "triple": {"a": coords(self.a), "b": coords(self.b), "c": coords(self.c)},
            "lhs": coords(self.lhs),
            "rhs": coords(self.rhs),
            "difference": coords(self.difference),
            "sign": self.sign,
            "enclosure": [_frac_str(v) for v in self.enclosure],
            "decimal": self.decimal,
            "c_below_both": self.c_below_both,
            "midconvex_scan": {"pairs": self.scan_pairs, "failures": self.scan_failures},
            "inequality_violated": self.inequality_violated,
        }


def violation_demo(scan_values=DEMO_SCAN_VALUES, shift=0) -> HamelReport:
    """Certify midconvexity of ``g + shift`` on a lattice cube and its failure at (sqrt2, sqrt3, 1).

    ``scan_values`` lists the coordinates p, q, t range over in the
    exhaustive pair scan; pass ``()`` to skip the scan.  A rational
    ``shift`` changes neither the midpoint slack nor the violation.
    """
    shift = _q(shift)
    a, b, c = SQRT2, SQRT3, ONE
    d = a + b - c

    def g(x):
        return g_square(x) + shift

    lhs = g(a) + g(b)
    rhs = g(c) + g(d)
    difference = lhs - rhs
    pairs, failures = midconvex_scan(small_lattice(scan_values)) if scan_values else (0, 0)
    return HamelReport(
        a, b, c, lhs, rhs, difference,
        difference.sign(),
        difference.enclosure(),
        difference.to_decimal(50),
        c < a and c < b,
        pairs, failures,
    )
