import itertools
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexcert.hamel import (
    ONE,
    SQRT2,
    SQRT3,
    LatticePoint,
    QuadFieldElem,
    check_additivity_exact,
    check_midconvex_exact,
    f_swap,
    f_swap_lattice,
    g_square,
    midconvex_scan,
    small_lattice,
    sqrt_bounds,
    violation_demo,
)

mpmath.mp.dps = 60

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
elems = st.builds(QuadFieldElem, rationals, rationals, rationals, rationals)
points = st.builds(LatticePoint, rationals, rationals, rationals)


def as_mp(e: QuadFieldElem):
    r = [mpmath.mpf(v.numerator) / v.denominator for v in e.coords]
    return r[0] + r[1] * mpmath.sqrt(2) + r[2] * mpmath.sqrt(3) + r[3] * mpmath.sqrt(6)


def test_multiplication_table():
    s2, s3, s6 = QuadFieldElem(0, 1), QuadFieldElem(0, 0, 1), QuadFieldElem(0, 0, 0, 1)
    assert s2 * s3 == s6
    assert s2 * s6 == QuadFieldElem(0, 0, 2)
    assert s3 * s6 == QuadFieldElem(0, 3)
    assert s6 * s6 == QuadFieldElem(6)
    assert s2 * s2 == 2 and s3 * s3 == 3


def _axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x + y == y + x
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    assert x * 1 == x


def test_field_axioms_on_random_triples():
    rng = random.Random(0)

    def elem():
        return QuadFieldElem(*(Fraction(rng.randint(-30, 30), rng.randint(1, 12)) for _ in range(4)))

    for _ in range(1000):
        _axioms(elem(), elem(), elem())


@settings(max_examples=100, deadline=None)
@given(elems, elems, elems)
def test_field_axioms(x, y, z):
    _axioms(x, y, z)


@settings(max_examples=200, deadline=None)
@given(elems)
def test_sign_matches_high_precision(x):
    value = as_mp(x)
    expected = 0 if x.is_zero() else (1 if value > 0 else -1)
    assert x.sign() == expected


def test_sign_of_tiny_value():
    # continued-fraction convergents of sqrt2 alternate below and above it
    close = QuadFieldElem(Fraction(-1393, 985), 1)  # sqrt2 - 1393/985 ~ 3.6e-7
    assert close.sign() == 1
    assert QuadFieldElem(Fraction(-114243, 80782), 1).sign() == -1  # ~ -5.4e-11


def test_sqrt_bounds_bracket():
    for n in (2, 3, 6):
        lo, hi = sqrt_bounds(n, 100)
        assert lo * lo <= n <= hi * hi
        assert hi - lo == Fraction(1, 2**100)


def test_f_swap_examples():
    assert f_swap(LatticePoint(1, 0, 0)) == QuadFieldElem(0, 1, 0, 0)
    assert f_swap(LatticePoint(0, 0, 1)) == QuadFieldElem(0, 0, 1, 0)
    assert f_swap(LatticePoint(2, 3, -1)) == QuadFieldElem(3, 2, -1, 0)


@settings(max_examples=300, deadline=None)
@given(points)
def test_f_swap_involution(x):
    assert f_swap_lattice(f_swap_lattice(x)) == x


def test_g_square_examples():
    assert g_square(SQRT2) == 1
    assert g_square(SQRT3) == 3
    d = LatticePoint(-1, 1, 1)
    assert f_swap(d) == QuadFieldElem(1, -1, 1)
    assert g_square(d) == QuadFieldElem(6, -2, 2, -2)


def test_midconvex_examples():
    x = LatticePoint(1, 1, 0)
    assert check_midconvex_exact(x, x)
    assert check_midconvex_exact(ONE, SQRT2)
    slack = (g_square(ONE) + g_square(SQRT2)) / 2 - g_square((ONE + SQRT2) / 2)
    assert slack == QuadFieldElem(Fraction(3, 4), Fraction(-1, 2))  # (sqrt2 - 1)^2 / 4
    assert slack.sign() == 1


@settings(max_examples=150, deadline=None)
@given(points, points)
def test_midconvex_random_pairs(x, y):
    assert check_midconvex_exact(x, y)


def test_additivity_examples():
    assert check_additivity_exact(ONE, SQRT2)
    assert f_swap(ONE + SQRT2) == QuadFieldElem(1, 1)
    assert f_swap(SQRT3 * 2) == f_swap(SQRT3) * 2
    zero = LatticePoint()
    assert check_additivity_exact(zero, zero)
    assert f_swap(zero).is_zero()


def test_ordering():
    assert ONE < SQRT2 < SQRT3
    assert not SQRT3 < SQRT2
    assert SQRT3 < LatticePoint(-1, 1, 1)  # sqrt2 + sqrt3 - 1 ~ 2.146


def test_violation_demo():
    demo = violation_demo()
    assert demo.lhs == 4
    assert demo.rhs == QuadFieldElem(8, -2, 2, -2)
    assert demo.difference.coords == (-4, 2, -2, 2)
    assert demo.sign == 1
    assert demo.c_below_both
    assert demo.inequality_violated
    assert demo.scan_failures == 0
    assert demo.scan_pairs == 125 * 126 // 2
    lo, hi = demo.enclosure
    assert lo <= hi and lo > 0
    oracle = -4 + 2 * mpmath.sqrt(2) - 2 * mpmath.sqrt(3) + 2 * mpmath.sqrt(6)
    assert abs(mpmath.mpf(demo.decimal) - oracle) < mpmath.mpf(10) ** -48
    assert abs(float(demo.decimal) - float((lo + hi) / 2)) < 1e-4


def test_demo_report_serialization():
    d = violation_demo(scan_values=()).as_dict()
    assert d["difference"] == ["-4/1", "2/1", "-2/1", "2/1"]
    assert d["triple"]["c"] == ["1/1", "0/1", "0/1"]
    assert d["midconvex_scan"] == {"pairs": 0, "failures": 0}


def test_half_integer_scan():
    # a second lattice with denominator 2 in every coordinate
    values = [Fraction(k, 2) for k in range(-2, 3)]
    pairs, failures = midconvex_scan(small_lattice(values))
    assert pairs == 7875 and failures == 0


@pytest.mark.parametrize("k", [Fraction(0), Fraction(5), Fraction(-7, 3)])
def test_constant_shift(k):
    demo = violation_demo(scan_values=(), shift=k)
    assert demo.difference.coords == (-4, 2, -2, 2)
    assert demo.inequality_violated
    # g + k keeps the midpoint slack unchanged
    for x, y in itertools.product(small_lattice((-1, 0, 1))[:9], repeat=2):
        slack = (g_square(x) + k + g_square(y) + k) / 2 - (g_square((x + y) / 2) + k)
        assert slack == (g_square(x) + g_square(y)) / 2 - g_square((x + y) / 2)
        assert slack.sign() >= 0
