import math

import numpy as np
import pytest

from convexcert.convexity import (
    DEFAULT_TOL,
    CheckResult,
    Triple,
    TripleClass,
    Verdict,
    avg_rate_monotone_check,
    certify_concave,
    certify_convex,
    equality_propagation_check,
    find_violation_witness,
    lambda0_gap,
    middle_point_gap,
    midconvex_gap,
    quasiconvex_gap,
    signed_three_point_gap,
    three_point_gap,
    three_point_gaps,
)
from convexcert.errors import ClassificationError, DomainError, EmptyGrid, PreconditionError
from convexcert.fnspec import Interval, parse_function, reflect

sq = parse_function("x^2")
cube = parse_function("x^3", Interval.closed(-1, 1))


def test_classification():
    assert Triple(1, 2, 0).classification is TripleClass.LOWER
    assert Triple(1, 2, 3).classification is TripleClass.UPPER
    assert Triple(0, 2, 1).classification is TripleClass.MIDDLE
    # c equal to a is on both sides; the outer label wins
    t = Triple(0, 2, 0)
    assert t.is_lower and t.is_middle
    assert t.classification is TripleClass.LOWER
    assert Triple(1, 1, 1).classification is TripleClass.LOWER


def test_three_point_gap_examples():
    assert three_point_gap(sq, Triple(1, 2, 0)) == 4
    assert three_point_gap(sq, Triple(1, 1, 1)) == 0
    e = parse_function("exp(x)")
    # e^0 + e^3 - e^1 - e^2 = 21.0855... - 10.1073... = 10.9782...
    expected = 1 + math.exp(3) - math.exp(1) - math.exp(2)
    assert three_point_gap(e, Triple(1, 2, 0)) == pytest.approx(expected, abs=1e-12)
    assert three_point_gap(e, Triple(1, 2, 0)) == pytest.approx(10.9782, abs=1e-4)


def test_three_point_gap_rejects_middle():
    with pytest.raises(ClassificationError):
        three_point_gap(sq, Triple(0, 2, 1))


def test_three_point_gap_domain():
    f = parse_function("log(x)", Interval.open(0, math.inf))
    with pytest.raises(DomainError):
        three_point_gap(f, Triple(1, 1, 3))  # a + b - c = -1


def test_middle_point_gap_examples():
    assert middle_point_gap(sq, Triple(0, 2, 1)) == 2
    assert middle_point_gap(sq, Triple(0, 2, 0)) == 0
    assert middle_point_gap(parse_function("abs(x)"), Triple(-1, 1, 0)) == 2
    with pytest.raises(ClassificationError):
        middle_point_gap(sq, Triple(1, 2, 0))


def test_midconvex_gap_examples():
    assert midconvex_gap(sq, 0, 2) == 1
    lin = parse_function("3*x - 1")
    for x, y in [(0, 1), (-4, 7.5), (2, 2)]:
        assert midconvex_gap(lin, x, y) == pytest.approx(0, abs=1e-15)
    assert midconvex_gap(parse_function("sin(x)"), 0, math.pi) == pytest.approx(-1, abs=1e-15)


def test_quasiconvex_gap_examples():
    assert quasiconvex_gap(sq, -1, 1, 0.5) == 1
    for f in (sq, parse_function("sin(x)"), parse_function("-x^2")):
        assert quasiconvex_gap(f, 0.3, 2.0, 0.0) >= 0
    assert quasiconvex_gap(parse_function("-x^2"), -1, 1, 0.5) == -1
    with pytest.raises(PreconditionError):
        quasiconvex_gap(sq, 0, 1, 1.5)


def test_lambda0_gap_examples():
    assert lambda0_gap(sq, 0, 1, 1 / 3) == pytest.approx(2 / 9, abs=1e-15)
    aff = parse_function("2 - 5*x")
    for lam0 in np.linspace(0, 1, 11):
        assert lambda0_gap(aff, -3, 4, lam0) == pytest.approx(0, abs=1e-13)
    assert lambda0_gap(cube, -1, 1, 0.25) == pytest.approx(0.375, abs=1e-15)


def test_avg_rate_examples():
    r = avg_rate_monotone_check(sq, 1.0, [0, 1, 2])
    assert r.holds and r.gap == 2
    r = avg_rate_monotone_check(parse_function("4*x + 1"), 0.3, np.linspace(-2, 2, 9))
    assert r.holds and r.gap == pytest.approx(0, abs=1e-14)
    r = avg_rate_monotone_check(parse_function("sin(x)"), 0.5, np.linspace(0, 2 * math.pi, 50))
    assert not r.holds and r.gap < 0
    with pytest.raises(EmptyGrid):
        avg_rate_monotone_check(sq, 1.0, [])


def test_equality_propagation_examples():
    ab = parse_function("abs(x)")
    r = equality_propagation_check(ab, 0, 1, 0.5, np.linspace(0, 1, 11))
    assert r.holds and r.gap == 0
    with pytest.raises(PreconditionError):
        equality_propagation_check(sq, 0, 1, 0.5, np.linspace(0, 1, 11))
    # max(0, x - 1) written without a max: (x - 1 + |x - 1|) / 2
    hinge = parse_function("(x - 1 + abs(x - 1)) / 2", Interval.closed(0, 3))
    r = equality_propagation_check(hinge, 0, 1, 0.3, np.linspace(0, 1, 11))
    assert r.holds and r.gap == 0


def test_equality_propagation_rejects_non_convex():
    with pytest.raises(PreconditionError):
        equality_propagation_check(parse_function("sin(x)"), 0, math.pi, 0.5, [0.2])


def test_certify_examples():
    c = certify_convex(sq, Interval.closed(-2, 2), n_grid=21)
    assert c.verdict is Verdict.CERTIFIED_ON_GRID
    assert c.min_gap >= 0
    assert c.witness is None
    assert "not a proof" in c.summary()
    # strictness is judged on non-degenerate triples, where x^2 has gap 2(c-a)(c-b) > 0
    assert c.strict

    c = certify_convex(parse_function("sin(x)"), Interval.closed(0, 2 * math.pi), n_grid=21)
    assert c.verdict is Verdict.REFUTED
    assert c.witness.gap < -c.witness.tolerance_used

    c = certify_convex(parse_function("-log(x)", Interval.open(0, math.inf)), Interval.closed(0.1, 10), 21)
    assert c.verdict is Verdict.CERTIFIED_ON_GRID


def test_certify_strict_flag():
    assert not certify_convex(parse_function("abs(x)"), Interval.closed(-1, 1), 21).strict
    assert not certify_convex(parse_function("2*x + 1"), Interval.closed(-1, 1), 21).strict
    assert certify_convex(parse_function("exp(x)"), Interval.closed(-1, 1), 21).strict


def test_certify_witness_replay():
    for f, I in [
        (parse_function("sin(x)"), Interval.closed(0, 2 * math.pi)),
        (cube, Interval.closed(-1, 1)),
        (parse_function("-abs(x)"), Interval.closed(-1, 1)),
    ]:
        cert = certify_convex(f, I, 31)
        assert cert.verdict is Verdict.REFUTED
        t = cert.witness.triple
        assert t.is_lower
        assert three_point_gap(f, t) == pytest.approx(cert.witness.gap, abs=1e-12)
        w = find_violation_witness(f, I, 10_000, seed=3)
        assert w is not None
        assert three_point_gap(f, w.triple) < -w.tolerance_used


def test_certify_concave_examples():
    assert certify_concave(parse_function("log(x)", Interval.open(0, math.inf)), Interval.closed(0.5, 10)).verdict \
        is Verdict.CERTIFIED_ON_GRID
    assert certify_concave(sq, Interval.closed(-1, 1)).verdict is Verdict.REFUTED
    c = certify_concave(parse_function("7 - x/3"), Interval.closed(-5, 5))
    assert c.verdict is Verdict.CERTIFIED_ON_GRID
    assert abs(c.min_gap) < 1e-12


def test_certify_accepts_plain_callables():
    class Quartic:
        domain = Interval.real_line()

        def __call__(self, x):
            return x**4

    assert certify_convex(Quartic(), Interval.closed(-1, 1), 15).verdict is Verdict.CERTIFIED_ON_GRID
    assert certify_concave(Quartic(), Interval.closed(-1, 1), 15).verdict is Verdict.REFUTED


def test_certify_preconditions():
    with pytest.raises(PreconditionError):
        certify_convex(sq, Interval.real_line())
    with pytest.raises(DomainError):
        certify_convex(parse_function("log(x)", Interval.open(0, math.inf)), Interval.closed(-1, 1))
    with pytest.raises(PreconditionError):
        certify_convex(sq, Interval.closed(0, 1), n_grid=2)


def test_certify_independent_of_triple_order():
    # a brute-force loop over the same grid gives the same minimum and witness
    f = parse_function("sin(3*x) + x^2")
    I = Interval.closed(-1, 1)
    cert = certify_convex(f, I, 17)
    grid = np.linspace(-1, 1, 17)
    best = None
    for i in range(17):
        for j in range(i, 17):
            for k in range(i + 1):
                if i + j - k < 17:
                    g = (f(grid[k]) + f(grid[i + j - k])) - (f(grid[i]) + f(grid[j]))
                    key = (g, grid[i], grid[j], grid[k])
                    best = key if best is None or key < best else best
    assert cert.min_gap == pytest.approx(best[0], abs=1e-15)
    assert cert.witness.triple.as_tuple() == pytest.approx(best[1:], abs=1e-15)


def test_witness_examples():
    w = find_violation_witness(cube, Interval.closed(-1, 1), 10_000, seed=0)
    assert w is not None and w.gap < -1e-3
    assert find_violation_witness(parse_function("exp(x)"), Interval.closed(0, 1), 10_000) is None
    assert find_violation_witness(sq, Interval.closed(-3, 3), 10_000) is None
    assert find_violation_witness(sq, Interval.closed(-3, 3), 0) is None


def test_witness_deterministic():
    f = parse_function("sin(x)")
    I = Interval.closed(0, 2 * math.pi)
    assert find_violation_witness(f, I, 2000, seed=11) == find_violation_witness(f, I, 2000, seed=11)


def test_composition_counterexample():
    # x^2 composed with the convex x^2 + x is not convex
    comp = parse_function("(x^2 + x)^2", Interval.closed(-2, 2))
    w = find_violation_witness(comp, Interval.closed(-2, 2), 10_000)
    assert w is not None
    assert three_point_gap(comp, w.triple) < 0


def test_swap_symmetry_exact():
    rng = np.random.default_rng(5)
    f = parse_function("exp(x) + x^4 - 3*x")
    for a, b, c in rng.uniform(-2, 2, size=(2000, 3)):
        t, s = Triple(a, b, c), Triple(b, a, c)
        if t.is_lower or t.is_upper:
            assert three_point_gap(f, t) == three_point_gap(f, s)


def test_reflection_symmetry():
    rng = np.random.default_rng(6)
    f = parse_function("exp(x) + abs(x - 0.3)")
    g = reflect(f)
    for a, b, c in rng.uniform(-2, 2, size=(2000, 3)):
        c = min(a, b, c)
        lower = three_point_gap(g, Triple(-a, -b, -c))  # UPPER triple for g
        assert lower == pytest.approx(three_point_gap(f, Triple(a, b, c)), abs=1e-12)


def test_middle_role_swap():
    # (a, b, c) outer with c below both: a sits between c and a + b - c, and the
    # middle gap at (c, a + b - c, a) evaluates the same four points
    rng = np.random.default_rng(7)
    f = parse_function("x^4 - x")
    for a, b, c in rng.uniform(-2, 2, size=(2000, 3)):
        c = min(a, b, c)
        outer = three_point_gap(f, Triple(a, b, c))
        swapped = middle_point_gap(f, Triple(c, a + b - c, a))
        assert outer == pytest.approx(swapped, abs=1e-12)


def test_signed_gap_nonnegative_for_convex():
    rng = np.random.default_rng(8)
    for a, b, c in rng.uniform(-5, 5, size=(5000, 3)):
        assert signed_three_point_gap(sq, Triple(a, b, c)) >= -1e-12


def test_vectorized_matches_scalar():
    rng = np.random.default_rng(9)
    a, b, c = rng.uniform(-1, 1, size=(3, 500))
    c = np.minimum(c, np.minimum(a, b))
    f = parse_function("exp(x) * cos(x)")
    gaps, scale = three_point_gaps(f, a, b, c, return_scale=True)
    for k in range(500):
        t = Triple(a[k], b[k], c[k])
        assert gaps[k] == pytest.approx(three_point_gap(f, t), abs=1e-14)
        assert scale[k] == pytest.approx(1 + sum(abs(f(x)) for x in (t.a, t.b, t.c, t.d)))
    with pytest.raises(ClassificationError):
        three_point_gaps(f, [0.0], [2.0], [1.0])


def test_midconvexity_implied_on_certified_grid():
    for text in ["x^2", "exp(x)", "abs(x)", "x^4"]:
        cert = certify_convex(parse_function(text), Interval.closed(-2, 2), 41)
        assert cert.verdict is Verdict.CERTIFIED_ON_GRID
        assert cert.midconvex_min_gap >= -DEFAULT_TOL


def test_check_result_holds_rule():
    assert CheckResult.from_gap(-1e-10, (), 1e-9).holds
    assert not CheckResult.from_gap(-2e-9, (), 1e-9).holds
