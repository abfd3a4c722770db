import math

import numpy as np
import pytest

from convexcert.convexity import Triple, three_point_gap
from convexcert.errors import BadP, DegenerateSegment, PreconditionError
from convexcert.fnspec import parse_function
from convexcert.normed import (
    aligned_gaps_batch,
    aligned_triple,
    as_vec,
    check_aligned_inequality,
    check_equal_norm_shift,
    detect_alignment,
    p_norm,
    p_norm_batch,
    refined_gaps_batch,
    refined_reverse_triangle,
)

P_VALUES = [1, 1.5, 2, 3, math.inf]


def test_p_norm_examples():
    assert p_norm((3, 4), 2) == 5
    assert p_norm((3, 4), math.inf) == 4
    assert p_norm((1, 1, 1), 1) == 3
    assert p_norm((1, -2), 3) == pytest.approx(9 ** (1 / 3), abs=1e-15)
    with pytest.raises(BadP):
        p_norm((1, 2), 0.5)


def test_p_norm_batch_matches_numpy():
    rng = np.random.default_rng(0)
    V = rng.normal(size=(50, 4))
    for p in P_VALUES:
        expected = np.linalg.norm(V, ord=p, axis=1)
        assert np.allclose(p_norm_batch(V, p), expected, rtol=1e-14)


def test_as_vec():
    assert np.array_equal(as_vec("1, -2.5,3"), [1, -2.5, 3])
    with pytest.raises(ValueError):
        as_vec([1, math.nan])
    with pytest.raises(ValueError):
        as_vec([])


def test_detect_alignment_examples():
    assert detect_alignment((0, 0), (2, 0), (5, 0)) == 2.5
    assert detect_alignment((0, 0), (1, 1), (0, 1)) is None
    assert detect_alignment((1, 2), (3, 6), (-1, -2)) == -1
    with pytest.raises(DegenerateSegment):
        detect_alignment((1, 1), (1, 1), (1, 1))


def test_aligned_triple_degenerate_convention():
    t = aligned_triple((1, 1), (1, 1), (1, 1))
    assert t.lam0 == 0 and not t.outside
    with pytest.raises(PreconditionError):
        aligned_triple((1, 1), (1, 1), (2, 1))


def test_aligned_inequality_examples():
    t = aligned_triple((1, 0), (3, 0), (5, 0))
    assert check_aligned_inequality(t, 2).gap == 2
    t = aligned_triple((1, 1), (3, 3), (5, 5))
    assert check_aligned_inequality(t, 1).gap == 4
    with pytest.raises(PreconditionError):
        check_aligned_inequality(aligned_triple((1, 1), (1, 1), (1, 1)), 2)


def test_refined_reverse_triangle_examples():
    r = refined_reverse_triangle(aligned_triple((1, 0), (3, 0), (5, 0)), 2)
    assert r.gap == 0 and r.holds
    r = refined_reverse_triangle(aligned_triple((0, 1), (0, 2), (0, -1)), 2)
    assert r.gap == 2
    assert r.refined_bound == 2
    assert r.classical_bound == 2
    with pytest.raises(PreconditionError):
        refined_reverse_triangle(aligned_triple((0, 0), (4, 0), (1, 0)), 2)


def test_equal_norm_shift_examples():
    r = check_equal_norm_shift((1, 0), (0, 1), 0.5, 2)
    assert r.gap == pytest.approx(math.sqrt(2.5) - math.sqrt(0.5), abs=1e-15)
    assert r.gap == pytest.approx(0.8740, abs=1e-4)
    assert check_equal_norm_shift((1, 0), (0, 1), 0.0, 2).gap == 0
    for lam in np.linspace(0, 1, 5):
        assert check_equal_norm_shift((2, -1), (2, -1), lam, 3).gap == 0
    with pytest.raises(PreconditionError):
        check_equal_norm_shift((1, 0), (0, 2), 0.5, 2)


def _random_aligned(rng, n_triples, dim):
    A = rng.uniform(-5, 5, size=(n_triples, dim))
    B = rng.uniform(-5, 5, size=(n_triples, dim))
    mu = rng.uniform(1, 4, size=n_triples) * rng.choice([-1.0, 1.0], size=n_triples)
    mu = np.where(mu > 0, mu, mu + 1)  # mu in (1, 4) or (-3, 0)
    C = A + mu[:, None] * (B - A)
    return A, B, C


@pytest.mark.parametrize("p", P_VALUES)
def test_scalar_and_batch_agree(p):
    rng = np.random.default_rng(1)
    A, B, C = _random_aligned(rng, 200, 3)
    ag, _ = aligned_gaps_batch(A, B, C, p)
    rg, _ = refined_gaps_batch(A, B, C, p)
    for k in range(200):
        t = aligned_triple(A[k], B[k], C[k])
        assert t.outside
        assert check_aligned_inequality(t, p).gap == pytest.approx(ag[k], abs=1e-12)
        r = refined_reverse_triangle(t, p)
        assert r.gap == pytest.approx(rg[k], abs=1e-12)
        nd = p_norm(A[k] + B[k] - C[k], p)
        # the aligned bound and the classical one both hold; neither dominates in general
        assert nd >= r.refined_bound - 1e-9 * (1 + nd)
        assert nd >= r.classical_bound - 1e-9 * (1 + nd)


def test_one_dimensional_reduction():
    rng = np.random.default_rng(2)
    ab = parse_function("abs(x)")
    for _ in range(2000):
        a, b = rng.uniform(-10, 10, size=2)
        lam0 = rng.choice([rng.uniform(-3, 0), rng.uniform(1, 4)])
        c = a + lam0 * (b - a)
        t = aligned_triple([a], [b], [c])
        g = check_aligned_inequality(t, 2).gap
        assert g == pytest.approx(three_point_gap(ab, Triple(a, b, c)), abs=1e-12)


def test_scaling_covariance():
    rng = np.random.default_rng(3)
    A, B, C = _random_aligned(rng, 100, 4)
    for p in P_VALUES:
        base, _ = aligned_gaps_batch(A, B, C, p)
        for s in (0.25, 3.0, 17.0):
            scaled, _ = aligned_gaps_batch(s * A, s * B, s * C, p)
            assert np.allclose(scaled, s * base, rtol=1e-12, atol=1e-12 * s * 30)


def test_reciprocal_instantiation():
    # equal endpoints c/2, c/2 and third point a + b: gives ||c|| <= ||a + b|| + ||c - a - b||
    rng = np.random.default_rng(4)
    A, B, C = (rng.uniform(-3, 3, size=(500, 3)) for _ in range(3))
    for p in P_VALUES:
        gaps, scale = aligned_gaps_batch(C / 2, C / 2, A + B, p)
        assert np.all(gaps >= -1e-9 * scale)
