from fractions import Fraction
from itertools import accumulate

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epwkit import exterior as ext
from epwkit.fields import GF
from epwkit.gm import (
    GMError,
    build_gm,
    grassmannian_count,
    hilbert_polynomial,
    plucker_gram_full,
    plucker_quadric,
    quadric_at,
    sample_points,
)
from epwkit.ideals import HomogeneousIdeal
from epwkit.lagrangian import random_instance
from epwkit.linalg import QuadraticForm
from epwkit.scenarios import dual_points_with_stratum


def bivector(pairs):
    b = ext.basis(2, 5)
    w = [0] * 10
    for I in pairs:
        w[b.index(I)] = 1
    return w


def test_plucker_form_example():
    F = GF(7)
    q = QuadraticForm.from_rows(F, plucker_gram_full(F, [1, 0, 0, 0, 0]))
    w = bivector([(1, 2), (3, 4)])
    assert q.bilinear(w, w) == 2
    # the kernel is u1 ^ V5
    assert q.kernel() == ext.Subspace.span(F, [bivector([(0, j)]) for j in range(1, 5)], 10)
    assert q.corank == 4


def test_dimension_of_W_follows_the_dual_stratum():
    F = GF(11)
    A = random_instance(0, F)
    g0 = build_gm(A, dual_points_with_stratum(A, 0, limit=1)[0])
    g2 = build_gm(A, dual_points_with_stratum(A, 2, limit=1)[0])
    assert (g0.ell, g0.dim_W, g0.n) == (0, 10, 5)
    assert (g2.ell, g2.dim_W, g2.n) == (2, 8, 3)


@pytest.fixture(scope="module")
def gm11():
    A = random_instance(0, GF(11))
    return build_gm(A, dual_points_with_stratum(A, 0, limit=1)[0])


def test_quadric_family_is_homogeneous_of_degree_one(gm11):
    F = gm11.field
    for lam in (2, 3, 10):
        lv0 = [F.mul(lam, x) for x in gm11.v0]
        assert quadric_at(gm11, lv0).gram == quadric_at(gm11, gm11.v0).scale(lam).gram


@settings(max_examples=30)
@given(st.lists(st.integers(0, 10), min_size=5, max_size=5), st.integers(1, 10))
def test_quadric_family_is_affine_linear(gm11, mu, lam):
    F = gm11.field
    u = gm11.from_v5(mu)
    v = [F.add(F.mul(lam, a), b) for a, b in zip(gm11.v0, u)]
    expected = quadric_at(gm11, gm11.v0).scale(lam)
    if any(mu):
        expected = expected + plucker_quadric(gm11, u)
    assert quadric_at(gm11, v).gram == expected.gram


def test_grassmannian_point_count():
    assert grassmannian_count(3) == 1210
    assert grassmannian_count(5) == (5**5 - 1) * (5**4 - 1) // ((5**2 - 1) * (5 - 1))


def test_sampled_points_lie_on_X():
    F = GF(5)
    A = random_instance(0, F)
    gm = build_gm(A, dual_points_with_stratum(A, 0, limit=1)[0])
    pts, scanned = sample_points(gm)
    assert scanned == grassmannian_count(5) and pts
    for p in pts[:50]:
        x = list(p.w_coords)
        assert all(q.bilinear(x, x) == 0 for q in gm.family())
        assert gm.W.contains(list(p.plucker))
        assert p.plucker == tuple(ext.wedge_many(F, [list(r) for r in p.plane], 5))


def test_hilbert_tables_of_linear_sections():
    assert hilbert_polynomial(11, 0, 5).table == (1, 5, 10, 15, 20, 25)
    assert hilbert_polynomial(10, 0, 5).table == (1, 6, 16, 31, 51, 76)


def test_hilbert_polynomial_of_the_threefold():
    H = hilbert_polynomial(8, 1)
    assert H.coefficients == (Fraction(1), Fraction(17, 6), Fraction(5, 2), Fraction(5, 3))
    assert (H.dimension, H.degree, H.ambient_dim) == (3, 10, 7)
    assert all(H(t) == H.table[t] for t in range(3, 7))


def test_cone_table_matches_the_plucker_ideal():
    F = GF(7)
    gens = [plucker_gram_full(F, [int(i == j) for j in range(5)]) for i in range(5)]
    gr = HomogeneousIdeal.from_forms(F, 10, quadrics=gens).hilbert_function(3)
    assert gr == [1, 10, 50, 175]
    # the cone adds one variable: partial sums
    assert list(hilbert_polynomial(5, 0, 3).table) == list(accumulate(gr))


def test_impossible_sections_rejected():
    with pytest.raises(GMError):
        hilbert_polynomial(15, 1)
