from math import comb

import pytest

from epwkit.fields import GF, QQ
from epwkit.ideals import (
    HomogeneousIdeal,
    SizeBoundExceeded,
    hilbert_function_of_ideal,
    linear_ideal,
    monomials,
    poly_mul,
    segre_ideal,
)


def test_monomial_counts():
    for n, t in ((3, 2), (5, 4), (10, 3)):
        assert len(monomials(n, t)) == comb(n + t - 1, t)


def test_zero_ideal_counts_all_monomials():
    I = HomogeneousIdeal(GF(7), 4, ())
    assert I.hilbert_function(4) == [comb(t + 3, 3) for t in range(5)]


def test_ideal_of_a_line_in_p3():
    F = GF(7)
    I = linear_ideal(F, 4, [[1, 0, 0, 0], [0, 1, 1, 1]])
    assert I.hilbert_function(5) == [t + 1 for t in range(6)]
    assert I.vanishes_on([[1, 1, 1, 1], [0, 2, 2, 2]])
    assert not I.vanishes_on([[0, 0, 1, 0]])


@pytest.mark.parametrize("F", [GF(7), GF(11), QQ])
def test_segre_threefold_table(F):
    # P^1 x P^2: h(t) = (t + 1)(t + 2)(t + 1) / 2
    assert segre_ideal(F).hilbert_function(4) == [(t + 1) * (t + 1) * (t + 2) // 2 for t in range(5)]


def test_plane_conic_table():
    F = GF(5)
    conic = {(2, 0, 0): 1, (0, 1, 1): F.neg(1)}  # x^2 - y z
    I = HomogeneousIdeal(F, 3, (conic,))
    assert I.hilbert_function(5) == [1] + [2 * t + 1 for t in range(1, 6)]


def test_sum_intersection_and_colon():
    F = GF(7)
    # two skew lines in P^3
    L1 = linear_ideal(F, 4, [[1, 0, 0, 0], [0, 1, 0, 0]]).truncate(4)
    L2 = linear_ideal(F, 4, [[0, 0, 1, 0], [0, 0, 0, 1]]).truncate(4)
    union = L1 & L2
    assert union.hilbert_function() == [1, 4, 6, 8, 10]
    assert (L1 + L2).hilbert_function() == [1, 0, 0, 0, 0]
    assert union.vanishes_on([[1, 0, 0, 0], [0, 1, 0, 0]])
    # x_0 vanishes on the second line, so (I_union : x_0) is the ideal of the first
    back = union.colon_linear([[1, 0, 0, 0]])
    assert back.t_max == 3 and back.equals(L1, t_max=3)
    assert L1.contains(union) and not union.contains(L1)


def test_poly_mul_expands():
    F = GF(7)
    f = {(1, 0): 1, (0, 1): 1}
    assert poly_mul(F, f, f) == {(2, 0): 1, (1, 1): 2, (0, 2): 1}


def test_size_bounds_are_enforced():
    I = HomogeneousIdeal(GF(7), 11, ())
    with pytest.raises(SizeBoundExceeded):
        hilbert_function_of_ideal(I, 2)
    with pytest.raises(SizeBoundExceeded):
        HomogeneousIdeal(GF(7), 3, ()).piece(8)
    with pytest.raises(SizeBoundExceeded):
        hilbert_function_of_ideal(HomogeneousIdeal(GF(7), 3, ()), 7)
