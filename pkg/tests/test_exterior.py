from hypothesis import given
from hypothesis import strategies as st

from epwkit import exterior as ext
from epwkit.exterior import Multivector
from epwkit.fields import GF, QQ
from epwkit.linalg import Subspace, rank

from .strategies import fields, nonzero_vectors, matrices


def e(F, *I):
    return Multivector.e(F, *I)


def test_basis_is_lexicographic_and_zero_based():
    assert ext.basis(3)[:3] == ((0, 1, 2), (0, 1, 3), (0, 1, 4))
    assert ext.dim(3) == 20 and ext.dim(2) == 15


def test_wedge_examples():
    F = GF(7)
    assert (e(F, 0, 1) ^ e(F, 2, 3)) == e(F, 0, 1, 2, 3)
    assert (e(F, 0) ^ e(F, 0, 1)).is_zero()
    top = e(F, 0, 1, 2) ^ e(F, 3, 4, 5)
    assert top.coeffs == (1,)
    assert (e(F, 1, 0) + e(F, 0, 1)).is_zero()


def test_symplectic_pairing_example_and_gram_rank():
    for F in (GF(7), QQ):
        a, b = e(F, 0, 1, 2).coeffs, e(F, 3, 4, 5).coeffs
        assert ext.symplectic_pairing(a, b, F) == F.one
        assert ext.symplectic_pairing(b, a, F) == F.neg(F.one)
        assert rank(F, ext.omega_gram(F)) == 20


def test_wedge_image_of_a_vector_is_lagrangian():
    F = GF(7)
    Fe0 = ext.wedge_map_image(F, [1, 0, 0, 0, 0, 0])
    assert Fe0.dim == 10
    assert ext.is_isotropic(F, Fe0.rows())
    assert all(Fe0.contains(e(F, *I).coeffs) for I in ext.basis(3) if 0 in I)


def test_hyperplane_gives_cube_of_remaining_coordinates():
    F = GF(7)
    S = ext.wedge3_of_hyperplane(F, [1, 0, 0, 0, 0, 0])
    expected = Subspace.span(F, [e(F, *I).coeffs for I in ext.basis(3) if 0 not in I], 20)
    assert S == expected and S.dim == 10


def test_decomposability_examples():
    F = GF(7)
    ok, K = ext.is_decomposable(F, e(F, 0, 1, 2).coeffs)
    assert ok and K == Subspace.span(F, [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]], 6)
    ok, _ = ext.is_decomposable(F, (e(F, 0, 1, 2) + e(F, 0, 3, 4)).coeffs)
    assert not ok
    ok, _ = ext.is_decomposable(F, (e(F, 0, 1, 2) + e(F, 3, 4, 5)).coeffs)
    assert not ok


@given(st.data())
def test_wedge_images_of_two_vectors_meet_in_dimension_four(data):
    F = data.draw(fields)
    v, w = data.draw(nonzero_vectors(F, 6)), data.draw(nonzero_vectors(F, 6))
    if rank(F, [v, w]) < 2:
        return
    Fv, Fw = ext.wedge_map_image(F, v), ext.wedge_map_image(F, w)
    assert Fv.dim == 10 and ext.is_isotropic(F, Fv.rows())
    assert Fv.intersect(Fw).dim == 4


@given(st.data())
def test_decomposability_is_invariant_under_change_of_basis(data):
    F = data.draw(fields)
    P = data.draw(matrices(F, 6, 6))
    if rank(F, P) < 6:
        return
    us, ws = data.draw(matrices(F, 3, 6)), data.draw(matrices(F, 3, 6))

    def act(v):
        return [F.dot(v, [P[i][j] for i in range(6)]) for j in range(6)]

    def trivector(a, b):
        return [F.add(x, y) for x, y in zip(ext.wedge_many(F, a), ext.wedge_many(F, b))]

    omega = trivector(us, ws)
    if all(F.is_zero(x) for x in omega):
        return
    before, _ = ext.is_decomposable(F, omega)
    after, _ = ext.is_decomposable(F, trivector([act(u) for u in us], [act(w) for w in ws]))
    assert before == after


@given(st.data())
def test_wedge_is_graded_commutative(data):
    F = data.draw(fields)
    a = data.draw(st.lists(st.sampled_from([F.zero, F.one]), min_size=15, max_size=15))
    b = data.draw(nonzero_vectors(F, 6))
    ab = ext.wedge_coeffs(F, a, 2, b, 1)
    assert ab == ext.wedge_coeffs(F, b, 1, a, 2)
