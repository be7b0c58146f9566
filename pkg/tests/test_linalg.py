from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from epwkit.fields import GF, QQ
from epwkit.linalg import (
    QuadraticForm,
    Subspace,
    corank_reduce,
    det,
    kernel,
    matmul,
    rank,
    rref,
    transpose,
)

from .strategies import fields, matrices


def test_rref_rank_one_over_rationals():
    R, piv = rref(QQ, [[1, 2], [2, 4]])
    assert R == [[Fraction(1), Fraction(2)]] and piv == (0,)


def test_rank_matches_minor_expansion():
    F = GF(7)
    M = [[1, 2, 3, 4], [2, 3, 4, 5], [3, 4, 5, 6], [1, 0, 0, 1]]
    # 4x4 minor by Leibniz expansion as an independent oracle
    from itertools import permutations

    def sign(p):
        s = 1
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                if p[i] > p[j]:
                    s = -s
        return s

    leibniz = sum(sign(p) * M[0][p[0]] * M[1][p[1]] * M[2][p[2]] * M[3][p[3]] for p in permutations(range(4))) % 7
    assert det(F, M) == leibniz
    assert rank(F, M) == (4 if leibniz else 3)


def test_kernels_of_identity_and_zero():
    F = GF(7)
    assert kernel(F, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]).dim == 0
    assert kernel(F, [[0, 0, 0]], 3).dim == 3


def test_odd_skew_form_is_degenerate():
    F = GF(7)
    S = [[0, 1, 2, 3, 4], [6, 0, 5, 1, 2], [5, 2, 0, 3, 1], [4, 6, 4, 0, 6], [3, 5, 6, 1, 0]]
    K = kernel(F, S)
    assert K.dim >= 1
    assert all(x == 0 for x in matmul(F, K.rows(), transpose(S))[0])


def test_corank_reduce_splits_off_the_kernel():
    F = GF(7)
    q = QuadraticForm.from_rows(F, [[1, 0, 0], [0, 0, 0], [0, 0, 2]])
    K, R, comp = corank_reduce(q)
    assert q.corank == 1 and K.dim == 1 and R.corank == 0 and R.dim == 2
    assert K.contains([0, 1, 0])


@given(st.data())
def test_rref_is_idempotent_and_canonical(data):
    F = data.draw(fields)
    M = data.draw(matrices(F, 4, 6))
    R, piv = rref(F, M, 6)
    assert rref(F, R, 6) == (R, piv) if R else True
    assert Subspace.span(F, M, 6) == Subspace.span(F, list(reversed(M)), 6)


@given(st.data())
def test_rank_nullity(data):
    F = data.draw(fields)
    M = data.draw(matrices(F, 3, 5))
    assert rank(F, M) + kernel(F, M, 5).dim == 5


@given(st.data())
def test_modular_law_for_dimensions(data):
    F = data.draw(fields)
    U = Subspace.span(F, data.draw(matrices(F, 3, 6)), 6)
    W = Subspace.span(F, data.draw(matrices(F, 3, 6)), 6)
    assert U.sum(W).dim + U.intersect(W).dim == U.dim + W.dim
    assert U.intersect(W).is_subspace_of(U) and U.intersect(W).is_subspace_of(W)
    assert U.annihilator().dim == 6 - U.dim


@given(st.data())
def test_corank_is_a_congruence_invariant(data):
    F = data.draw(fields)
    A = data.draw(matrices(F, 4, 4))
    gram = [[F.add(A[i][j], A[j][i]) for j in range(4)] for i in range(4)]
    q = QuadraticForm.from_rows(F, gram)
    P = data.draw(matrices(F, 4, 4))
    if rank(F, P) < 4:
        return
    assert q.congruent(P).corank == q.corank
