"""Exterior algebra of a fixed 6-dimensional space V6.

Basis of the degree-k piece: strictly increasing index tuples of ``range(6)``
in lexicographic order, so the dimensions are 6, 15, 20, 15, 6, 1. Signs of
products come from counting inversions. The volume form sends
``e_0 ^ e_1 ^ ... ^ e_5`` to 1.

The same combinatorics serves the dual space: a functional on the degree-k
piece is written in the dual basis ``e*_I`` with ``e*_I(e_J) = [I == J]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from .fields import Field
from .linalg import Subspace, kernel, matmul, transpose

N = 6


class ExteriorError(ValueError):
    pass


@lru_cache(maxsize=None)
def basis(k: int, n: int = N) -> tuple:
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def index(k: int, n: int = N) -> dict:
    return {I: i for i, I in enumerate(basis(k, n))}


def dim(k: int, n: int = N) -> int:
    return len(basis(k, n))


def _merge_sign(I, J):
    """Sign and sorted union of ``e_I ^ e_J``; ``(0, None)`` if they overlap."""
    if set(I) & set(J):
        return 0, None
    inv = sum(1 for i in I for j in J if i > j)
    return (-1 if inv % 2 else 1), tuple(sorted(I + J))


@lru_cache(maxsize=None)
def wedge_table(k: int, l: int, n: int = N) -> tuple:
    """Nonzero structure constants ``(i, j, out, sign)`` of the product."""
    if k + l > n:
        raise ExteriorError(f"degree overflow: {k} + {l} > {n}")
    out_idx = index(k + l, n)
    table = []
    for i, I in enumerate(basis(k, n)):
        for j, J in enumerate(basis(l, n)):
            s, U = _merge_sign(I, J)
            if s:
                table.append((i, j, out_idx[U], s))
    return tuple(table)


@lru_cache(maxsize=None)
def wedge_tensor(k: int, l: int, n: int = N) -> np.ndarray:
    """Dense int64 structure tensor ``T[i, j, out]`` with entries in {-1, 0, 1}."""
    T = np.zeros((dim(k, n), dim(l, n), dim(k + l, n)), dtype=np.int64)
    for i, j, o, s in wedge_table(k, l, n):
        T[i, j, o] = s
    T.setflags(write=False)
    return T


def wedge_coeffs(field: Field, a: Sequence, k: int, b: Sequence, l: int, n: int = N) -> list:
    out = [field.zero] * dim(k + l, n)
    F = field
    for i, j, o, s in wedge_table(k, l, n):
        x, y = a[i], b[j]
        if F.is_zero(x) or F.is_zero(y):
            continue
        t = F.mul(x, y)
        out[o] = F.add(out[o], t) if s > 0 else F.sub(out[o], t)
    return out


def wedge_many(field: Field, vectors: Sequence[Sequence], n: int = N) -> list:
    """``v_1 ^ ... ^ v_k`` for degree-one vectors, as a degree-k coefficient list."""
    if not vectors:
        return [field.one]
    acc, deg = list(vectors[0]), 1
    for v in vectors[1:]:
        acc = wedge_coeffs(field, acc, deg, v, 1, n)
        deg += 1
    return acc


def unit(field: Field, I: tuple, n: int = N) -> list:
    k = len(I)
    v = [field.zero] * dim(k, n)
    if len(set(I)) != len(I):
        raise ExteriorError(f"repeated index in {I}")
    srt = tuple(sorted(I))
    # sign of the permutation sorting I
    inv = sum(1 for a in range(k) for b in range(a + 1, k) if I[a] > I[b])
    v[index(k, n)[srt]] = field.one if inv % 2 == 0 else field.neg(field.one)
    return v


@dataclass(frozen=True)
class Multivector:
    """Element of the degree-``degree`` piece, coefficients in lexicographic basis order."""

    field: Field
    degree: int
    coeffs: tuple

    def __post_init__(self):
        if not 0 <= self.degree <= N:
            raise ExteriorError(f"degree {self.degree} out of range")
        if len(self.coeffs) != dim(self.degree):
            raise ExteriorError(
                f"degree {self.degree} needs {dim(self.degree)} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def of(cls, field: Field, coeffs, degree: int) -> "Multivector":
        return cls(field, degree, tuple(field.coerce(x) for x in coeffs))

    @classmethod
    def e(cls, field: Field, *I: int) -> "Multivector":
        """Basis element ``e_I`` (indices 0-based, any order, sign applied)."""
        return cls(field, len(I), tuple(unit(field, tuple(I))))

    def __xor__(self, other: "Multivector") -> "Multivector":
        return wedge(self, other)

    def __add__(self, other: "Multivector") -> "Multivector":
        F = self.field
        return Multivector(F, self.degree, tuple(F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Multivector") -> "Multivector":
        F = self.field
        return Multivector(F, self.degree, tuple(F.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "Multivector":
        F = self.field
        return Multivector(F, self.degree, tuple(F.mul(c, a) for a in self.coeffs))

    def is_zero(self) -> bool:
        return all(self.field.is_zero(a) for a in self.coeffs)

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": [self.field.format(a) for a in self.coeffs]}

    @classmethod
    def from_json(cls, field: Field, data: dict) -> "Multivector":
        return cls(field, int(data["degree"]), tuple(field.parse(s) for s in data["coeffs"]))


def wedge(a: Multivector, b: Multivector) -> Multivector:
    if a.degree + b.degree > N:
        raise ExteriorError(f"degree overflow: {a.degree} + {b.degree} > {N}")
    F = a.field
    return Multivector(F, a.degree + b.degree, tuple(wedge_coeffs(F, a.coeffs, a.degree, b.coeffs, b.degree)))


@lru_cache(maxsize=None)
def _omega_int() -> tuple:
    """Gram matrix of the pairing on the degree-3 piece, integer entries."""
    G = [[0] * 20 for _ in range(20)]
    for i, j, _o, s in wedge_table(3, 3):
        G[i][j] = s
    return tuple(tuple(r) for r in G)


def omega_gram(field: Field) -> list:
    return [[field.coerce(x) for x in r] for r in _omega_int()]


def omega_array() -> np.ndarray:
    return np.array(_omega_int(), dtype=np.int64)


def symplectic_pairing(a, b, field: Field | None = None):
    """``vol(a ^ b)`` for two degree-3 elements (Multivectors or coefficient lists)."""
    if isinstance(a, Multivector):
        if a.degree != 3 or b.degree != 3:
            raise ExteriorError("symplectic pairing needs two degree-3 elements")
        field, a, b = a.field, a.coeffs, b.coeffs
    F = field
    acc = F.zero
    for i, j, _o, s in wedge_table(3, 3):
        x, y = a[i], b[j]
        if F.is_zero(x) or F.is_zero(y):
            continue
        t = F.mul(x, y)
        acc = F.add(acc, t) if s > 0 else F.sub(acc, t)
    return acc


def pairing_matrix(field: Field, rows_a, rows_b) -> list:
    """``[omega(a_i, b_j)]`` for two lists of degree-3 coefficient vectors."""
    if not rows_a or not rows_b:
        return [[] for _ in rows_a]
    return matmul(field, matmul(field, [list(r) for r in rows_a], omega_gram(field)), transpose(rows_b))


def is_isotropic(field: Field, rows) -> bool:
    G = pairing_matrix(field, rows, rows)
    return all(field.is_zero(x) for r in G for x in r)


def _vec(field: Field, v, k: int = 1) -> list:
    if isinstance(v, Multivector):
        if v.degree != k:
            raise ExteriorError(f"expected degree {k}, got {v.degree}")
        return list(v.coeffs)
    v = [field.coerce(x) for x in v]
    if len(v) != dim(k):
        raise ExteriorError(f"expected {dim(k)} coefficients, got {len(v)}")
    return v


def wedge_map_matrix(field: Field, v) -> list:
    """Rows ``v ^ f_j`` for the 15 basis bivectors ``f_j`` (a 15 x 20 matrix)."""
    v = _vec(field, v)
    out = []
    for J in basis(2):
        out.append(wedge_coeffs(field, v, 1, unit(field, J), 2))
    return out


def wedge_map_image(field: Field, v) -> Subspace:
    """``F_v = v ^ (degree-2 piece)``, a 10-dimensional Lagrangian subspace."""
    v = _vec(field, v)
    if all(field.is_zero(x) for x in v):
        raise ExteriorError("wedge_map_image needs a nonzero vector")
    return Subspace.span(field, wedge_map_matrix(field, v), 20)


def hyperplane_basis(field: Field, phi) -> list:
    """RREF basis of ``ker(phi)`` in V6 (5 vectors)."""
    phi = _vec(field, phi)
    if all(field.is_zero(x) for x in phi):
        raise ExteriorError("zero functional")
    return kernel(field, [phi], N).rows()


def wedge3_of_hyperplane(field: Field, phi) -> Subspace:
    """``wedge^3 (ker phi)``, a 10-dimensional Lagrangian subspace."""
    U = hyperplane_basis(field, phi)
    rows = [wedge_many(field, [U[a], U[b], U[c]]) for a, b, c in combinations(range(5), 3)]
    return Subspace.span(field, rows, 20)


def contraction_matrix(field: Field, omega) -> list:
    """Matrix (15 x 6) of ``x -> x ^ omega`` from V6 to the degree-4 piece."""
    omega = _vec(field, omega, 3)
    cols = [wedge_coeffs(field, unit(field, (i,)), 1, omega, 3) for i in range(N)]
    return transpose(cols)


def is_decomposable(field: Field, omega) -> tuple[bool, Subspace]:
    """Decomposability of a degree-3 element, with the kernel of ``x -> x ^ omega``.

    The kernel has dimension 3 exactly when ``omega`` is a product of three
    vectors, and then it is the 3-space they span.
    """
    omega = _vec(field, omega, 3)
    if all(field.is_zero(x) for x in omega):
        raise ExteriorError("is_decomposable needs a nonzero element")
    K = kernel(field, contraction_matrix(field, omega), N)
    return K.dim == 3, K


@lru_cache(maxsize=None)
def contraction_tensor() -> np.ndarray:
    """``D[I, r, i]``: coefficient of row ``r`` (degree 4) of ``e_i ^ e_I`` (``I`` degree 3)."""
    T = wedge_tensor(1, 3)  # (6, 20, 15)
    D = np.ascontiguousarray(np.transpose(T, (1, 2, 0)))
    D.setflags(write=False)
    return D


def plucker(field: Field, rows) -> list:
    """Plücker coordinates (maximal minors in lex order) of a k x n matrix."""
    k = len(rows)
    n = len(rows[0])
    return wedge_many(field, rows, n) if k else [field.one]


def dual_pairing_identity(field: Field, rows) -> list:
    """Images of degree-3 vectors under ``a -> omega(a, .)``, in dual coordinates."""
    return matmul(field, [list(r) for r in rows], omega_gram(field))
