"""Dense exact linear algebra over a :class:`~epwkit.fields.Field`.

Matrices are lists of rows. Vectors are row vectors; subspaces are spans of
rows. Over prime fields the elimination runs in the mod-p kernel
(:mod:`epwkit.kernels`); every other field uses the generic routine here.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .fields import Field


class DimensionError(ValueError):
    """Ambient dimensions or shapes do not match."""


def _is_fast(field: Field) -> bool:
    return field.kind == "prime" and field.p < 3_000_000_000


def rref(field: Field, rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` keeps only the nonzero rows, so
    ``len(R) == len(pivots)`` is the rank.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], ()
    if _is_fast(field):
        R, piv = kernels.rref_mod_p(np.array(rows, dtype=np.int64), field.p)
        return [[int(x) for x in R[i]] for i in range(len(piv))], piv
    return _rref_generic(field, [[field.coerce(x) for x in r] for r in rows])


def _rref_generic(field: Field, M):
    F = field
    nrows, ncols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if not F.is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        s = F.inv(M[r][c])
        M[r] = [F.mul(s, x) for x in M[r]]
        pr = M[r]
        for i in range(nrows):
            if i != r and not F.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], pr)]
        pivots.append(c)
        r += 1
    return M[:r], tuple(pivots)


def rank(field: Field, rows) -> int:
    rows = list(rows)
    if not rows:
        return 0
    if _is_fast(field):
        return kernels.rank_mod_p(np.array(rows, dtype=np.int64), field.p)
    return len(rref(field, rows)[1])


def transpose(M):
    return [list(c) for c in zip(*M)]


def matmul(field: Field, A, B):
    if not A:
        return []
    if len(A[0]) != len(B):
        raise DimensionError(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x?")
    if _is_fast(field) and B:
        p = field.p
        if p < 2**26:
            C = (np.array(A, dtype=np.int64) @ np.array(B, dtype=np.int64)) % p
            return C.tolist()
    Bt = transpose(B)
    return [[field.dot(row, col) for col in Bt] for row in A]


def matvec(field: Field, A, x):
    return [field.dot(row, x) for row in A]


def vecmat(field: Field, x, A):
    return matmul(field, [list(x)], A)[0]


def identity(field: Field, n: int):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def zeros(field: Field, r: int, c: int):
    return [[field.zero] * c for _ in range(r)]


def inverse(field: Field, M):
    n = len(M)
    aug = [list(M[i]) + identity(field, n)[i] for i in range(n)]
    R, piv = rref(field, aug)
    if piv[:n] != tuple(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def nullspace(field: Field, rows, ncols: int):
    """Basis (as rows) of ``{x : M x = 0}`` for an ``r x ncols`` matrix ``M``."""
    if not rows:
        return identity(field, ncols)
    R, piv = rref(field, rows)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for i, pc in enumerate(piv):
            x[pc] = field.neg(R[i][f])
        basis.append(x)
    return basis


def left_nullspace(field: Field, rows):
    """Basis of ``{c : c M = 0}`` (linear relations among the rows)."""
    if not rows:
        return []
    return nullspace(field, transpose(rows), len(rows))


def solve_combination(field: Field, rows, target):
    """Coefficients ``c`` with ``sum c_i rows_i == target``; ``None`` if impossible."""
    n = len(rows)
    aug = [list(col) + [t] for col, t in zip(transpose(rows), target)] if rows else None
    if aug is None:
        return [] if all(field.is_zero(t) for t in target) else None
    R, piv = rref(field, aug)
    if n in piv:
        return None
    c = [field.zero] * n
    for i, pc in enumerate(piv):
        c[pc] = R[i][n]
    return c


@dataclass(frozen=True, eq=False)
class Subspace:
    """Row span inside ``field**ambient``, stored as its unique RREF basis."""

    field: Field
    ambient: int
    basis: tuple  # tuple of tuples, RREF
    pivots: tuple

    @classmethod
    def span(cls, field: Field, vectors, ambient: int | None = None) -> "Subspace":
        vectors = [list(v) for v in vectors]
        if ambient is None:
            if not vectors:
                raise DimensionError("ambient dimension needed for an empty span")
            ambient = len(vectors[0])
        if any(len(v) != ambient for v in vectors):
            raise DimensionError("vector length differs from ambient dimension")
        R, piv = rref(field, vectors) if vectors else ([], ())
        return cls(field, ambient, tuple(tuple(r) for r in R), tuple(piv))

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, (), ())

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls.span(field, identity(field, ambient), ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, field={self.field.spec()})"

    def _check(self, other: "Subspace") -> None:
        if self.ambient != other.ambient or self.field != other.field:
            raise DimensionError(
                f"ambient mismatch: {self.ambient} over {self.field.spec()} vs "
                f"{other.ambient} over {other.field.spec()}"
            )

    def contains(self, v) -> bool:
        return self.coordinates(v) is not None

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coordinates(self, v):
        """Coordinates of ``v`` in the RREF basis, or ``None`` if ``v`` is outside."""
        F = self.field
        v = list(v)
        c = [v[p] for p in self.pivots]
        recon = [F.zero] * self.ambient
        for ci, row in zip(c, self.basis):
            if not F.is_zero(ci):
                recon = [F.add(x, F.mul(ci, y)) for x, y in zip(recon, row)]
        return c if recon == [F.coerce(x) for x in v] else None

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, list(self.basis) + list(other.basis), self.ambient)

    __add__ = sum

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        F = self.field
        rows = [list(b) for b in self.basis] + [[F.neg(x) for x in b] for b in other.basis]
        rel = left_nullspace(F, rows)
        vecs = matmul(F, [r[: self.dim] for r in rel], [list(b) for b in self.basis]) if rel else []
        return Subspace.span(F, vecs, self.ambient) if vecs else Subspace.zero(F, self.ambient)

    __and__ = intersect

    def annihilator(self) -> "Subspace":
        """Functionals vanishing on the subspace, in the dual coordinates."""
        if self.dim == 0:
            return Subspace.full(self.field, self.ambient)
        return Subspace.span(self.field, nullspace(self.field, self.basis, self.ambient), self.ambient)

    def rows(self):
        return [list(b) for b in self.basis]

    def complement_basis(self):
        """Standard basis vectors spanning a complement (the non-pivot coordinates)."""
        F = self.field
        out = []
        for j in range(self.ambient):
            if j not in self.pivots:
                e = [F.zero] * self.ambient
                e[j] = F.one
                out.append(e)
        return out


def intersect(u: Subspace, v: Subspace) -> Subspace:
    return u.intersect(v)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    return u.sum(v)


def annihilator(u: Subspace) -> Subspace:
    return u.annihilator()


def kernel(field: Field, rows, ncols: int | None = None) -> Subspace:
    """``{x : M x = 0}`` as a :class:`Subspace`."""
    if ncols is None:
        ncols = len(rows[0])
    basis = nullspace(field, rows, ncols)
    return Subspace.span(field, basis, ncols) if basis else Subspace.zero(field, ncols)


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """Quadratic form given by its symmetric Gram matrix (``q(x) = x G x^T``)."""

    field: Field
    gram: tuple

    def __post_init__(self):
        g = self.gram
        n = len(g)
        if any(len(r) != n for r in g):
            raise DimensionError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram matrix is not symmetric")

    @classmethod
    def from_rows(cls, field: Field, rows) -> "QuadraticForm":
        return cls(field, tuple(tuple(r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.gram)

    def rows(self):
        return [list(r) for r in self.gram]

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadraticForm) and self.field == other.field and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self) -> str:
        return f"QuadraticForm(dim={self.dim}, corank={self.corank})"

    def bilinear(self, x, y):
        return self.field.dot(x, matvec(self.field, self.rows(), y))

    def __call__(self, x):
        return self.bilinear(x, x)

    @property
    def rank(self) -> int:
        return rank(self.field, self.rows()) if self.dim else 0

    @property
    def corank(self) -> int:
        return self.dim - self.rank

    def kernel(self) -> Subspace:
        if self.dim == 0:
            return Subspace.zero(self.field, 0)
        return kernel(self.field, self.rows(), self.dim)

    def restrict(self, basis) -> "QuadraticForm":
        """Form induced on the span of ``basis`` (rows in the current coordinates)."""
        F = self.field
        if not basis:
            return QuadraticForm(F, ())
        B = [list(b) for b in basis]
        G = matmul(F, matmul(F, B, self.rows()), transpose(B))
        return QuadraticForm.from_rows(F, G)

    def congruent(self, P) -> "QuadraticForm":
        """The form ``P G P^T``: same form written in the basis given by the rows of ``P``."""
        return self.restrict(P)

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        F = self.field
        return QuadraticForm.from_rows(
            F, [[F.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.gram, other.gram)]
        )

    def __sub__(self, other: "QuadraticForm") -> "QuadraticForm":
        F = self.field
        return QuadraticForm.from_rows(
            F, [[F.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.gram, other.gram)]
        )

    def scale(self, c) -> "QuadraticForm":
        F = self.field
        return QuadraticForm.from_rows(F, [[F.mul(c, a) for a in r] for r in self.gram])

    def is_zero(self) -> bool:
        F = self.field
        return all(F.is_zero(a) for r in self.gram for a in r)

    def vanishes_on(self, basis) -> bool:
        return self.restrict(basis).is_zero()


def corank_reduce(q: QuadraticForm):
    """Split off the kernel of ``q``.

    Returns ``(kernel, reduced, complement)``: ``reduced`` is the nondegenerate
    form induced on ``space / kernel``, written in the basis ``complement``
    of standard vectors that maps isomorphically onto the quotient.
    """
    K = q.kernel()
    comp = K.complement_basis()
    return K, q.restrict(comp), comp


def embed_matrix(rows, embed):
    return [[embed(x) for x in r] for r in rows]


def det(field: Field, M) -> object:
    """Determinant by Gaussian elimination."""
    F = field
    n = len(M)
    A = [list(r) for r in M]
    d = F.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not F.is_zero(A[i][c])), None)
        if piv is None:
            return F.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = F.neg(d)
        d = F.mul(d, A[c][c])
        inv = F.inv(A[c][c])
        for i in range(c + 1, n):
            if not F.is_zero(A[i][c]):
                f = F.mul(A[i][c], inv)
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[c])]
    return d
