"""Homogeneous ideals handled one graded piece at a time.

A polynomial is a dict ``{exponent tuple: coefficient}``. The degree-t piece
of an ideal is a :class:`~epwkit.linalg.Subspace` of the coefficient space of
degree-t monomials, so Hilbert functions, sums, intersections and colon
ideals by linear forms all reduce to exact linear algebra. No Gröbner bases.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

from .fields import Field
from .linalg import Subspace, matmul, nullspace, transpose

MAX_VARS = 10
MAX_DEGREE = 7  # pieces; colon ideals need one degree above the table
MAX_TABLE_DEGREE = 6


class SizeBoundExceeded(ValueError):
    pass


@lru_cache(maxsize=None)
def monomials(n: int, t: int) -> tuple:
    """Exponent tuples of degree t in n variables, in a fixed order."""
    out = []
    for combo in combinations_with_replacement(range(n), t):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, t: int) -> dict:
    return {m: i for i, m in enumerate(monomials(n, t))}


def poly_mul(field: Field, f: dict, g: dict) -> dict:
    out: dict = {}
    F = field
    for a, x in f.items():
        for b, y in g.items():
            e = tuple(i + j for i, j in zip(a, b))
            out[e] = F.add(out.get(e, F.zero), F.mul(x, y))
    return {e: c for e, c in out.items() if not F.is_zero(c)}


def quadratic_poly(field: Field, gram) -> dict:
    """``x G x^T`` as a polynomial."""
    F = field
    n = len(gram)
    out = {}
    for i in range(n):
        for j in range(i, n):
            c = gram[i][j] if i == j else F.add(gram[i][j], gram[j][i])
            if not F.is_zero(c):
                e = [0] * n
                e[i] += 1
                e[j] += 1
                out[tuple(e)] = c
    return out


def linear_poly(field: Field, coeffs) -> dict:
    n = len(coeffs)
    out = {}
    for i, c in enumerate(coeffs):
        if not field.is_zero(c):
            e = [0] * n
            e[i] = 1
            out[tuple(e)] = c
    return out


def poly_degree(f: dict) -> int:
    degs = {sum(e) for e in f}
    if len(degs) != 1:
        raise ValueError("polynomial is not homogeneous (or is zero)")
    return degs.pop()


def poly_to_vector(field: Field, f: dict, n: int, t: int) -> list:
    idx = monomial_index(n, t)
    v = [field.zero] * len(idx)
    for e, c in f.items():
        v[idx[e]] = c
    return v


def vector_to_poly(field: Field, v, n: int, t: int) -> dict:
    return {m: c for m, c in zip(monomials(n, t), v) if not field.is_zero(c)}


def _check_size(n: int, t: int) -> None:
    if n > MAX_VARS or t > MAX_DEGREE:
        raise SizeBoundExceeded(f"graded pieces limited to {MAX_VARS} variables and degree {MAX_DEGREE}")


@dataclass(eq=False)
class GradedIdeal:
    """An ideal known through its graded pieces (degree -> Subspace) up to ``t_max``."""

    field: Field
    nvars: int
    pieces: dict
    t_max: int

    def piece(self, t: int) -> Subspace:
        if t > self.t_max:
            raise ValueError(f"degree {t} beyond the computed range {self.t_max}")
        return self.pieces[t]

    def hilbert_function(self, t_max: int | None = None) -> list[int]:
        t_max = self.t_max if t_max is None else t_max
        return [comb(t + self.nvars - 1, self.nvars - 1) - self.piece(t).dim for t in range(t_max + 1)]

    def __add__(self, other: "GradedIdeal") -> "GradedIdeal":
        t = min(self.t_max, other.t_max)
        return GradedIdeal(self.field, self.nvars, {d: self.piece(d).sum(other.piece(d)) for d in range(t + 1)}, t)

    def __and__(self, other: "GradedIdeal") -> "GradedIdeal":
        t = min(self.t_max, other.t_max)
        return GradedIdeal(self.field, self.nvars, {d: self.piece(d).intersect(other.piece(d)) for d in range(t + 1)}, t)

    def contains(self, other: "GradedIdeal", t_max: int | None = None) -> bool:
        t = min(self.t_max, other.t_max) if t_max is None else t_max
        return all(other.piece(d).is_subspace_of(self.piece(d)) for d in range(t + 1))

    def equals(self, other: "GradedIdeal", t_max: int | None = None) -> bool:
        return self.contains(other, t_max) and other.contains(self, t_max)

    def colon_linear(self, forms) -> "GradedIdeal":
        """``(I : (l_1, ..., l_r))`` for linear forms given as coefficient lists."""
        F, n = self.field, self.nvars
        lins = [linear_poly(F, l) for l in forms]
        pieces = {}
        for t in range(self.t_max):
            ann = self.piece(t + 1).annihilator().rows()
            blocks = []
            for l in lins:
                mult = [poly_to_vector(F, poly_mul(F, {m: F.one}, l), n, t + 1) for m in monomials(n, t)]
                if ann:
                    blocks.append(matmul(F, mult, transpose(ann)))
            if blocks:
                rows = [sum((b[i] for b in blocks), []) for i in range(len(monomials(n, t)))]
                K = nullspace(F, transpose(rows), len(rows))
            else:
                K = [[F.one if i == j else F.zero for j in range(len(monomials(n, t)))] for i in range(len(monomials(n, t)))]
            dim_t = len(monomials(n, t))
            pieces[t] = Subspace.span(F, K, dim_t) if K else Subspace.zero(F, dim_t)
        return GradedIdeal(F, n, pieces, self.t_max - 1)

    def vanishes_on(self, rows, t_max: int | None = None) -> bool:
        """Whether every element of the computed pieces vanishes on the span of ``rows``."""
        F, n = self.field, self.nvars
        t = self.t_max if t_max is None else t_max
        k = len(rows)
        lin = [{tuple(1 if j == i else 0 for j in range(k)): r[v] for i, r in enumerate(rows) if not F.is_zero(r[v])} for v in range(n)]
        for d in range(t + 1):
            P = self.piece(d)
            if P.dim == 0:
                continue
            img = []
            for m in monomials(n, d):
                f = {tuple([0] * k): F.one}
                for v, e in enumerate(m):
                    for _ in range(e):
                        f = poly_mul(F, f, lin[v])
                img.append(poly_to_vector(F, f, k, d))
            prod = matmul(F, P.rows(), img)
            if any(not F.is_zero(x) for r in prod for x in r):
                return False
        return True


@dataclass(eq=False)
class HomogeneousIdeal:
    """Ideal generated by homogeneous polynomials in ``nvars`` variables."""

    field: Field
    nvars: int
    generators: tuple  # polynomials (dicts)
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @classmethod
    def from_forms(cls, field: Field, nvars: int, quadrics=(), linears=(), polys=()) -> "HomogeneousIdeal":
        gens = [quadratic_poly(field, g) for g in quadrics] + [linear_poly(field, l) for l in linears] + list(polys)
        gens = [g for g in gens if g]
        return cls(field, nvars, tuple(gens))

    def piece(self, t: int) -> Subspace:
        _check_size(self.nvars, t)
        if t not in self._cache:
            F, n = self.field, self.nvars
            rows = []
            for g in self.generators:
                d = poly_degree(g)
                if d > t:
                    continue
                for m in monomials(n, t - d):
                    rows.append(poly_to_vector(F, poly_mul(F, {m: F.one}, g), n, t))
            dim_t = len(monomials(n, t))
            self._cache[t] = Subspace.span(F, rows, dim_t) if rows else Subspace.zero(F, dim_t)
        return self._cache[t]

    def truncate(self, t_max: int) -> GradedIdeal:
        return GradedIdeal(self.field, self.nvars, {t: self.piece(t) for t in range(t_max + 1)}, t_max)

    def hilbert_function(self, t_max: int) -> list[int]:
        return [len(monomials(self.nvars, t)) - self.piece(t).dim for t in range(t_max + 1)]

    def vanishes_on(self, rows) -> bool:
        """Every generator vanishes on the linear span of ``rows``."""
        F = self.field
        k = len(rows)
        for g in self.generators:
            total: dict = {}
            for e, c in g.items():
                f = {tuple([0] * k): c}
                for v, ev in enumerate(e):
                    lv = {tuple(1 if j == i else 0 for j in range(k)): r[v] for i, r in enumerate(rows) if not F.is_zero(r[v])}
                    for _ in range(ev):
                        f = poly_mul(F, f, lv)
                for m, x in f.items():
                    total[m] = F.add(total.get(m, F.zero), x)
            if any(not F.is_zero(x) for x in total.values()):
                return False
        return True

    def __add__(self, other: "HomogeneousIdeal") -> "HomogeneousIdeal":
        return HomogeneousIdeal(self.field, self.nvars, self.generators + other.generators)


def hilbert_function_of_ideal(I: HomogeneousIdeal, t_max: int) -> list[int]:
    if I.nvars > MAX_VARS or t_max > MAX_TABLE_DEGREE:
        raise SizeBoundExceeded(f"hilbert_function_of_ideal is limited to {MAX_VARS} variables, degree {MAX_TABLE_DEGREE}")
    return I.hilbert_function(t_max)


def linear_ideal(field: Field, nvars: int, rows) -> HomogeneousIdeal:
    """Ideal of the linear subspace spanned by ``rows`` (coordinates of points)."""
    S = Subspace.span(field, rows, nvars) if rows else Subspace.zero(field, nvars)
    return HomogeneousIdeal.from_forms(field, nvars, linears=S.annihilator().rows())


def segre_ideal(field: Field) -> HomogeneousIdeal:
    """2 x 2 minors of ``[[x0, x1, x2], [x3, x4, x5]]``: the Segre P^1 x P^2 in P^5."""
    F = field
    gens = []
    for a, b in ((0, 1), (0, 2), (1, 2)):
        e1 = [0] * 6
        e1[a] += 1
        e1[3 + b] += 1
        e2 = [0] * 6
        e2[b] += 1
        e2[3 + a] += 1
        gens.append({tuple(e1): F.one, tuple(e2): F.neg(F.one)})
    return HomogeneousIdeal(F, 6, tuple(gens))
