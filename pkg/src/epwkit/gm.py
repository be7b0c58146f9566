"""Gushel-Mukai varieties from Lagrangian data (V6, V5, A).

Coordinates: V5 = ker(phi) has the RREF basis ``u_1..u_5`` and all exterior
powers of V5 are written in that basis (5-index combinatorics, volume
``u_1 ^ ... ^ u_5 -> 1``). The reference vector ``v0`` is the first standard
basis vector outside V5. With respect to ``V6 = <v0> + V5`` every element of
the degree-3 piece splits as ``a' + v0 ^ beta`` with ``a'`` in the degree-3
piece of V5 and ``beta`` in the degree-2 piece.

``I = A & wedge^3 V5`` and W is its annihilator under the perfect pairing
with the degree-2 piece of V5. For v = lam*v0 + u the quadric on W is

    q_v(w, w') = lam * q_v0(w, w') + vol5(u ^ w ^ w'),
    q_v0(w, w') = -vol5(a'(w) ^ w'),

where ``a'(w)`` is the V5 part of any element of A whose beta part is w.
The family is linear in v, and its corank at v equals the EPW stratum of v.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb

import numpy as np

from . import exterior as ext
from . import kernels
from .epw import IntegrityError
from .fields import QQ, Field
from .lagrangian import LagrangianInstance
from .linalg import (
    QuadraticForm,
    Subspace,
    inverse,
    kernel,
    left_nullspace,
    matmul,
    solve_combination,
    transpose,
    vecmat,
)
from .poly import interpolate


class GMError(ValueError):
    pass


@lru_cache(maxsize=None)
def _pair32() -> tuple:
    """``vol5(x ^ y)`` for x in the degree-3 and y in the degree-2 piece of V5."""
    P = [[0] * 10 for _ in range(10)]
    for i, j, _o, s in ext.wedge_table(3, 2, 5):
        P[i][j] = s
    return tuple(tuple(r) for r in P)


def pair32(field: Field) -> list:
    return [[field.coerce(x) for x in r] for r in _pair32()]


@lru_cache(maxsize=None)
def _plucker_tensor() -> np.ndarray:
    """``T[c, j, k] = vol5(u_c ^ f_j ^ f_k)`` for basis bivectors f of V5."""
    T = np.zeros((5, 10, 10), dtype=np.int64)
    t12 = ext.wedge_table(1, 2, 5)
    P = _pair32()
    for c, j, o, s in t12:
        for k in range(10):
            if P[o][k]:
                T[c, j, k] += s * P[o][k]
    T.setflags(write=False)
    return T


def plucker_gram_full(field: Field, u5) -> list:
    """Gram matrix on the whole degree-2 piece of V5 of ``w -> vol5(u ^ w ^ w)``."""
    F = field
    T = _plucker_tensor()
    G = [[F.zero] * 10 for _ in range(10)]
    for c in range(5):
        if F.is_zero(u5[c]):
            continue
        for j in range(10):
            for k in range(10):
                t = int(T[c, j, k])
                if t:
                    G[j][k] = F.add(G[j][k], F.mul(u5[c], F.coerce(t)))
    return G


@dataclass(frozen=True, eq=False)
class GMInstance:
    """Ordinary GM data: A, V5 = ker(phi), W and the quadric family on W."""

    lag: LagrangianInstance
    phi: tuple
    V5: tuple  # 5 rows in V6 coordinates
    v0: tuple
    v0_index: int
    I: tuple  # rows of A & wedge^3 V5, V5 coordinates
    W: Subspace  # inside the degree-2 piece of V5
    q0: QuadraticForm  # q at v0, in the basis W.basis

    @property
    def field(self) -> Field:
        return self.lag.field

    @property
    def ell(self) -> int:
        return len(self.I)

    @property
    def n(self) -> int:
        return 5 - self.ell

    @property
    def dim_W(self) -> int:
        return self.W.dim

    def W_rows(self) -> list:
        return self.W.rows()

    @cached_property
    def plucker_forms(self) -> tuple:
        """``plucker_quadric(u_c)`` on W for c = 1..5."""
        F = self.field
        out = []
        for c in range(5):
            e = [F.zero] * 5
            e[c] = F.one
            out.append(plucker_quadric5(F, e, self.W_rows()))
        return tuple(out)

    def family(self) -> tuple:
        """The six Gram matrices: q at v0, then the Plücker forms of ``u_1..u_5``."""
        return (self.q0,) + self.plucker_forms

    def v5_coords(self, v) -> list | None:
        """Coordinates of a V6 vector in the basis ``u_1..u_5``, or ``None`` if outside V5."""
        F = self.field
        return solve_combination(F, [list(r) for r in self.V5], [F.coerce(x) for x in v])

    def split(self, v) -> tuple:
        """``(lam, mu)`` with ``v = lam*v0 + sum mu_c u_c``."""
        F = self.field
        v = [F.coerce(x) for x in v]
        c = solve_combination(F, [list(self.v0)] + [list(r) for r in self.V5], v)
        return c[0], c[1:]

    def from_v5(self, mu) -> list:
        F = self.field
        return [F.sum(F.mul(m, r[i]) for m, r in zip(mu, self.V5)) for i in range(6)]

    def W_coords(self, w) -> list | None:
        """Coordinates of a bivector of V5 in the RREF basis of W."""
        return self.W.coordinates(w)

    def bivector_to_v6(self, w) -> list:
        """Image of a bivector of V5 (``u``-coordinates) in the degree-2 piece of V6."""
        F = self.field
        out = [F.zero] * 15
        for coef, (a, b) in zip(w, ext.basis(2, 5)):
            if F.is_zero(coef):
                continue
            t = ext.wedge_many(F, [list(self.V5[a]), list(self.V5[b])])
            out = [F.add(x, F.mul(coef, y)) for x, y in zip(out, t)]
        return out

    def W_perp(self) -> list:
        """Rows of the pencil/net of skew forms cutting W (dual coordinates)."""
        F = self.field
        return matmul(F, [list(r) for r in self.I], pair32(F)) if self.I else []


def plucker_quadric5(field: Field, u5, W_rows) -> QuadraticForm:
    """``(w, w') -> vol5(u ^ w ^ w')`` restricted to the span of ``W_rows`` (u in V5 coordinates)."""
    G = plucker_gram_full(field, u5)
    Q = QuadraticForm.from_rows(field, G)
    return Q.restrict(W_rows)


def plucker_quadric(gm: GMInstance, v) -> QuadraticForm:
    """Plücker quadric of a vector v of V5 (given in V6 coordinates) on W."""
    F = gm.field
    if all(F.is_zero(F.coerce(x)) for x in v):
        raise GMError("plucker_quadric needs a nonzero vector")
    mu = gm.v5_coords(v)
    if mu is None:
        raise GMError("plucker_quadric needs a vector of V5")
    return plucker_quadric5(F, mu, gm.W_rows())


def decompose(field: Field, V5, v0, rows) -> tuple[list, list]:
    """Split degree-3 vectors as ``a' + v0 ^ beta``; returns (a' rows, beta rows) in V5 coordinates."""
    F = field
    B = [list(v0)] + [list(r) for r in V5]
    Lam = [ext.wedge_many(F, [B[i] for i in I]) for I in ext.basis(3)]
    Linv = inverse(F, Lam)
    coords = matmul(F, [list(r) for r in rows], Linv)
    idx3 = ext.index(3, 5)
    idx2 = ext.index(2, 5)
    a_part, b_part = [], []
    for c in coords:
        a = [F.zero] * 10
        b = [F.zero] * 10
        for val, I in zip(c, ext.basis(3)):
            if I[0] == 0:
                b[idx2[(I[1] - 1, I[2] - 1)]] = val
            else:
                a[idx3[tuple(i - 1 for i in I)]] = val
        a_part.append(a)
        b_part.append(b)
    return a_part, b_part


def build_gm(lag: LagrangianInstance, phi) -> GMInstance:
    """GM data for the hyperplane ``V5 = ker(phi)``."""
    F = lag.field
    if not lag.is_lagrangian:
        raise GMError("build_gm needs a validated Lagrangian")
    phi = tuple(F.coerce(x) for x in phi)
    V5 = ext.hyperplane_basis(F, phi)
    i0 = next(i for i in range(6) if not F.is_zero(phi[i]))
    v0 = [F.zero] * 6
    v0[i0] = F.one
    a_part, b_part = decompose(F, V5, v0, lag.rows())
    rel = left_nullspace(F, b_part)
    I_rows = Subspace.span(F, [vecmat(F, r, a_part) for r in rel], 10).rows() if rel else []
    ell = len(I_rows)
    if ell >= 4:
        raise GMError(f"dim(A & wedge^3 V5) = {ell} >= 4: not GM data")
    P = pair32(F)
    W = kernel(F, matmul(F, I_rows, P), 10) if I_rows else Subspace.full(F, 10)
    q0 = _q_at_v0(F, a_part, b_part, W, P)
    return GMInstance(lag, phi, tuple(map(tuple, V5)), tuple(v0), i0, tuple(map(tuple, I_rows)), W, q0)


def _q_at_v0(F: Field, a_part, b_part, W: Subspace, P) -> QuadraticForm:
    Wr = W.rows()
    aw = []
    for w in Wr:
        c = solve_combination(F, b_part, w)
        if c is None:
            raise IntegrityError("W is not the beta-image of A")
        aw.append(vecmat(F, c, a_part))
    G = matmul(F, matmul(F, aw, P), transpose(Wr))
    G = [[F.neg(x) for x in r] for r in G]
    n = len(G)
    if any(G[i][j] != G[j][i] for i in range(n) for j in range(i)):
        raise IntegrityError("quadric family is not symmetric (transversality failure)")
    return QuadraticForm.from_rows(F, G)


def quadric_at(gm: GMInstance, v) -> QuadraticForm:
    """Quadric of the family at a vector v outside V5."""
    F = gm.field
    lam, mu = gm.split(v)
    if F.is_zero(lam):
        raise GMError("quadric_at needs a vector outside V5")
    return gm.q0.scale(lam) + plucker_quadric5(F, mu, gm.W_rows())


def quadric_gram_batch(gm: GMInstance) -> np.ndarray:
    """Int64 array (6, d, d): q0 and the five Plücker Gram matrices (prime fields)."""
    return np.array([q.rows() for q in gm.family()], dtype=np.int64)


# -- points of X ------------------------------------------------------------------


def grassmannian_reps(p: int, k: int = 2, n: int = 5) -> np.ndarray:
    """All RREF k x n matrices of rank k over F_p, shape (N, k, n)."""
    out = []
    for piv in combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(piv[r] + 1, n) if c not in piv]
        m = len(free)
        idx = np.arange(p**m, dtype=np.int64)
        blk = np.zeros((p**m, k, n), dtype=np.int64)
        for r, c in enumerate(piv):
            blk[:, r, c] = 1
        for (r, c) in reversed(free):
            blk[:, r, c] = idx % p
            idx //= p
        out.append(blk)
    return np.concatenate(out, axis=0)


def grassmannian_count(q: int, k: int = 2, n: int = 5) -> int:
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def plucker_batch(R: np.ndarray, p: int) -> np.ndarray:
    """Plücker coordinates of a batch of 2 x 5 matrices (lex order of pairs)."""
    cols = [R[:, 0, a] * R[:, 1, b] - R[:, 0, b] * R[:, 1, a] for a, b in ext.basis(2, 5)]
    return np.stack(cols, axis=1) % p


@dataclass(frozen=True)
class XPoint:
    plane: tuple  # 2 x 5 RREF rows in V5 coordinates
    plucker: tuple  # coordinates in the degree-2 piece of V5
    w_coords: tuple  # coordinates in the basis of W
    smooth: bool


def sample_points(gm: GMInstance, limit: int | None = None) -> tuple[list[XPoint], int]:
    """Rational points of X = Gr(2, V5) & P(W) & Q, with Jacobian smoothness flags.

    Returns the points and the number of Grassmannian candidates scanned.
    """
    F = gm.field
    if F.kind != "prime":
        raise GMError("sample_points enumerates over a prime field")
    p = F.p
    R = grassmannian_reps(p)
    Pl = plucker_batch(R, p)
    if gm.I:
        perp = np.array(gm.W_perp(), dtype=np.int64)
        inW = ((Pl @ perp.T) % p == 0).all(axis=1)
    else:
        inW = np.ones(len(Pl), dtype=bool)
    piv = list(gm.W.pivots)
    X = Pl[inW][:, piv]  # W coordinates (RREF basis: the pivot entries)
    Rs = R[inW]
    Pls = Pl[inW]
    G = quadric_gram_batch(gm)
    q0 = np.einsum("ni,ij,nj->n", X, G[0], X) % p
    on = q0 == 0
    X, Rs, Pls = X[on], Rs[on], Pls[on]
    J = np.einsum("kij,nj->nki", G, X) % p  # gradients up to the factor 2
    ranks = kernels.batch_rank_mod_p(J, p) if len(J) else np.zeros(0, dtype=np.int64)
    pts = [
        XPoint(tuple(map(tuple, r.tolist())), tuple(pl.tolist()), tuple(x.tolist()), bool(rk == 4))
        for r, pl, x, rk in zip(Rs, Pls, X, ranks)
    ]
    if limit is not None:
        pts = pts[:limit]
    return pts, len(R)


# -- Hilbert polynomials of linear and quadric sections of the Grassmannian cone ---


@dataclass(frozen=True)
class HilbertData:
    hyperplanes: int
    quadrics: int
    variables: int  # homogeneous coordinates of the linear span
    coefficients: tuple  # Hilbert polynomial, Fractions, lowest degree first
    table: tuple  # h(0..6)

    @property
    def ambient_dim(self) -> int:
        return self.variables - 1

    @property
    def dimension(self) -> int:
        return len(self.coefficients) - 1

    @property
    def degree(self) -> int:
        d = self.dimension
        f = 1
        for i in range(2, d + 1):
            f *= i
        return int(self.coefficients[-1] * f) if d >= 0 else 0

    def __call__(self, t: int) -> Fraction:
        return sum((c * t**i for i, c in enumerate(self.coefficients)), Fraction(0))

    def to_json(self) -> dict:
        return {
            "hyperplanes": self.hyperplanes,
            "quadrics": self.quadrics,
            "ambient_dim": self.ambient_dim,
            "polynomial": [str(c) for c in self.coefficients],
            "table": list(self.table),
        }


GRASSMANNIAN_NUMERATOR = (1, 0, -5, 5, 0, -1)  # 1 - 5s^2 + 5s^3 - s^5


def _series(num: list, variables: int, terms: int) -> list:
    """Coefficients of ``num(s) / (1-s)^variables``."""
    out = []
    for t in range(terms):
        out.append(sum(a * comb(t - i + variables - 1, variables - 1) for i, a in enumerate(num) if i <= t))
    return out


def hilbert_polynomial(h: int, c: int = 0, t_max: int = 6) -> HilbertData:
    """Hilbert data of the cone over Gr(2,5) cut by h hyperplanes and c quadrics.

    Hilbert series ``(1 - 5s^2 + 5s^3 - s^5)(1 - s^2)^c / (1 - s)^(16 - h)``,
    read off the resolution ``0 -> O(-5) -> O(-3)^5 -> O(-2)^5 -> O``;
    ``h = 5`` is the cone itself in P^10, ``h = 11`` a P^4 section.
    """
    variables = 16 - h
    if h < 5 or c < 0 or variables - 4 - c < 0:
        raise GMError(f"no transverse section with h={h}, c={c}")
    num = list(GRASSMANNIAN_NUMERATOR)
    for _ in range(c):
        nxt = [0] * (len(num) + 2)
        for i, a in enumerate(num):
            nxt[i] += a
            nxt[i + 2] -= a
        num = nxt
    while num and num[-1] == 0:
        num.pop()
    dim = variables - 4 - c  # projective dimension of the section
    start = max(len(num), 1) + 1
    vals = _series(num, variables, start + dim + 1)
    ts = [Fraction(t) for t in range(start, start + dim + 1)]
    coeffs = interpolate(QQ, ts, [Fraction(v) for v in vals[start:start + dim + 1]])
    table = tuple(_series(num, variables, t_max + 1))
    return HilbertData(h, c, variables, tuple(coeffs), table)
