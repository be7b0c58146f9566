"""Quadrics of the GM family, one at a time.

Everything lives in the degree-2 piece of V5 (coordinates in the basis
``u_1..u_5`` of V5) or in W (coordinates in the RREF basis of W). Forms on W
are :class:`~epwkit.linalg.QuadraticForm` objects from :mod:`epwkit.gm`.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import exterior as ext
from .epw import IntegrityError, stratum_of
from .fields import Field, make_field
from .gm import GMInstance, pair32, plucker_quadric5, quadric_at
from .projective import normalize
from .linalg import (
    QuadraticForm,
    Subspace,
    corank_reduce,
    kernel,
    matmul,
    nullspace,
    rank,
    transpose,
)


class FiberError(ValueError):
    """A configuration excluded by the hypotheses of an operation."""

    def __init__(self, message: str, reason: str = "invalid"):
        super().__init__(message)
        self.reason = reason


# -- isotropic spaces through a fixed one --------------------------------------------


@dataclass(frozen=True)
class IsotropicSpace:
    """Subspace of W (rows in W coordinates) on which ``form`` vanishes."""

    space: Subspace
    form: QuadraticForm

    @property
    def field(self) -> Field:
        return self.space.field

    @property
    def dim(self) -> int:
        return self.space.dim

    def is_isotropic(self) -> bool:
        return self.form.vanishes_on(self.space.rows())


@dataclass(frozen=True)
class TwoSpaces:
    spaces: tuple  # one or two IsotropicSpace (one only when degenerate)
    rational: bool  # both spaces defined over the base field
    degenerate: bool  # double root of the residual binary quadratic
    roots: tuple  # residual roots (base or extension field elements, None = infinity)
    field: Field  # field the spaces are written over

    @property
    def count_with_multiplicity(self) -> int:
        return 2

    @property
    def kind(self) -> str:
        return "degenerate" if self.degenerate else ("split" if self.rational else "inert")


def _embed_form(q: QuadraticForm, E: Field) -> QuadraticForm:
    return QuadraticForm.from_rows(E, [[(x, 0) for x in r] for r in q.gram])


def _embed_rows(rows, E: Field) -> list:
    return [[(x, 0) for x in r] for r in rows]


def _binary_roots(F: Field, a, b, c):
    """Isotropic directions of ``a x^2 + 2b x z + c z^2``.

    Returns ``(field, directions, rational, degenerate, roots)``, each direction
    an (x, z) pair over ``field``. Finite roots ``t = x/z`` come first in the
    field's sort order, the root at infinity (``z = 0``) last.
    """
    disc = F.sub(F.mul(b, b), F.mul(a, c))
    G = F
    emb = lambda x: x  # noqa: E731
    rational = True
    if F.kind == "rationals":
        from fractions import Fraction

        num, den = disc.numerator, disc.denominator
        import math

        rn, rd = math.isqrt(num) if num >= 0 else -1, math.isqrt(den)
        if num >= 0 and rn * rn == num and rd * rd == den:
            root = Fraction(rn, rd)
        else:
            raise FiberError("irrational residual roots over the rationals", "unsupported_field")
    else:
        root = F.sqrt(disc)
        if root is None:
            if F.kind != "prime":
                raise FiberError("no square root in the field", "unsupported_field")
            G = make_field("prime_square", F.p)
            emb = lambda x: (x, 0)  # noqa: E731
            root = G.sqrt(emb(disc))
            rational = False
    a, b, c, d = emb(a), emb(b), emb(c), root
    degenerate = G.is_zero(d)
    if G.is_zero(a):
        # a = 0: z = 0 is isotropic, the other is 2b x + c z = 0
        if G.is_zero(b):
            raise FiberError("residual binary form vanishes identically", "degenerate_form")
        t = G.neg(G.div(c, G.add(b, b)))
        dirs = [((t, G.one), t), ((G.one, G.zero), None)]
    else:
        ts = {G.div(G.sub(G.neg(b), d), a), G.div(G.add(G.neg(b), d), a)}
        ts = sorted(ts, key=G.sort_key)
        dirs = [((t, G.one), t) for t in ts]
    roots = tuple(r for _, r in dirs)
    return G, [d for d, _ in dirs], rational, degenerate, roots


def quotient_coords(K: Subspace, x) -> list:
    """Coordinates of ``x`` modulo K in the complement basis ``K.complement_basis()``."""
    F = K.field
    x = list(x)
    for row, p in zip(K.basis, K.pivots):
        c = x[p]
        if not F.is_zero(c):
            x = [F.sub(a, F.mul(c, b)) for a, b in zip(x, row)]
    return [x[j] for j in range(K.ambient) if j not in K.pivots]


def two_spaces_through(q: QuadraticForm, pi_rows) -> TwoSpaces:
    """The (at most two) maximal isotropic spaces of a corank-2 form containing ``pi``.

    ``pi`` (rows) must be isotropic and meet the kernel trivially; with
    ``dim q = 2s + 6`` and ``dim pi = s + 1`` the results have dimension
    ``s + 4``. Spaces over the quadratic extension are returned when the
    residual binary form does not split.
    """
    F = q.field
    if q.corank != 2:
        raise FiberError(f"two_spaces_through needs corank 2, got {q.corank}", "corank")
    pi_rows = [list(r) for r in pi_rows]
    if pi_rows and not q.vanishes_on(pi_rows):
        raise FiberError("the base space is not isotropic", "not_isotropic")
    K, R, comp = corank_reduce(q)
    if rank(F, pi_rows + K.rows()) != len(pi_rows) + 2:
        raise FiberError("the base space meets the kernel of the quadric", "meets_kernel")
    m = R.dim
    pibar = [quotient_coords(K, r) for r in pi_rows]
    # orthogonal of pibar for the reduced form
    perp = nullspace(F, matmul(F, pibar, R.rows()), m) if pibar else [[F.one if i == j else F.zero for j in range(m)] for i in range(m)]
    Pperp = Subspace.span(F, perp, m)
    if Pperp.dim - len(pibar) != 2:
        raise FiberError(f"residual space has dimension {Pperp.dim - len(pibar)}, expected 2", "dimension")
    # complement of pibar inside pibar^perp, chosen canonically
    extra = []
    cur = Subspace.span(F, pibar, m) if pibar else Subspace.zero(F, m)
    for v in Pperp.rows():
        nxt = cur.sum(Subspace.span(F, [v], m))
        if nxt.dim > cur.dim:
            extra.append(v)
            cur = nxt
    b1, b2 = extra
    a = R.bilinear(b1, b1)
    b = R.bilinear(b1, b2)
    c = R.bilinear(b2, b2)
    G, dirs, rational, degenerate, roots = _binary_roots(F, a, b, c)
    lift_base = pi_rows + K.rows()
    if G is not F:
        lift_base = _embed_rows(lift_base, G)
        b1g, b2g = _embed_rows([b1, b2], G)
        comp_g = _embed_rows(comp, G)
        qg = _embed_form(q, G)
    else:
        b1g, b2g, comp_g, qg = b1, b2, comp, q
    spaces = []
    for (x, z) in dirs[:1] if degenerate else dirs:
        y = [G.add(G.mul(x, s), G.mul(z, t)) for s, t in zip(b1g, b2g)]
        lifted = [G.sum(G.mul(y[i], comp_g[i][j]) for i in range(m)) for j in range(q.dim)]
        S = Subspace.span(G, lift_base + [lifted], q.dim)
        sp = IsotropicSpace(S, qg)
        if not sp.is_isotropic() or S.dim != len(pi_rows) + 3:
            raise IntegrityError("lifted space is not a maximal isotropic space")
        spaces.append(sp)
    return TwoSpaces(tuple(spaces), rational, degenerate, roots, G)


# -- bivectors of V5 -------------------------------------------------------------------


def wedge_vec_V5(F: Field, v) -> list:
    """Rows ``v ^ u_c`` (c = 1..5), bivectors of V5."""
    out = []
    for c in range(5):
        e = [F.zero] * 5
        e[c] = F.one
        out.append(ext.wedge_coeffs(F, list(v), 1, e, 1, 5))
    return out


def vV5_in_W(gm: GMInstance, v5) -> Subspace:
    """``W & (v ^ V5)`` as a subspace of the degree-2 piece of V5."""
    F = gm.field
    S = Subspace.span(F, wedge_vec_V5(F, v5), 10)
    return gm.W.intersect(S)


def to_W_coords(gm: GMInstance, rows) -> list:
    out = []
    for r in rows:
        c = gm.W.coordinates(r)
        if c is None:
            raise IntegrityError("bivector is not in W")
        out.append(c)
    return out


def from_W_coords(gm: GMInstance, rows) -> list:
    F = gm.field
    B = gm.W_rows()
    return [[F.sum(F.mul(c, B[i][j]) for i, c in enumerate(r)) for j in range(10)] for r in rows]


def is_decomposable_bivector(F: Field, w) -> bool:
    return all(F.is_zero(x) for x in ext.wedge_coeffs(F, w, 2, w, 2, 5))


def plane_of_bivector(F: Field, w) -> Subspace:
    """The 2-plane U of V5 with ``w = u ^ u'`` (kernel of ``x -> x ^ w``)."""
    cols = []
    for c in range(5):
        e = [F.zero] * 5
        e[c] = F.one
        cols.append(ext.wedge_coeffs(F, e, 1, w, 2, 5))
    K = kernel(F, transpose(cols), 5)
    if K.dim != 2:
        raise FiberError("bivector is not decomposable", "not_decomposable")
    return K


# -- Sigma_1 ------------------------------------------------------------------------------


def skew_form(gm: GMInstance, iota) -> list:
    """5 x 5 matrix of ``(x, y) -> vol5(iota ^ x ^ y)``."""
    F = gm.field
    idx = ext.index(2, 5)
    M = [[F.zero] * 5 for _ in range(5)]
    Pm = pair32(F)
    for a in range(5):
        for b in range(a + 1, 5):
            val = F.dot(iota, [row[idx[(a, b)]] for row in Pm])
            M[a][b] = val
            M[b][a] = F.neg(val)
    return M


def in_sigma1(gm: GMInstance, v5) -> bool:
    """Whether [v] lies on Sigma_1: some member of the pencil has v in its kernel."""
    F = gm.field
    if gm.ell != 2:
        raise FiberError("Sigma_1 is defined for threefold data", "not_threefold")
    M = [matmul(F, [list(v5)], skew_form(gm, i))[0] for i in gm.I]
    return rank(F, M) < 2


@dataclass(frozen=True)
class Sigma1Conic:
    pencil: tuple  # the two forms iota_1, iota_2 (degree-3 piece of V5)
    plane: tuple  # basis (3 rows, V5 coordinates) of the plane of the conic
    conic: tuple  # symmetric 3 x 3 matrix in plane coordinates
    samples: tuple  # ((s, t), kernel vector) pairs
    field: Field  # field the samples were taken over
    smooth: bool


def _pencil_kernel(G: Field, forms, s, t):
    M = [[G.add(G.mul(s, a), G.mul(t, b)) for a, b in zip(r1, r2)] for r1, r2 in zip(*forms)]
    K = kernel(G, M, 5)
    if K.dim != 1:
        raise FiberError(f"pencil member has kernel of dimension {K.dim}: X is singular", "singular")
    return list(K.basis[0])


def sigma1_conic(gm: GMInstance) -> Sigma1Conic:
    """Kernels of the pencil of skew forms cut by W; they lie on a smooth conic."""
    F = gm.field
    if gm.ell != 2:
        raise FiberError("Sigma_1 is defined for threefold data", "not_threefold")
    G = F
    forms = [skew_form(gm, i) for i in gm.I]
    if F.is_finite and F.order + 1 < 7:
        G = make_field("prime_square", F.p)
        forms = [_embed_rows(f, G) for f in forms]
    if G.is_finite:
        elems = sorted(G.elements(), key=G.sort_key)
        params = [(G.one, G.zero)] + [(e, G.one) for e in elems[:6]]
    else:
        params = [(G.one, G.zero)] + [(G.coerce(i), G.one) for i in range(6)]
    samples = [(st, _pencil_kernel(G, forms, *st)) for st in params]
    pts = [k for _, k in samples]
    plane = Subspace.span(G, pts, 5)
    if plane.dim != 3:
        raise IntegrityError(f"pencil kernels span a space of dimension {plane.dim}, expected 3")
    coords = [plane.coordinates(p) for p in pts]
    mons = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    V = [[G.mul(c[i], c[j]) for i, j in mons] for c in coords]
    ker = nullspace(G, V, 6)
    if len(ker) != 1:
        raise IntegrityError(f"conic fit through 7 kernels has a {len(ker)}-dimensional solution space")
    f = ker[0]
    half = G.inv(G.coerce(2))
    C = [[G.zero] * 3 for _ in range(3)]
    for (i, j), a in zip(mons, f):
        if i == j:
            C[i][i] = a
        else:
            C[i][j] = C[j][i] = G.mul(half, a)
    smooth = rank(G, C) == 3
    return Sigma1Conic(tuple(map(tuple, gm.I)), tuple(map(tuple, plane.rows())), tuple(map(tuple, C)),
                       tuple((st, tuple(k)) for st, k in samples), G, smooth)


# -- first quadratic fibration ---------------------------------------------------------------

THREEFOLD_LABELS = {
    (2, 0): "two reduced points",
    (2, 1): "double point",
    (2, 2): "line",
    (3, 0): "smooth conic",
    (3, 1): "two lines",
    (3, 2): "double line",
}

FIVEFOLD_LABELS = {0: "smooth quadric", 1: "corank-1 quadric", 2: "two planes", 3: "double plane"}


def predicted_threefold_label(k: int, sigma1: bool) -> str:
    if k == 0:
        return "inconsistent" if sigma1 else "two reduced points"
    if k == 3:
        return "double line"
    if k == 1:
        return "smooth conic" if sigma1 else "double point"
    if k == 2:
        return "two lines" if sigma1 else "line"
    return "inconsistent"


@dataclass(frozen=True)
class FiberClassification:
    point: tuple  # V5 coordinates
    stratum: int
    sigma1: bool | None
    label: str  # from the computed geometry
    predicted: str  # from (stratum, Sigma_1)
    corank: int
    section_dim: int
    rationality: str  # split / inert / n.a.
    components: tuple = ()  # explicit planes (fivefold, corank 2) as W-coordinate rows

    @property
    def consistent(self) -> bool:
        return self.label == self.predicted


def rho1_fiber_classify(gm: GMInstance, v5) -> FiberClassification:
    """Fiber of the first quadratic fibration over [v], v in V5 (V5 coordinates)."""
    F = gm.field
    v5 = [F.coerce(x) for x in v5]
    if all(F.is_zero(x) for x in v5):
        raise FiberError("zero vector", "zero")
    k = stratum_of(gm.lag, gm.from_v5(v5))
    S = vV5_in_W(gm, v5)
    Sw = to_W_coords(gm, S.rows())
    q = gm.q0.restrict(Sw)
    d, r = S.dim, q.corank
    rationality, comps = "n.a.", ()
    if gm.n == 5:
        label = FIVEFOLD_LABELS.get(r, "unexpected")
        predicted = FIVEFOLD_LABELS.get(k, "unexpected")
        if r == 2:
            ts = two_spaces_through(gm.q0.restrict(Sw), [])
            rationality = ts.kind
            comps = tuple(tuple(map(tuple, s.space.rows())) for s in ts.spaces)
        sig = None
    elif gm.n == 3:
        sig = in_sigma1(gm, v5)
        label = THREEFOLD_LABELS.get((d, r), f"unexpected ({d},{r})")
        predicted = predicted_threefold_label(k, sig)
        if (d, r) in ((2, 0), (3, 1)):
            rationality = _binary_rationality(q)
    else:
        raise FiberError("fiber tables exist for threefolds and fivefolds", "dimension")
    return FiberClassification(tuple(v5), k, sig, label, predicted, r, d, rationality, comps)


def _binary_rationality(q: QuadraticForm) -> str:
    """Split/inert for a rank-2 form (two points, or two lines of a plane conic)."""
    F = q.field
    K, R, _ = corank_reduce(q)
    if R.dim != 2 or F.kind == "rationals":
        return "n.a."
    g = R.gram
    disc = F.sub(F.mul(g[0][1], g[0][1]), F.mul(g[0][0], g[1][1]))
    return "split" if F.sqrt(disc) is not None else "inert"


# -- lines and sigma ---------------------------------------------------------------------------


def line_of_point(gm: GMInstance, v5) -> Subspace:
    """``L = W & (v ^ V5)`` for [v] in the stratum-2 curve off Sigma_1 (bivector coordinates)."""
    F = gm.field
    v5 = [F.coerce(x) for x in v5]
    L = vV5_in_W(gm, v5)
    if L.dim != 2:
        raise FiberError(f"dim(W & (v ^ V5)) = {L.dim}, expected 2", "dimension")
    return L


def sigma_of_line(gm: GMInstance, L: Subspace) -> tuple:
    """The point [V1] with ``L = P(V1 ^ V3)``: intersection of the planes of two points of L."""
    F = gm.field
    rows = L.rows()
    if len(rows) != 2:
        raise FiberError("sigma_of_line needs a 2-dimensional space", "dimension")
    a, b = rows
    if not (is_decomposable_bivector(F, a) and is_decomposable_bivector(F, b)):
        raise FiberError("line points are not on the Grassmannian", "not_decomposable")
    if not all(F.is_zero(x) for x in ext.wedge_coeffs(F, a, 2, b, 2, 5)):
        raise FiberError("the line is not contained in the Grassmannian", "not_decomposable")
    V1 = plane_of_bivector(F, a).intersect(plane_of_bivector(F, b))
    if V1.dim != 1:
        raise FiberError(f"planes meet in dimension {V1.dim}", "dimension")
    return normalize(F, V1.basis[0])


def is_nice(gm: GMInstance, L: Subspace) -> bool:
    return not in_sigma1(gm, sigma_of_line(gm, L))


def lines_meet(gm: GMInstance, v5a, v5b) -> bool:
    """Whether the lines of two points of the stratum-2 curve meet (``va ^ vb`` in W)."""
    F = gm.field
    w = ext.wedge_coeffs(F, list(v5a), 1, list(v5b), 1, 5)
    return gm.W.contains(w)


# -- double-cover fibers and the splitting section ------------------------------------------------


def pi_in_X(gm: GMInstance, pi_w) -> bool:
    return all(q.vanishes_on(pi_w) for q in gm.family())


def double_cover_fiber(gm: GMInstance, pi_w, v) -> TwoSpaces:
    """The two maximal isotropic spaces of Q_v through ``pi`` (W coordinates), v off P(V5)."""
    F = gm.field
    if not pi_in_X(gm, pi_w):
        raise FiberError("the base space is not contained in X", "not_in_X")
    lam, _ = gm.split(v)
    if F.is_zero(lam):
        raise FiberError("the point lies in P(V5)", "in_V5")
    q = quadric_at(gm, v)
    if q.corank == 3:
        raise FiberError("the point lies in the third stratum", "Y3")
    if q.corank != 2:
        raise FiberError(f"the point has stratum {q.corank}, expected 2", "stratum")
    return two_spaces_through(q, pi_w)


@dataclass(frozen=True)
class SplittingSection:
    v: tuple
    space: Subspace  # in W coordinates, dimension 5
    contains_L0: bool
    isotropic: bool


def admissibility(gm: GMInstance, v0p, v5) -> str | None:
    """Reason a point of the stratum-2 curve is excluded (``None`` when admissible)."""
    F = gm.field
    v5 = [F.coerce(x) for x in v5]
    if rank(F, [list(v0p), v5]) < 2:
        return "equals_v0"
    k = stratum_of(gm.lag, gm.from_v5(v5))
    if k != 2:
        return f"stratum_{k}"
    if in_sigma1(gm, v5):
        return "in_sigma1"
    if lines_meet(gm, v0p, v5):
        return "line_meets_L0"
    return None


def splitting_section(gm: GMInstance, L0: Subspace, v0p, v5) -> SplittingSection:
    """``W & (<v0', v> ^ V5)`` for a point v of the stratum-2 curve (V5 coordinates).

    ``L0`` is the nice line (bivector coordinates) with ``sigma(L0) = [v0']``.
    """
    F = gm.field
    v5 = [F.coerce(x) for x in v5]
    why = admissibility(gm, v0p, v5)
    if why is not None:
        raise FiberError(f"excluded point: {why}", why)
    V2V5 = Subspace.span(F, wedge_vec_V5(F, v0p) + wedge_vec_V5(F, v5), 10)
    S = gm.W.intersect(V2V5)
    if S.dim != 5:
        raise FiberError(f"dim(W & (V2 ^ V5)) = {S.dim}, expected 5: P(W) is not transverse", "dimension")
    Sw = Subspace.span(F, to_W_coords(gm, S.rows()), gm.dim_W)
    L0w = Subspace.span(F, to_W_coords(gm, L0.rows()), gm.dim_W)
    qv = plucker_quadric5(F, v5, gm.W_rows())
    return SplittingSection(tuple(v5), Sw, L0w.is_subspace_of(Sw), qv.vanishes_on(Sw.rows()))


def sigma_planes(gm: GMInstance, v5) -> TwoSpaces:
    """The two planes of the fivefold fiber over a stratum-2 point of P(V5) (W coordinates)."""
    F = gm.field
    S = vV5_in_W(gm, v5)
    Sw = to_W_coords(gm, S.rows())
    q = gm.q0.restrict(Sw)
    ts = two_spaces_through(q, [])
    # lift plane coordinates (inside v ^ V5) back to W coordinates
    G = ts.field
    base = Sw if G is F else _embed_rows(Sw, G)
    qW = gm.q0 if G is F else _embed_form(gm.q0, G)
    lifted = []
    for sp in ts.spaces:
        rows = matmul(G, sp.space.rows(), base)
        lifted.append(IsotropicSpace(Subspace.span(G, rows, gm.dim_W), qW))
    return TwoSpaces(tuple(lifted), ts.rational, ts.degenerate, ts.roots, G)
