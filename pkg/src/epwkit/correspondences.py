"""Fibers of the correspondences, scroll fibers, cycle checks, and the line transform.

Every fiber is a linear section of the Grassmannian cone: a linear space
inside W cut by the restricted Plücker quadrics (and q0 where the GM quadric
enters). Fibers are returned as :class:`FiberIdeal` objects whose ideal lives
in the coordinates of an explicit basis, so containments can be replayed by
substitution and Hilbert functions computed by graded linear algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import exterior as ext
from .epw import IntegrityError, dual_stratum_of, stratum_of
from .fields import Field
from .gm import GMInstance, build_gm
from .ideals import (
    GradedIdeal,
    HomogeneousIdeal,
    SizeBoundExceeded,
    hilbert_function_of_ideal,
    linear_ideal,
    segre_ideal,
)
from .lagrangian import LagrangianInstance, dual
from .linalg import Subspace, kernel, matmul, solve_combination, transpose
from .projective import normalize
from .quadric_fibers import (
    FiberError,
    _embed_form,
    _embed_rows,
    admissibility,
    double_cover_fiber,
    in_sigma1,
    is_nice,
    line_of_point,
    sigma_of_line,
    sigma_planes,
    splitting_section,
    to_W_coords,
    vV5_in_W,
    wedge_vec_V5,
)

__all__ = [
    "CycleReport",
    "FiberIdeal",
    "HomogeneousIdeal",
    "LineTransformData",
    "LineTransformError",
    "SizeBoundExceeded",
    "cycle_decomposition_check",
    "hilbert_function_of_ideal",
    "line_transform_data",
    "scroll_fiber",
    "segre_ideal",
    "z_fiber",
]


@dataclass(eq=False)
class FiberIdeal:
    """An ideal in the coordinates of ``basis`` (rows in W coordinates over ``field``)."""

    ideal: HomogeneousIdeal
    basis: list
    field: Field
    forms: tuple  # restricted quadratic forms generating the ideal
    meta: dict = dc_field(default_factory=dict)

    @property
    def nvars(self) -> int:
        return len(self.basis)

    def hilbert_function(self, t_max: int) -> list[int]:
        return hilbert_function_of_ideal(self.ideal, t_max)

    def coords(self, rows) -> list:
        """Coordinates in ``basis`` of W-coordinate rows lying in its span."""
        out = []
        for r in rows:
            c = solve_combination(self.field, self.basis, list(r))
            if c is None:
                raise IntegrityError("space is not contained in the fiber's linear span")
            out.append(c)
        return out

    def contains_space(self, rows) -> bool:
        """Whether every generator vanishes on the span of ``rows`` (W coordinates)."""
        return self.ideal.vanishes_on(self.coords(rows))

    def linear_ideal_of(self, rows) -> HomogeneousIdeal:
        return linear_ideal(self.field, self.nvars, self.coords(rows))


def _lift(gm: GMInstance, G: Field, forms):
    return [f if G is gm.field else _embed_form(f, G) for f in forms]


def _restricted_ideal(G: Field, forms, basis) -> tuple[HomogeneousIdeal, tuple]:
    restricted = tuple(q.restrict(basis) for q in forms)
    ideal = HomogeneousIdeal.from_forms(G, len(basis), quadrics=[q.gram for q in restricted])
    return ideal, restricted


def z_fiber(gm: GMInstance, pi0, v, sheet: int) -> FiberIdeal:
    """The Grassmannian cone cut on one of the two spaces of Q_v through ``pi0``.

    ``pi0`` holds W-coordinate rows of a space in X (a line for threefolds,
    a plane for fivefolds). The selected space has dimension ``n + 2`` and the
    ideal is generated by the five restricted Plücker quadrics.
    """
    if sheet not in (0, 1):
        raise ValueError("sheet must be 0 or 1")
    ts = double_cover_fiber(gm, pi0, v)
    G = ts.field
    basis = ts.spaces[sheet].space.rows()
    ideal, restricted = _restricted_ideal(G, _lift(gm, G, gm.plucker_forms), basis)
    fib = FiberIdeal(ideal, basis, G, restricted, {"kind": ts.kind, "sheet": sheet})
    pi_rows = [list(r) for r in pi0] if G is gm.field else _embed_rows(pi0, G)
    if not fib.contains_space(pi_rows):
        raise IntegrityError("the base space is not contained in its double-cover fiber")
    return fib


def scroll_fiber(gm: GMInstance, pi0, v5, v0p=None, sheet: int = 0) -> FiberIdeal:
    """Fiber over a point of the stratum-2 curve of P(V5) (V5 coordinates).

    Threefolds (``gm.n == 3``): ``pi0`` is the nice line L0 (bivector
    coordinates) with ``sigma(L0) = [v0p]``; the fiber is the Grassmannian cut
    on the splitting section ``W & (<v0p, v> ^ V5)``. Fivefolds: ``pi0`` is
    a sigma-plane (W coordinates) and the fiber is the Grassmannian cut on the
    span of ``pi0`` and the plane ``sheet`` over v.
    """
    F = gm.field
    v5 = [F.coerce(x) for x in v5]
    if gm.n == 3:
        if v0p is None:
            raise ValueError("threefold scroll fibers need the point sigma(L0)")
        if (why := admissibility(gm, v0p, v5)) == "line_meets_L0":
            raise FiberError("the cone vertex lies in P(W)", why)
        sec = splitting_section(gm, pi0, v0p, v5)
        basis = sec.space.rows()
        ideal, restricted = _restricted_ideal(F, gm.plucker_forms, basis)
        Lv = to_W_coords(gm, line_of_point(gm, v5).rows())
        L0 = to_W_coords(gm, pi0.rows())
        fib = FiberIdeal(ideal, basis, F, restricted, {"L0": L0, "Lv": Lv, "v": tuple(v5)})
        if not fib.contains_space(L0) or not fib.contains_space(Lv):
            raise IntegrityError("scroll fiber misses a ruling line")
        return fib
    if gm.n != 5:
        raise FiberError(f"scroll fibers are defined for n = 3 or 5, not {gm.n}", "dimension")
    ts = sigma_planes(gm, v5)
    if not ts.rational:
        raise FiberError("the planes over this point are conjugate, not rational", "inert")
    G = ts.field
    Pi_y = ts.spaces[sheet].space.rows()
    Pi0 = [list(r) for r in pi0]
    span = Subspace.span(G, Pi0 + Pi_y, gm.dim_W)
    if span.dim != 6:
        raise FiberError("the plane over v meets pi0", "planes_meet")
    basis = Pi0 + Pi_y
    ideal, restricted = _restricted_ideal(G, gm.plucker_forms, basis)
    fib = FiberIdeal(ideal, basis, G, restricted, {"Pi0": Pi0, "Pi_y": Pi_y, "v": tuple(v5)})
    if not fib.contains_space(Pi0) or not fib.contains_space(Pi_y):
        raise IntegrityError("scroll fiber misses one of its planes")
    return fib


@dataclass
class CycleReport:
    n: int
    v: tuple
    ok: bool
    checks: dict
    tables: dict
    failed: list

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "v": [str(x) for x in self.v],
            "ok": self.ok,
            "checks": self.checks,
            "hilbert": self.tables,
            "failed": self.failed,
        }


def _graded(ideal: HomogeneousIdeal, t: int) -> GradedIdeal:
    return ideal.truncate(t)


def _threefold_cycle(gm: GMInstance, L0: Subspace, v0p, v5, t_max: int) -> CycleReport:
    fib = scroll_fiber(gm, L0, v5, v0p)
    F = fib.field
    q0 = gm.q0.restrict(fib.basis)
    IC = fib.ideal + HomogeneousIdeal.from_forms(F, 5, quadrics=[q0.gram])
    IL = fib.linear_ideal_of(fib.meta["Lv"])
    C = _graded(IC, t_max + 1)
    L = _graded(IL, t_max + 1)
    Z = C.colon_linear([g_coeffs(F, g, 5) for g in IL.generators])
    ZL = Z + L
    inter = Z & L
    tables = {
        "C": C.hilbert_function(t_max),
        "Z": Z.hilbert_function(t_max),
        "L": L.hilbert_function(t_max),
        "Z_meet_L": ZL.hilbert_function(t_max),
    }
    hC, hZ, hL, hZL = (tables[k] for k in ("C", "Z", "L", "Z_meet_L"))
    checks = {
        "C_contains_Lv": IC.vanishes_on(fib.coords(fib.meta["Lv"])),
        "C_contains_L0": IC.vanishes_on(fib.coords(fib.meta["L0"])),
        "Z_contains_L0": Z.vanishes_on(fib.coords(fib.meta["L0"]), t_max),
        "C_is_Z_union_L": C.equals(inter, t_max),
        "additivity": all(hC[t] == hZ[t] + hL[t] - hZL[t] for t in range(t_max + 1)),
        "C_sextic": all(hC[t] == 6 * t - 1 for t in range(1, t_max + 1)) and hC[0] == 1,
        "Z_quintic": all(hZ[t] == 5 * t for t in range(1, t_max + 1)) and hZ[0] == 1,
        "Z_meet_L_length_2": all(hZL[t] == 2 for t in range(1, t_max + 1)),
    }
    failed = [k for k, ok in checks.items() if not ok]
    return CycleReport(3, tuple(v5), not failed, checks, tables, failed)


def _fivefold_cycle(gm: GMInstance, Pi0, v5, sheet: int, t_max: int) -> CycleReport:
    fib = scroll_fiber(gm, Pi0, v5, sheet=sheet)
    G = fib.field
    q0 = (gm.q0 if G is gm.field else _embed_form(gm.q0, G)).restrict(fib.basis)
    IS = fib.ideal + HomogeneousIdeal.from_forms(G, 6, quadrics=[q0.gram])
    I0 = fib.linear_ideal_of(fib.meta["Pi0"])
    Iy = fib.linear_ideal_of(fib.meta["Pi_y"])
    S = _graded(IS, t_max + 2)
    P0, Py = _graded(I0, t_max + 2), _graded(Iy, t_max + 2)
    Sp = S.colon_linear([g_coeffs(G, g, 6) for g in I0.generators])
    Sp = Sp.colon_linear([g_coeffs(G, g, 6) for g in Iy.generators])
    planes = P0 & Py
    tables = {
        "S": S.hilbert_function(t_max),
        "S_residual": Sp.hilbert_function(t_max),
        "planes": planes.hilbert_function(t_max),
        "residual_meet_Pi0": (Sp + P0).hilbert_function(t_max),
        "residual_meet_Pi_y": (Sp + Py).hilbert_function(t_max),
        "residual_meet_planes": (Sp + planes).hilbert_function(t_max),
    }
    hS, hR, hP = tables["S"], tables["S_residual"], tables["planes"]
    hRP = tables["residual_meet_planes"]
    rng = range(t_max + 1)
    checks = {
        "S_contains_Pi0": IS.vanishes_on(fib.coords(fib.meta["Pi0"])),
        "S_contains_Pi_y": IS.vanishes_on(fib.coords(fib.meta["Pi_y"])),
        "S_sextic_surface": all(hS[t] == 3 * t * t + 2 * t + 1 for t in rng),
        "residual_quartic_scroll": all(hR[t] == 2 * t * t + 3 * t + 1 for t in rng),
        "residual_has_no_Pi0": not Sp.vanishes_on(fib.coords(fib.meta["Pi0"]), t_max),
        "residual_has_no_Pi_y": not Sp.vanishes_on(fib.coords(fib.meta["Pi_y"]), t_max),
        "conic_on_Pi0": all(tables["residual_meet_Pi0"][t] == 2 * t + 1 for t in rng),
        "conic_on_Pi_y": all(tables["residual_meet_Pi_y"][t] == 2 * t + 1 for t in rng),
        "S_is_residual_union_planes": S.equals(Sp & planes, t_max),
        "additivity": all(hS[t] == hR[t] + hP[t] - hRP[t] for t in rng),
    }
    failed = [k for k, ok in checks.items() if not ok]
    return CycleReport(5, tuple(v5), not failed, checks, tables, failed)


def g_coeffs(field: Field, g: dict, n: int) -> list:
    """Coefficient list of a linear form stored as a polynomial dict."""
    out = [field.zero] * n
    for e, c in g.items():
        out[e.index(1)] = c
    return out


def cycle_decomposition_check(gm: GMInstance, pi0, v5, v0p=None, sheet: int = 0, t_max: int = 4) -> CycleReport:
    """Check the fiber of the quadric section at a boundary point splits as expected.

    Threefolds: C = scroll & Q0 is a sextic curve equal to the union of the
    residual quintic Z = (C : L_v) and the line L_v, with Z & L_v of length 2
    and L0 inside Z. Fivefolds: S = scroll & Q0 is the union of Pi0, Pi_y and
    a residual quartic scroll meeting each plane in a conic. Excluded points
    come back with ``failed = [reason]`` instead of raising.
    """
    F = gm.field
    v5 = [F.coerce(x) for x in v5]
    try:
        if gm.n == 3:
            return _threefold_cycle(gm, pi0, v0p, v5, t_max)
        return _fivefold_cycle(gm, pi0, v5, sheet, t_max)
    except FiberError as e:
        return CycleReport(gm.n, tuple(v5), False, {}, {}, [e.reason])


# -- the line transform -----------------------------------------------------------------------


class LineTransformError(ValueError):
    def __init__(self, message: str, condition: str):
        super().__init__(message)
        self.condition = condition


@dataclass(eq=False)
class LineTransformData:
    A: LagrangianInstance
    v1: tuple  # V6 vector spanning V1
    phi: tuple  # covector with kernel V5
    conditions: dict
    V3: Subspace  # V6 coordinates
    gm: GMInstance
    L0: Subspace  # bivector coordinates of V5
    nice: bool
    dual_A: LagrangianInstance
    dual_gm: GMInstance
    L0_dual: Subspace  # bivector coordinates of ker(v1) in the dual space
    dual_nice: bool
    L0_dual_expected: bool

    def dual(self) -> "LineTransformData":
        """Same construction on the dual side: (ann(A), phi, v1)."""
        return line_transform_data(self.dual_A, self.phi, self.v1)

    def to_json(self) -> dict:
        F = self.A.field
        fmt = lambda r: [F.format(x) for x in r]  # noqa: E731
        return {
            "v1": fmt(self.v1),
            "phi": fmt(self.phi),
            "conditions": self.conditions,
            "V3": [fmt(r) for r in self.V3.rows()],
            "L0": [fmt(r) for r in self.L0.rows()],
            "L0_nice": self.nice,
            "dual_point": fmt(self.phi),
            "dual_hyperplane": fmt(self.v1),
            "L0_dual": [fmt(r) for r in self.L0_dual.rows()],
            "L0_dual_nice": self.dual_nice,
            "L0_dual_is_phi_wedge_V3_perp": self.L0_dual_expected,
        }


def _v1_wedge_wedge2(F: Field, v1, V5) -> Subspace:
    rows = [ext.wedge_many(F, [list(v1), list(V5[a]), list(V5[b])]) for a, b in ext.basis(2, 5)]
    return Subspace.span(F, rows, 20)


def line_transform_data(A: LagrangianInstance, v1, phi) -> LineTransformData:
    """Data of the line L0 = P(V1 ^ V3) attached to a flag V1 in V5 = ker(phi).

    Requires [V1] of stratum 2, [V5] of dual stratum 2 and
    ``A & (V1 ^ wedge^2 V5) = 0``. The dual side is built from ann(A) with
    the roles of V1 and V5 exchanged.
    """
    F = A.field
    v1 = tuple(F.coerce(x) for x in v1)
    phi = tuple(F.coerce(x) for x in phi)
    if all(F.is_zero(x) for x in v1) or all(F.is_zero(x) for x in phi):
        raise LineTransformError("V1 and V5 need nonzero generators", "nonzero")
    if not F.is_zero(F.dot(v1, phi)):
        raise LineTransformError("V1 is not contained in V5", "incidence")
    k1 = stratum_of(A, v1)
    k5 = dual_stratum_of(A, phi)
    gm = build_gm(A, phi)
    transverse = A.A.intersect(_v1_wedge_wedge2(F, v1, gm.V5)).dim == 0
    conditions = {"V1_stratum_2": k1 == 2, "V5_dual_stratum_2": k5 == 2, "transverse": transverse}
    for name, ok in conditions.items():
        if not ok:
            raise LineTransformError(f"condition {name} fails (strata {k1}, {k5})", name)
    u1 = gm.v5_coords(v1)
    L0 = vV5_in_W(gm, u1)
    if L0.dim != 2:
        raise LineTransformError(f"dim(W & (V1 ^ V5)) = {L0.dim}, expected 2", "dimension")
    # V3 = {x in V5 : v1 ^ x in L0}
    ann = L0.annihilator().rows()
    img = wedge_vec_V5(F, u1)
    K = kernel(F, transpose(matmul(F, img, transpose(ann))), 5)
    if K.dim != 3:
        raise LineTransformError(f"dim V3 = {K.dim}, expected 3", "V3")
    V3 = Subspace.span(F, [gm.from_v5(r) for r in K.rows()], 6)
    if tuple(sigma_of_line(gm, L0)) != tuple(normalize(F, list(u1))):
        raise IntegrityError("sigma(L0) differs from V1")
    nice = is_nice(gm, L0)
    if nice == in_sigma1(gm, u1):
        raise IntegrityError("niceness of L0 disagrees with Sigma_1 membership of V1")

    dA = dual(A).as_lagrangian()
    dgm = build_gm(dA, v1)
    w1 = dgm.v5_coords(phi)
    L0d = vV5_in_W(dgm, w1)
    V3perp = V3.annihilator().rows()
    expected = Subspace.span(
        F, [ext.wedge_coeffs(F, w1, 1, dgm.v5_coords(y), 1, 5) for y in V3perp], 10
    )
    dual_nice = is_nice(dgm, L0d) if L0d.dim == 2 else False
    return LineTransformData(
        A, v1, phi, conditions, V3, gm, L0, nice, dA, dgm, L0d, dual_nice, L0d == expected
    )

