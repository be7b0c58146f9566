"""The acceptance battery.

Each criterion is a function ``(params) -> (passed, detail)``; :func:`run`
times it against its budget. ``full`` uses the stated sizes, ``quick`` the
small fields and a handful of samples. Scenario searches are cached so
criteria sharing an instance do not repeat the search.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

from . import exterior as ext
from . import projective
from .correspondences import cycle_decomposition_check, z_fiber
from .epw import sextic_on_line, sextic_roots, stratify, stratum_of
from .fields import GF, FieldSpec
from .gm import build_gm, hilbert_polynomial, plucker_quadric, quadric_at
from .lagrangian import (
    decomposable_search,
    dual_identity_holds,
    graph_lagrangian,
    make_rng,
    random_instance,
    random_symmetric,
    validate_lagrangian,
)
from .linalg import Subspace, matmul, rank
from .quadric_fibers import (
    _embed_form,
    _embed_rows,
    admissibility,
    double_cover_fiber,
    rho1_fiber_classify,
    splitting_section,
    to_W_coords,
)
from .scenarios import (
    dual_points_with_stratum,
    fivefold_data,
    line_transform_fixture,
    points_with_stratum,
    split_points,
    threefold_data,
)

TITLES = {
    1: "sextic degree on lines",
    2: "empty fourth stratum",
    3: "kernel formula",
    4: "Plücker affine-linearity",
    5: "Hilbert tables of Z fibers",
    6: "fiber tables of the first quadratic fibration",
    7: "double-cover fibers",
    8: "splitting section",
    9: "cycle decomposition",
    10: "line-transform duality",
    11: "property suites and determinism",
}

BUDGETS = {1: 30, 2: 120, 3: 20, 4: 10, 5: 60, 6: 30, 7: 30, 8: 20, 9: 60, 10: 10, 11: 180}

LEVELS = {
    "full": {
        1: {"q": 13, "instances": 20, "lines": 5, "ndv_sample": 20000},
        2: {"q": 11, "instances": 10, "ndv_sample": 1_000_000},
        3: {"samples": 200},
        4: {"samples": 100},
        5: {"fibers": 10},
        6: {"q": 5},
        7: {"points": 50},
        8: {},
        9: {"points": 10},
        10: {"q": 11},
        11: {"cases": 100, "fields": ("F7", "F11", "F13", "F49", "Q")},
    },
    "quick": {
        1: {"q": 5, "instances": 2, "lines": 5, "ndv_sample": 2000},
        2: {"q": 3, "instances": 10, "ndv_sample": 0},
        3: {"samples": 10},
        4: {"samples": 10},
        5: {"fibers": 2},
        6: {"q": 5},
        7: {"points": 10},
        8: {},
        9: {"points": 2},
        10: {"q": 11},
        11: {"cases": 10, "fields": ("F3", "F5", "F25", "Q")},
    },
}

# scenario sizes: threefold data over F_13, fivefold data over F_11 (enough admissible points)
THREEFOLD_Q = 13
FIVEFOLD_Q = 11


@dataclass
class CriterionResult:
    id: int
    title: str
    passed: bool
    detail: dict
    elapsed: float
    budget: float

    @property
    def within_budget(self) -> bool:
        return self.elapsed <= self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.within_budget

    def line(self, level: str = "full") -> str:
        status = "PASS" if self.ok else "FAIL"
        out = f"[{status}] {self.id:2d} {self.title} ({self.elapsed:.1f}s / {self.budget}s)"
        if not self.ok:
            why = "over budget" if self.passed else "check failed"
            out += f" {why}; replay: epwkit verify --level {level} --only {self.id}"
        return out

    def to_json(self, timing: bool = False) -> dict:
        out = {"id": self.id, "title": self.title, "passed": self.passed, "detail": self.detail, "budget_seconds": self.budget}
        if timing:
            out["elapsed_seconds"] = round(self.elapsed, 3)
            out["within_budget"] = self.within_budget
        return out


@lru_cache(maxsize=None)
def threefold(q: int = THREEFOLD_Q, min_admissible: int = 10):
    return threefold_data(q, 0, min_admissible=min_admissible)


@lru_cache(maxsize=None)
def fivefold(q: int = FIVEFOLD_Q, min_split: int = 10):
    return fivefold_data(q, 0, min_split=min_split)


def _random_vector(F, rng, n=6):
    while True:
        v = [F.random(rng) for _ in range(n)]
        if any(not F.is_zero(x) for x in v):
            return v


def _off_v5(gm, rng):
    F = gm.field
    while True:
        v = _random_vector(F, rng)
        if not F.is_zero(F.dot(v, gm.phi)):
            return v


# -- criteria ---------------------------------------------------------------------------------


def c1_sextic(q, instances, lines, ndv_sample):
    F = GF(q)
    rng = make_rng(1)
    degrees, mismatches, scanned = [], 0, 0
    for seed in range(instances):
        A, w = decomposable_search(random_instance(seed, F), 1, sample=ndv_sample, seed=seed)
        scanned += 1
        if w is not None:
            return False, {"error": f"seed {seed} has a decomposable vector"}
        for _ in range(lines):
            v0 = _random_vector(F, rng)
            while True:
                v1 = _random_vector(F, rng)
                if rank(F, [v0, v1]) == 2 and stratum_of(A, v1) == 0:
                    break
            s = sextic_on_line(A, v0, v1, allow_extension=q < 11)
            degrees.append(s.degree)
            roots = set(sextic_roots(s))
            for t in F.elements():
                on = stratum_of(A, s.point(t)) >= 1
                if on != (t in roots):
                    mismatches += 1
    ok = all(d == 6 for d in degrees) and mismatches == 0
    return ok, {"field": F.spec(), "instances": scanned, "lines": len(degrees),
                "degrees": sorted(set(degrees)), "root_mismatches": mismatches}


def c2_fourth_stratum(q, instances, ndv_sample):
    F = GF(q)
    counts, used, seed = [], 0, 0
    while used < instances:
        kw = {"sample": ndv_sample} if ndv_sample else {}
        A, w = decomposable_search(random_instance(seed, F), 1, seed=seed, **kw)
        seed += 1
        if w is not None:
            continue
        rep = stratify(A)
        counts.append({str(k): rep.counts[k] for k in sorted(rep.counts)})
        used += 1
    bad = sum(int(k) >= 4 and c > 0 for row in counts for k, c in row.items())
    return bad == 0, {"field": F.spec(), "instances": used, "seeds_tried": seed, "counts": counts}


def _gm_instances():
    d3, d5 = threefold(), fivefold()
    F13 = GF(13)
    A = random_instance(1, F13)
    g5b = build_gm(A, dual_points_with_stratum(A, 0, limit=1)[0])
    return [d3.gm, d5.gm, g5b]


def c3_kernel_formula(samples):
    rng = make_rng(3)
    bad, tally = 0, {}
    for gm in _gm_instances():
        for _ in range(samples):
            v = _off_v5(gm, rng)
            k, r = stratum_of(gm.lag, v), quadric_at(gm, v).corank
            tally[k] = tally.get(k, 0) + 1
            bad += k != r
    return bad == 0, {"mismatches": bad, "strata_seen": {str(k): tally[k] for k in sorted(tally)}}


def c4_affine_linearity(samples):
    rng = make_rng(4)
    bad = 0
    for gm in _gm_instances():
        F = gm.field
        base = quadric_at(gm, gm.v0)
        for _ in range(samples):
            u = gm.from_v5([F.random(rng) for _ in range(5)])
            if all(F.is_zero(x) for x in u):
                continue
            v = [F.add(a, b) for a, b in zip(gm.v0, u)]
            bad += (quadric_at(gm, v) - base).gram != plucker_quadric(gm, u).gram
    return bad == 0, {"mismatches": bad}


def _stratum2_off_v5(gm, limit):
    F = gm.field
    out = []
    for p in points_with_stratum(gm.lag, 2):
        if not F.is_zero(gm.split(p)[0]):
            out.append(p)
            if len(out) >= limit:
                break
    return out


def c5_hilbert(fibers):
    out, ok = {}, True
    for name, data, base, h in (("threefold", threefold(), None, 11), ("fivefold", fivefold(), None, 10)):
        gm = data.gm
        base = to_W_coords(gm, data.L0.rows()) if name == "threefold" else [list(r) for r in data.Pi0]
        t_max = 5
        predicted = list(hilbert_polynomial(h, 0, t_max).table)
        tables = []
        for v in _stratum2_off_v5(gm, 10 * fibers):
            for sheet in (0, 1):
                z = z_fiber(gm, base, v, sheet)
                if z.field is not gm.field:
                    break  # inert: the sheets are conjugate
                tables.append(z.hilbert_function(t_max))
                break
            if len(tables) >= fibers:
                break
        ok &= len(tables) >= fibers and all(t == predicted for t in tables)
        out[name] = {"fibers": len(tables), "predicted": predicted, "tables": sorted(set(map(tuple, tables)))}
    return ok, out


def c6_fiber_tables(q):
    out, ok = {}, True
    d3 = threefold_data(q, 0)
    d5 = fivefold_data(q, 0, need_plane=False)
    for name, gm in (("threefold", d3.gm), ("fivefold", d5.gm)):
        pts = projective.points_range(q, 5, 0, projective.count(q, 5)).tolist()
        labels, bad = {}, 0
        for v in pts:
            c = rho1_fiber_classify(gm, v)
            labels[c.label] = labels.get(c.label, 0) + 1
            bad += not c.consistent
        ok &= bad == 0
        out[name] = {"points": len(pts), "inconsistent": bad, "labels": dict(sorted(labels.items()))}
    return ok, out


def c7_double_cover(points):
    out, ok, kinds_all = {}, True, set()
    for name, data in (("threefold", threefold()), ("fivefold", fivefold())):
        gm = data.gm
        base = to_W_coords(gm, data.L0.rows()) if name == "threefold" else [list(r) for r in data.Pi0]
        kinds, bad, n = {}, 0, 0
        for v in _stratum2_off_v5(gm, points):
            ts = double_cover_fiber(gm, base, v)
            G = ts.field
            b = base if G is gm.field else _embed_rows(base, G)
            q = quadric_at(gm, v)
            qG = q if G is gm.field else _embed_form(q, G)
            good = ts.count_with_multiplicity == 2 and len(ts.spaces) in (1, 2)
            for sp in ts.spaces:
                good &= sp.dim == gm.dim_W // 2 + 1 and qG.vanishes_on(sp.space.rows())
                good &= Subspace.span(G, b, gm.dim_W).is_subspace_of(sp.space)
            bad += not good
            kinds[ts.kind] = kinds.get(ts.kind, 0) + 1
            n += 1
        kinds_all |= set(kinds)
        ok &= bad == 0 and n >= points
        out[name] = {"points": n, "failures": bad, "kinds": dict(sorted(kinds.items()))}
    ok &= {"split", "inert"} <= kinds_all
    return ok, out


def c8_splitting():
    d = threefold()
    gm = d.gm
    n, bad, excluded = 0, 0, {}
    for v in d.boundary:
        why = admissibility(gm, d.v0p, v)
        if why is not None:
            excluded[why] = excluded.get(why, 0) + 1
            continue
        s = splitting_section(gm, d.L0, d.v0p, v)
        n += 1
        bad += not (s.space.dim == 5 and s.contains_L0 and s.isotropic)
    return bad == 0 and n > 0, {"field": gm.field.spec(), "boundary": len(d.boundary), "admissible": n,
                                "failures": bad, "excluded": dict(sorted(excluded.items()))}


def c9_cycles(points):
    out, ok = {}, True
    d = threefold()
    reps = []
    for v in d.boundary:
        if admissibility(d.gm, d.v0p, v) is None:
            reps.append(cycle_decomposition_check(d.gm, d.L0, v, d.v0p))
            if len(reps) >= points:
                break
    ok &= len(reps) >= points and all(r.ok for r in reps)
    out["threefold"] = {"points": len(reps), "failed": [r.failed for r in reps if not r.ok],
                        "tables": reps[0].tables if reps else {}}
    f = fivefold()
    reps = []
    for v in split_points(f.gm, f.Pi0, f.boundary)[:points]:
        reps.append(cycle_decomposition_check(f.gm, f.Pi0, v, sheet=0))
    ok &= len(reps) >= points and all(r.ok for r in reps)
    out["fivefold"] = {"points": len(reps), "failed": [r.failed for r in reps if not r.ok],
                       "tables": reps[0].tables if reps else {}}
    return ok, out


def c10_line_transform(q):
    lt = line_transform_fixture(q)
    d = lt.dual()
    dd = d.dual()
    checks = {
        "conditions": all(lt.conditions.values()),
        "dim_V3_is_3": lt.V3.dim == 3,
        "L0_nice": lt.nice,
        "dual_L0_nice": lt.dual_nice,
        "dual_line_is_phi_wedge_V3_perp": lt.L0_dual_expected,
        "double_annihilator": dd.A.A == lt.A.A,
        "involution_points": dd.v1 == lt.v1 and dd.phi == lt.phi,
        "involution_lines": dd.L0 == lt.L0 and d.L0 == lt.L0_dual,
    }
    return all(checks.values()), {"checks": checks, "v1": [str(x) for x in lt.v1], "phi": [str(x) for x in lt.phi]}


def _properties(spec: str, cases: int, rng) -> dict:
    """Randomized module invariants over one field; returns failure counts."""
    F = FieldSpec.parse(spec).field
    fails = {}

    def bump(k, bad):
        fails[k] = fails.get(k, 0) + int(bad)

    Om = ext.omega_gram(F)
    I20 = [[F.neg(F.one) if i == j else F.zero for j in range(20)] for i in range(20)]
    bump("omega_squared", matmul(F, Om, Om) != I20)
    lags = max(1, cases // 10)
    for _ in range(lags):
        inst = graph_lagrangian(F, random_symmetric(F, rng))
        bump("graph_is_lagrangian", not validate_lagrangian(inst.A))
        bump("dual_identity", not dual_identity_holds(inst))
        for _ in range(max(1, cases // lags // 4)):
            stratum_of(inst, _random_vector(F, rng))  # raises on disagreement of the two paths
    for _ in range(cases):
        a = [F.random(rng) for _ in range(20)]
        b = [F.random(rng) for _ in range(20)]
        bump("omega_alternating", ext.symplectic_pairing(a, b, F) != F.neg(ext.symplectic_pairing(b, a, F)))
        u, v, w = (_random_vector(F, rng) for _ in range(3))
        uv = ext.wedge_coeffs(F, u, 1, v, 1)
        bump("wedge_anticommutes", [F.neg(x) for x in uv] != ext.wedge_coeffs(F, v, 1, u, 1))
        bump("wedge_associates", ext.wedge_coeffs(F, uv, 2, w, 1) != ext.wedge_coeffs(F, u, 1, ext.wedge_coeffs(F, v, 1, w, 1), 2))
        ok, K = ext.is_decomposable(F, ext.wedge_many(F, [u, v, w]))
        bump("decomposable_detected", rank(F, [u, v, w]) == 3 and not ok)
        rows = [[F.random(rng) for _ in range(6)] for _ in range(3)]
        mix = [[F.add(r[i], F.mul(F.random(rng), rows[(k + 1) % 3][i])) for i in range(6)] for k, r in enumerate(rows)]
        S1, S2 = Subspace.span(F, rows, 6), Subspace.span(F, rows + mix, 6)
        bump("rref_canonical", S1 != Subspace.span(F, list(reversed(rows)), 6) or not S1.is_subspace_of(S2))
    if F.kind == "prime" and F.p >= 7:
        A = random_instance(int(rng.integers(1 << 30)), F)
        phis = dual_points_with_stratum(A, 0, limit=1)
        gm = build_gm(A, phis[0])
        for _ in range(max(1, cases // 10)):
            v = _off_v5(gm, rng)
            q = quadric_at(gm, v)
            bump("kernel_formula", q.corank != stratum_of(A, v))
    return fails


def c11_properties(cases, fields):
    rng = make_rng(11)
    res = {spec: _properties(spec, cases, rng) for spec in fields}
    ok = all(v == 0 for r in res.values() for v in r.values())
    det = determinism_check()
    ok &= all(det.values())
    return ok, {"failures": res, "cases_per_field": cases, "determinism": det}


def determinism_check() -> dict:
    from .cli import determinism_check as run_check  # the CLI imports this module

    return run_check()


CRITERIA = {
    1: c1_sextic,
    2: c2_fourth_stratum,
    3: c3_kernel_formula,
    4: c4_affine_linearity,
    5: c5_hilbert,
    6: c6_fiber_tables,
    7: c7_double_cover,
    8: c8_splitting,
    9: c9_cycles,
    10: c10_line_transform,
    11: c11_properties,
}


def run(cid: int, level: str = "full") -> CriterionResult:
    params = LEVELS[level][cid]
    t0 = time.perf_counter()
    try:
        passed, detail = CRITERIA[cid](**params)
    except Exception as e:  # a crash is a failed criterion, reported with its cause
        passed, detail = False, {"error": f"{type(e).__name__}: {e}"}
    return CriterionResult(cid, TITLES[cid], bool(passed), detail, time.perf_counter() - t0, BUDGETS[cid])


def verify_suite(level: str = "quick", only=None) -> list[CriterionResult]:
    ids = sorted(CRITERIA) if not only else sorted(only)
    return [run(i, level) for i in ids]
