"""EPW strata of a Lagrangian A, their dual counterparts, and the sextic.

The stratum of a point [v] of P(V6) is ``dim(A & F_v)`` with
``F_v = v ^ (degree-2 piece)``. It is computed two ways: by subspace
intersection and as ``10 - rank`` of the matrix ``omega(a_i, v ^ f_j)``.
The second form is linear in v, which is what the batched scans use.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from . import exterior as ext
from . import kernels, poly, projective
from .fields import Field, make_field
from .lagrangian import LagrangianInstance, dual
from .linalg import Subspace, det, rank
from .parallel import pmap

WITNESS_CAP = 32


class IntegrityError(RuntimeError):
    """Two computations that must agree did not."""


class FieldTooSmall(ValueError):
    pass


class ChartDegeneration(ArithmeticError):
    pass


def _rows(A) -> list:
    if isinstance(A, LagrangianInstance):
        return A.rows()
    if isinstance(A, Subspace):
        return A.rows()
    return [list(r) for r in A]


def _field_of(A) -> Field:
    return A.field


def pairing_matrix_at(field: Field, rows, v) -> list:
    """``M(v)[i][j] = omega(a_i, v ^ f_j)``, a 10 x 15 matrix."""
    return ext.pairing_matrix(field, rows, ext.wedge_map_matrix(field, v))


def stratum_of(A, v) -> int:
    """``dim(A & F_v)``, checked against ``10 - rank M(v)``."""
    F = _field_of(A)
    v = [F.coerce(x) for x in v]
    Asub = A.A if isinstance(A, LagrangianInstance) else A
    k1 = Asub.intersect(ext.wedge_map_image(F, v)).dim
    k2 = 10 - rank(F, pairing_matrix_at(F, Asub.rows(), v))
    if k1 != k2:
        raise IntegrityError(f"stratum paths disagree at {v}: {k1} vs {k2}")
    return k1


def pairing_tensor(field: Field, rows) -> np.ndarray:
    """``Mc[c]`` with ``M(v) = sum_c v_c Mc[c]``; int64 array (6, 10, 15) over a prime field."""
    mats = []
    for c in range(6):
        e = [field.zero] * 6
        e[c] = field.one
        mats.append(pairing_matrix_at(field, rows, e))
    return np.array(mats, dtype=np.int64)


def batch_strata(Mc: np.ndarray, points: np.ndarray, p: int) -> np.ndarray:
    """Strata of a batch of points (N, 6) from the pairing tensor."""
    N = points.shape[0]
    M = (points @ Mc.reshape(6, -1)) % p
    return 10 - kernels.batch_rank_mod_p(M.reshape(N, 10, 15), p)


@dataclass
class StratificationReport:
    field: str
    instance: str
    counts: dict
    witnesses: dict
    exhaustive: bool
    points: int
    dual: bool = False
    elapsed: float = 0.0
    extra: dict = dc_field(default_factory=dict)

    def count_at_least(self, k: int) -> int:
        return sum(c for kk, c in self.counts.items() if kk >= k)

    def to_json(self, field: Field, timing: bool = False) -> dict:
        out = {
            "field": self.field,
            "instance": self.instance,
            "space": "dual" if self.dual else "primal",
            "exhaustive": self.exhaustive,
            "points": self.points,
            "counts": {str(k): self.counts[k] for k in sorted(self.counts)},
            "witnesses": {
                str(k): [[field.format(x) for x in w] for w in self.witnesses[k]] for k in sorted(self.witnesses)
            },
        }
        out.update(self.extra)
        if timing:
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out


def _strat_task(args):
    Mc, p, start, stop, cap = args
    counts: dict = {}
    wit: dict = {}
    for s in range(start, stop, 1 << 15):
        pts = projective.points_range(p, 6, s, min(stop, s + (1 << 15)))
        ks = batch_strata(Mc, pts, p)
        vals, cnt = np.unique(ks, return_counts=True)
        for k, c in zip(vals.tolist(), cnt.tolist()):
            counts[k] = counts.get(k, 0) + c
            if len(wit.setdefault(k, [])) < cap:
                idx = np.nonzero(ks == k)[0][: cap - len(wit[k])]
                wit[k].extend(pts[idx].tolist())
    return counts, wit


def _merge(parts, cap):
    counts: dict = {}
    wit: dict = {}
    for c, w in parts:  # parts arrive in rank order
        for k, n in c.items():
            counts[k] = counts.get(k, 0) + n
        for k, lst in w.items():
            slot = wit.setdefault(k, [])
            slot.extend(lst[: cap - len(slot)])
    return counts, wit


def _stratify_rows(rows, field: Field, jobs: int, cap: int, label: str, is_dual: bool) -> StratificationReport:
    if field.kind != "prime":
        raise ValueError("stratify enumerates points over a prime field")
    p = field.p
    t0 = time.perf_counter()
    Mc = pairing_tensor(field, rows)
    total = projective.count(p, 6)
    tasks = [(Mc, p, s, t, cap) for s, t in projective.split_ranges(total, max(1, jobs))]
    counts, wit = _merge(pmap(_strat_task, tasks, jobs), cap)
    if sum(counts.values()) != total:
        raise IntegrityError("point count mismatch in stratification")
    return StratificationReport(
        field=field.spec(), instance=label, counts=counts, witnesses=wit, exhaustive=True,
        points=total, dual=is_dual, elapsed=time.perf_counter() - t0,
    )


def stratify(A: LagrangianInstance, jobs: int = 1, cap: int = WITNESS_CAP, label: str = "") -> StratificationReport:
    """Stratum of every point of P(V6) over the instance's prime field."""
    return _stratify_rows(A.rows(), A.field, jobs, cap, label, False)


def dual_stratum_of(A: LagrangianInstance, phi) -> int:
    """``dim(A & wedge^3 ker phi)``, checked against the stratum of the annihilator at phi."""
    F = A.field
    phi = [F.coerce(x) for x in phi]
    l1 = A.A.intersect(ext.wedge3_of_hyperplane(F, phi)).dim
    l2 = stratum_of(dual(A).ann, phi)
    if l1 != l2:
        raise IntegrityError(f"dual stratum paths disagree at {phi}: {l1} vs {l2}")
    return l1


def dual_stratify(A: LagrangianInstance, jobs: int = 1, cap: int = WITNESS_CAP, label: str = "") -> StratificationReport:
    """Dual strata over P(V6^dual), using ``dim(A & wedge^3 ker phi) = dim(ann(A) & F_phi)``."""
    return _stratify_rows(dual(A).ann.rows(), A.field, jobs, cap, label, True)


# -- hyperplane slices ----------------------------------------------------------


@dataclass(frozen=True)
class StratumPoint:
    point: tuple
    k: int


def normalize_batch(V: np.ndarray, p: int) -> np.ndarray:
    """Scale each row so its first nonzero entry is 1."""
    V = V % p
    first = np.argmax(V != 0, axis=1)
    lead = V[np.arange(V.shape[0]), first]
    inv = np.array([pow(int(x), p - 2, p) for x in range(p)], dtype=np.int64)
    return V * inv[lead][:, None] % p


def hyperplane_points(field: Field, phi) -> np.ndarray:
    """All points of P(ker phi) over a prime field, as normalized V6 vectors."""
    p = field.p
    U = np.array(ext.hyperplane_basis(field, phi), dtype=np.int64)
    C = projective.points_range(p, 5, 0, projective.count(p, 5))
    return normalize_batch(C @ U, p)


def hyperplane_slice(A: LagrangianInstance, phi) -> list[StratumPoint]:
    """Strata of the points of P(V5), V5 = ker phi, over a prime field."""
    F = A.field
    pts = hyperplane_points(F, phi)
    ks = batch_strata(pairing_tensor(F, A.rows()), pts, F.p)
    return [StratumPoint(tuple(v), int(k)) for v, k in zip(pts.tolist(), ks.tolist())]


# -- the sextic -------------------------------------------------------------------


@dataclass
class SexticOnLine:
    field: Field
    v0: tuple
    v1: tuple
    chart: int
    coeffs: list  # s(t), lowest degree first
    determinant: list

    @property
    def degree(self) -> int:
        return poly.degree(self.field, self.coeffs)

    def point(self, t) -> list:
        F = self.field
        return [F.add(a, F.mul(t, b)) for a, b in zip(self.v0, self.v1)]

    def to_json(self) -> dict:
        F = self.field
        return {
            "v0": [F.format(x) for x in self.v0],
            "v1": [F.format(x) for x in self.v1],
            "chart": self.chart,
            "degree": self.degree,
            "coefficients": poly.format_poly(F, self.coeffs),
        }


@lru_cache(maxsize=None)
def _chart_bivectors(c: int) -> tuple:
    """Basis ``eta_j`` of the degree-2 piece of ``<e_i : i != c>``, as index pairs."""
    return tuple(J for J in ext.basis(2) if c not in J)


def _chart_matrix(field: Field, rows, v, c: int) -> list:
    etas = [ext.wedge_coeffs(field, v, 1, ext.unit(field, J), 2) for J in _chart_bivectors(c)]
    return ext.pairing_matrix(field, rows, etas)


def sextic_on_line(A: LagrangianInstance, v0, v1, chart: int | None = None, allow_extension: bool = False) -> SexticOnLine:
    """Equation of the EPW sextic restricted to the line through v0 and v1.

    With ``v(t) = v0 + t v1`` and ``l(t)`` its chart coordinate, the
    determinant of ``omega(a_i, v(t) ^ eta_j)`` has degree at most 10 and is
    divisible by ``l(t)^4``; the quotient is returned.
    """
    F = A.field
    v0 = [F.coerce(x) for x in v0]
    v1 = [F.coerce(x) for x in v1]
    if rank(F, [v0, v1]) != 2:
        raise ValueError("sextic_on_line needs two independent points")
    if chart is None:
        chart = next(i for i in range(6) if not (F.is_zero(v0[i]) and F.is_zero(v1[i])))
    elif F.is_zero(v0[chart]) and F.is_zero(v1[chart]):
        raise ChartDegeneration(f"chart coordinate {chart} vanishes identically on the line")
    G, emb = F, (lambda x: x)
    if F.is_finite and F.order < 11:
        if not allow_extension or F.kind != "prime":
            raise FieldTooSmall(f"{F.spec()} has fewer than 11 elements; use the quadratic extension")
        G = make_field("prime_square", F.p)
        emb = lambda x: (x, 0)  # noqa: E731
    rows = [[emb(x) for x in r] for r in A.rows()]
    w0, w1 = [emb(x) for x in v0], [emb(x) for x in v1]
    ts = sorted(G.elements(), key=G.sort_key)[:11] if G.is_finite else [G.coerce(i) for i in range(11)]
    vals = []
    for t in ts:
        vt = [G.add(a, G.mul(t, b)) for a, b in zip(w0, w1)]
        vals.append(det(G, _chart_matrix(G, rows, vt, chart)))
    D = poly.interpolate(G, ts, vals)
    ell = [w0[chart], w1[chart]]
    q, r = poly.divmod_poly(G, D, poly.power(G, poly.trim(G, ell), 4))
    if r:
        raise ChartDegeneration("determinant is not divisible by the fourth power of the chart coordinate")
    if G is not F:
        q = [c[0] for c in q]
        D = [c[0] for c in D]
    return SexticOnLine(F, tuple(v0), tuple(v1), chart, q, D)


def sextic_roots(s: SexticOnLine) -> list:
    return poly.roots(s.field, s.coeffs) if poly.degree(s.field, s.coeffs) >= 0 else list(s.field.elements())
