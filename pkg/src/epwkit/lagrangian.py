"""Lagrangian subspaces A of the degree-3 piece (dimension 20) of V6.

Instances come from the graph chart over the splitting ``L + L'`` where
``L = e_0 ^ (degree-2 piece of <e_1..e_5>)`` and ``L'`` is spanned by the
``e_ijk`` avoiding index 0. Both are Lagrangian and paired perfectly by the
symplectic form, so every symmetric 10 x 10 matrix gives a Lagrangian graph.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field, replace
from functools import lru_cache

import numpy as np

from . import exterior as ext
from . import kernels, projective
from .fields import Field, FieldSpec, make_field, spec_of
from .linalg import DimensionError, Subspace, inverse, matmul
from .parallel import pmap

NDV_STATUSES = ("verified_over_field", "witness_found", "unknown")
REDUCTION_PRIMES = (7, 11, 13)
DEFAULT_BUDGET = 2_000_000
DEFAULT_SAMPLE = 1_000_000


class LagrangianError(ValueError):
    pass


class BudgetExceeded(LagrangianError):
    """Exhaustive enumeration would visit more points than allowed."""

    def __init__(self, size: int, budget: int, level: int):
        super().__init__(
            f"P(A) over the degree-{level} extension has {size} points, over the budget of {budget}"
        )
        self.size, self.budget, self.level = size, budget, level


@lru_cache(maxsize=None)
def chart_indices() -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Positions (in the degree-3 basis) of the basis vectors of L and L'."""
    B = ext.basis(3)
    Lx = tuple(i for i, I in enumerate(B) if 0 in I)
    Ly = tuple(i for i, I in enumerate(B) if 0 not in I)
    return Lx, Ly


def _chart_pairing(field: Field) -> list:
    """``P[i][k] = omega(x_i, y_k)`` for the bases of L and L' (a signed permutation)."""
    Lx, Ly = chart_indices()
    O = ext._omega_int()
    return [[field.coerce(O[i][k]) for k in Ly] for i in Lx]


def coordinate_L(field: Field) -> Subspace:
    Lx, _ = chart_indices()
    rows = []
    for i in Lx:
        r = [field.zero] * 20
        r[i] = field.one
        rows.append(r)
    return Subspace.span(field, rows, 20)


def coordinate_L_prime(field: Field) -> Subspace:
    _, Ly = chart_indices()
    rows = []
    for i in Ly:
        r = [field.zero] * 20
        r[i] = field.one
        rows.append(r)
    return Subspace.span(field, rows, 20)


@dataclass(frozen=True)
class LagrangianInstance:
    """A 10-dimensional subspace of the degree-3 piece with validity flags."""

    field: Field
    A: Subspace
    is_lagrangian: bool = False
    ndv_status: str = "unknown"
    provenance: dict = dc_field(default_factory=dict, compare=False)
    scan: dict = dc_field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.A.dim != 10 or self.A.ambient != 20:
            raise DimensionError(f"a Lagrangian needs dimension 10 in 20, got {self.A.dim} in {self.A.ambient}")
        if self.ndv_status not in NDV_STATUSES:
            raise LagrangianError(f"unknown ndv status {self.ndv_status!r}")

    @property
    def fs(self) -> FieldSpec:
        return spec_of(self.field)

    def rows(self) -> list:
        return self.A.rows()

    @classmethod
    def from_subspace(cls, A: Subspace, **kw) -> "LagrangianInstance":
        return cls(A.field, A, is_lagrangian=validate_lagrangian(A), **kw)


@dataclass(frozen=True)
class DualLagrangian:
    """Annihilator of A inside the dual space, written in the dual basis ``e*_I``."""

    field: Field
    ann: Subspace

    def omega_identification(self) -> Subspace:
        """Image under the inverse of ``a -> omega(a, .)``.

        For a Lagrangian A this is A itself.
        """
        F = self.field
        rows = matmul(F, self.ann.rows(), [[F.neg(x) for x in r] for r in ext.omega_gram(F)])
        return Subspace.span(F, rows, 20)

    def as_lagrangian(self) -> LagrangianInstance:
        """The annihilator viewed in the dual symplectic space (same combinatorics)."""
        return LagrangianInstance.from_subspace(self.ann, provenance={"source": "annihilator"})


def graph_lagrangian(field: Field, m, provenance: dict | None = None) -> LagrangianInstance:
    """Graph of the symmetric matrix ``m`` over the chart splitting ``L + L'``."""
    F = field
    m = [[F.coerce(x) for x in r] for r in m]
    if len(m) != 10 or any(len(r) != 10 for r in m):
        raise DimensionError("graph_lagrangian needs a 10 x 10 matrix")
    if any(m[i][j] != m[j][i] for i in range(10) for j in range(i)):
        raise LagrangianError("graph_lagrangian needs a symmetric matrix")
    Lx, Ly = chart_indices()
    T = matmul(F, inverse(F, _chart_pairing(F)), m)
    rows = []
    for j in range(10):
        r = [F.zero] * 20
        r[Lx[j]] = F.one
        for k in range(10):
            r[Ly[k]] = T[k][j]
        rows.append(r)
    A = Subspace.span(F, rows, 20)
    return LagrangianInstance(F, A, is_lagrangian=validate_lagrangian(A), provenance=dict(provenance or {}))


def validate_lagrangian(A: Subspace) -> bool:
    """True iff the symplectic form vanishes identically on A."""
    if A.dim != 10 or A.ambient != 20:
        raise DimensionError(f"expected a 10-dimensional subspace of a 20-dimensional space, got {A.dim}")
    return ext.is_isotropic(A.field, A.rows())


def dual(inst: LagrangianInstance) -> DualLagrangian:
    if not inst.is_lagrangian:
        raise LagrangianError("dual() needs a validated Lagrangian")
    return DualLagrangian(inst.field, inst.A.annihilator())


def dual_identity_holds(inst: LagrangianInstance) -> bool:
    return dual(inst).omega_identification() == inst.A


def random_symmetric(field: Field, rng) -> list:
    m = [[field.zero] * 10 for _ in range(10)]
    for i in range(10):
        for j in range(i, 10):
            m[i][j] = m[j][i] = field.random(rng)
    return m


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_instance(seed: int, fs: FieldSpec | Field) -> LagrangianInstance:
    """Deterministic graph Lagrangian drawn from ``seed``."""
    F = fs if isinstance(fs, Field) else fs.field
    rng = make_rng(seed)
    return graph_lagrangian(F, random_symmetric(F, rng), provenance={"seed": int(seed), "source": "random_instance"})


# -- decomposable vectors ------------------------------------------------------


def _decomposable_mask(coeffs: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask of decomposable rows for an (N, 20) batch of degree-3 vectors."""
    D = np.tensordot(coeffs, ext.contraction_tensor(), axes=([1], [0])) % p  # (N, 15, 6)
    ranks = kernels.batch_rank_mod_p(np.ascontiguousarray(np.transpose(D, (0, 2, 1))), p)
    return ranks <= 3


def _scan_ranks(args) -> int | None:
    """First rank in ``ranks`` (sorted) whose point of P(A) is decomposable."""
    basis, p, ranks = args
    B = np.array(basis, dtype=np.int64)
    for s in range(0, len(ranks), 1 << 14):
        r = np.asarray(ranks[s:s + (1 << 14)], dtype=np.int64)
        C = projective.points_at(p, 10, r)
        hit = np.nonzero(_decomposable_mask(C @ B % p, p))[0]
        if hit.size:
            return int(r[hit[0]])
    return None


def _scan_range(args) -> int | None:
    basis, p, start, stop = args
    B = np.array(basis, dtype=np.int64)
    for s in range(start, stop, 1 << 14):
        C = projective.points_range(p, 10, s, min(stop, s + (1 << 14)))
        hit = np.nonzero(_decomposable_mask(C @ B % p, p))[0]
        if hit.size:
            return s + int(hit[0])
    return None


def coordinate_line_ranks(p: int) -> list[int]:
    """Ranks of all points on the lines ``<c_i, c_{i+1}>`` of P^9 (indices mod 10)."""
    pts = set()
    for i in range(10):
        j = (i + 1) % 10
        a, b = min(i, j), max(i, j)
        for t in range(p):
            v = [0] * 10
            v[a], v[b] = 1, t
            pts.add(projective.rank_of(v, p))
        v = [0] * 10
        v[b] = 1
        pts.add(projective.rank_of(v, p))
    return sorted(pts)


def _search_prime(inst: LagrangianInstance, budget: int, sample: int, seed: int, jobs: int):
    F = inst.field
    p = F.p
    basis = inst.rows()
    total = projective.count(p, 10)
    if total <= budget:
        tasks = [(basis, p, s, t) for s, t in projective.split_ranges(total, max(1, jobs))]
        hits = [h for h in pmap(_scan_range, tasks, jobs) if h is not None]
        scan = {"level": 1, "mode": "exhaustive", "points": total}
        return (min(hits) if hits else None), scan, True
    rng = make_rng(seed)
    ranks = np.unique(np.concatenate([
        rng.integers(0, total, size=sample, dtype=np.int64),
        np.array(coordinate_line_ranks(p), dtype=np.int64),
    ]))
    parts = np.array_split(ranks, max(1, jobs))
    hits = [h for h in pmap(_scan_ranks, [(basis, p, list(map(int, r))) for r in parts], jobs) if h is not None]
    scan = {
        "level": 1, "mode": "sample", "points": int(ranks.size), "sample": int(sample),
        "sample_seed": int(seed), "coordinate_lines": 10, "total": total,
    }
    return (min(hits) if hits else None), scan, False


def _scan_generic(F: Field, basis) -> list | None:
    """Exhaustive scan of P(span basis) over a small field, canonical order."""
    from itertools import product

    elems = sorted(F.elements(), key=F.sort_key)
    n = len(basis)
    for pos in range(n - 1, -1, -1):
        for tail in product(elems, repeat=n - 1 - pos):
            c = [F.zero] * pos + [F.one] + list(tail)
            v = [F.sum(F.mul(ci, b[k]) for ci, b in zip(c, basis)) for k in range(20)]
            if ext.is_decomposable(F, v)[0]:
                return v
    return None


def _extension_search(inst: LagrangianInstance, level: int, budget: int):
    p = inst.field.p
    q = p**level
    size = (q**10 - 1) // (q - 1)
    if size > budget:
        raise BudgetExceeded(size, budget, level)
    if level != 2:
        raise LagrangianError("only the quadratic extension is implemented")
    E = make_field("prime_square", p)
    return _scan_generic(E, [[(x, 0) for x in r] for r in inst.rows()])


def decomposable_search(
    inst: LagrangianInstance,
    effort: int = 1,
    budget: int = DEFAULT_BUDGET,
    sample: int = DEFAULT_SAMPLE,
    seed: int = 0,
    jobs: int = 1,
) -> tuple[LagrangianInstance, list | None]:
    """Look for a decomposable vector in A.

    Level 1 scans P(A) over the base field: exhaustively when it has at most
    ``budget`` points, otherwise a seeded sample of ``sample`` points plus
    the 10 cyclic coordinate lines. Levels 2 and 3 are exhaustive over the
    extension and raise :class:`BudgetExceeded` when that is too large.

    Returns the instance with ``ndv_status`` and ``scan`` updated, and the
    first witness in canonical point order (or ``None``).
    """
    if effort not in (1, 2, 3):
        raise LagrangianError("effort must be 1, 2 or 3")
    F = inst.field
    if F.kind == "rationals":
        return _search_rational(inst, budget, sample, seed, jobs)
    if F.kind == "prime_square":
        if effort > 1:
            raise BudgetExceeded(-1, budget, effort)
        return _search_generic(inst, budget)
    hit, scan, exhaustive = _search_prime(inst, budget, sample, seed, jobs)
    scans = [scan]
    if hit is not None:
        c = projective.points_at(F.p, 10, [hit])[0]
        w = (c @ np.array(inst.rows(), dtype=np.int64) % F.p).tolist()
        _check_witness(inst, w)
        out = replace(inst, ndv_status="witness_found", scan={"levels": scans, "witness_level": 1})
        return out, w
    for level in range(2, effort + 1):
        w = _extension_search(inst, level, budget)
        scans.append({"level": level, "mode": "exhaustive"})
        if w is not None:
            return replace(inst, ndv_status="witness_found", scan={"levels": scans, "witness_level": level}), w
    status = "verified_over_field" if exhaustive else "unknown"
    return replace(inst, ndv_status=status, scan={"levels": scans}), None


def _search_generic(inst: LagrangianInstance, budget: int):
    F = inst.field
    q = F.order
    size = (q**10 - 1) // (q - 1)
    if size > budget:
        raise BudgetExceeded(size, budget, 1)
    w = _scan_generic(F, inst.rows())
    scan = {"levels": [{"level": 1, "mode": "exhaustive", "points": size}]}
    status = "witness_found" if w is not None else "verified_over_field"
    return replace(inst, ndv_status=status, scan=scan), w


def _check_witness(inst: LagrangianInstance, w) -> None:
    ok, _ = ext.is_decomposable(inst.field, w)
    if not ok or not inst.A.contains(w):
        raise LagrangianError("decomposable witness failed replay")


def reduce_mod(inst: LagrangianInstance, p: int) -> LagrangianInstance | None:
    """Reduction of a rational instance modulo ``p``; ``None`` if it degenerates."""
    F = make_field("prime", p)
    rows = []
    for r in inst.rows():
        if any(x.denominator % p == 0 for x in r):
            return None
        rows.append([F.coerce(x) for x in r])
    A = Subspace.span(F, rows, 20)
    if A.dim != 10:
        return None
    return LagrangianInstance.from_subspace(A, provenance={"source": f"reduction mod {p}"})


def _search_rational(inst, budget, sample, seed, jobs):
    found = {}
    for p in REDUCTION_PRIMES:
        red = reduce_mod(inst, p)
        if red is None:
            found[p] = "degenerate"
            continue
        _, w = decomposable_search(red, 1, budget, sample, seed, jobs)
        found[p] = "witness" if w is not None else "none_found"
    if all(v == "witness" for v in found.values()):
        warnings.warn("decomposable vectors found modulo 7, 11 and 13", stacklevel=2)
    return replace(inst, ndv_status="unknown", scan={"reductions": {str(k): v for k, v in found.items()}}), None
