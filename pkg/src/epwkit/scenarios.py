"""Deterministic searches for the configurations the checks run on.

Given a prime and a starting seed these find: threefold data (a hyperplane
V5 with ``dim(A & wedge^3 V5) = 2`` and smooth X), fivefold data, a nice
line, a sigma-plane, and the rational points of the relevant strata. Every
search walks seeds and points in canonical order, so results are
reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import projective
from .correspondences import LineTransformError, line_transform_data
from .epw import batch_strata, dual_stratify, normalize_batch, pairing_tensor, stratify
from .fields import GF
from .gm import GMInstance, build_gm
from .lagrangian import LagrangianInstance, decomposable_search, dual, random_instance
from .linalg import Subspace
from .quadric_fibers import (
    FiberError,
    admissibility,
    in_sigma1,
    line_of_point,
    sigma1_conic,
    sigma_planes,
    sigma_of_line,
)


class SearchFailed(RuntimeError):
    pass


def points_with_stratum(A: LagrangianInstance, k: int, limit: int | None = None) -> list[tuple]:
    """All points of P(V6)(F_p) of stratum exactly k, canonical order."""
    F = A.field
    p = F.p
    Mc = pairing_tensor(F, A.rows())
    out: list = []
    for _, pts in projective.iter_chunks(p, 6):
        ks = batch_strata(Mc, pts, p)
        out.extend(map(tuple, pts[ks == k].tolist()))
        if limit is not None and len(out) >= limit:
            return out[:limit]
    return out


def dual_points_with_stratum(A: LagrangianInstance, k: int, limit: int | None = None) -> list[tuple]:
    ann = dual(A).ann
    return points_with_stratum(LagrangianInstance(A.field, ann, True), k, limit)


def slice_strata(gm: GMInstance) -> tuple[np.ndarray, np.ndarray]:
    """Points of P(V5) in V5 coordinates (canonical order) and their strata."""
    F = gm.field
    p = F.p
    C = projective.points_range(p, 5, 0, projective.count(p, 5))
    U = np.array(gm.V5, dtype=np.int64)
    ks = batch_strata(pairing_tensor(F, gm.lag.rows()), normalize_batch(C @ U, p), p)
    return C, ks


def slice_points(gm: GMInstance, k: int) -> list[tuple]:
    C, ks = slice_strata(gm)
    return list(map(tuple, C[ks == k].tolist()))


@dataclass(frozen=True)
class ThreefoldData:
    gm: GMInstance
    seed: int
    v0p: tuple  # sigma(L0), V5 coordinates
    L0: Subspace  # bivector coordinates
    boundary: tuple  # stratum-2 points of P(V5), V5 coordinates


@dataclass(frozen=True)
class FivefoldData:
    gm: GMInstance
    seed: int
    v0p: tuple | None
    Pi0: tuple | None  # W-coordinate rows of the sigma-plane
    boundary: tuple


def split_points(gm: GMInstance, Pi0, boundary) -> list[tuple]:
    """Boundary points whose two planes are rational and both avoid ``Pi0``."""
    F = gm.field
    out = []
    for v in boundary:
        ts = sigma_planes(gm, v)
        if not ts.rational or ts.degenerate:
            continue
        if all(Subspace.span(F, [list(r) for r in Pi0] + sp.space.rows(), gm.dim_W).dim == 6 for sp in ts.spaces):
            out.append(tuple(v))
    return out


def ndv_checked(A: LagrangianInstance, sample: int) -> LagrangianInstance | None:
    """The instance with its scan recorded, or ``None`` when a decomposable vector turned up."""
    out, w = decomposable_search(A, 1, sample=sample, seed=A.provenance.get("seed", 0))
    return None if w is not None else out


def nice_line(gm: GMInstance, boundary=None) -> tuple[tuple, Subspace]:
    """First point of the stratum-2 curve off Sigma_1 and its line."""
    for v in boundary if boundary is not None else slice_points(gm, 2):
        if not in_sigma1(gm, v):
            L = line_of_point(gm, v)
            if tuple(sigma_of_line(gm, L)) != tuple(v):
                raise SearchFailed("sigma(line_of_point(v)) != v")
            return tuple(v), L
    raise SearchFailed("no rational point on the stratum-2 curve off Sigma_1")


def threefold_data(q: int, seed: int = 0, min_boundary: int = 0, tries: int = 50,
                   ndv_sample: int = 0, min_admissible: int = 0) -> ThreefoldData:
    """First (seed, V5) with dual stratum 2 and smooth X; V5 scanned in canonical order.

    ``min_admissible`` asks for that many boundary points passing the exclusions
    of :func:`~epwkit.quadric_fibers.admissibility` relative to the nice line.
    """
    F = GF(q)
    for s in range(seed, seed + tries):
        A = random_instance(s, F)
        if ndv_sample:
            A = ndv_checked(A, ndv_sample)
            if A is None:
                continue
        for phi in dual_points_with_stratum(A, 2):
            gm = build_gm(A, phi)
            try:
                if not sigma1_conic(gm).smooth:
                    continue
            except FiberError:
                continue
            bd = slice_points(gm, 2)
            if len(bd) < max(min_boundary, 1) or slice_points(gm, 3):
                continue
            try:
                v0p, L0 = nice_line(gm, bd)
            except SearchFailed:
                continue
            if min_admissible and sum(admissibility(gm, v0p, v) is None for v in bd) < min_admissible:
                continue
            return ThreefoldData(gm, s, v0p, L0, tuple(bd))
    raise SearchFailed(f"no threefold data over F_{q} for seeds {seed}..{seed + tries - 1}")


def fivefold_data(q: int, seed: int = 0, min_boundary: int = 0, tries: int = 50,
                  ndv_sample: int = 0, need_plane: bool = True, min_split: int = 0) -> FivefoldData:
    """First (seed, V5) with dual stratum 0 whose stratum-2 curve carries a rational sigma-plane.

    ``min_split`` asks for that many other boundary points whose planes are
    rational and avoid the chosen one.
    """
    F = GF(q)
    for s in range(seed, seed + tries):
        A = random_instance(s, F)
        if ndv_sample:
            A = ndv_checked(A, ndv_sample)
            if A is None:
                continue
        for phi in dual_points_with_stratum(A, 0, limit=8):
            gm = build_gm(A, phi)
            bd = slice_points(gm, 2)
            if len(bd) < min_boundary or slice_points(gm, 3):
                continue
            if not need_plane:
                return FivefoldData(gm, s, None, None, tuple(bd))
            for v in bd:
                ts = sigma_planes(gm, v)
                if ts.rational and not ts.degenerate:
                    Pi0 = tuple(map(tuple, ts.spaces[0].space.rows()))
                    if min_split and len(split_points(gm, Pi0, bd)) < min_split:
                        break
                    return FivefoldData(gm, s, tuple(v), Pi0, tuple(bd))
    raise SearchFailed(f"no fivefold data over F_{q} for seeds {seed}..{seed + tries - 1}")


def line_transform_fixture(q: int = 11, seed: int = 0):
    """First (V1, V5) among stratification witnesses giving nice lines on both sides."""
    A = random_instance(seed, GF(q))
    V1s = stratify(A).witnesses.get(2, [])
    V5s = dual_stratify(A).witnesses.get(2, [])
    F = A.field
    for v1 in V1s:
        for phi in V5s:
            if not F.is_zero(F.dot(v1, phi)):
                continue
            try:
                lt = line_transform_data(A, v1, phi)
            except LineTransformError:
                continue
            if lt.nice and lt.dual_nice:
                return lt
    raise LineTransformError("no incident nice witness pair", "fixture")
