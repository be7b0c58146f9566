"""Canonical enumeration of projective points over a prime field.

A point of P^{n-1}(F_p) is represented by the vector whose first nonzero
coordinate is 1. Representatives are ordered lexicographically, which puts
``(0, ..., 0, 1)`` first and ``(1, p-1, ..., p-1)`` last. Every point has an
integer rank in that order, so index ranges can be split across workers and
merged back without changing any result.
"""
from __future__ import annotations

from typing import Iterator

import numpy as np


def count(p: int, n: int) -> int:
    """Number of points of P^{n-1}(F_p)."""
    return (p**n - 1) // (p - 1)


def _block_sizes(p: int, n: int) -> list[int]:
    # block b holds points whose first nonzero coordinate sits at position n-1-b
    return [p**b for b in range(n)]


def points_range(p: int, n: int, start: int, stop: int) -> np.ndarray:
    """Points with ranks in ``[start, stop)`` as an int64 array of shape (m, n)."""
    total = count(p, n)
    start, stop = max(0, start), min(stop, total)
    if stop <= start:
        return np.zeros((0, n), dtype=np.int64)
    out = []
    offset = 0
    for b, size in enumerate(_block_sizes(p, n)):
        lo, hi = max(start, offset), min(stop, offset + size)
        if lo < hi:
            pos = n - 1 - b
            idx = np.arange(lo - offset, hi - offset, dtype=np.int64)
            blk = np.zeros((hi - lo, n), dtype=np.int64)
            blk[:, pos] = 1
            for j in range(n - 1, pos, -1):
                blk[:, j] = idx % p
                idx //= p
            out.append(blk)
        offset += size
        if offset >= stop:
            break
    return np.concatenate(out, axis=0)


def points_at(p: int, n: int, ranks) -> np.ndarray:
    """Points with the given ranks (any order, repeats allowed)."""
    ranks = np.asarray(ranks, dtype=np.int64)
    out = np.zeros((ranks.size, n), dtype=np.int64)
    offset = 0
    for b, size in enumerate(_block_sizes(p, n)):
        sel = (ranks >= offset) & (ranks < offset + size)
        if sel.any():
            pos = n - 1 - b
            idx = ranks[sel] - offset
            blk = np.zeros((idx.size, n), dtype=np.int64)
            blk[:, pos] = 1
            for j in range(n - 1, pos, -1):
                blk[:, j] = idx % p
                idx = idx // p
            out[sel] = blk
        offset += size
    return out


def rank_of(point, p: int) -> int:
    """Inverse of :func:`points_at` for a normalized point."""
    v = [int(x) % p for x in point]
    n = len(v)
    pos = next(i for i, x in enumerate(v) if x)
    b = n - 1 - pos
    offset = sum(_block_sizes(p, n)[:b])
    idx = 0
    for x in v[pos + 1:]:
        idx = idx * p + x
    return offset + idx


def iter_chunks(p: int, n: int, chunk: int = 1 << 15) -> Iterator[tuple[int, np.ndarray]]:
    total = count(p, n)
    for s in range(0, total, chunk):
        yield s, points_range(p, n, s, s + chunk)


def normalize(field, v) -> tuple:
    """Scale ``v`` so that its first nonzero coordinate is 1."""
    F = field
    for x in v:
        if not F.is_zero(x):
            s = F.inv(x)
            return tuple(F.mul(s, y) for y in v)
    raise ValueError("the zero vector is not a projective point")


def split_ranges(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total)) if total else 1
    step = -(-total // parts) if total else 0
    return [(s, min(total, s + step)) for s in range(0, total, step)] if total else []
