"""Pure numpy implementations of the mod-p elimination kernels.

Same signatures as the compiled ``_ckernels`` module; :mod:`epwkit.kernels`
picks one of the two at import time.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def _inv(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def rref_mod_p(mat, p: int):
    """Reduced row echelon form of an integer matrix modulo ``p``.

    Returns ``(R, pivots)`` with ``R`` a new int64 array.
    """
    M = np.array(mat, dtype=np.int64) % p
    if M.ndim != 2:
        raise ValueError("expected a 2-d array")
    r, c = M.shape
    pivots = []
    row = 0
    for col in range(c):
        if row == r:
            break
        nz = np.nonzero(M[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            M[[row, piv]] = M[[piv, row]]
        M[row] = M[row] * _inv(M[row, col], p) % p
        f = M[:, col].copy()
        f[row] = 0
        nzr = np.nonzero(f)[0]
        if nzr.size:
            M[nzr] = (M[nzr] - f[nzr, None] * M[row]) % p
        pivots.append(col)
        row += 1
    return M, tuple(pivots)


def rank_mod_p(mat, p: int) -> int:
    return len(rref_mod_p(mat, p)[1])


def batch_rank_mod_p(mats, p: int) -> np.ndarray:
    """Ranks modulo ``p`` of a stack of matrices with shape ``(N, r, c)``."""
    M = np.array(mats, dtype=np.int64) % p
    if M.ndim != 3:
        raise ValueError("expected a 3-d array")
    N, r, c = M.shape
    rank = np.zeros(N, dtype=np.int64)
    if N == 0:
        return rank
    inv = inverse_table(p)
    rows = np.arange(r)
    for col in range(c):
        cand = (M[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.nonzero(has)[0]
        piv = np.argmax(cand[sel], axis=1)
        rk = rank[sel]
        sub = M[sel]
        k = np.arange(sel.size)
        prow = sub[k, piv].copy()
        sub[k, piv] = sub[k, rk]
        prow = prow * inv[prow[:, col]][:, None] % p
        sub[k, rk] = prow
        f = sub[:, :, col].copy()
        f[k, rk] = 0
        f[rows[None, :] < rk[:, None]] = 0
        sub -= f[:, :, None] * prow[:, None, :]
        sub %= p
        M[sel] = sub
        rank[sel] += 1
        if rank.min() == min(r, c):
            break
    return rank
