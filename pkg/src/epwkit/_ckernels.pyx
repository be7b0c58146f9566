# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled mod-p elimination kernels (same API as ``_pykernels``)."""

import numpy as np
from libc.stdint cimport int64_t

BACKEND = "cython"


cdef inline int64_t _inv(int64_t a, int64_t p) noexcept nogil:
    cdef int64_t t = 0, newt = 1, r = p, newr = a % p, q, tmp
    if newr < 0:
        newr += p
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef Py_ssize_t _eliminate(int64_t[:, ::1] M, int64_t p, bint reduced,
                           Py_ssize_t[::1] pivots) noexcept nogil:
    cdef Py_ssize_t r = M.shape[0], c = M.shape[1]
    cdef Py_ssize_t row = 0, col, i, j, piv
    cdef int64_t f, s, tmp
    for col in range(c):
        if row == r:
            break
        piv = -1
        for i in range(row, r):
            if M[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            for j in range(col, c):
                tmp = M[row, j]
                M[row, j] = M[piv, j]
                M[piv, j] = tmp
        s = _inv(M[row, col], p)
        if s != 1:
            for j in range(col, c):
                M[row, j] = M[row, j] * s % p
        for i in range(0 if reduced else row + 1, r):
            if i == row:
                continue
            f = M[i, col]
            if f == 0:
                continue
            for j in range(col, c):
                M[i, j] = (M[i, j] - f * M[row, j]) % p
                if M[i, j] < 0:
                    M[i, j] += p
        pivots[row] = col
        row += 1
    return row


def rref_mod_p(mat, long long p):
    M = np.ascontiguousarray(np.array(mat, dtype=np.int64) % p)
    if M.ndim != 2:
        raise ValueError("expected a 2-d array")
    cdef int64_t[:, ::1] mv = M
    piv = np.zeros(max(M.shape[0], 1), dtype=np.intp)
    cdef Py_ssize_t[::1] pv = piv
    cdef Py_ssize_t rk
    with nogil:
        rk = _eliminate(mv, p, True, pv)
    return M, tuple(int(x) for x in piv[:rk])


def rank_mod_p(mat, long long p):
    M = np.ascontiguousarray(np.array(mat, dtype=np.int64) % p)
    cdef int64_t[:, ::1] mv = M
    piv = np.zeros(max(M.shape[0], 1), dtype=np.intp)
    cdef Py_ssize_t[::1] pv = piv
    cdef Py_ssize_t rk
    with nogil:
        rk = _eliminate(mv, p, False, pv)
    return int(rk)


def batch_rank_mod_p(mats, long long p):
    A = np.ascontiguousarray(np.array(mats, dtype=np.int64) % p)
    if A.ndim != 3:
        raise ValueError("expected a 3-d array")
    cdef Py_ssize_t N = A.shape[0], r = A.shape[1], c = A.shape[2], n, i, j
    out = np.zeros(N, dtype=np.int64)
    scratch = np.zeros((r, c), dtype=np.int64)
    piv = np.zeros(max(r, 1), dtype=np.intp)
    cdef int64_t[:, :, ::1] av = A
    cdef int64_t[:, ::1] sv = scratch
    cdef int64_t[::1] ov = out
    cdef Py_ssize_t[::1] pv = piv
    with nogil:
        for n in range(N):
            for i in range(r):
                for j in range(c):
                    sv[i, j] = av[n, i, j]
            ov[n] = _eliminate(sv, p, False, pv)
    return out
