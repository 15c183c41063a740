# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled row reduction over a prime field.

Hot kernel behind the fiberwise rank sweeps and the modular
trivial-kernel certificates.  Requires p < 2**31 so that products of two
reduced residues fit in a signed 64-bit intermediate.
"""

import numpy as np

BACKEND = "compiled"

_P_LIMIT = 1 << 31


cdef long long _inv_mod(long long a, long long p) noexcept nogil:
    # Extended Euclid; a is nonzero mod p.
    cdef long long t = 0, new_t = 1
    cdef long long r = p, new_r = a % p
    cdef long long q, tmp
    while new_r != 0:
        q = r / new_r
        tmp = t - q * new_t
        t = new_t
        new_t = tmp
        tmp = r - q * new_r
        r = new_r
        new_r = tmp
    if t < 0:
        t += p
    return t


cdef Py_ssize_t _rank_inplace(long long[:, ::1] m, long long p) noexcept nogil:
    cdef Py_ssize_t nrows = m.shape[0]
    cdef Py_ssize_t ncols = m.shape[1]
    cdef Py_ssize_t rank = 0, col, i, j, pivot
    cdef long long inv, f, tmp
    for col in range(ncols):
        pivot = -1
        for i in range(rank, nrows):
            if m[i, col] != 0:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for j in range(col, ncols):
                tmp = m[rank, j]
                m[rank, j] = m[pivot, j]
                m[pivot, j] = tmp
        inv = _inv_mod(m[rank, col], p)
        for i in range(rank + 1, nrows):
            f = m[i, col]
            if f == 0:
                continue
            f = (f * inv) % p
            for j in range(col, ncols):
                m[i, j] = (m[i, j] - f * m[rank, j]) % p
                if m[i, j] < 0:
                    m[i, j] += p
        rank += 1
        if rank == nrows:
            break
    return rank


def _reduced_copy(mat, long long p):
    a = np.ascontiguousarray(mat, dtype=np.int64) % p
    return a


def rank_mod_p(mat, long long p):
    """Rank of an integer matrix over F_p (p < 2**31)."""
    if p <= 1 or p >= _P_LIMIT:
        raise ValueError("modulus out of range for the compiled kernel")
    a = _reduced_copy(mat, p)
    if a.size == 0:
        return 0
    cdef long long[:, ::1] view = a
    cdef long long pp = p
    cdef Py_ssize_t r
    with nogil:
        r = _rank_inplace(view, pp)
    return int(r)


def nullity_mod_p(mat, long long p):
    """Right-kernel dimension of an integer matrix over F_p."""
    a = _reduced_copy(mat, p)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    ncols = a.shape[1]
    if ncols == 0:
        return 0
    return ncols - rank_mod_p(a, p)


def batch_rank_mod_p(mats, long long p):
    """Ranks over F_p of a stack of equally-shaped integer matrices."""
    if p <= 1 or p >= _P_LIMIT:
        raise ValueError("modulus out of range for the compiled kernel")
    a = np.ascontiguousarray(mats, dtype=np.int64) % p
    if a.ndim != 3:
        raise ValueError("expected a (count, rows, cols) stack")
    cdef long long[:, :, ::1] view = a
    cdef Py_ssize_t k, count = a.shape[0]
    out = np.empty(count, dtype=np.int64)
    cdef long long[::1] out_view = out
    cdef long long pp = p
    with nogil:
        for k in range(count):
            out_view[k] = _rank_inplace(view[k], pp)
    return out.tolist()
