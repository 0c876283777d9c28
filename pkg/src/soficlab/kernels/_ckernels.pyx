# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels: bit-packed GF(2) and dense GF(p) row reduction."""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

BACKEND = "cython"


cdef int64_t _inv_mod(int64_t a, int64_t p):
    # extended Euclid; a is nonzero mod p
    cdef int64_t t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def gf2_rank(cnp.ndarray[cnp.uint64_t, ndim=2] a, int ncols):
    """Rank of a bit-packed GF(2) matrix (uint64 words, LSB-first). Destroys ``a``."""
    cdef Py_ssize_t m = a.shape[0], nwords = a.shape[1]
    cdef uint64_t[:, ::1] buf = a
    cdef Py_ssize_t rank = 0, col, w, piv, r, k
    cdef int b
    cdef uint64_t bit, tmp
    for col in range(ncols):
        if rank == m:
            break
        w = col >> 6
        b = col & 63
        bit = (<uint64_t>1) << b
        piv = -1
        for r in range(rank, m):
            if buf[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(nwords):
                tmp = buf[rank, k]
                buf[rank, k] = buf[piv, k]
                buf[piv, k] = tmp
        for r in range(rank + 1, m):
            if buf[r, w] & bit:
                for k in range(nwords):
                    buf[r, k] ^= buf[rank, k]
        rank += 1
    return rank


def gf2_rref(cnp.ndarray[cnp.uint64_t, ndim=2] a, int ncols):
    """In-place RREF of a bit-packed GF(2) matrix; returns (rank, pivot columns)."""
    cdef Py_ssize_t m = a.shape[0], nwords = a.shape[1]
    cdef uint64_t[:, ::1] buf = a
    cdef Py_ssize_t rank = 0, col, w, piv, r, k
    cdef int b
    cdef uint64_t bit, tmp
    pivots = []
    for col in range(ncols):
        if rank == m:
            break
        w = col >> 6
        b = col & 63
        bit = (<uint64_t>1) << b
        piv = -1
        for r in range(rank, m):
            if buf[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(nwords):
                tmp = buf[rank, k]
                buf[rank, k] = buf[piv, k]
                buf[piv, k] = tmp
        for r in range(m):
            if r != rank and (buf[r, w] & bit):
                for k in range(nwords):
                    buf[r, k] ^= buf[rank, k]
        pivots.append(col)
        rank += 1
    return rank, pivots


def gfp_rank(cnp.ndarray[cnp.int64_t, ndim=2] a, long long p):
    """Rank of a dense int64 matrix mod p (entries reduced mod p, p < 2^31). Destroys ``a``."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef int64_t[:, ::1] buf = a
    cdef Py_ssize_t rank = 0, col, piv, r, k
    cdef int64_t inv, f, tmp, pp = p
    for col in range(n):
        if rank == m:
            break
        piv = -1
        for r in range(rank, m):
            if buf[r, col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(n):
                tmp = buf[rank, k]
                buf[rank, k] = buf[piv, k]
                buf[piv, k] = tmp
        inv = _inv_mod(buf[rank, col], pp)
        for k in range(n):
            buf[rank, k] = (buf[rank, k] * inv) % pp
        for r in range(rank + 1, m):
            f = buf[r, col]
            if f != 0:
                for k in range(n):
                    buf[r, k] = (buf[r, k] - f * buf[rank, k]) % pp
                    if buf[r, k] < 0:
                        buf[r, k] += pp
        rank += 1
    return rank


def gfp_rref(cnp.ndarray[cnp.int64_t, ndim=2] a, long long p):
    """In-place RREF of a dense int64 matrix mod p; returns (rank, pivot columns)."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef int64_t[:, ::1] buf = a
    cdef Py_ssize_t rank = 0, col, piv, r, k
    cdef int64_t inv, f, tmp, pp = p
    pivots = []
    for col in range(n):
        if rank == m:
            break
        piv = -1
        for r in range(rank, m):
            if buf[r, col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(n):
                tmp = buf[rank, k]
                buf[rank, k] = buf[piv, k]
                buf[piv, k] = tmp
        inv = _inv_mod(buf[rank, col], pp)
        for k in range(n):
            buf[rank, k] = (buf[rank, k] * inv) % pp
        for r in range(m):
            if r == rank:
                continue
            f = buf[r, col]
            if f != 0:
                for k in range(n):
                    buf[r, k] = (buf[r, k] - f * buf[rank, k]) % pp
                    if buf[r, k] < 0:
                        buf[r, k] += pp
        pivots.append(col)
        rank += 1
    return rank, pivots
