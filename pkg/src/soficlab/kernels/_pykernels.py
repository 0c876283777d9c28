"""Numpy implementations of the elimination kernels.

Same contracts as the compiled module; used as the import-time fallback and
as the reference side of the kernel benchmark.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def gf2_rank(a: np.ndarray, ncols: int) -> int:
    """Rank of a bit-packed GF(2) matrix (uint64 words, LSB-first columns).

    Destroys ``a``.
    """
    m = a.shape[0]
    rank = 0
    for col in range(ncols):
        if rank == m:
            break
        w, b = divmod(col, 64)
        nz = np.nonzero((a[rank:, w] >> np.uint64(b)) & np.uint64(1))[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        below = rank + 1 + np.nonzero((a[rank + 1 :, w] >> np.uint64(b)) & np.uint64(1))[0]
        if below.size:
            a[below] ^= a[rank]
        rank += 1
    return rank


def gf2_rref(a: np.ndarray, ncols: int) -> tuple[int, list[int]]:
    """Reduce a bit-packed GF(2) matrix to RREF in place; returns (rank, pivot columns)."""
    m = a.shape[0]
    rank = 0
    pivots: list[int] = []
    for col in range(ncols):
        if rank == m:
            break
        w, b = divmod(col, 64)
        nz = np.nonzero((a[rank:, w] >> np.uint64(b)) & np.uint64(1))[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        mask = ((a[:, w] >> np.uint64(b)) & np.uint64(1)).astype(bool)
        mask[rank] = False
        if mask.any():
            a[mask] ^= a[rank]
        pivots.append(col)
        rank += 1
    return rank, pivots


def gfp_rank(a: np.ndarray, p: int) -> int:
    """Rank of a dense int64 matrix mod p (p < 2^31, entries reduced mod p).

    Destroys ``a``.
    """
    m, n = a.shape
    rank = 0
    for col in range(n):
        if rank == m:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), -1, p)
        a[rank] = (a[rank] * inv) % p
        below = rank + 1 + np.nonzero(a[rank + 1 :, col])[0]
        if below.size:
            a[below] = (a[below] - a[below, col][:, None] * a[rank][None, :]) % p
        rank += 1
    return rank


def gfp_rref(a: np.ndarray, p: int) -> tuple[int, list[int]]:
    """Reduce a dense int64 matrix to RREF mod p in place; returns (rank, pivot columns)."""
    m, n = a.shape
    rank = 0
    pivots: list[int] = []
    for col in range(n):
        if rank == m:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), -1, p)
        a[rank] = (a[rank] * inv) % p
        others = np.nonzero(a[:, col])[0]
        others = others[others != rank]
        if others.size:
            a[others] = (a[others] - a[others, col][:, None] * a[rank][None, :]) % p
        pivots.append(col)
        rank += 1
    return rank, pivots
