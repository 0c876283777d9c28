"""Exact linear algebra over prime fields and exact-rank-over-Q estimation.

Storage and elimination strategy per matrix: bit-packed rows for GF(2),
dense int64 for small or filled-in matrices, and Markowitz-pivoted sparse
elimination otherwise (with a densify escape hatch once fill-in grows).
"""

from __future__ import annotations

import heapq
import time
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import kernels

# 31-bit primes used for multi-modular rank over Q
PRIMES_31 = (2147483647, 2147483629, 2147483587)

DENSE_AREA_CAP = 1 << 18  # rows*cols at or below this always go dense
DENSE_FILL = 0.20
GF2_PACKED_AREA_CAP = 1 << 33  # bits; 1 GiB packed

EXACT_RANK_Q_LIMIT = 400


class DimensionCap(Exception):
    """Kernel dimension exceeds the caller-supplied cap."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class FFMatrix:
    """Sparse matrix over GF(p) in coordinate form (duplicates summed mod p)."""

    def __init__(self, rows: int, cols: int, p: int, triplets=()):
        if rows < 0 or cols < 0:
            raise ValueError("dimensions must be non-negative")
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.rows = rows
        self.cols = cols
        self.p = p
        acc: dict[tuple[int, int], int] = {}
        for r, c, v in triplets:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r},{c}) out of range")
            key = (r, c)
            acc[key] = (acc.get(key, 0) + v) % p
        items = sorted((rc, v) for rc, v in acc.items() if v != 0)
        self.row_idx = np.array([rc[0] for rc, _ in items], dtype=np.int64)
        self.col_idx = np.array([rc[1] for rc, _ in items], dtype=np.int64)
        self.values = np.array([v for _, v in items], dtype=np.int64)

    @classmethod
    def from_dense(cls, dense, p: int) -> "FFMatrix":
        dense = np.asarray(dense)
        rows, cols = dense.shape
        r, c = np.nonzero(dense % p)
        return cls(rows, cols, p, zip(r.tolist(), c.tolist(), (dense[r, c] % p).tolist()))

    @property
    def nnz(self) -> int:
        return len(self.values)

    @property
    def fill(self) -> float:
        area = self.rows * self.cols
        return self.nnz / area if area else 0.0

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.rows, self.cols), dtype=np.int64)
        dense[self.row_idx, self.col_idx] = self.values
        return dense

    def pack_gf2(self) -> np.ndarray:
        if self.p != 2:
            raise ValueError("pack_gf2 requires p = 2")
        nwords = max((self.cols + 63) // 64, 1)
        packed = np.zeros((max(self.rows, 1), nwords), dtype=np.uint64)
        words = self.col_idx // 64
        bits = (self.col_idx % 64).astype(np.uint64)
        np.bitwise_xor.at(packed, (self.row_idx, words), np.uint64(1) << bits)
        return packed[: self.rows]

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Matrix-vector product mod p (vector indexed by columns)."""
        out = np.zeros(self.rows, dtype=np.int64)
        np.add.at(out, self.row_idx, self.values * vec[self.col_idx] % self.p)
        return out % self.p

    def dump_sms(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"{self.rows} {self.cols} {self.p}\n")
            for r, c, v in zip(self.row_idx, self.col_idx, self.values):
                fh.write(f"{r + 1} {c + 1} {v}\n")
            fh.write("0 0 0\n")

    @classmethod
    def load_sms(cls, path) -> "FFMatrix":
        with open(path) as fh:
            rows, cols, p = map(int, fh.readline().split())
            triplets = []
            for line in fh:
                r, c, v = map(int, line.split())
                if r == 0 and c == 0:
                    break
                triplets.append((r - 1, c - 1, v))
        return cls(rows, cols, p, triplets)

    def __repr__(self) -> str:
        return f"FFMatrix({self.rows}x{self.cols} mod {self.p}, nnz={self.nnz})"


@dataclass
class RankResult:
    rank: int
    kernel_dim: int
    method: str
    elapsed: float


def _choose_method(m: FFMatrix) -> str:
    area = m.rows * m.cols
    if m.p == 2 and area <= GF2_PACKED_AREA_CAP:
        return "bitpacked"
    if area <= DENSE_AREA_CAP or m.fill >= DENSE_FILL:
        return "dense"
    return "sparse"


def rank_gf(m: FFMatrix) -> RankResult:
    """Exact rank over GF(p); kernel_dim counts the right kernel."""
    start = time.perf_counter()
    method = _choose_method(m)
    if m.rows == 0 or m.cols == 0:
        rank = 0
    elif method == "bitpacked":
        rank = kernels.gf2_rank(m.pack_gf2(), m.cols)
    elif method == "dense":
        rank = kernels.gfp_rank(m.to_dense(), m.p)
    else:
        rank = _sparse_rank(m)
    return RankResult(rank, m.cols - rank, method, time.perf_counter() - start)


def _sparse_rank(m: FFMatrix) -> int:
    """Markowitz-style sparse elimination: pivot in a shortest live row, on the
    entry whose column is lightest.  Switches to a dense finish if fill-in grows."""
    p = m.p
    rowmap: dict[int, dict[int, int]] = defaultdict(dict)
    colmap: dict[int, set[int]] = defaultdict(set)
    for r, c, v in zip(m.row_idx.tolist(), m.col_idx.tolist(), m.values.tolist()):
        rowmap[r][c] = v
        colmap[c].add(r)
    heap = [(len(cols), r) for r, cols in rowmap.items()]
    heapq.heapify(heap)
    rank = 0
    nnz = m.nnz
    steps = 0
    while rowmap:
        if steps % 64 == 0:
            live_rows = len(rowmap)
            live_cols = sum(1 for c in colmap if colmap[c])
            area = live_rows * live_cols
            if area and nnz / area >= DENSE_FILL and area <= (1 << 22):
                return rank + _dense_finish(rowmap, p)
        steps += 1
        size, r_piv = heapq.heappop(heap)
        row_p = rowmap.get(r_piv)
        if row_p is None or len(row_p) != size:
            if row_p is not None:
                heapq.heappush(heap, (len(row_p), r_piv))
            continue
        del rowmap[r_piv]
        for c in row_p:
            colmap[c].discard(r_piv)
        c_piv = min(row_p, key=lambda c: len(colmap[c]))
        inv = pow(row_p[c_piv], -1, p)
        for r in list(colmap[c_piv]):
            row = rowmap[r]
            factor = row[c_piv] * inv % p
            before = len(row)
            for c, v in row_p.items():
                nv = (row.get(c, 0) - factor * v) % p
                if nv:
                    if c not in row:
                        colmap[c].add(r)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    colmap[c].discard(r)
            nnz += len(row) - before
            if not row:
                del rowmap[r]
            else:
                heapq.heappush(heap, (len(row), r))
        nnz -= len(row_p)
        rank += 1
    return rank


def _dense_finish(rowmap: dict[int, dict[int, int]], p: int) -> int:
    live_cols = sorted({c for row in rowmap.values() for c in row})
    col_of = {c: j for j, c in enumerate(live_cols)}
    dense = np.zeros((len(rowmap), len(live_cols)), dtype=np.int64)
    for i, row in enumerate(rowmap.values()):
        for c, v in row.items():
            dense[i, col_of[c]] = v
    if p == 2:
        return kernels.gf2_rank(kernels.pack_gf2(dense), dense.shape[1])
    return kernels.gfp_rank(dense, p)


def kernel_basis_gf(m: FFMatrix, max_dim: int) -> list[np.ndarray]:
    """Basis of the right kernel over GF(p); DimensionCap if it is too large.

    Works on an RREF, so the matrix is densified; intended for instances small
    enough to enumerate fixed points over.
    """
    if m.rows == 0 or m.cols == 0:
        dim = m.cols
        if dim > max_dim:
            raise DimensionCap(f"kernel dimension {dim} exceeds cap {max_dim}")
        return [_unit(m.cols, j) for j in range(m.cols)]
    if m.p == 2:
        packed = m.pack_gf2()
        rank, pivots = kernels.gf2_rref(packed, m.cols)
        rref = kernels.unpack_gf2(packed, m.cols)
    else:
        rref = m.to_dense()
        rank, pivots = kernels.gfp_rref(rref, m.p)
    kernel_dim = m.cols - rank
    if kernel_dim > max_dim:
        raise DimensionCap(f"kernel dimension {kernel_dim} exceeds cap {max_dim}")
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = np.zeros(m.cols, dtype=np.int64)
        v[free] = 1
        for k, pcol in enumerate(pivots):
            v[pcol] = (-int(rref[k, free])) % m.p
        basis.append(v)
    return basis


def _unit(n: int, j: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[j] = 1
    return v


def rank_q(matrix, num_primes: int = 3) -> tuple[int, bool]:
    """Rank over Q of an integer matrix.

    Takes the max of ranks modulo ``num_primes`` 31-bit primes (each one is a
    certified lower bound for the rational rank); confirms with fraction-free
    exact elimination when the matrix is small enough.  Returns (rank, certain).
    """
    dense = np.asarray(matrix, dtype=object) if not isinstance(matrix, np.ndarray) else matrix
    if dense.ndim != 2:
        raise ValueError("need a 2-d integer matrix")
    rows, cols = dense.shape
    if rows == 0 or cols == 0:
        return 0, True
    best = 0
    for p in PRIMES_31[:num_primes]:
        m = FFMatrix.from_dense(np.asarray(dense, dtype=np.int64), p)
        best = max(best, rank_gf(m).rank)
    if max(rows, cols) <= EXACT_RANK_Q_LIMIT:
        exact = _bareiss_rank([[int(x) for x in row] for row in dense])
        if exact != best:
            # mod-p rank can only undershoot; the exact value wins
            best = exact
        return best, True
    return best, False


def _bareiss_rank(m: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination over Z; exact rank over Q."""
    rows, cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(cols):
        if rank == rows:
            break
        piv = next((r for r in range(rank, rows) if m[r][col] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
        pivot = m[rank][col]
        for r in range(rank + 1, rows):
            f = m[r][col]
            row_r, row_p = m[r], m[rank]
            for c in range(col, cols):
                row_r[c] = (pivot * row_r[c] - f * row_p[c]) // prev
        prev = pivot
        rank += 1
    return rank
