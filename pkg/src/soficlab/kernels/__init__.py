"""Elimination kernel selection: compiled extension when available, numpy otherwise.

Set SOFICLAB_PURE_PYTHON=1 to force the numpy implementation.
"""

from __future__ import annotations

import os

import numpy as np

if os.environ.get("SOFICLAB_PURE_PYTHON") == "1":
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernels as _impl

BACKEND: str = _impl.BACKEND
gf2_rank = _impl.gf2_rank
gf2_rref = _impl.gf2_rref
gfp_rank = _impl.gfp_rank
gfp_rref = _impl.gfp_rref


def pack_gf2(dense: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into uint64 words, 64 columns per word, LSB first."""
    m, n = dense.shape
    bits = np.ascontiguousarray(dense.astype(np.uint8) & 1)
    packed_bytes = np.packbits(bits, axis=1, bitorder="little")
    nwords = (n + 63) // 64
    padded = np.zeros((m, nwords * 8), dtype=np.uint8)
    padded[:, : packed_bytes.shape[1]] = packed_bytes
    return padded.view(np.uint64)


def unpack_gf2(packed: np.ndarray, ncols: int) -> np.ndarray:
    """Inverse of pack_gf2; returns a 0/1 int64 matrix."""
    as_bytes = packed.view(np.uint8)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return bits[:, :ncols].astype(np.int64)
