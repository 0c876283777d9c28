"""Compare the compiled elimination kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 512,1024,2048]
"""

import argparse
import time

import numpy as np

from soficlab.kernels import _pykernels as pk
from soficlab.kernels import pack_gf2

try:
    from soficlab.kernels import _ckernels as ck
except ImportError:
    ck = None


def _time(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_gf2(n: int, rng) -> dict:
    dense = rng.integers(0, 2, size=(2 * n, n))
    packed = pack_gf2(dense)
    row = {"kernel": "gf2_rank", "shape": f"{2 * n}x{n}"}
    row["python"] = _time(lambda: pk.gf2_rank(packed.copy(), n))
    if ck is not None:
        row["cython"] = _time(lambda: ck.gf2_rank(packed.copy(), n))
    return row


def bench_gfp(n: int, rng, p: int = 2147483647) -> dict:
    dense = rng.integers(0, p, size=(n, n)).astype(np.int64)
    row = {"kernel": f"gfp_rank(p={p})", "shape": f"{n}x{n}"}
    row["python"] = _time(lambda: pk.gfp_rank(dense.copy(), p))
    if ck is not None:
        row["cython"] = _time(lambda: ck.gfp_rank(dense.copy(), p))
    return row


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="256,512,1024")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)

    rows = []
    for n in sizes:
        rows.append(bench_gf2(n, rng))
        rows.append(bench_gfp(min(n, 512), rng))

    header = f"{'kernel':<24} {'shape':<12} {'python':>10} {'cython':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for row in rows:
        py = row["python"]
        cy = row.get("cython")
        speed = f"{py / cy:.1f}x" if cy else "n/a"
        cy_text = f"{cy:.4f}s" if cy else "n/a"
        print(
            f"{row['kernel']:<24} {row['shape']:<12} {py:>9.4f}s {cy_text:>10} {speed:>8}"
        )
    if ck is None:
        print("\ncompiled backend unavailable; showing fallback only")


if __name__ == "__main__":
    main()
