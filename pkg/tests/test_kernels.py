import subprocess
import sys

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from soficlab.kernels import BACKEND, pack_gf2
from soficlab.kernels import _pykernels as pk

try:
    from soficlab.kernels import _ckernels as ck
except ImportError:
    ck = None


@settings(max_examples=40)
@given(st.integers(1, 40), st.integers(1, 80), st.integers(0, 10**6))
def test_gf2_backends_agree(rows, cols, seed):
    if ck is None:
        return
    dense = np.random.default_rng(seed).integers(0, 2, size=(rows, cols))
    packed = pack_gf2(dense)
    assert ck.gf2_rank(packed.copy(), cols) == pk.gf2_rank(packed.copy(), cols)
    a, b = packed.copy(), packed.copy()
    ck.gf2_rref(a, cols)
    pk.gf2_rref(b, cols)
    assert np.array_equal(a, b)


@settings(max_examples=40)
@given(
    st.integers(1, 30),
    st.integers(1, 30),
    st.sampled_from((2, 3, 5, 2147483647)),
    st.integers(0, 10**6),
)
def test_gfp_backends_agree(rows, cols, p, seed):
    if ck is None:
        return
    dense = np.random.default_rng(seed).integers(0, p, size=(rows, cols)).astype(np.int64)
    assert ck.gfp_rank(dense.copy(), p) == pk.gfp_rank(dense.copy(), p)
    a, b = dense.copy(), dense.copy()
    ck.gfp_rref(a, p)
    pk.gfp_rref(b, p)
    assert np.array_equal(a, b)


def test_pure_python_env_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "from soficlab.kernels import BACKEND; print(BACKEND)"],
        env={"SOFICLAB_PURE_PYTHON": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"


def test_compiled_backend_selected_when_available():
    if ck is not None:
        assert BACKEND == "cython"
