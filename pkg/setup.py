"""Build script: compiles the optional Cython elimination kernels.

If Cython or a C compiler is unavailable the package still installs;
soficlab.kernels falls back to the numpy implementation at import time.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "soficlab.kernels._ckernels",
                ["src/soficlab/kernels/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
except ImportError:
    ext_modules = []

setup(
    ext_modules=ext_modules,
    include_dirs=[numpy.get_include()],
)
