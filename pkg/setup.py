"""Build script: compiles the optional Cython kernels.

The package works without the compiled extensions (pure-Python fallbacks are
selected at import time), so any failure here should not abort installation.
"""

import os

from setuptools import Extension, setup

_PYX = [
    ("sudoku_l1._kernels._exact_cy", "src/sudoku_l1/_kernels/_exact_cy.pyx"),
    ("sudoku_l1._kernels._simplex_cy", "src/sudoku_l1/_kernels/_simplex_cy.pyx"),
]

extensions = []
try:
    from Cython.Build import cythonize
    import numpy

    extensions = cythonize(
        [
            Extension(
                name,
                [path],
                extra_compile_args=["-O3"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
            for name, path in _PYX
            if os.path.exists(path)
        ],
        language_level=3,
    )
except ImportError:
    if os.environ.get("SUDOKU_L1_REQUIRE_EXTENSIONS"):
        raise

setup(ext_modules=extensions)
