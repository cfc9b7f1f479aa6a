"""Build script. Compiles the optional Cython kernel core.

The package works without the extension (a pure-numpy fallback is selected
at import time); set MOLLAB_PURE_PYTHON=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("MOLLAB_PURE_PYTHON"):
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "mollab._kernels._core",
                    ["src/mollab/_kernels/_core.pyx"],
                    include_dirs=[np.get_include()],
                    # -ffp-contract=off keeps the compiled arithmetic
                    # IEEE-identical to the numpy fallback (no FMA fusion).
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
