"""Build script for the optional compiled simulator kernel.

The package is pure Python except for one hot loop: the event-by-event
simulator in _kernel.pyx.  If Cython or a C compiler is unavailable the
build still succeeds and the package falls back to the line-for-line
Python port in _kernel_py.py (selected at import time by _backend.py).
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    # -ffp-contract=off: the compiled kernel must round exactly like the
    # Python fallback, so the compiler may not fuse a*b+c into an FMA.
    ext_modules = cythonize(
        [
            Extension(
                "tandem_aoi._kernel",
                ["src/tandem_aoi/_kernel.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
except ImportError:
    print("Cython not found; building without the compiled kernel.", file=sys.stderr)

setup(ext_modules=ext_modules)
