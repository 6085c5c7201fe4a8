"""Build shim: compiles the optional Cython kernel extension.

The package works without the extension (pure-Python fallback is selected at
import time); set BRUHATLAB_PURE=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("BRUHATLAB_PURE"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "bruhatlab._kernels",
                    ["src/bruhatlab/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[
                        ("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")
                    ],
                )
            ],
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "language_level": 3,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
