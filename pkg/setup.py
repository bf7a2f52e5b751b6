"""Build script for the optional compiled greedy-selection kernel.

The package works without the extension (a pure numpy twin is selected at
import time), so a missing compiler only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "sscosamp._kernels",
                ["src/sscosamp/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"sscosamp: skipping compiled kernel ({type(exc).__name__}: {exc}); "
          "pure-python fallback will be used")

setup(ext_modules=ext_modules)
