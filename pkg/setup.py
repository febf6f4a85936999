"""Build script for the compiled kernel extension.

The extension is optional: if it fails to compile (or Cython is missing)
the install still succeeds and the package falls back to the pure NumPy
kernels at import time.

-ffp-contract=off matters: the NumPy fallback performs multiply then add
as two separately rounded operations, so the C code must not fuse them
into FMAs or the two backends stop being bit-identical.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "brokeneyes._kernels",
                sources=["src/brokeneyes/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
