"""Build script for the compiled SCPPM decoder kernels.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); building it makes the Monte Carlo FER harness
roughly an order of magnitude faster.
"""

import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "relaylink.scppm._kernels",
        ["src/relaylink/scppm/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
