"""Build hooks for the optional compiled Cauchy-sum kernel.

The package is pure Python plus one optional Cython extension.  When
Cython and a C toolchain are available the extension is compiled;
otherwise installation proceeds and the numpy fallback is selected at
import time (see qpdiff._backend).
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "qpdiff._cauchy_core",
                ["src/qpdiff/_cauchy_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
