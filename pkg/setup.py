"""Build script: compiles the optional speedup extension.

Set GRAMMARGEN_NO_EXTENSION=1 to skip the compiled core; the package then
runs on the pure-Python fallback selected in grammargen.backend.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("GRAMMARGEN_NO_EXTENSION") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "grammargen._speedups",
                    ["src/grammargen/_speedups.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": 3},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
