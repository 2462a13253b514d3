"""Build script: compiles the stepping kernel extension when Cython and a C
compiler are available.  The package falls back to the pure-Python kernel at
import time if the extension is missing, so a plain-Python install still works.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    # No -march/-ffast-math: keep IEEE semantics identical to the fallback.
    ext_modules = cythonize(
        [
            Extension(
                "gripscribe._core",
                ["src/gripscribe/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
