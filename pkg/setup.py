"""Build the optional Cython kernels.

The package works without them: ``magicsurgery.kernels`` falls back to the
numpy implementation when the extension cannot be imported.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("MAGICSURGERY_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover - build without Cython
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "magicsurgery._kernels",
                    sources=["src/magicsurgery/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
