"""Build script.

The closed-form grid kernels have an optional compiled twin; when Cython is
not available the package falls back to the pure-numpy implementation and
nothing here needs to run.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "repeatersim._kernels_cy",
                ["src/repeatersim/_kernels_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
