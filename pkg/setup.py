"""Build the optional compiled special-function kernels.

Without Cython or a C compiler the package still installs and runs on the
pure-Python fallback.
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
                "isocauchy.specfun._kernels",
                ["src/isocauchy/specfun/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
