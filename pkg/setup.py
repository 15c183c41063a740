from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # No Cython: install without the compiled kernels; the package falls
    # back to the pure-Python implementations at import time.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "monad_forge._kernels._fastrank",
                ["src/monad_forge/_kernels/_fastrank.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": 3,
        },
    )

setup(ext_modules=ext_modules)
