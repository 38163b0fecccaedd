import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; the numpy kernel is used at runtime
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("MUBFORGE_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "mubforge._core",
                ["src/mubforge/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
