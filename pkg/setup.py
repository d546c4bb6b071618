"""Build script.  The compiled kernel extension is optional: if Cython (or a
C compiler) is unavailable the package installs anyway and falls back to the
NumPy kernel backend at import time."""

from setuptools import Extension, setup


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "seamforms._kernels._core",
        sources=["src/seamforms/_kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    try:
        return cythonize([ext], language_level=3)
    except Exception:
        return []


setup(ext_modules=extensions())
