"""Build script: compiles the optional enumeration kernel.

The package is pure Python except for one hot loop (lattice vector
enumeration under a quadratic form bound).  If Cython or a C compiler is
unavailable the build falls back to the pure-Python kernel transparently.
"""

from setuptools import Extension, setup


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    import numpy as np

    ext = Extension(
        "alk._fpenum",
        sources=["src/alk/_fpenum.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
    )
    try:
        return cythonize([ext], language_level=3)
    except Exception:
        return []


setup(ext_modules=_extensions())
