"""Build the optional compiled kernels; the package falls back to pure Python without them."""

import os

from setuptools import Extension, setup


def get_extensions():
    if os.environ.get("IDEMFACTOR_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("idemfactor._ckernels", ["src/idemfactor/_ckernels.pyx"])
    return cythonize([ext], compiler_directives={"language_level": 3})


setup(ext_modules=get_extensions())
