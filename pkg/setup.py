import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # build without the compiled core; the pure-Python kernels take over
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [Extension("gelltool._core", [os.path.join("src", "gelltool", "_core.pyx")])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
