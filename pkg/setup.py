"""Build script: compiles the optional simulation kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time); build failures here therefore only cost speed, not
functionality.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/flightdeck/_kernels/_csim.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
