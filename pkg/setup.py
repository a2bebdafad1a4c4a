"""Build script for the optional compiled SMO kernel.

The package works without the extension (a numpy fallback is selected at
import time), so compilation failures are tolerated.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "netcut.analytical._smo_core",
                sources=["src/netcut/analytical/_smo_core.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
