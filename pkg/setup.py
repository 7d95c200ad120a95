"""Build hook for the optional compiled elimination kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a missing compiler must not fail the install.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "wonder._kernel",
                ["src/wonder/_kernel.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
