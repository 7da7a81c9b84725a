"""Build script for the optional compiled overlap kernel.

The package is fully functional without the extension; hexconf._kernel
falls back to the pure-Python implementation when the compiled module is
absent or HEXCONF_PURE is set.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext = Extension(
        "hexconf._overlap",
        sources=["src/hexconf/_overlap.pyx"],
        extra_compile_args=["-O3"],
    )
    ext.optional = True
    ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})

setup(ext_modules=ext_modules)
