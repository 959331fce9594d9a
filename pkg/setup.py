"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension; delaymargin._kernels
falls back to the NumPy implementation when the compiled module is missing.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "delaymargin._kernels._core",
                ["src/delaymargin/_kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
