"""Build the optional Cython core.

The package works without the extension; ``heatclust._accel`` falls back
to the pure-Python kernels when ``heatclust._core`` cannot be imported.
Set ``HEATCLUST_NO_EXT=1`` to skip compiling it.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("HEATCLUST_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "heatclust._core",
                    ["src/heatclust/_core.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
