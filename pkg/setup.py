"""Build the optional compiled Newton kernel.

Without Cython the package installs pure-Python and falls back to
``sphere_dubins._newton_py`` at import time.
"""

from setuptools import setup

ext_modules = []
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
                "sphere_dubins._newton",
                ["src/sphere_dubins/_newton.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
