import os

from setuptools import setup

ext_modules = []
if os.environ.get("EPPDRIFT_PURE_PYTHON", "") in ("", "0"):
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "eppdrift._ckernels",
                ["src/eppdrift/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                # no FMA contraction: results must match the pure-Python kernels bit for bit
                extra_compile_args=["-O3", "-ffp-contract=off", "-fno-fast-math"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
