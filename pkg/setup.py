"""Build script: compiles the optional Cython kernels.

The package is fully functional without the extension; `cubalex.kernels`
falls back to the numpy implementation when `cubalex._kernels` is missing.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "cubalex._kernels",
                ["src/cubalex/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": 3, "embedsignature": True},
    )
except Exception as exc:  # noqa: BLE001 - any build-chain failure means pure-python install
    print(f"cubalex: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
