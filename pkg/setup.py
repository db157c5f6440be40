from setuptools import Extension, setup

# The compiled counting kernel is an optional accelerator.  If Cython (or a C
# toolchain) is unavailable the package still installs and falls back to the
# pure-Python kernel at import time.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "fo2kc.kernels._fastcount",
                ["src/fo2kc/kernels/_fastcount.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
