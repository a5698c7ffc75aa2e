from setuptools import Extension, setup

# The compiled kernels are optional: without Cython (or a C compiler) the
# package installs anyway and falls back to the pure-numpy implementations.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "starkchain._kernels._core",
                ["src/starkchain/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
