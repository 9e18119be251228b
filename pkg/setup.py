from setuptools import Extension, setup

# The compiled kernels are optional: if Cython (or a C compiler) is missing the
# build still succeeds and fhplab falls back to the pure-Python kernels.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "fhplab._kernels",
                ["src/fhplab/_kernels.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
