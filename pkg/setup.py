import numpy
from Cython.Build import cythonize
from setuptools import setup
from setuptools.extension import Extension

# -ffp-contract=off: the compiled kernels must be bitwise-identical to the
# NumPy fallback, so FMA contraction has to stay off.
extensions = [
    Extension(
        "easdet.kernels._core",
        ["src/easdet/kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": 3}))
