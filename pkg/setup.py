from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "randcantor.kernels._ccore",
        ["src/randcantor/kernels/_ccore.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
