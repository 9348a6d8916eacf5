from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to a numpy
# implementation when the extension is missing (see taylorlets._backend).
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension(
            "taylorlets._kernel",
            ["src/taylorlets/_kernel.pyx"],
            extra_compile_args=["-O3"],
        )],
        language_level=3,
    )

setup(ext_modules=ext_modules)
