from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python install: revsurf._kernel falls back to the Python twin.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "revsurf._kernel_c",
                ["src/revsurf/_kernel_c.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
