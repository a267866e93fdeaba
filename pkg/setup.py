import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    # the compiled kernels are an accelerator; a failed compile must not
    # break installation (the pure backend is always available)
    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"compiled kernels skipped: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"compiled kernels skipped: {exc}")


ext_modules = []
if os.environ.get("COMPATSPLIT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("compatsplit.kernels._core", ["src/compatsplit/kernels/_core.pyx"])],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
