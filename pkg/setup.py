"""Build script for the optional compiled simulation kernel.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); building it just makes the per-symbol receiver
loop much faster.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the Cython kernel if possible, degrade to pure Python if not."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            print(f"WARNING: compiled kernel skipped ({exc}); "
                  "falling back to the pure-Python kernel", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: could not build {ext.name} ({exc}); "
                  "falling back to the pure-Python kernel", file=sys.stderr)


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mccdma._kernel_cy",
                ["src/mccdma/_kernel_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
