"""Build script: compiles the simulation kernel when a toolchain is available.

The package works without the extension (a pure-Python backend is selected at
import time), so a failed compile only costs speed.  -ffp-contract=off keeps
the kernel's floating-point arithmetic bit-identical to the Python backend.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing or broken
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"WARNING: compiled kernel not built ({exc}); "
            "falling back to the pure-Python backend",
            file=sys.stderr,
        )


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "threshold_market._kernel",
                ["src/threshold_market/_kernel.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level="3",
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
