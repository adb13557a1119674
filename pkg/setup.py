"""Build script: compiles the optional fast kernels.

The package is fully functional without the compiled extension (a pure
Python fallback is selected at import time), so a failed compilation only
costs speed, never correctness.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible, otherwise warn and continue."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or Cython missing
            print(f"warning: skipping compiled kernels ({exc}); "
                  "pure Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "pure Python fallback will be used")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension("polar_ekr._core", ["src/polar_ekr/_core.pyx"])],
        compiler_directives={"language_level": "3"},
    )


setup(
    package_dir={"": "src"},
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
