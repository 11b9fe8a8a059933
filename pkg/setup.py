"""Build script: compiles the optional special-function kernel extension.

The package is fully functional without the extension (a pure-Python
fallback is selected at import), so a missing compiler or Cython only
costs speed.  `python setup.py build_ext --inplace` drops the compiled
module next to the sources for in-tree runs.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Downgrade extension build failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            warnings.warn(
                f"building the mipool._kernels extension failed ({exc}); "
                "falling back to the pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(
                f"building {ext.name} failed ({exc}); falling back to the "
                "pure-Python kernels")


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython is unavailable; using the pure-Python kernels")
        return []
    return cythonize(
        ["src/mipool/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )


setup(
    ext_modules=_extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
