"""Build script: compiles the optional accelerator extension.

The package is fully functional without the extension; kernels.py falls back
to the pure-Python implementations when the import fails. Set
NL2API_SKIP_EXT=1 to force a pure-Python build.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("NL2API_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/nl2api/baselines/_kernels.pyx"], language_level=3
        )
    except Exception as exc:  # pragma: no cover - build-env dependent
        print(f"nl2api: skipping compiled kernels ({exc}); using pure Python")
        ext_modules = []

setup(ext_modules=ext_modules)
