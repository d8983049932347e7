"""Build script: compiles the optional refinement-engine extension.

The package works without the extension (a pure-Python twin is selected at
import time), so any compiler or Cython failure downgrades to a warning.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("ccpbisim._engine_c", ["src/ccpbisim/_engine_c.pyx"])],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover
    print("ccpbisim: skipping compiled engine (%s); pure-Python twin will be used" % exc,
          file=sys.stderr)

setup(ext_modules=ext_modules)
