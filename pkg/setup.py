# Builds the optional compiled star-product kernel.
# Run as `python3 setup.py build_ext --inplace` for an in-tree build; a normal
# pip install compiles it automatically when Cython is available.  The package
# falls back to the pure-Python kernel when the extension is missing.
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("NCDEFORM_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("ncdeform._starkernel", ["src/ncdeform/_starkernel.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
