"""Kernel selection: compiled extension when available, pure Python otherwise.

Set NCDEFORM_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the cross-implementation tests).
"""
from __future__ import annotations

import os

from . import _starkernel_py

if os.environ.get("NCDEFORM_PURE_PYTHON") == "1":
    _compiled = None
else:
    try:
        from . import _starkernel as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

IMPLEMENTATION = "cython" if _compiled is not None else "python"

star_exact_py = _starkernel_py.star_exact
star_real_py = _starkernel_py.star_real
star_exact_c = _compiled.star_exact if _compiled is not None else None
star_real_c = _compiled.star_real if _compiled is not None else None
