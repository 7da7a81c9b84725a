"""Overlap kernel selection: compiled extension when available, else Python.

Set HEXCONF_PURE=1 to force the pure-Python implementation (used by the
benchmark and by the backend-parity tests).
"""

from __future__ import annotations

import os

if os.environ.get("HEXCONF_PURE"):
    from . import _overlap_py as _impl
else:
    try:
        from . import _overlap as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _overlap_py as _impl

BACKEND: str = _impl.BACKEND
all_overlaps = _impl.all_overlaps
first_overlap_ordered = _impl.first_overlap_ordered
