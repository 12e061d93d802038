"""Kernel selection: compiled extension when importable, else pure Python.

Set ``ZETAFORMS_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
omega_batch = _kernels_py.omega_batch

FORCED_PURE = os.environ.get("ZETAFORMS_PURE", "") in ("1", "true", "yes")

if not FORCED_PURE:
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None
    if _compiled is not None:
        omega_batch = _compiled.omega_batch
        BACKEND = "compiled"

omega_pq = _kernels_py.omega_pq

__all__ = ["BACKEND", "FORCED_PURE", "omega_batch", "omega_pq"]
