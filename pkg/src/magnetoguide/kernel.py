"""Selects the compiled mode-sum kernel when available.

Set ``MAGNETOGUIDE_PURE_PYTHON=1`` to force the NumPy fallback.
"""
import os

from . import _kernel_py

BACKEND = "python"
pair_tensor = _kernel_py.pair_tensor

if not os.environ.get("MAGNETOGUIDE_PURE_PYTHON"):
    try:
        from . import _kernel  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        pair_tensor = _kernel.pair_tensor
        BACKEND = "cython"

__all__ = ["BACKEND", "pair_tensor"]
