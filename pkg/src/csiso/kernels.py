"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``CSISO_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"

if os.environ.get("CSISO_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _fallback
else:
    _impl = _fallback

orbit_labels = _impl.orbit_labels
minimal_block = _impl.minimal_block
block_sizes = _impl.block_sizes
smallest_block = _impl.smallest_block

__all__ = ["BACKEND", "orbit_labels", "minimal_block", "block_sizes", "smallest_block"]
