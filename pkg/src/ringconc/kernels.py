"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise the NumPy
fallback in ``_pycore``.  Setting ``RINGCONC_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _pycore

if os.environ.get("RINGCONC_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pycore
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pycore

BACKEND: str = _impl.BACKEND

rotate = _impl.rotate
layer_states = _impl.layer_states
min_rotation = _impl.min_rotation
reverse_bits = _impl.reverse_bits
orbit_keys = _impl.orbit_keys
pair_counts = _impl.pair_counts
element_index = _impl.element_index
flip_couplings = _impl.flip_couplings


def backends() -> dict:
    """All importable backends keyed by name (used by tests and benchmarks)."""
    out = {"python": _pycore}
    try:
        from . import _core

        out["cython"] = _core
    except ImportError:
        pass
    return out
