"""Kernel selection.

The compiled extension is preferred; the pure-Python twin is used when it is
missing.  ``PERISPEC_BACKEND=python`` or ``=compiled`` forces a choice.
"""
import os

from . import _pykernels

_forced = os.environ.get("PERISPEC_BACKEND", "").strip().lower()

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    if _forced == "compiled":
        raise
    _compiled = None

if _forced == "python" or _compiled is None:
    BACKEND = "python"
    hqr_eigvals = _pykernels.hqr_eigvals
else:
    BACKEND = "compiled"
    hqr_eigvals = _compiled.hqr_eigvals


def available():
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "compiled")
    return names


def kernel(name=None):
    """Return the ``hqr_eigvals`` implementation for ``name`` (default: active)."""
    if name is None:
        return hqr_eigvals
    if name == "python":
        return _pykernels.hqr_eigvals
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernel is not built")
        return _compiled.hqr_eigvals
    raise ValueError(f"unknown backend {name!r}")
