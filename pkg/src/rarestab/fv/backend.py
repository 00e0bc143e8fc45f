"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback.  ``RARESTAB_BACKEND=python`` forces the fallback.
"""
import os

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}
try:
    from . import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None
else:
    _BACKENDS["cython"] = _kernels_c


def available():
    return sorted(_BACKENDS)


def get(name=None):
    """Return the kernel module ``name``, or the active one when ``name`` is None."""
    if name is None:
        return _active
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available()}") from None


def set_backend(name):
    global _active
    _active = get(name)
    return _active


_pref = os.environ.get("RARESTAB_BACKEND", "").strip().lower()
if _pref:
    _active = get(_pref)
else:
    _active = _BACKENDS.get("cython", _kernels_py)

