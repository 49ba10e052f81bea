"""Numba switch.

Kernels are written once in nopython-compatible Python. ``jit`` compiles them
with numba unless ``FLIPCUBE_DISABLE_NUMBA`` is set (or numba is missing), in
which case they run as plain Python over numpy arrays.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}


def _numba_wanted():
    return os.environ.get("FLIPCUBE_DISABLE_NUMBA", "").strip().lower() in _FALSY


try:
    if not _numba_wanted():
        raise ImportError
    import numba
    USE_NUMBA = True
except ImportError:
    numba = None
    USE_NUMBA = False

# int64 kernels are exact only while intermediate products stay below 2**63.
ORIENT_SAFE = 1 << 30      # max coordinate span for orientation kernels
INCIRCLE_SAFE = 1 << 13    # max coordinate span for in-circle coefficient kernels


def jit(func):
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func


def py(func):
    """Return the uncompiled body of a kernel."""
    return getattr(func, "py_func", func)


def backend():
    return "numba" if USE_NUMBA else "python"
