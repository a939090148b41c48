"""Kernel compilation switch.

Hot loops are written in the numba-compatible subset of Python. When numba
is importable they are compiled with ``@njit``; setting ``INVSQRT_NO_NUMBA=1``
(or running without numba installed) leaves them as plain Python functions
operating on floats and numpy arrays.
"""
import os

_FLAG = os.environ.get("INVSQRT_NO_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG in {"1", "true", "yes", "on"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and not DISABLED_BY_ENV
BACKEND = "numba" if USE_NUMBA else "python"


def kernel(func):
    """Compile ``func`` with numba when enabled, else return it unchanged."""
    if USE_NUMBA:
        return numba.njit(cache=True, fastmath=False)(func)
    return func
