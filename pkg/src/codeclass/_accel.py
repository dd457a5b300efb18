"""Numba switch for the hot kernels.

Set ``CODECLASS_NUMBA=0`` in the environment before import to run every
kernel as plain Python/numpy. Compiled kernels keep the original function on
``.py_func`` so tests can cross-check both paths in one process.
"""
import os

_flag = os.environ.get("CODECLASS_NUMBA", "1").strip().lower()
USE_NUMBA = _flag not in ("0", "false", "no", "off")

if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if USE_NUMBA:

    def njit(fn=None, **kwargs):
        kwargs.setdefault("cache", True)
        kwargs.setdefault("nogil", True)
        if fn is None:
            return lambda f: numba.njit(**kwargs)(f)
        return numba.njit(**kwargs)(fn)

else:

    def njit(fn=None, **kwargs):
        if fn is None:
            return lambda f: f
        return fn


def py_func(fn):
    """Return the uncompiled version of a kernel (itself when numba is off)."""
    return getattr(fn, "py_func", fn)
