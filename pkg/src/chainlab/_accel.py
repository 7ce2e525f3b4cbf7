"""Numba/NumPy backend selection for the hot kernels.

The environment variable ``CHAINLAB_NUMBA`` picks the backend once at import
time: any value other than ``"0"`` (the default) enables the compiled path
when numba is importable; ``CHAINLAB_NUMBA=0`` forces the pure-NumPy
fallback.  ``benchmarks/bench_kernels.py`` times both paths side by side.
"""

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("CHAINLAB_NUMBA", "1") != "0"


def njit(*args, **kwargs):
    """``numba.njit`` when the compiled path is active, identity otherwise."""
    if USE_NUMBA:
        return numba.njit(*args, **kwargs)

    def wrap(func):
        return func

    if args and callable(args[0]):
        return args[0]
    return wrap


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
