"""Kernel backend selection: numba-compiled integration loops with a pure-numpy fallback.

The environment variable ``ITMFLOW_BACKEND`` picks the backend at import time:

* ``numba`` -- require numba, fail if it cannot be imported,
* ``numpy`` -- force the pure-numpy fallback,
* ``auto`` (or unset) -- use numba when importable, fall back otherwise.

Both backends execute the same source and produce bit-identical trajectories;
numba only removes interpreter overhead from the stepping loops.
"""

import os

_choice = os.environ.get("ITMFLOW_BACKEND", "auto").strip().lower() or "auto"
if _choice not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"ITMFLOW_BACKEND must be 'numba', 'numpy' or 'auto', got {_choice!r}"
    )

_numba = None
if _choice in ("auto", "numba"):
    try:
        import numba as _numba
    except ImportError:
        if _choice == "numba":
            raise RuntimeError(
                "ITMFLOW_BACKEND=numba but numba is not importable"
            ) from None

USE_NUMBA = _numba is not None
BACKEND = "numba" if USE_NUMBA else "numpy"


def jit(func):
    """Compile ``func`` with numba when the numba backend is active, else return it as-is."""
    if USE_NUMBA:
        return _numba.njit(cache=True)(func)
    return func


def jit_nocache(func):
    """Like :func:`jit` but without on-disk caching (for loops taking compiled callees)."""
    if USE_NUMBA:
        return _numba.njit(func)
    return func


def is_compiled(func) -> bool:
    """True when ``func`` is a numba dispatcher callable from compiled code."""
    return USE_NUMBA and isinstance(func, _numba.core.dispatcher.Dispatcher)
