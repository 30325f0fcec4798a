"""Numba on/off switch.

Set GROUPFLOW_DISABLE_JIT=1 (or "true"/"yes") to run the kernels as plain
Python. Both paths execute the same source and draw from the same
numpy.random.Generator, so they produce identical results; only speed
differs.
"""

import os


def _jit_wanted() -> bool:
    flag = os.environ.get("GROUPFLOW_DISABLE_JIT", "").strip().lower()
    return flag not in ("1", "true", "yes")


JIT_ENABLED = _jit_wanted()

if JIT_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a hard dep, belt and braces
        JIT_ENABLED = False

if not JIT_ENABLED:

    def njit(*args, **kwargs):
        """Pass-through decorator standing in for numba.njit."""
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
