"""Numba acceleration shim.

Hot kernels (Monte Carlo walks, packing radius sweeps) are written once and
compiled with ``numba.njit`` when available.  Setting the environment variable
``COVERWALK_PURE_NUMPY=1`` forces the pure numpy/Python fallback path, which
produces the same results (bit-identical for the walk kernels) but is slower.
"""

import os

_FORCED_OFF = os.environ.get("COVERWALK_PURE_NUMPY", "").strip().lower() in {
    "1", "true", "yes", "on",
}

if not _FORCED_OFF:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised via env flag instead
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA

if not USE_NUMBA:

    def njit(*args, **kwargs):  # noqa: D103 - signature-compatible no-op
        def wrap(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return wrap


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
