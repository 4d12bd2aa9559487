"""Optional numba acceleration.

Hot loops (edge generation, the container pruning process, alternating
BFS) are written as plain nopython-compatible functions and decorated
here.  When numba is missing, or SPERNERLAB_PURE_PYTHON is set, the same
functions run as ordinary Python: slower, byte-for-byte identical output.
"""

from __future__ import annotations

import os


def _plain(*args, **kwargs):
    def wrap(fn):
        return fn

    return wrap


if os.environ.get("SPERNERLAB_PURE_PYTHON"):
    njit = _plain
    HAVE_NUMBA = False
else:
    try:
        from numba import njit  # type: ignore[no-redef]

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        njit = _plain
        HAVE_NUMBA = False
