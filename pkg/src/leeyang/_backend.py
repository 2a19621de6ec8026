"""Select compiled or pure-Python kernels.

Set ``LEEYANG_PURE_PYTHON=1`` to force the fallback.
"""

import os

from leeyang import _pykernels

kernels = _pykernels
NAME = "python"

if not os.environ.get("LEEYANG_PURE_PYTHON"):
    try:
        from leeyang import _ckernels
    except ImportError:
        pass
    else:
        kernels = _ckernels
        NAME = "cython"


def threads():
    """Worker cap from ``LEEYANG_THREADS`` (default: cpu count, at least 1)."""
    raw = os.environ.get("LEEYANG_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)
