"""Backend selection for the hot graph kernels.

The compiled ``_kernels`` extension is used when it has been built; otherwise
the pure-Python ``_pykernels`` module is used. Set ``LOCALCOLOR_PURE=1`` to
force the fallback (the test suite runs both backends side by side).
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("LOCALCOLOR_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

bfs_ball = _impl.bfs_ball
core_order = _impl.core_order
dsatur_search = _impl.dsatur_search
dsatur_greedy = _impl.dsatur_greedy

STATUS_NO = _pykernels.STATUS_NO
STATUS_YES = _pykernels.STATUS_YES
STATUS_BUDGET = _pykernels.STATUS_BUDGET


def available_backends():
    """Map backend name to module for every backend importable here."""
    out = {"python": _pykernels}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out
