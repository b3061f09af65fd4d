"""Select the compiled grid kernel when available, else the numpy one.

Set ``HYBRIDMOD_PURE=1`` to force the fallback.
"""

import os

from . import _dse_py

BACKEND = "python"
_impl = _dse_py
if not os.environ.get("HYBRIDMOD_PURE"):
    try:
        from . import _dse_kernel as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        pass

grid_block = _impl.grid_block
grid_frontier = _impl.grid_frontier
