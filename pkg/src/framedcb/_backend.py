"""Select the compiled kernels when available, else the pure-Python ones.

Set ``FRAMEDCB_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and by the parity tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("FRAMEDCB_PURE_PYTHON"):
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
