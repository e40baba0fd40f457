"""Backend selection: compiled kernel when available, pure Python otherwise.

Set REVSURF_PURE=1 to force the pure-Python kernel (useful for debugging
and for the backend benchmark).
"""

import os

if os.environ.get("REVSURF_PURE", "").strip() not in ("", "0"):
    from . import _kernel_py as impl
    BACKEND = "pure"
else:
    try:
        from . import _kernel_c as impl  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        from . import _kernel_py as impl
        BACKEND = "pure"

__all__ = ["impl", "BACKEND"]
