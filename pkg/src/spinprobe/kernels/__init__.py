"""Dense linear-algebra kernels with a compiled core and a pure fallback.

The compiled extension is preferred when it imported cleanly. Set
SPINPROBE_KERNELS=pure or =native to force a backend; anything else
raises at import time.
"""

import os

_choice = os.environ.get("SPINPROBE_KERNELS", "auto")
if _choice not in ("auto", "native", "pure"):
    raise ImportError(
        "SPINPROBE_KERNELS must be one of auto|native|pure, got %r" % _choice
    )

if _choice == "pure":
    from . import _pure as _impl
else:
    try:
        from . import _native as _impl
    except ImportError:
        if _choice == "native":
            raise
        from . import _pure as _impl

BACKEND = _impl.BACKEND
eigh = _impl.eigh
lstsq = _impl.lstsq
svdvals = _impl.svdvals

__all__ = ["BACKEND", "eigh", "lstsq", "svdvals"]
