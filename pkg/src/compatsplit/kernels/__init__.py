"""Arithmetic kernel backend selection.

The compiled extension is used when importable; COMPATSPLIT_BACKEND=pure
forces the fallback, COMPATSPLIT_BACKEND=compiled makes a missing extension
an import error instead of a silent fallback.
"""

import os

_requested = os.environ.get("COMPATSPLIT_BACKEND", "")
if _requested not in ("", "pure", "compiled"):
    raise ImportError(f"COMPATSPLIT_BACKEND must be 'pure' or 'compiled', got {_requested!r}")

if _requested == "pure":
    from . import pure as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "compiled":
            raise
        from . import pure as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND
mat_mul = _impl.mat_mul
rref = _impl.rref
kron_sum = _impl.kron_sum

__all__ = ["BACKEND", "mat_mul", "rref", "kron_sum"]
