"""Backend selection for the hot GF(2) kernels.

The compiled extension is used when it imports; otherwise the numpy twin.
Set ``MAGICSURGERY_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

_compiled: ModuleType | None
try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

if _compiled is not None and not os.environ.get("MAGICSURGERY_PURE"):
    _impl: ModuleType = _compiled
    BACKEND = "cython"
else:
    _impl = _pykernels
    BACKEND = "python"

rref_inplace = _impl.rref_inplace
search_weight = _impl.search_weight
error_flags = _impl.error_flags


def backends() -> dict[str, ModuleType]:
    """All importable kernel implementations, keyed by name."""
    out: dict[str, ModuleType] = {"python": _pykernels}
    if _compiled is not None:
        out["cython"] = _compiled
    return out
