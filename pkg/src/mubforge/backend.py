"""Select the compiled kernel when it imports, otherwise the numpy fallback.

Set ``MUBFORGE_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernel

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

KERNELS: dict[str, ModuleType] = {"python": _pykernel}
if _core is not None:
    KERNELS["compiled"] = _core

if _core is not None and not os.environ.get("MUBFORGE_PURE"):
    DEFAULT = "compiled"
else:
    DEFAULT = "python"


def get_kernel(name: str | None = None) -> ModuleType:
    name = name or DEFAULT
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"kernel {name!r} not available (have {sorted(KERNELS)})") from None
