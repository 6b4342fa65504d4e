"""Backend selection for the hot loops.

The compiled module ``dirops._ckernels`` is used when it imports; otherwise
the numpy implementation in ``dirops._pykernels`` takes over.  Setting
``DIROPS_BACKEND=python`` forces the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from dirops import _pykernels


def _load() -> tuple[ModuleType, str]:
    if os.environ.get("DIROPS_BACKEND", "").lower() == "python":
        return _pykernels, "python"
    try:
        from dirops import _ckernels
    except ImportError:
        return _pykernels, "python"
    return _ckernels, "cython"


_impl, BACKEND = _load()

fsum = _impl.fsum
csum = _impl.csum
cdot = _impl.cdot
cmatvec = _impl.cmatvec
jacobi_singular_values = _impl.jacobi_singular_values


def backends() -> dict[str, ModuleType]:
    """All importable backends, keyed by name (used by tests and the benchmark)."""
    out = {"python": _pykernels}
    try:
        from dirops import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
