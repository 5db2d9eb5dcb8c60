"""Back-end selection for the simulation hot loops.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used.  :func:`use_backend` switches at
run time (tests and the benchmark compare the two).
"""
from __future__ import annotations

import logging
from types import ModuleType

from . import _pykernels

log = logging.getLogger(__name__)

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
    log.debug("compiled kernels unavailable, using pure-Python fallback")

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

_active: ModuleType = _ckernels if _ckernels is not None else _pykernels


def available() -> list[str]:
    return sorted(_BACKENDS)


def backend_name() -> str:
    return "compiled" if _active is _ckernels else "python"


def use_backend(name: str) -> str:
    """Select ``"compiled"`` or ``"python"``; returns the previous name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available (have {available()})")
    previous = backend_name()
    _active = _BACKENDS[name]
    return previous


def get() -> ModuleType:
    return _active
