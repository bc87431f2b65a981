"""Entropy kernels with a compiled core and a pure-Python fallback.

The compiled module is used when it imports. Set ``INFODIV_BACKEND`` to
``python`` or ``cython`` to force one; forcing ``cython`` when it is not
built raises ImportError.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

AVAILABLE = ("python",) + (("cython",) if _ckernels is not None else ())


def get_backend(name: str | None = None) -> ModuleType:
    """Return the kernel module for ``name`` (``"python"``, ``"cython"`` or None for default)."""
    if name is None:
        name = os.environ.get("INFODIV_BACKEND", "").strip().lower() or None
    if name is None:
        return _ckernels if _ckernels is not None else _pykernels
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


_active = get_backend()
BACKEND = "cython" if _active is _ckernels and _ckernels is not None else "python"

entropy_flat = _active.entropy_flat
pair_entropies = _active.pair_entropies
triple_entropies = _active.triple_entropies
batch_pair_entropies = _active.batch_pair_entropies
batch_triple_entropies = _active.batch_triple_entropies

__all__ = [
    "AVAILABLE",
    "BACKEND",
    "get_backend",
    "entropy_flat",
    "pair_entropies",
    "triple_entropies",
    "batch_pair_entropies",
    "batch_triple_entropies",
]
