"""Backend selection for the hot kernels.

The default backend compiles the kernels in :mod:`structres._kernels.impl`
with ``numba.njit``.  Setting the environment variable
``STRUCTRES_BACKEND=python`` (or calling :func:`set_backend`) selects the
interpreted pure-numpy path instead; ``STRUCTRES_BACKEND=numba`` demands
the compiled path and fails loudly if numba is unavailable.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

from . import impl

_ENV_VAR = "STRUCTRES_BACKEND"
_KERNEL_NAMES = ("hopcroft_karp", "tarjan_scc", "bfs_reachable")

_PYTHON = SimpleNamespace(
    name="python", **{name: getattr(impl, name) for name in _KERNEL_NAMES}
)

_numba_backend: SimpleNamespace | None = None
_active: SimpleNamespace | None = None
_override: str | None = None


def _build_numba_backend() -> SimpleNamespace:
    global _numba_backend
    if _numba_backend is None:
        from numba import njit

        wrapped = {
            name: njit(cache=True)(getattr(impl, name)) for name in _KERNEL_NAMES
        }
        _numba_backend = SimpleNamespace(name="numba", **wrapped)
    return _numba_backend


def _resolve() -> SimpleNamespace:
    choice = _override or os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice in ("python", "numpy"):
        return _PYTHON
    if choice == "numba":
        return _build_numba_backend()
    if choice != "auto":
        raise ValueError(f"unknown {_ENV_VAR} value: {choice!r}")
    try:
        return _build_numba_backend()
    except ImportError:
        return _PYTHON


def kernels() -> SimpleNamespace:
    """The active kernel namespace."""
    global _active
    if _active is None:
        _active = _resolve()
    return _active


def active_backend() -> str:
    return kernels().name


def set_backend(name: str | None) -> None:
    """Force a backend ("python" / "numba") or reset to the env default."""
    global _override, _active
    _override = name
    _active = None
    kernels()
