"""Kernel backend selection.

The compiled extension is preferred when present; the pure-numpy fallback
keeps the package fully functional without a C compiler. Set
``STARKCHAIN_BACKEND=pure`` (or ``compiled``) to force a choice at import
time. ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

from . import pure as _pure

try:
    from . import _core as _compiled
except ImportError:
    _compiled = None

_BY_NAME = {"pure": _pure}
if _compiled is not None:
    _BY_NAME["compiled"] = _compiled


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BY_NAME))


def get_backend(name: str):
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ValueError(
            f"unknown kernel backend {name!r}; available: {available_backends()}"
        ) from None


_requested = os.environ.get("STARKCHAIN_BACKEND", "").strip().lower()
if _requested:
    _active = get_backend(_requested)
    _active_name = _requested
elif _compiled is not None:
    _active = _compiled
    _active_name = "compiled"
else:
    _active = _pure
    _active_name = "pure"


def backend_name() -> str:
    """Name of the kernel backend selected at import time."""
    return _active_name


tridiag_eigh = _active.tridiag_eigh
rk4_monodromy = _active.rk4_monodromy
rk4_tridiag_evolve = _active.rk4_tridiag_evolve
