"""Hot inner loops with a compiled backend and a pure-Python fallback.

The compiled extension (``topoctl._kernels``) is used when it imports;
set ``TOPOCTL_KERNELS=python`` to force the fallback. Both backends take
the same arguments and must return identical results.

Functions
---------
max_gap(angles)
    Largest circular gap of an ascending angle array in ``[0, 2*pi)``.
discover_count(levels, angles, alpha, tol, min_level)
    Grow a discovery prefix level by level until no gap exceeds ``alpha``.
redundant_flags(angles, lengths, his, los, limit)
    Flag incident edges dominated by a smaller-id edge within ``limit``.
"""

from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

BACKENDS: dict[str, ModuleType] = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

_active: ModuleType = _kernels_py
if _compiled is not None and os.environ.get("TOPOCTL_KERNELS", "").lower() != "python":
    _active = _compiled


def backend() -> str:
    """Name of the backend currently in use."""
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def use_backend(name: str) -> None:
    global _active
    if name not in BACKENDS:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}")
    _active = BACKENDS[name]


def _f64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def _i64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def max_gap(angles) -> float:
    return float(_active.max_gap(_f64(angles)))


def discover_count(levels, angles, alpha: float, tol: float, min_level: int = 0) -> tuple[int, int]:
    count, level = _active.discover_count(_i64(levels), _f64(angles), float(alpha), float(tol), int(min_level))
    return int(count), int(level)


def redundant_flags(angles, lengths, his, los, limit: float) -> np.ndarray:
    out = _active.redundant_flags(_f64(angles), _f64(lengths), _i64(his), _i64(los), float(limit))
    return np.asarray(out, dtype=bool)
