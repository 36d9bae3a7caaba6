"""Angular arithmetic, gap detection and cone coverage.

Angles are plain floats in radians, normalized to ``[0, 2*pi)``. A set of
directions is an ascending float array (duplicates allowed). Coverage sets
are unions of closed arcs, stored as ``(start, length)`` pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels

TWO_PI = 2.0 * math.pi
ANGLE_TOL = 1e-9

Point = tuple[float, float]


class DegenerateGeometryError(ValueError):
    """Raised when a direction is requested between coincident points."""


def normalize_angle(theta: float) -> float:
    """Map ``theta`` into ``[0, 2*pi)``; idempotent."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod of a tiny negative value can round up to exactly 2*pi
    if t >= TWO_PI:
        t = 0.0
    return t


def normalize_angles(theta: np.ndarray) -> np.ndarray:
    t = np.mod(theta, TWO_PI)
    t[t >= TWO_PI] = 0.0
    return t


def angular_distance(a: float, b: float) -> float:
    """Shortest angular separation of two directions, in ``[0, pi]``."""
    d = math.fmod(abs(a - b), TWO_PI)
    return TWO_PI - d if d > math.pi else d


def angle_between(origin: Point, target: Point) -> float:
    """Direction of ``target`` seen from ``origin``, counterclockwise from +x."""
    dx = target[0] - origin[0]
    dy = target[1] - origin[1]
    if dx == 0.0 and dy == 0.0:
        raise DegenerateGeometryError(f"coincident points {origin!r}")
    return normalize_angle(math.atan2(dy, dx))


def direction_set(angles: Iterable[float]) -> np.ndarray:
    """Sorted multiset of normalized directions."""
    arr = np.fromiter((normalize_angle(float(a)) for a in angles), dtype=np.float64)
    arr.sort()
    return arr


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= TWO_PI + ANGLE_TOL:
        raise ValueError(f"alpha must lie in (0, 2*pi], got {alpha!r}")


def max_gap(dirs: Sequence[float] | np.ndarray) -> float:
    """Largest circular gap between consecutive directions (``2*pi`` if < 2)."""
    return kernels.max_gap(np.sort(np.asarray(dirs, dtype=np.float64)))


def has_alpha_gap(dirs: Sequence[float] | np.ndarray, alpha: float, tol: float = ANGLE_TOL) -> bool:
    """True iff some gap between consecutive directions exceeds ``alpha``.

    A gap within ``tol`` of ``alpha`` does not count as exceeding it.
    """
    _check_alpha(alpha)
    return max_gap(dirs) > alpha + tol


@dataclass(frozen=True)
class CoverageSet:
    """Disjoint closed arcs ``(start, length)`` on the circle, sorted by start."""

    arcs: tuple[tuple[float, float], ...]

    @property
    def measure(self) -> float:
        return sum(length for _, length in self.arcs)

    @property
    def is_full(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0][1] >= TWO_PI

    @property
    def is_empty(self) -> bool:
        return not self.arcs

    def contains(self, theta: float, tol: float = ANGLE_TOL) -> bool:
        theta = normalize_angle(theta)
        for start, length in self.arcs:
            offset = normalize_angle(theta - start)
            if offset <= length + tol or offset >= TWO_PI - tol:
                return True
        return False


FULL_CIRCLE = CoverageSet(((0.0, TWO_PI),))
EMPTY_COVERAGE = CoverageSet(())


def coverage_set(dirs: Sequence[float] | np.ndarray, alpha: float, tol: float = ANGLE_TOL) -> CoverageSet:
    """Union of arcs of half-width ``alpha/2`` around each direction.

    Arcs separated by no more than ``tol`` are merged, consistent with the
    tolerance used by :func:`has_alpha_gap`.
    """
    _check_alpha(alpha)
    a = np.sort(np.asarray(dirs, dtype=np.float64))
    n = len(a)
    if n == 0:
        return EMPTY_COVERAGE
    gaps = np.empty(n)
    gaps[:-1] = np.diff(a)
    gaps[-1] = a[0] + TWO_PI - a[-1]
    breaks = np.flatnonzero(gaps > alpha + tol)
    if len(breaks) == 0:
        return FULL_CIRCLE
    arcs = []
    for j, last in enumerate(breaks):
        first = (breaks[j - 1] + 1) % n
        span = a[last] - a[first]
        if last < first:
            span += TWO_PI
        arcs.append((normalize_angle(a[first] - alpha / 2.0), span + alpha))
    arcs.sort()
    return CoverageSet(tuple((float(s), float(length)) for s, length in arcs))


def coverage_equal(a: CoverageSet, b: CoverageSet, tol: float = ANGLE_TOL) -> bool:
    """Point-set equality of two coverage sets, endpoints compared within ``tol``."""
    if a.is_full or b.is_full:
        return a.is_full and b.is_full
    if len(a.arcs) != len(b.arcs):
        return False
    unmatched = list(b.arcs)
    for start, length in a.arcs:
        for k, (s2, l2) in enumerate(unmatched):
            if angular_distance(start, s2) <= tol and abs(length - l2) <= tol:
                del unmatched[k]
                break
        else:
            return False
    return True


def rotate(dirs: Sequence[float] | np.ndarray, offset: float) -> np.ndarray:
    """Rotate every direction by ``offset`` and return them re-sorted."""
    out = normalize_angles(np.asarray(dirs, dtype=np.float64) + offset)
    out.sort()
    return out
