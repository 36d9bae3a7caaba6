"""Power law and the discovery power schedule.

Transmission power grows as ``c * d**n`` with ``c`` fixed by ``p(R) = P``.
Discovery broadcasts walk a geometric schedule ``p0 * g**k`` (k >= 1),
clamped at ``P``; level ``k`` is the k-th broadcast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DIST_TOL = 1e-9


class RadioDomainError(ValueError):
    pass


@dataclass(frozen=True)
class RadioModel:
    path_loss_exponent: float = 2.0
    max_range: float = 500.0
    max_power: float = 1.0
    initial_power: float | None = None
    growth_factor: float = 2.0
    _p0: float = field(init=False, repr=False, compare=False)
    _top: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.path_loss_exponent < 2.0:
            raise ValueError("path_loss_exponent must be >= 2")
        if self.max_range <= 0 or self.max_power <= 0:
            raise ValueError("max_range and max_power must be positive")
        if not self.growth_factor > 1.0:
            raise ValueError("growth_factor must exceed 1")
        # far below the power of any pair the generator can place
        p0 = self.max_power * 2.0**-40 if self.initial_power is None else float(self.initial_power)
        if not 0.0 < p0 < self.max_power:
            raise ValueError("initial_power must lie in (0, max_power)")
        object.__setattr__(self, "_p0", p0)
        object.__setattr__(self, "_top", self._find_top_level())

    @property
    def p0(self) -> float:
        return self._p0

    @property
    def coefficient(self) -> float:
        return self.max_power / self.max_range**self.path_loss_exponent

    def power_for_distance(self, d: float) -> float:
        if d < 0:
            raise RadioDomainError(f"negative distance {d!r}")
        if d == self.max_range:
            return self.max_power
        return self.max_power * (d / self.max_range) ** self.path_loss_exponent

    def distance_for_power(self, p: float) -> float:
        if p < 0:
            raise RadioDomainError(f"negative power {p!r}")
        if p > self.max_power * (1.0 + 1e-12):
            raise RadioDomainError(f"power {p!r} exceeds maximum {self.max_power!r}")
        if p >= self.max_power:
            return self.max_range
        return self.max_range * (p / self.max_power) ** (1.0 / self.path_loss_exponent)

    def powers_for_distances(self, d: np.ndarray) -> np.ndarray:
        return self.max_power * (np.asarray(d, dtype=np.float64) / self.max_range) ** self.path_loss_exponent

    def next_power(self, p: float) -> float:
        """One ``Increase`` step, clamped at the maximum power."""
        return min(self.growth_factor * p, self.max_power)

    # -- schedule levels -------------------------------------------------

    @property
    def top_level(self) -> int:
        """Index of the first broadcast that reaches ``P``."""
        return self._top

    def _find_top_level(self) -> int:
        k = max(1, math.ceil(math.log(self.max_power / self.p0) / math.log(self.growth_factor)))
        while k > 1 and self.p0 * self.growth_factor ** (k - 1) >= self.max_power:
            k -= 1
        while self.p0 * self.growth_factor**k < self.max_power:
            k += 1
        return k

    def level_power(self, k: int) -> float:
        if k <= 0:
            return self.p0
        if k >= self.top_level:
            return self.max_power
        return min(self.p0 * self.growth_factor**k, self.max_power)

    def level_distance(self, k: int) -> float:
        return self.distance_for_power(self.level_power(k))

    def level_distances(self, k: np.ndarray) -> np.ndarray:
        k = np.asarray(k, dtype=np.int64)
        p = np.minimum(self.p0 * self.growth_factor ** k.astype(np.float64), self.max_power)
        p = np.where(k >= self.top_level, self.max_power, p)
        return self.max_range * (p / self.max_power) ** (1.0 / self.path_loss_exponent)

    def levels_for_distances(self, d: np.ndarray) -> np.ndarray:
        """First broadcast level whose range reaches each distance (ties within tolerance reach).

        Distances beyond ``max_range`` map to ``top_level + 1``.
        """
        d = np.asarray(d, dtype=np.float64)
        top = self.top_level
        with np.errstate(divide="ignore"):
            ratio = self.powers_for_distances(d) / self.p0
            est = np.ceil(np.log(np.maximum(ratio, 1e-300)) / math.log(self.growth_factor))
        k = np.clip(est, 1, top).astype(np.int64)
        for _ in range(3):
            up = (d > self.level_distances(k) + DIST_TOL) & (k <= top)
            k = k + up
            down = (k > 1) & (d <= self.level_distances(k - 1) + DIST_TOL)
            k = k - down
        k = np.where(d > self.max_range, top + 1, k)
        return k

    def level_for_distance(self, d: float) -> int:
        """Scalar form of :meth:`levels_for_distances`."""
        if d > self.max_range:
            return self._top + 1
        top = self._top
        p = self.power_for_distance(d)
        k = math.ceil(math.log(max(p / self.p0, 1e-300)) / math.log(self.growth_factor)) if p > 0 else 1
        k = min(max(k, 1), top)
        while k < top and d > self.level_distance(k) + DIST_TOL:
            k += 1
        while k > 1 and d <= self.level_distance(k - 1) + DIST_TOL:
            k -= 1
        return k

    def level_for_power(self, p: float) -> int:
        """Level index of a schedule power value (the smallest level at or above ``p``)."""
        return int(self.levels_for_distances(np.array([self.distance_for_power(min(p, self.max_power))]))[0])

    def schedule(self) -> list[float]:
        """Every broadcast power of a full discovery run, in order."""
        return [self.level_power(k) for k in range(1, self.top_level + 1)]

    def max_iterations(self) -> int:
        return math.ceil(math.log(self.max_power / self.p0) / math.log(self.growth_factor)) + 1
