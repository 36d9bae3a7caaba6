"""The per-node cone-based discovery loop and its network-wide result.

Each node raises its broadcast power along the radio schedule, collecting
every node that answers, until no angular gap wider than ``alpha`` is left
among the collected directions or the power reaches the maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import kernels
from .geometry import ANGLE_TOL, TWO_PI, has_alpha_gap
from .network import EdgeSet, Label, Topology
from .radio import RadioModel

# growth factor for the hand-built constructions; they need a broadcast level
# strictly between the farthest required neighbor and R
FINE_GROWTH = 1.001


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class NeighborRecord:
    peer: int
    direction: float
    power_tag: float
    required_power: float
    distance: float
    level: int


@dataclass(frozen=True)
class DiscoveryState:
    node: int
    power: float
    level: int
    neighbors: tuple[NeighborRecord, ...]
    boundary: bool
    iterations: int = 0

    @property
    def directions(self) -> np.ndarray:
        return np.sort(np.array([r.direction for r in self.neighbors], dtype=np.float64))

    @property
    def peers(self) -> frozenset[int]:
        return frozenset(r.peer for r in self.neighbors)

    def record(self, peer: int) -> NeighborRecord | None:
        for r in self.neighbors:
            if r.peer == peer:
                return r
        return None

    @property
    def rad_minus(self) -> float:
        return max((r.distance for r in self.neighbors), default=0.0)


@dataclass(frozen=True)
class Radii:
    rad_minus: float
    rad: float


@dataclass(frozen=True)
class CbtcResult:
    topology: Topology
    alpha: float
    states: Mapping[int, DiscoveryState]
    n_alpha: EdgeSet
    e_alpha: EdgeSet
    reverse_contacts: Mapping[int, frozenset[int]]
    radii: Mapping[int, Radii]

    @property
    def boundary_nodes(self) -> frozenset[int]:
        return frozenset(u for u, s in self.states.items() if s.boundary)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= TWO_PI + ANGLE_TOL:
        raise ValueError(f"alpha must lie in (0, 2*pi], got {alpha!r}")


def discover_node(node: int, peers: np.ndarray, distances: np.ndarray, directions: np.ndarray,
                  model: RadioModel, alpha: float, start_level: int = 0,
                  levels: np.ndarray | None = None) -> DiscoveryState:
    """Run the growing loop for one node against candidate peers.

    ``start_level`` is the schedule level the node already transmits at;
    the first broadcast is one level higher. Every candidate within range of
    a broadcast answers it (reliable synchronous rounds).
    """
    top = model.top_level
    inrange = distances <= model.max_range
    peers, distances, directions = peers[inrange], distances[inrange], directions[inrange]
    levels = model.levels_for_distances(distances) if levels is None else levels[inrange]
    if start_level >= top:
        raise ValueError("node already transmits at maximum power")
    order = np.lexsort((peers, distances, levels))
    count, level = kernels.discover_count(levels[order], directions[order], alpha, ANGLE_TOL, start_level + 1)
    boundary = level < 0
    if boundary:
        level = top
    chosen = order[:count]
    records = tuple(
        NeighborRecord(int(peers[i]), float(directions[i]), model.level_power(int(levels[i])),
                       model.power_for_distance(float(distances[i])), float(distances[i]), int(levels[i]))
        for i in chosen
    )
    return DiscoveryState(node, model.level_power(level), level, records, boundary, level - start_level)


def run_cbtc(t: Topology, alpha: float) -> CbtcResult:
    _check_alpha(alpha)
    model = t.model
    ids = np.asarray(t.ids, dtype=np.int64)
    dist = t.distances
    dirs = t.directions
    levels_all = model.levels_for_distances(dist)
    states: dict[int, DiscoveryState] = {}
    n = len(ids)
    others = ~np.eye(n, dtype=bool)
    for i, u in enumerate(t.ids):
        m = others[i]
        states[u] = discover_node(u, ids[m], dist[i][m], dirs[i][m], model, alpha, levels=levels_all[i][m])
    return assemble_result(t, alpha, states)


def assemble_result(t: Topology, alpha: float, states: Mapping[int, DiscoveryState]) -> CbtcResult:
    """Derive ``N_alpha``, its closure, reverse contacts and radii from node states."""
    nodes = tuple(sorted(states))
    pairs = [(u, r.peer) for u, s in states.items() for r in s.neighbors]
    n_alpha = EdgeSet.from_pairs(Label.N_ALPHA, nodes, pairs, symmetric=False)
    e_alpha = n_alpha.closure(Label.E_ALPHA)
    reverse = {u: frozenset(e_alpha.neighbors(u) - states[u].peers) for u in nodes}
    radii = {}
    for u in nodes:
        rad = max((t.distance(u, v) for v in e_alpha.neighbors(u)), default=0.0)
        radii[u] = Radii(states[u].rad_minus, rad)
    return CbtcResult(t, alpha, dict(states), n_alpha, e_alpha, reverse, radii)


# -- golden constructions ------------------------------------------------------

EXAMPLE1_NAMES = {"u0": 0, "u1": 1, "u2": 2, "u3": 3, "v": 4}
COUNTER_NAMES = {"u0": 0, "u1": 1, "u2": 2, "u3": 3, "v0": 4, "v1": 5, "v2": 6, "v3": 7}


def build_example1(epsilon: float, R: float = 500.0, model: RadioModel | None = None,
                   strict: bool = True) -> Topology:
    """Five nodes where ``v`` discovers ``u0`` but ``u0`` never reaches ``v``.

    ``u0`` sits at the origin and ``v`` at ``(R, 0)``; ``u1``/``u2`` sit at
    angle ``pi/3 + epsilon`` on either side of ``u0 -> v`` such that the
    angle at ``v`` is ``pi/3 - epsilon``; ``u3`` is opposite ``v`` at ``R/2``.
    The asymmetry appears for ``alpha`` in ``[2*pi/3 + 2*epsilon, 5*pi/6]``,
    which is empty unless ``epsilon < pi/12``. ``strict=False`` still builds
    the layout for ``epsilon < pi/3`` so that failure can be observed.
    """
    limit = math.pi / 12 if strict else math.pi / 3
    if not 0.0 < epsilon < limit:
        raise ConstructionError(f"epsilon must lie in (0, {limit:.6f}), got {epsilon!r}")
    model = model or RadioModel(max_range=R, growth_factor=FINE_GROWTH)
    if model.max_range != R:
        raise ConstructionError("model range differs from R")
    side = R * math.sin(math.pi / 3 - epsilon) / math.sin(math.pi / 3)
    phi = math.pi / 3 + epsilon
    pts = [
        (0.0, 0.0),
        (side * math.cos(phi), side * math.sin(phi)),
        (side * math.cos(phi), -side * math.sin(phi)),
        (-R / 2.0, 0.0),
        (R, 0.0),
    ]
    return Topology.from_points(pts, model, bounds=(1.5 * R, 2 * side * math.sin(phi)))


def build_counter_5pi6(epsilon: float, R: float = 500.0, model: RadioModel | None = None) -> Topology:
    """Eight nodes whose only max-power cross-cluster link vanishes at ``5*pi/6 + epsilon``.

    Layout: ``u0 = (0, 0)``, ``v0 = (R, 0)``; ``u1`` straight above ``u0``
    (right angle at ``u0``); ``u2`` at ``R/2``, ``min(alpha, pi)``
    counterclockwise from ``u1``; ``u3`` on the line ``y = -sqrt(3)/2 R``
    just left of the circles' intersection point, at ``5*pi/6 + epsilon/2``
    clockwise from ``u1``. The v-cluster is the point reflection through
    ``(R/2, 0)``. ``d(u0, u1)`` is half the largest value keeping
    ``d(u1, v3) > R``.
    """
    if not 0.0 < epsilon <= math.pi / 6:
        raise ConstructionError(f"epsilon must lie in (0, pi/6], got {epsilon!r}")
    model = model or RadioModel(max_range=R, growth_factor=FINE_GROWTH)
    alpha = 5 * math.pi / 6 + epsilon
    h = math.sqrt(3.0) / 2.0 * R
    # u3 sits delta beyond the -pi/3 ray through s'
    delta = epsilon / 2.0
    x3 = h / math.tan(math.pi / 3 + delta)
    t = R / 2.0 - x3
    reach = R * R - (R / 2.0 + t) ** 2
    a_max = h - math.sqrt(reach) if reach > 0 else R / 4.0
    if a_max <= 0:
        raise ConstructionError("no cluster scale keeps d(u1, v3) > R")
    a = min(a_max / 2.0, R / 4.0)
    theta2 = math.pi / 2 + min(alpha, math.pi)
    u = [
        (0.0, 0.0),
        (0.0, a),
        (R / 2.0 * math.cos(theta2), R / 2.0 * math.sin(theta2)),
        (x3, -h),
    ]
    v = [(R - x, -y) for x, y in u]
    pts = u + v
    _verify_counter(pts, R, alpha)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return Topology.from_points(pts, model, bounds=(max(xs) - min(xs), max(ys) - min(ys)))


def _verify_counter(pts, R: float, alpha: float) -> None:
    d = lambda p, q: math.hypot(p[0] - q[0], p[1] - q[1])  # noqa: E731
    names = list(COUNTER_NAMES)
    if d(pts[0], pts[4]) != R:
        raise ConstructionError("d(u0, v0) != R")
    for i in range(4):
        for j in range(4, 8):
            if (i, j) != (0, 4) and not d(pts[i], pts[j]) > R:
                raise ConstructionError(f"cross pair ({names[i]}, {names[j]}) within R")
    for c in (0, 4):
        for k in range(1, 4):
            if not d(pts[c], pts[c + k]) < R:
                raise ConstructionError(f"({names[c]}, {names[c + k]}) not within R")
    # u0's own directions must leave no gap wider than alpha
    dirs = [math.atan2(p[1], p[0]) for p in pts[1:4]]
    if has_alpha_gap(dirs, alpha):
        raise ConstructionError("u-cluster leaves an alpha-gap at u0")
