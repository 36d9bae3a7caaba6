"""Node placement, the max-power graph, labeled edge sets and edge ids."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .geometry import DegenerateGeometryError, normalize_angles
from .radio import RadioModel

MIN_SEPARATION = 1e-6


class GenerationError(ValueError):
    pass


class ContractViolation(ValueError):
    """An input broke an operation's precondition (e.g. asymmetric edge set)."""


class Label(str, enum.Enum):
    G_R = "G_R"
    N_ALPHA = "N_alpha"
    E_ALPHA = "E_alpha"
    E_ALPHA_S = "E_alpha_s"
    N_ALPHA_S = "N_alpha_s"
    E_ALPHA_MINUS = "E_alpha_minus"
    E_ALPHA_NR = "E_alpha_nr"


@dataclass(frozen=True)
class Topology:
    """Immutable node placement. ``ids[i]`` is the id of row ``positions[i]``."""

    ids: tuple[int, ...]
    positions: np.ndarray
    bounds: tuple[float, float]
    model: RadioModel = field(default_factory=RadioModel)

    def __post_init__(self):
        pos = np.array(self.positions, dtype=np.float64).reshape(-1, 2)
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "ids", tuple(int(i) for i in self.ids))
        if len(self.ids) != len(pos):
            raise ValueError("ids and positions differ in length")
        if len(set(self.ids)) != len(self.ids) or any(i < 0 for i in self.ids):
            raise ValueError("node ids must be unique non-negative integers")
        if len(pos) > 1 and float(self.distances[~np.eye(len(pos), dtype=bool)].min()) == 0.0:
            raise DegenerateGeometryError("coincident nodes")

    @classmethod
    def from_points(cls, points: Sequence[Sequence[float]], model: RadioModel | None = None,
                    bounds: tuple[float, float] | None = None, ids: Sequence[int] | None = None) -> "Topology":
        pos = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        if bounds is None:
            bounds = (float(pos[:, 0].max(initial=0.0)), float(pos[:, 1].max(initial=0.0)))
        return cls(tuple(range(len(pos))) if ids is None else tuple(ids), pos, bounds, model or RadioModel())

    def __len__(self) -> int:
        return len(self.ids)

    def __hash__(self) -> int:
        return hash((self.ids, self.positions.tobytes(), self.bounds, self.model))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Topology):
            return NotImplemented
        return (self.ids == other.ids and self.bounds == other.bounds and self.model == other.model
                and np.array_equal(self.positions, other.positions))

    @cached_property
    def index(self) -> dict[int, int]:
        return {node: i for i, node in enumerate(self.ids)}

    @cached_property
    def distances(self) -> np.ndarray:
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        d = np.hypot(diff[..., 0], diff[..., 1])
        d.setflags(write=False)
        return d

    @cached_property
    def directions(self) -> np.ndarray:
        """``directions[i, j]``: angle of node j seen from node i (diagonal is 0)."""
        diff = self.positions[None, :, :] - self.positions[:, None, :]
        a = normalize_angles(np.arctan2(diff[..., 1], diff[..., 0]))
        a.setflags(write=False)
        return a

    def position(self, node: int) -> tuple[float, float]:
        x, y = self.positions[self.index[node]]
        return float(x), float(y)

    def distance(self, u: int, v: int) -> float:
        return float(self.distances[self.index[u], self.index[v]])

    def direction(self, u: int, v: int) -> float:
        if u == v:
            raise DegenerateGeometryError("direction from a node to itself")
        return float(self.directions[self.index[u], self.index[v]])

    def with_model(self, model: RadioModel) -> "Topology":
        return Topology(self.ids, self.positions, self.bounds, model)

    # -- interchange -------------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "bounds": [float(self.bounds[0]), float(self.bounds[1])],
            "max_range": float(self.model.max_range),
            "nodes": [{"id": i, "x": float(x), "y": float(y)} for i, (x, y) in zip(self.ids, self.positions)],
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str, model: RadioModel | None = None) -> "Topology":
        doc = json.loads(text)
        if model is None:
            model = RadioModel(max_range=float(doc["max_range"]))
        nodes = doc["nodes"]
        return cls(tuple(n["id"] for n in nodes), [(n["x"], n["y"]) for n in nodes],
                   (float(doc["bounds"][0]), float(doc["bounds"][1])), model)


def generate_random(seed: int, node_count: int, bounds: tuple[float, float] = (1500.0, 1500.0),
                    model: RadioModel | None = None, min_separation: float = MIN_SEPARATION) -> Topology:
    """Uniform i.i.d. placement from a PCG64 generator seeded with ``seed``."""
    if node_count < 1:
        raise GenerationError("node_count must be >= 1")
    w, h = float(bounds[0]), float(bounds[1])
    if w <= 0 or h <= 0:
        raise GenerationError(f"degenerate bounds {bounds!r}")
    # hexagonal packing bound for disks of diameter min_separation
    capacity = (w / min_separation + 1) * (h / min_separation + 1) * 1.155
    if node_count > capacity:
        raise GenerationError(f"{node_count} nodes cannot fit {bounds!r} at separation {min_separation}")
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = np.empty((node_count, 2))
    placed = 0
    attempts = 0
    while placed < node_count:
        p = rng.uniform((0.0, 0.0), (w, h))
        attempts += 1
        if placed and np.hypot(*(pts[:placed] - p).T).min() < min_separation:
            if attempts > 1000 * node_count:
                raise GenerationError("could not place nodes at the requested separation")
            continue
        pts[placed] = p
        placed += 1
    return Topology(tuple(range(node_count)), pts, (w, h), model or RadioModel())


class EdgeId(NamedTuple):
    """Lexicographically ordered edge key; tuple ordering does the comparison."""

    length: float
    hi: int
    lo: int


def edge_id(t: Topology, u: int, v: int) -> EdgeId:
    if u == v:
        raise ValueError("edge id of a self-loop")
    return EdgeId(t.distance(u, v), max(u, v), min(u, v))


@dataclass(frozen=True)
class EdgeSet:
    label: Label
    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    symmetric: bool

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))
        if self.symmetric and any((v, u) not in self.edges for u, v in self.edges):
            raise ContractViolation(f"{self.label.value} declared symmetric but is not")

    @classmethod
    def from_pairs(cls, label: Label, nodes: Iterable[int], pairs: Iterable[tuple[int, int]],
                   symmetric: bool) -> "EdgeSet":
        pairs = {(int(u), int(v)) for u, v in pairs}
        if symmetric:
            pairs |= {(v, u) for u, v in pairs}
        return cls(label, tuple(sorted(nodes)), frozenset(pairs), symmetric)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.edges

    def __len__(self) -> int:
        return len(self.edges)

    def is_symmetric(self) -> bool:
        return all((v, u) in self.edges for u, v in self.edges)

    def closure(self, label: Label) -> "EdgeSet":
        return EdgeSet.from_pairs(label, self.nodes, self.edges, symmetric=True)

    def mutual(self, label: Label) -> "EdgeSet":
        """Largest symmetric subset."""
        return EdgeSet(label, self.nodes, frozenset(e for e in self.edges if (e[1], e[0]) in self.edges), True)

    def relabel(self, label: Label) -> "EdgeSet":
        return EdgeSet(label, self.nodes, self.edges, self.symmetric)

    @cached_property
    def adjacency(self) -> Mapping[int, frozenset[int]]:
        adj: dict[int, set[int]] = {n: set() for n in self.nodes}
        for u, v in self.edges:
            adj.setdefault(u, set()).add(v)
        return {n: frozenset(s) for n, s in adj.items()}

    def neighbors(self, u: int) -> frozenset[int]:
        return self.adjacency.get(u, frozenset())

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def undirected(self) -> list[tuple[int, int]]:
        """Each edge once as ``(min, max)``, sorted."""
        return sorted({(min(u, v), max(u, v)) for u, v in self.edges})

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def max_power_graph(t: Topology) -> EdgeSet:
    """All pairs within ``max_range`` (inclusive)."""
    d = t.distances
    i, j = np.nonzero(d <= t.model.max_range)
    ids = t.ids
    pairs = [(ids[a], ids[b]) for a, b in zip(i.tolist(), j.tolist()) if a != b]
    return EdgeSet(Label.G_R, tuple(sorted(ids)), frozenset(pairs), True)


class _UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra > rb:
                ra, rb = rb, ra
            self.parent[rb] = ra


def connected_components(e: EdgeSet) -> list[frozenset[int]]:
    """Maximal connected components, sorted by smallest member."""
    if not e.symmetric and not e.is_symmetric():
        raise ContractViolation("connected_components needs a symmetric edge set")
    uf = _UnionFind(e.nodes)
    for u, v in e.edges:
        uf.union(u, v)
    groups: dict[int, set[int]] = {}
    for n in e.nodes:
        groups.setdefault(uf.find(n), set()).add(n)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def same_partition(a: Iterable[frozenset[int]], b: Iterable[frozenset[int]]) -> bool:
    return set(a) == set(b)
