"""Edge-reduction passes applied after discovery.

* shrink-back: boundary nodes drop the farthest discovery levels that add
  no cone coverage;
* asymmetric removal: keep only pairs that discovered each other;
* pairwise removal: drop edges dominated by a shorter edge within 60 degrees.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from . import kernels
from .cbtc import CbtcResult, NeighborRecord
from .geometry import ANGLE_TOL, coverage_equal, coverage_set
from .network import ContractViolation, EdgeId, EdgeSet, Label, Topology, edge_id

ASYM_MAX_ALPHA = 2.0 * math.pi / 3.0
# strict "< pi/3" with slack so float noise never promotes an edge to redundant
REDUNDANCY_ANGLE = math.pi / 3.0 - ANGLE_TOL


class GuaranteeViolation(ValueError):
    """Asymmetric removal requested where it can disconnect the network."""


class Regime(str, enum.Enum):
    BASIC = "basic"
    SHRINK_BACK = "shrink-back"
    ASYM = "asym"
    ASYM_NO_SHRINK = "asym-no-shrink"
    PAIRWISE = "pairwise"

    @classmethod
    def parse(cls, text: str | "Regime") -> "Regime":
        if isinstance(text, Regime):
            return text
        aliases = {"shrink": cls.SHRINK_BACK, "shrinkback": cls.SHRINK_BACK, "asymmetric": cls.ASYM,
                   "all": cls.PAIRWISE, "none": cls.BASIC}
        key = text.strip().lower().replace("_", "-")
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown regime {text!r}; choose from {[r.value for r in cls]}") from None


class Removal(NamedTuple):
    u: int
    v: int
    reason: str
    stage: str


@dataclass(frozen=True)
class OptimizedResult:
    base: CbtcResult
    regime: Regime
    e_alpha_s: EdgeSet
    n_alpha_s: EdgeSet
    shrink_power: Mapping[int, float]
    e_alpha_minus: EdgeSet | None
    e_alpha_nr: EdgeSet | None
    removal_log: tuple[Removal, ...] = field(default=())

    @property
    def final(self) -> EdgeSet:
        """Symmetric edge set the regime ends with."""
        if self.regime is Regime.BASIC:
            return self.base.e_alpha
        if self.regime is Regime.SHRINK_BACK:
            return self.e_alpha_s
        if self.regime in (Regime.ASYM, Regime.ASYM_NO_SHRINK):
            assert self.e_alpha_minus is not None
            return self.e_alpha_minus
        assert self.e_alpha_nr is not None
        return self.e_alpha_nr


# -- shrink-back -----------------------------------------------------------------


def shrink_level(records: Iterable[NeighborRecord], alpha: float) -> int:
    """Smallest tag level whose records already give the full coverage.

    Returns 0 for an empty record set.
    """
    recs = list(records)
    if not recs:
        return 0
    dirs = np.array([r.direction for r in recs])
    lv = np.array([r.level for r in recs])
    full = coverage_set(dirs, alpha)
    for level in np.unique(lv):
        if coverage_equal(coverage_set(dirs[lv <= level], alpha), full):
            return int(level)
    return int(lv.max())


def shrink_back(r: CbtcResult, alpha: float | None = None) -> tuple[EdgeSet, dict[int, float], EdgeSet]:
    """Retract boundary nodes; returns ``(E_s, shrunk power per node, directed N_s)``."""
    alpha = r.alpha if alpha is None else alpha
    model = r.topology.model
    power: dict[int, float] = {}
    pairs = []
    for u, s in r.states.items():
        keep = s.neighbors
        power[u] = s.power
        if s.boundary:
            level = shrink_level(s.neighbors, alpha)
            keep = tuple(rec for rec in s.neighbors if rec.level <= level)
            power[u] = min(model.level_power(level), s.power)
        pairs.extend((u, rec.peer) for rec in keep)
    n_s = EdgeSet.from_pairs(Label.N_ALPHA_S, r.n_alpha.nodes, pairs, symmetric=False)
    return n_s.closure(Label.E_ALPHA_S), power, n_s


# -- asymmetric removal ----------------------------------------------------------


def asymmetric_removal(r: CbtcResult, alpha: float | None = None, directed: EdgeSet | None = None) -> EdgeSet:
    """Largest symmetric subset of the directed neighbor relation.

    ``directed`` defaults to ``N_alpha``; pass the shrunk relation to stack
    the pass after shrink-back.
    """
    alpha = r.alpha if alpha is None else alpha
    if alpha > ASYM_MAX_ALPHA + ANGLE_TOL:
        raise GuaranteeViolation(
            f"asymmetric removal needs alpha <= 2*pi/3 to keep connectivity, got {alpha:.6f}")
    return (r.n_alpha if directed is None else directed).mutual(Label.E_ALPHA_MINUS)


def removal_notifications(directed: EdgeSet) -> dict[int, frozenset[int]]:
    """For each node u, the nodes that discovered u but were not discovered by u.

    u tells each of them to drop the edge.
    """
    out: dict[int, set[int]] = {u: set() for u in directed.nodes}
    for a, b in directed.edges:
        if (b, a) not in directed.edges:
            out[b].add(a)
    return {u: frozenset(s) for u, s in out.items()}


# -- pairwise removal --------------------------------------------------------


def is_redundant(t: Topology, working: EdgeSet, u: int, v: int) -> bool:
    if (u, v) not in working:
        raise ContractViolation(f"({u}, {v}) is not in the working set")
    own = edge_id(t, u, v)
    duv = t.direction(u, v)
    for w in working.neighbors(u):
        if w == v:
            continue
        delta = abs(duv - t.direction(u, w)) % (2 * math.pi)
        delta = min(delta, 2 * math.pi - delta)
        if delta < REDUNDANCY_ANGLE and edge_id(t, u, w) < own:
            return True
    return False


def _redundant_at(t: Topology, working: EdgeSet, u: int) -> tuple[list[int], np.ndarray, list[EdgeId]]:
    nb = sorted(working.neighbors(u))
    if not nb:
        return nb, np.zeros(0, dtype=bool), []
    i = t.index[u]
    cols = [t.index[v] for v in nb]
    lengths = t.distances[i, cols]
    flags = kernels.redundant_flags(t.directions[i, cols], lengths,
                                    [max(u, v) for v in nb], [min(u, v) for v in nb], REDUNDANCY_ANGLE)
    eids = [EdgeId(float(d), max(u, v), min(u, v)) for d, v in zip(lengths, nb)]
    return nb, flags, eids


def pairwise_removal(t: Topology, working: EdgeSet, threshold: str = "node") -> tuple[EdgeSet, list[Removal]]:
    """Drop redundant edges longer than the longest non-redundant one.

    Redundancy is classified once against ``working``. With
    ``threshold="node"`` the cutoff is each endpoint's own longest
    non-redundant edge; ``"global"`` uses the longest over the whole set.
    An edge removed by either endpoint disappears in both directions.
    """
    if threshold not in ("node", "global"):
        raise ValueError(f"threshold must be 'node' or 'global', got {threshold!r}")
    if not working.is_symmetric():
        raise ContractViolation("pairwise removal needs a symmetric edge set")
    per_node = {u: _redundant_at(t, working, u) for u in working.nodes}
    cut: dict[int, EdgeId | None] = {}
    for u, (nb, flags, eids) in per_node.items():
        cut[u] = max((e for e, f in zip(eids, flags) if not f), default=None)
    if threshold == "global":
        top = max((c for c in cut.values() if c is not None), default=None)
        cut = {u: top for u in cut}
    dropped: set[tuple[int, int]] = set()
    log: list[Removal] = []
    for u in sorted(per_node):
        nb, flags, eids = per_node[u]
        if cut[u] is None:
            continue
        for v, f, e in zip(nb, flags, eids):
            key = (min(u, v), max(u, v))
            if f and e > cut[u] and key not in dropped:
                dropped.add(key)
                log.append(Removal(key[0], key[1], f"redundant at {u}", "pairwise"))
    kept = frozenset(e for e in working.edges if (min(e), max(e)) not in dropped)
    return EdgeSet(Label.E_ALPHA_NR, working.nodes, kept, True), log


# -- stacking --------------------------------------------------------------------


def _diff_log(before: EdgeSet, after: EdgeSet, reason: str, stage: str) -> list[Removal]:
    gone = set(before.undirected()) - set(after.undirected())
    return [Removal(u, v, reason, stage) for u, v in sorted(gone)]


def optimize(r: CbtcResult, regime: Regime | str, threshold: str = "node") -> OptimizedResult:
    """Apply a fixed stack of passes: shrink-back, asymmetric (alpha <= 2*pi/3), pairwise."""
    regime = Regime.parse(regime)
    e_s, power, n_s = shrink_back(r)
    log: list[Removal] = []
    if regime is Regime.BASIC:
        return OptimizedResult(r, regime, e_s, n_s, power, None, None, ())
    log += _diff_log(r.e_alpha, e_s, "beyond shrunk power", "shrink-back")
    minus = None
    if regime is Regime.ASYM_NO_SHRINK:
        minus = asymmetric_removal(r)
        return OptimizedResult(r, regime, e_s, n_s, power, minus,
                               None, tuple(_diff_log(r.e_alpha, minus, "one-way discovery", "asym")))
    current = e_s
    if regime is Regime.ASYM or (regime is Regime.PAIRWISE and r.alpha <= ASYM_MAX_ALPHA + ANGLE_TOL):
        minus = asymmetric_removal(r, directed=n_s)
        log += _diff_log(current, minus, "one-way discovery", "asym")
        current = minus
    nr = None
    if regime is Regime.PAIRWISE:
        nr, plog = pairwise_removal(r.topology, current, threshold)
        log += plog
    return OptimizedResult(r, regime, e_s, n_s, power, minus, nr, tuple(log))
