"""Discrete-event neighbor discovery and reconfiguration under change.

Every live node beacons once per period at a seeded phase. A receiver
answers each beacon with an Ack, so both directions of a link refresh
``last_heard``. Changes seen between two of a node's own beacon slots are
batched and handled together at the slot:

* leave: a peer silent for more than ``miss_threshold`` periods;
* join: a peer heard for the first time, or heard again within the node's
  current discovery range while not among its neighbors;
* aChange: a known neighbor whose direction moved by more than the
  threshold, or who is now beyond the node's discovery power.

After the batch, an alpha-gap triggers a rerun of the growing loop from
``p(rad_minus)``; otherwise the node prunes to the lowest level that still
closes every gap. Handlers are pure functions on :class:`NodeState`; the
simulator performs reruns and message delivery.
"""

from __future__ import annotations

import dataclasses
import enum
import heapq
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .cbtc import CbtcResult, DiscoveryState, NeighborRecord, assemble_result, discover_node, run_cbtc
from .geometry import ANGLE_TOL, angular_distance, has_alpha_gap, normalize_angle
from .network import ContractViolation, EdgeSet, Topology
from .optimizations import ASYM_MAX_ALPHA, OptimizedResult, Regime, optimize, shrink_level
from .radio import RadioModel


class StabilizationError(RuntimeError):
    """The horizon leaves too little quiet time after the last injected event."""


# -- configuration and events ----------------------------------------------------


@dataclass(frozen=True)
class NdpConfig:
    beacon_period: float = 1.0
    miss_threshold: int = 3
    achange_threshold: float = math.radians(0.5)
    max_consecutive_drops: int = 2
    duplicate_probability: float = 0.0
    beacon_rule: str = "correct"  # "shrunk" reproduces the broken boundary-node rule
    trace_beacons: bool = False

    def __post_init__(self):
        if self.beacon_period <= 0 or self.miss_threshold < 1:
            raise ValueError("beacon_period must be positive and miss_threshold >= 1")
        if not 0 <= self.max_consecutive_drops < self.miss_threshold:
            raise ValueError("max_consecutive_drops must stay below miss_threshold for a fair channel")
        if self.beacon_rule not in ("correct", "shrunk"):
            raise ValueError(f"unknown beacon_rule {self.beacon_rule!r}")
        if not 0.0 <= self.duplicate_probability < 1.0:
            raise ValueError("duplicate_probability must lie in [0, 1)")

    @property
    def leave_after(self) -> float:
        return self.miss_threshold * self.beacon_period


class EventKind(enum.IntEnum):
    # value is the tie-break rank
    FAIL = 0
    MOVE = 1
    ADD = 2
    LOSS = 3
    BEACON = 4


@dataclass(frozen=True, order=True)
class SimEvent:
    time: float
    subject: int
    kind: EventKind
    point: tuple[float, float] | None = field(default=None, compare=False)
    until: float | None = field(default=None, compare=False)
    probability: float | None = field(default=None, compare=False)

    @property
    def end(self) -> float:
        return self.until if self.kind is EventKind.LOSS and self.until is not None else self.time

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"time": self.time, "kind": self.kind.name.lower(), "node": self.subject}
        if self.point is not None:
            doc["x"], doc["y"] = self.point
        if self.kind is EventKind.LOSS:
            doc["until"], doc["probability"] = self.until, self.probability
        return doc

    @classmethod
    def from_json(cls, doc: Mapping[str, Any]) -> "SimEvent":
        try:
            kind = EventKind[str(doc["kind"]).upper()]
        except KeyError:
            raise ValueError(f"unknown event kind {doc.get('kind')!r}") from None
        if kind is EventKind.BEACON:
            raise ValueError("beacons are scheduled by the simulator, not the timeline")
        point = (float(doc["x"]), float(doc["y"])) if kind in (EventKind.MOVE, EventKind.ADD) else None
        if kind is EventKind.LOSS:
            p = float(doc["probability"])
            if not 0.0 <= p < 1.0:
                raise ValueError("loss probability must lie in [0, 1)")
            return cls(float(doc["time"]), int(doc.get("node", -1)), kind, None, float(doc["until"]), p)
        return cls(float(doc["time"]), int(doc["node"]), kind, point)


def load_timeline(text: str) -> list[SimEvent]:
    doc = json.loads(text)
    if isinstance(doc, dict):
        doc = doc.get("events", [])
    return sorted(SimEvent.from_json(e) for e in doc)


def dump_timeline(events: Iterable[SimEvent]) -> str:
    return json.dumps([e.to_json() for e in sorted(events)], indent=1) + "\n"


# -- per-node protocol state -------------------------------------------------


class Contact(NamedTuple):
    direction: float
    distance: float
    level: int
    last_heard: float


@dataclass(frozen=True)
class NodeState:
    node: int
    level: int
    power: float
    boundary: bool
    neighbors: Mapping[int, Contact]  # the node's own discoveries, N_u
    heard: Mapping[int, Contact] = field(default_factory=dict)  # everyone recently heard
    reverse: frozenset[int] = frozenset()  # nodes that discovered this one

    def directions(self) -> list[float]:
        return [c.direction for c in self.neighbors.values()]

    def rad_minus(self) -> float:
        return max((c.distance for c in self.neighbors.values()), default=0.0)


@dataclass(frozen=True)
class Context:
    alpha: float
    model: RadioModel
    config: NdpConfig = NdpConfig()


class ActionKind(str, enum.Enum):
    NONE = "none"
    RERUN = "rerun"
    PRUNE = "prune"


class Action(NamedTuple):
    kind: ActionKind
    start_level: int = 0
    dropped: frozenset[int] = frozenset()


class Change(NamedTuple):
    kind: str  # "leave" | "join" | "achange"
    peer: int
    contact: Contact | None = None


def _prune(state: NodeState, ctx: Context) -> tuple[NodeState, frozenset[int]]:
    """Lowest level whose records leave no gap; drops everything above it."""
    by_level = sorted(state.neighbors.items(), key=lambda kv: (kv[1].level, kv[1].distance, kv[0]))
    dirs: list[float] = []
    for i, (_, c) in enumerate(by_level):
        dirs.append(c.direction)
        last = i + 1 == len(by_level) or by_level[i + 1][1].level != c.level
        if last and not has_alpha_gap(dirs, ctx.alpha):
            keep = dict(by_level[: i + 1])
            dropped = frozenset(state.neighbors) - frozenset(keep)
            level = min(c.level, state.level)
            return dataclasses.replace(state, neighbors=keep, level=level,
                                       power=ctx.model.level_power(level), boundary=False), dropped
    return state, frozenset()


def apply_changes(state: NodeState, changes: Sequence[Change], ctx: Context) -> tuple[NodeState, Action]:
    """Fold a batch of leave/aChange/join changes into ``state``.

    Leaves go first, then aChanges, then joins, so one slot sees the net
    effect. Returns the new state and what the caller must do next.
    """
    nbrs = dict(state.neighbors)
    heard = dict(state.heard)
    reverse = set(state.reverse)
    dropped: set[int] = set()
    disruptive = False
    order = {"leave": 0, "achange": 1, "join": 2}
    for ch in sorted(changes, key=lambda c: (order[c.kind], c.peer)):
        if ch.kind == "leave":
            heard.pop(ch.peer, None)
            reverse.discard(ch.peer)
            if nbrs.pop(ch.peer, None) is not None:
                dropped.add(ch.peer)
                disruptive = True
        elif ch.kind == "achange":
            if ch.contact is None:
                raise ValueError("aChange needs the new contact")
            heard[ch.peer] = ch.contact
            if ch.peer not in nbrs:
                # unknown peer: treat as join
                if ch.contact.level <= state.level:
                    nbrs[ch.peer] = ch.contact
                continue
            disruptive = True
            if ch.contact.level > state.level:
                del nbrs[ch.peer]
                dropped.add(ch.peer)
            else:
                nbrs[ch.peer] = ch.contact
        elif ch.kind == "join":
            if ch.contact is None:
                raise ValueError("join needs the new contact")
            heard[ch.peer] = ch.contact
            if ch.peer not in nbrs and ch.contact.level <= state.level:
                nbrs[ch.peer] = ch.contact
        else:
            raise ValueError(f"unknown change kind {ch.kind!r}")
    new = dataclasses.replace(state, neighbors=nbrs, heard=heard, reverse=frozenset(reverse))
    if has_alpha_gap(new.directions(), ctx.alpha):
        if disruptive:
            start = ctx.model.level_for_power(ctx.model.power_for_distance(new.rad_minus())) if nbrs else 0
            return new, Action(ActionKind.RERUN, max(start, 0), frozenset(dropped))
        return new, Action(ActionKind.NONE, dropped=frozenset(dropped))
    pruned, lost = _prune(new, ctx)
    kind = ActionKind.PRUNE if pruned.level < state.level or lost else ActionKind.NONE
    return pruned, Action(kind, dropped=frozenset(dropped | lost))


def handle_leave(state: NodeState, peer: int, ctx: Context) -> tuple[NodeState, Action]:
    if peer not in state.neighbors and peer not in state.heard and peer not in state.reverse:
        return state, Action(ActionKind.NONE)
    return apply_changes(state, [Change("leave", peer)], ctx)


def handle_join(state: NodeState, peer: int, contact: Contact, ctx: Context) -> tuple[NodeState, Action]:
    if peer in state.neighbors:
        return state, Action(ActionKind.NONE)
    return apply_changes(state, [Change("join", peer, contact)], ctx)


def handle_achange(state: NodeState, peer: int, contact: Contact, ctx: Context) -> tuple[NodeState, Action]:
    return apply_changes(state, [Change("achange", peer, contact)], ctx)


# -- beacon power -------------------------------------------------------------


def beacon_power_for(node: int, regime: Regime | str, r: OptimizedResult) -> float:
    """Power a node must beacon with to keep the regime's guarantee.

    Nodes reach every neighbor of the closed relation (so pruned neighbors
    stay in earshot) and never drop below their discovery power, which keeps
    boundary nodes at the maximum. Under asymmetric removal only the node's
    own discoveries matter.
    """
    regime = Regime.parse(regime)
    if regime is not r.regime:
        raise ContractViolation(f"result was built for {r.regime.value}, not {regime.value}")
    base = r.base
    state = base.states[node]
    model = base.topology.model
    if regime in (Regime.ASYM, Regime.ASYM_NO_SHRINK):
        if base.alpha > ASYM_MAX_ALPHA + ANGLE_TOL:
            raise ContractViolation("asymmetric regime needs alpha <= 2*pi/3")
        return model.max_power if state.boundary else model.power_for_distance(base.radii[node].rad_minus)
    return max(state.power, model.power_for_distance(base.radii[node].rad))


def _state_beacon_power(s: NodeState, regime: Regime, ctx: Context) -> float:
    model = ctx.model
    if regime in (Regime.ASYM, Regime.ASYM_NO_SHRINK):
        return model.max_power if s.boundary else model.power_for_distance(s.rad_minus())
    far = [c.distance for c in s.neighbors.values()]
    far += [s.heard[v].distance for v in s.reverse if v in s.heard]
    if ctx.config.beacon_rule == "shrunk" and s.boundary:
        # wrong on purpose: boundary nodes beacon only as far as their shrunk set
        level = shrink_level(_records(s), ctx.alpha)
        far = [c.distance for c in s.neighbors.values() if c.level <= level]
        far += [s.heard[v].distance for v in s.reverse if v in s.heard]
        return model.power_for_distance(min(max(far, default=0.0), model.max_range))
    return max(s.power, model.power_for_distance(min(max(far, default=0.0), model.max_range)))


def _records(s: NodeState) -> list[NeighborRecord]:
    return [NeighborRecord(v, c.direction, 0.0, 0.0, c.distance, c.level) for v, c in sorted(s.neighbors.items())]


def _stream(seed: int, purpose: int) -> np.random.Generator:
    # separate streams so a timeline never replays the placement draws of the same seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(purpose,))))


# -- simulator -------------------------------------------------------------------


@dataclass
class SimulationResult:
    trace: list[dict[str, Any]]
    states: dict[int, NodeState]
    topology: Topology
    cbtc: CbtcResult
    optimized: OptimizedResult

    @property
    def edges(self) -> EdgeSet:
        return self.optimized.final

    def trace_jsonl(self) -> str:
        return "".join(json.dumps(line, sort_keys=True) + "\n" for line in self.trace)


class _Sim:
    def __init__(self, initial: Topology, alpha: float, regime: Regime, cfg: NdpConfig, seed: int):
        self.ctx = Context(alpha, initial.model, cfg)
        self.regime = regime
        self.cfg = cfg
        self.rng = _stream(seed, 2)
        self.pos: dict[int, tuple[float, float]] = {u: initial.position(u) for u in initial.ids}
        self.alive: set[int] = set(initial.ids)
        self.bounds = initial.bounds
        self.states: dict[int, NodeState] = {}
        self.pending: dict[int, dict[int, Change]] = {}
        self.trace: list[dict[str, Any]] = []
        self.loss: list[tuple[float, float, float]] = []
        self.drops: dict[tuple[int, int], int] = {}
        self.seen: set[tuple[int, int, int]] = set()
        self.seq: dict[int, int] = {}
        self.queue: list[tuple[float, int, int, int, SimEvent]] = []
        self.counter = 0

    # geometry ---------------------------------------------------------------
    def _contact(self, u: int, v: int, now: float) -> Contact:
        (x0, y0), (x1, y1) = self.pos[u], self.pos[v]
        d = math.hypot(x1 - x0, y1 - y0)
        lvl = self.ctx.model.level_for_distance(d)
        return Contact(normalize_angle(math.atan2(y1 - y0, x1 - x0)), d, lvl, now)

    def _log(self, t: float, event: str, node: int, **extra: Any) -> None:
        line = {"t": round(t, 9), "event": event, "node": node}
        line.update(extra)
        self.trace.append(line)

    def _push(self, ev: SimEvent) -> None:
        self.counter += 1
        heapq.heappush(self.queue, (ev.time, ev.subject, int(ev.kind), self.counter, ev))

    # setup ------------------------------------------------------------------
    def bootstrap(self, r: CbtcResult) -> None:
        for u, s in r.states.items():
            nbrs = {rec.peer: self._contact(u, rec.peer, 0.0) for rec in s.neighbors}
            known = {v: self._contact(u, v, 0.0) for v in r.reverse_contacts[u]}
            known.update(nbrs)
            self.states[u] = NodeState(u, s.level, s.power, s.boundary, nbrs, known, r.reverse_contacts[u])
        powers = {u: self._beacon_power(u) for u in self.states}
        for u in self.states:
            heard = {}
            for v in self.states:
                if v != u:
                    c = self._contact(u, v, 0.0)
                    if c.distance <= self.ctx.model.distance_for_power(powers[v]) + 1e-9 or \
                            c.distance <= self.ctx.model.distance_for_power(powers[u]) + 1e-9:
                        heard[v] = c
            self.states[u] = dataclasses.replace(self.states[u], heard=heard)
        for u in sorted(self.states):
            self._schedule_first_beacon(u, 0.0)

    def _schedule_first_beacon(self, u: int, now: float) -> None:
        phase = float(self.rng.uniform(0.0, self.cfg.beacon_period))
        self._push(SimEvent(now + phase, u, EventKind.BEACON))

    def _beacon_power(self, u: int) -> float:
        return _state_beacon_power(self.states[u], self.regime, self.ctx)

    # messages ---------------------------------------------------------------
    def _lost(self, now: float, sender: int, receiver: int) -> bool:
        p = max((prob for a, b, prob in self.loss if a <= now < b), default=0.0)
        key = (sender, receiver)
        if p > 0.0 and self.drops.get(key, 0) < self.cfg.max_consecutive_drops and self.rng.random() < p:
            self.drops[key] = self.drops.get(key, 0) + 1
            return True
        self.drops[key] = 0
        return False

    def _deliver(self, now: float, sender: int, receiver: int, kind: str, lossy: bool = True) -> bool:
        """Hand one message to ``receiver``; False if it was lost or duplicate."""
        if receiver not in self.alive:
            return False
        if lossy and self._lost(now, sender, receiver):
            self._log(now, "drop", receiver, peer=sender, message=kind)
            return False
        self.seq[sender] = self.seq.get(sender, 0) + 1
        mid = (sender, receiver, self.seq[sender])
        copies = 2 if lossy and self.rng.random() < self.cfg.duplicate_probability else 1
        for _ in range(copies):
            if mid in self.seen:
                self._log(now, "duplicate", receiver, peer=sender, message=kind)
                continue
            self.seen.add(mid)
            self._hear(now, receiver, sender)
        return True

    def _hear(self, now: float, u: int, v: int) -> None:
        s = self.states[u]
        c = self._contact(u, v, now)
        known = s.neighbors.get(v)
        pend = self.pending.setdefault(u, {})
        if known is not None:
            moved = angular_distance(known.direction, c.direction) > self.cfg.achange_threshold
            if moved or c.level > s.level:
                pend[v] = Change("achange", v, c)
        elif v not in s.heard or c.level <= s.level:
            if v not in s.heard or pend.get(v) is None:
                pend[v] = Change("join", v, c)
        heard = dict(s.heard)
        heard[v] = c
        self.states[u] = dataclasses.replace(s, heard=heard)

    # protocol ---------------------------------------------------------------
    def beacon(self, now: float, u: int) -> None:
        if u not in self.alive:
            return
        self._slot(now, u)
        power = self._beacon_power(u)
        reach = self.ctx.model.distance_for_power(power) + 1e-9
        x0, y0 = self.pos[u]
        if self.cfg.trace_beacons:
            self._log(now, "beacon", u, power=power)
        for v in sorted(self.alive):
            if v != u and math.hypot(self.pos[v][0] - x0, self.pos[v][1] - y0) <= reach:
                if self._deliver(now, u, v, "beacon"):
                    self._deliver(now, v, u, "ack")
        self._push(SimEvent(now + self.cfg.beacon_period, u, EventKind.BEACON))

    def _slot(self, now: float, u: int) -> None:
        s = self.states[u]
        changes = list(self.pending.pop(u, {}).values())
        silent = sorted(v for v, c in s.heard.items() if now - c.last_heard > self.cfg.leave_after)
        gone = set(silent)
        changes = [ch for ch in changes if ch.peer not in gone] + [Change("leave", v) for v in silent]
        if not changes:
            return
        for ch in sorted(changes, key=lambda c: (c.kind, c.peer)):
            self._log(now, ch.kind, u, peer=ch.peer)
        new, action = apply_changes(s, changes, self.ctx)
        self.states[u] = new
        self._notify_dropped(u, action.dropped)
        if action.kind is ActionKind.RERUN:
            self.rerun(now, u, action.start_level)
        elif action.kind is ActionKind.PRUNE:
            self._log(now, "prune", u, level=new.level, power=new.power)

    def _notify_dropped(self, u: int, dropped: Iterable[int]) -> None:
        for v in dropped:
            if v in self.states and v in self.alive:
                sv = self.states[v]
                if u in sv.reverse:
                    self.states[v] = dataclasses.replace(sv, reverse=sv.reverse - {u})

    def rerun(self, now: float, u: int, start_level: int) -> None:
        """Grow from the start level; Hellos and Acks are reliable here."""
        model = self.ctx.model
        peers = np.array(sorted(self.alive - {u}), dtype=np.int64)
        x0, y0 = self.pos[u]
        if len(peers):
            xy = np.array([self.pos[int(v)] for v in peers])
            dx, dy = xy[:, 0] - x0, xy[:, 1] - y0
            dist = np.hypot(dx, dy)
            dirs = np.mod(np.arctan2(dy, dx), 2 * math.pi)
            dirs[dirs >= 2 * math.pi] = 0.0
        else:
            dist = dirs = np.zeros(0)
        first = max(min(start_level, model.top_level) - 1, 0)
        ds = discover_node(u, peers, dist, dirs, model, self.ctx.alpha, start_level=first)
        old = self.states[u]
        nbrs = {rec.peer: Contact(rec.direction, rec.distance, rec.level, now) for rec in ds.neighbors}
        heard = dict(old.heard)
        heard.update(nbrs)
        self.states[u] = dataclasses.replace(old, level=ds.level, power=ds.power, boundary=ds.boundary,
                                             neighbors=nbrs, heard=heard)
        self._notify_dropped(u, set(old.neighbors) - set(nbrs))
        for v in nbrs:
            sv = self.states[v]
            self.states[v] = dataclasses.replace(sv, reverse=sv.reverse | {u})
            self._hear(now, v, u)
        self._log(now, "rerun", u, start_level=first + 1, level=ds.level, power=ds.power,
                  boundary=ds.boundary, neighbors=sorted(nbrs))

    def inject(self, ev: SimEvent) -> None:
        u = ev.subject
        if ev.kind is EventKind.FAIL:
            if u not in self.alive:
                raise ValueError(f"node {u} is not alive at t={ev.time}")
            self.alive.discard(u)
            self._log(ev.time, "fail", u)
        elif ev.kind is EventKind.MOVE:
            if u not in self.alive:
                raise ValueError(f"node {u} is not alive at t={ev.time}")
            self.pos[u] = ev.point
            self._log(ev.time, "move", u, x=ev.point[0], y=ev.point[1])
        elif ev.kind is EventKind.ADD:
            if u in self.pos:
                raise ValueError(f"node id {u} already used")
            self.pos[u] = ev.point
            self.alive.add(u)
            self.states[u] = NodeState(u, 0, self.ctx.model.p0, False, {}, {}, frozenset())
            self._log(ev.time, "add", u, x=ev.point[0], y=ev.point[1])
            self.rerun(ev.time, u, 0)
            self._schedule_first_beacon(u, ev.time)
        elif ev.kind is EventKind.LOSS:
            self.loss.append((ev.time, ev.until, ev.probability))
            self._log(ev.time, "loss", u, until=ev.until, probability=ev.probability)

    def run(self, horizon: float) -> None:
        while self.queue and self.queue[0][0] <= horizon:
            _, _, _, _, ev = heapq.heappop(self.queue)
            if ev.kind is EventKind.BEACON:
                self.beacon(ev.time, ev.subject)
            else:
                self.inject(ev)

    def snapshot(self) -> tuple[Topology, CbtcResult]:
        ids = sorted(self.alive)
        t = Topology(tuple(ids), [self.pos[u] for u in ids], self.bounds, self.ctx.model)
        states = {}
        for u in ids:
            s = self.states[u]
            recs = tuple(
                NeighborRecord(v, c.direction, self.ctx.model.level_power(c.level),
                               self.ctx.model.power_for_distance(min(c.distance, self.ctx.model.max_range)),
                               c.distance, c.level)
                for v, c in sorted(s.neighbors.items()) if v in self.alive
            )
            states[u] = DiscoveryState(u, s.power, s.level, recs, s.boundary)
        return t, assemble_result(t, self.ctx.alpha, states)


def run_reconfig_sim(initial: Topology, alpha: float, regime: Regime | str, timeline: Sequence[SimEvent],
                     horizon: float, seed: int = 0, config: NdpConfig | None = None) -> SimulationResult:
    """Simulate the protocol from a converged start until ``horizon``.

    Raises :class:`StabilizationError` unless at least ``miss_threshold``
    beacon periods of quiet follow the last injected event.
    """
    cfg = config or NdpConfig()
    regime = Regime.parse(regime)
    events = sorted(timeline)
    last = max((e.end for e in events), default=0.0)
    if any(e.time > horizon for e in events):
        raise ValueError("timeline has events after the horizon")
    if horizon - last < cfg.leave_after:
        raise StabilizationError(
            f"only {horizon - last:.3f}s of quiet after the last event; need {cfg.leave_after:.3f}s")
    sim = _Sim(initial, alpha, regime, cfg, seed)
    sim.bootstrap(run_cbtc(initial, alpha))
    for ev in events:
        if ev.kind is EventKind.BEACON:
            raise ValueError("beacons are scheduled by the simulator")
        sim._push(ev)
    sim.run(horizon)
    topo, result = sim.snapshot()
    return SimulationResult(sim.trace, sim.states, topo, result, optimize(result, regime))


# -- scenario builders ---------------------------------------------------------


def random_timeline(t: Topology, seed: int, changes: int = 6, start: float = 1.0, span: float = 10.0,
                    loss_probability: float = 0.3) -> list[SimEvent]:
    """Seeded mix of crashes, moves, additions and one loss window."""
    rng = _stream(seed, 1)
    w, h = t.bounds
    alive = set(t.ids)
    next_id = max(t.ids, default=-1) + 1
    times = np.sort(rng.uniform(start, start + span, changes))
    events: list[SimEvent] = []
    for when in times:
        kind = ("fail", "move", "add")[int(rng.integers(3))]
        point = (float(rng.uniform(0, w)), float(rng.uniform(0, h)))
        if kind == "fail" and len(alive) > 2:
            u = int(rng.choice(sorted(alive)))
            alive.discard(u)
            events.append(SimEvent(float(when), u, EventKind.FAIL))
        elif kind == "move" and alive:
            events.append(SimEvent(float(when), int(rng.choice(sorted(alive))), EventKind.MOVE, point))
        else:
            events.append(SimEvent(float(when), next_id, EventKind.ADD, point))
            alive.add(next_id)
            next_id += 1
    a = float(rng.uniform(start, start + span / 2))
    events.append(SimEvent(a, -1, EventKind.LOSS, None, a + span / 2, loss_probability))
    return sorted(events)


def partition_scenario(seed: int = 0, per_cluster: int = 12, side: float = 200.0,
                       model: RadioModel | None = None) -> tuple[Topology, list[SimEvent]]:
    """Two compact clusters farther apart than R; at t=2 the right one slides
    to within R of the left one, but farther than either cluster's own diameter.
    """
    model = model or RadioModel()
    R = model.max_range
    rng = _stream(seed, 3)
    left = rng.uniform(0.0, side, (per_cluster, 2))
    right = rng.uniform(0.0, side, (per_cluster, 2))
    far, near = side + 2.5 * R, side + 0.8 * R
    pts = np.vstack([left, right + (far, 0.0)])
    t = Topology(tuple(range(2 * per_cluster)), pts, (far + side, side), model)
    moves = [SimEvent(2.0, per_cluster + i, EventKind.MOVE, (float(x + near), float(y)))
             for i, (x, y) in enumerate(right)]
    return t, moves
