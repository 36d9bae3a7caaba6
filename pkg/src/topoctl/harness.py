"""Experiment driver: random-network averages and the two hand-built checks."""

from __future__ import annotations

import csv
import io
import json
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .cbtc import COUNTER_NAMES, EXAMPLE1_NAMES, ConstructionError, build_counter_5pi6, build_example1, run_cbtc
from .network import EdgeSet, Topology, connected_components, generate_random, max_power_graph
from .optimizations import ASYM_MAX_ALPHA, Regime, optimize
from .radio import RadioModel

BASELINE = "max-power"
DEFAULT_REGIMES = (Regime.BASIC, Regime.SHRINK_BACK, Regime.ASYM, Regime.ASYM_NO_SHRINK, Regime.PAIRWISE)
# finer than doubling: each step overshoots the needed power by at most 10%
EXPERIMENT_GROWTH = 1.1


class ExperimentError(RuntimeError):
    def __init__(self, seed: int, cause: BaseException):
        super().__init__(f"network with seed {seed} failed: {cause!r}")
        self.seed = seed
        self.cause = cause

    def __reduce__(self):
        return type(self), (self.seed, self.cause)


_ALPHA_RE = re.compile(r"^\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$", re.I)


def parse_alpha(text: str | float) -> float:
    """Accept radians (``2.618``), ``5pi/6``-style fractions or degrees (``150deg``)."""
    if isinstance(text, (int, float)):
        return float(text)
    s = text.strip().lower().replace("π", "pi")
    if s.endswith("deg"):
        return math.radians(float(s[:-3]))
    m = _ALPHA_RE.match(s)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(s)
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}") from None


def format_alpha(alpha: float) -> str:
    """``5pi/6`` when alpha is a small rational multiple of pi, else radians."""
    for den in (1, 2, 3, 4, 6, 8, 12, 24, 36, 48, 72, 96):
        num = alpha * den / math.pi
        if abs(num - round(num)) < 1e-9 and round(num) > 0:
            n = int(round(num))
            g = math.gcd(n, den)
            n, d = n // g, den // g
            head = "pi" if n == 1 else f"{n}pi"
            return head if d == 1 else f"{head}/{d}"
    return f"{alpha:.6f}"


@dataclass(frozen=True)
class ExperimentConfig:
    network_count: int = 100
    node_count: int = 100
    bounds: tuple[float, float] = (1500.0, 1500.0)
    model: RadioModel = field(default_factory=lambda: RadioModel(growth_factor=EXPERIMENT_GROWTH))
    alphas: tuple[float, ...] = (5 * math.pi / 6, 2 * math.pi / 3)
    regimes: tuple[Regime, ...] = DEFAULT_REGIMES
    base_seed: int = 0
    threshold: str = "node"
    workers: int = 1

    def __post_init__(self):
        if self.network_count < 1 or self.node_count < 1:
            raise ValueError("network_count and node_count must be >= 1")
        if self.threshold not in ("node", "global"):
            raise ValueError("threshold must be 'node' or 'global'")
        object.__setattr__(self, "regimes", tuple(Regime.parse(r) for r in self.regimes))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))

    def seeds(self) -> list[int]:
        return [self.base_seed + i for i in range(self.network_count)]

    def cells(self) -> list[tuple[float | None, Regime | None]]:
        """Output order: the baseline, then (alpha, regime) in configured order."""
        out: list[tuple[float | None, Regime | None]] = [(None, None)]
        for a in self.alphas:
            for r in self.regimes:
                if r in (Regime.ASYM, Regime.ASYM_NO_SHRINK) and a > ASYM_MAX_ALPHA + 1e-9:
                    continue
                out.append((a, r))
        return out

    def to_json(self) -> str:
        doc = {
            "network_count": self.network_count, "node_count": self.node_count,
            "bounds": list(self.bounds), "alphas": [format_alpha(a) for a in self.alphas],
            "regimes": [r.value for r in self.regimes], "base_seed": self.base_seed,
            "threshold": self.threshold, "workers": self.workers,
            "model": {k: v for k, v in asdict(self.model).items() if not k.startswith("_")},
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str, **overrides: Any) -> "ExperimentConfig":
        doc = json.loads(text)
        kw: dict[str, Any] = {}
        for key in ("network_count", "node_count", "base_seed", "threshold", "workers"):
            if key in doc:
                kw[key] = doc[key]
        if "bounds" in doc:
            kw["bounds"] = tuple(float(b) for b in doc["bounds"])
        if "alphas" in doc:
            kw["alphas"] = tuple(parse_alpha(a) for a in doc["alphas"])
        if "regimes" in doc:
            kw["regimes"] = tuple(Regime.parse(r) for r in doc["regimes"])
        if "model" in doc:
            base = {"growth_factor": EXPERIMENT_GROWTH}
            base.update(doc["model"])
            kw["model"] = RadioModel(**base)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)


@dataclass(frozen=True)
class MetricsRow:
    regime: str
    alpha: float | None
    mean_degree: float
    mean_radius: float
    per_network: tuple[tuple[float, float], ...]
    node_weighted: tuple[float, float]
    seed: int

    @property
    def networks(self) -> int:
        return len(self.per_network)

    @property
    def alpha_label(self) -> str:
        return "" if self.alpha is None else format_alpha(self.alpha)


def edge_metrics(t: Topology, e: EdgeSet) -> tuple[float, float, int, float, float]:
    """Mean degree, mean radius, node count, and the two sums for pooling."""
    deg = np.array([e.degree(u) for u in t.ids], dtype=float)
    rad = np.array([max((t.distance(u, v) for v in e.neighbors(u)), default=0.0) for u in t.ids])
    return float(deg.mean()), float(rad.mean()), len(t.ids), float(deg.sum()), float(rad.sum())


def _network_metrics(args: tuple[ExperimentConfig, int]) -> list[tuple[float, float, int, float, float]]:
    cfg, seed = args
    try:
        t = generate_random(seed, cfg.node_count, cfg.bounds, cfg.model)
        out = []
        results = {}
        for alpha, regime in cfg.cells():
            if alpha is None:
                # without topology control every node transmits at full power
                deg, _, n, dsum, _ = edge_metrics(t, max_power_graph(t))
                R = cfg.model.max_range
                out.append((deg, R, n, dsum, R * n))
                continue
            if alpha not in results:
                results[alpha] = run_cbtc(t, alpha)
            out.append(edge_metrics(t, optimize(results[alpha], regime, cfg.threshold).final))
        return out
    except Exception as exc:  # noqa: BLE001 - rewrapped with the seed
        raise ExperimentError(seed, exc) from exc


def run_table1(cfg: ExperimentConfig) -> list[MetricsRow]:
    """Average degree and radius per (alpha, regime) over seeded random networks."""
    jobs = [(cfg, s) for s in cfg.seeds()]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            per_seed = list(pool.map(_network_metrics, jobs))
    else:
        per_seed = [_network_metrics(j) for j in jobs]
    rows = []
    for k, (alpha, regime) in enumerate(cfg.cells()):
        vals = [net[k] for net in per_seed]
        per = tuple((v[0], v[1]) for v in vals)
        nodes = sum(v[2] for v in vals)
        pooled = (sum(v[3] for v in vals) / nodes, sum(v[4] for v in vals) / nodes)
        rows.append(MetricsRow(BASELINE if regime is None else regime.value, alpha,
                               float(np.mean([p[0] for p in per])), float(np.mean([p[1] for p in per])),
                               per, pooled, cfg.base_seed))
    return rows


CSV_FIELDS = ("regime", "alpha", "mean_degree", "mean_radius", "networks", "seed")


def rows_to_csv(rows: Iterable[MetricsRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow((r.regime, r.alpha_label, f"{r.mean_degree:.4f}", f"{r.mean_radius:.4f}", r.networks, r.seed))
    return buf.getvalue()


def rows_to_raw_json(rows: Iterable[MetricsRow]) -> str:
    """Both averaging schemes plus every per-network value."""
    doc = [{
        "regime": r.regime, "alpha": r.alpha_label,
        "network_weighted": {"mean_degree": r.mean_degree, "mean_radius": r.mean_radius},
        "node_weighted": {"mean_degree": r.node_weighted[0], "mean_radius": r.node_weighted[1]},
        "per_network": [{"seed": r.seed + i, "mean_degree": d, "mean_radius": rad}
                        for i, (d, rad) in enumerate(r.per_network)],
    } for r in rows]
    return json.dumps(doc, indent=1) + "\n"


def find_row(rows: Sequence[MetricsRow], regime: str | Regime, alpha: float | None) -> MetricsRow:
    name = regime.value if isinstance(regime, Regime) else regime
    for r in rows:
        if r.regime == name and (r.alpha is None if alpha is None else r.alpha is not None
                                 and abs(r.alpha - alpha) < 1e-12):
            return r
    raise KeyError((name, alpha))


# -- hand-built checks -------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    construction: str
    epsilon: float
    alpha: float
    claim: str
    passed: bool
    detail: str


@dataclass
class CounterexampleReport:
    checks: list[Check] = field(default_factory=list)
    renderings: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"{mark} {c.construction} eps={format_alpha(c.epsilon)} alpha={format_alpha(c.alpha)}"
                         f" {c.claim}: {c.detail}")
        return "\n".join(lines) + "\n"


EXAMPLE1_EPSILONS = (math.pi / 96, math.pi / 24)
COUNTER_EPSILONS = (math.pi / 72, math.pi / 36, math.pi / 18)


def check_example1(eps: float, alpha: float, strict: bool = True) -> Check:
    """One-way discovery between ``u0`` and ``v`` with a connected closure."""
    claim = "v finds u0, u0 misses v, closure connected"
    try:
        t = build_example1(eps, strict=strict)
    except ConstructionError as exc:
        return Check("example1", eps, alpha, claim, False, f"construction refused: {exc}")
    r = run_cbtc(t, alpha)
    u0, v = EXAMPLE1_NAMES["u0"], EXAMPLE1_NAMES["v"]
    one_way = (v, u0) in r.n_alpha and (u0, v) not in r.n_alpha
    joined = len(connected_components(r.e_alpha)) == 1
    detail = f"(v,u0) in N={(v, u0) in r.n_alpha}, (u0,v) in N={(u0, v) in r.n_alpha}, " \
             f"components={len(connected_components(r.e_alpha))}"
    return Check("example1", eps, alpha, claim, one_way and joined, detail)


def check_counter(eps: float, alpha: float, expect_components: int) -> Check:
    claim = f"G_R connected, closure has {expect_components} component(s)"
    try:
        t = build_counter_5pi6(eps)
    except ConstructionError as exc:
        return Check("disconnect", eps, alpha, claim, False, f"construction refused: {exc}")
    r = run_cbtc(t, alpha)
    gr = len(connected_components(max_power_graph(t)))
    got = len(connected_components(r.e_alpha))
    return Check("disconnect", eps, alpha, claim, gr == 1 and got == expect_components,
                 f"G_R components={gr}, closure components={got}, p_u0={r.states[COUNTER_NAMES['u0']].power:.6f}")


def run_counterexamples(which: Sequence[str] = ("example1", "disconnect")) -> CounterexampleReport:
    from .export import edges_to_dot

    rep = CounterexampleReport()
    if "example1" in which:
        for eps in EXAMPLE1_EPSILONS:
            for alpha in (2 * math.pi / 3 + 2 * eps, 5 * math.pi / 6):
                rep.checks.append(check_example1(eps, alpha))
            # at 2*pi/3 the cone never opens wide enough for the one-way pair
            r = run_cbtc(build_example1(eps), 2 * math.pi / 3)
            sym = all((b, a) in r.n_alpha for a, b in r.n_alpha.edges)
            rep.checks.append(Check("example1", eps, 2 * math.pi / 3, "discovery symmetric", sym,
                                    f"|N|={len(r.n_alpha)}"))
        t = build_example1(math.pi / 24)
        r = run_cbtc(t, 5 * math.pi / 6)
        rep.renderings["example1"] = edges_to_dot(t, r.n_alpha, names=EXAMPLE1_NAMES,
                                                  title="example1 eps=pi/24 alpha=5pi/6")
    if "disconnect" in which:
        for eps in COUNTER_EPSILONS:
            rep.checks.append(check_counter(eps, 5 * math.pi / 6 + eps, 2))
            rep.checks.append(check_counter(eps, 5 * math.pi / 6, 1))
        t = build_counter_5pi6(math.pi / 36)
        r = run_cbtc(t, 5 * math.pi / 6 + math.pi / 36)
        rep.renderings["disconnect"] = edges_to_dot(t, r.e_alpha, names=COUNTER_NAMES,
                                                    title="disconnect eps=pi/36 alpha=5pi/6+pi/36")
    return rep
