"""Command-line entry point: ``topoctl <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .cbtc import run_cbtc
from .export import FORMATS, cbtc_to_json, export_edges, removal_log_csv
from .harness import (ExperimentConfig, parse_alpha, rows_to_csv, rows_to_raw_json, run_counterexamples,
                      run_table1)
from .network import Topology, connected_components, generate_random, max_power_graph
from .optimizations import GuaranteeViolation, Regime, optimize
from .radio import RadioModel
from .reconfig import NdpConfig, StabilizationError, load_timeline, run_reconfig_sim

EXIT_OK, EXIT_USAGE, EXIT_ASSERT = 0, 2, 3


class UsageError(Exception):
    pass


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _model(args) -> RadioModel:
    return RadioModel(max_range=args.range, growth_factor=args.growth)


def _topology(args) -> Topology:
    model = _model(args)
    if getattr(args, "topology", None):
        return Topology.from_json(Path(args.topology).read_text(), model)
    return generate_random(args.seed, args.nodes, (args.width, args.height), model)


def _add_model(p: argparse.ArgumentParser, growth: float = 1.1) -> None:
    p.add_argument("--range", type=float, default=500.0, help="maximum radio range R")
    p.add_argument("--growth", type=float, default=growth, help="discovery power growth factor")


def _add_network(p: argparse.ArgumentParser) -> None:
    p.add_argument("--topology", help="topology JSON file (otherwise a random network is generated)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nodes", type=int, default=100)
    p.add_argument("--width", type=float, default=1500.0)
    p.add_argument("--height", type=float, default=1500.0)
    _add_model(p)


def cmd_generate(args) -> int:
    _emit(_topology(args).to_json(), args.output)
    return EXIT_OK


def _pipeline(args):
    t = _topology(args)
    r = run_cbtc(t, parse_alpha(args.alpha))
    return t, r, optimize(r, args.opt, args.threshold)


def cmd_run(args) -> int:
    t, r, opt = _pipeline(args)
    final = opt.final
    _emit(export_edges(t, final, args.format) if args.format else _run_summary(t, opt), args.output)
    if args.removal_log:
        Path(args.removal_log).write_text(removal_log_csv(opt.removal_log))
    return EXIT_OK


def _run_summary(t: Topology, opt) -> str:
    e = opt.final
    deg = sum(e.degree(u) for u in t.ids) / len(t.ids)
    rad = sum(max((t.distance(u, v) for v in e.neighbors(u)), default=0.0) for u in t.ids) / len(t.ids)
    same = connected_components(e) == connected_components(max_power_graph(t))
    return (f"regime={opt.regime.value} alpha={opt.base.alpha:.6f} nodes={len(t.ids)} edges={len(e.undirected())}\n"
            f"mean_degree={deg:.4f} mean_radius={rad:.4f} boundary={len(opt.base.boundary_nodes)} "
            f"components_match_max_power={same}\n")


def cmd_export(args) -> int:
    t, r, opt = _pipeline(args)
    if args.what == "topology":
        if args.format != "json":
            raise UsageError("topology exports only as json")
        text = t.to_json()
    elif args.what == "cbtc":
        if args.format != "json":
            raise UsageError("discovery results export only as json")
        text = cbtc_to_json(r)
    elif args.what == "removal-log":
        if args.format != "csv":
            raise UsageError("the removal log exports only as csv")
        text = removal_log_csv(opt.removal_log)
    else:
        text = export_edges(t, opt.final, args.format)
    _emit(text, args.output)
    return EXIT_OK


def cmd_table1(args) -> int:
    overrides = dict(network_count=args.networks, node_count=args.nodes, base_seed=args.seed,
                     threshold=args.threshold, workers=args.workers)
    if args.alphas:
        overrides["alphas"] = tuple(parse_alpha(a) for a in args.alphas.split(","))
    if args.regimes:
        overrides["regimes"] = tuple(Regime.parse(r) for r in args.regimes.split(","))
    if args.growth is not None:
        overrides["model"] = RadioModel(max_range=args.range, growth_factor=args.growth)
    if args.config:
        cfg = ExperimentConfig.from_json(Path(args.config).read_text(), **overrides)
    else:
        cfg = ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})
    rows = run_table1(cfg)
    _emit(rows_to_csv(rows), args.output)
    if args.raw:
        Path(args.raw).write_text(rows_to_raw_json(rows))
    return EXIT_OK


def cmd_counterexample(args) -> int:
    which = ("example1", "disconnect") if args.which == "all" else (args.which,)
    rep = run_counterexamples(which)
    sys.stdout.write(rep.summary())
    if args.dot_dir:
        out = Path(args.dot_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in rep.renderings.items():
            (out / f"{name}.dot").write_text(text)
    return EXIT_OK if rep.passed else EXIT_ASSERT


def cmd_reconfig(args) -> int:
    t = _topology(args)
    timeline = load_timeline(Path(args.timeline).read_text()) if args.timeline else []
    cfg = NdpConfig(beacon_period=args.period, miss_threshold=args.miss, beacon_rule=args.beacon_rule)
    res = run_reconfig_sim(t, parse_alpha(args.alpha), args.opt, timeline, args.horizon, args.loss_seed, cfg)
    if args.trace:
        Path(args.trace).write_text(res.trace_jsonl())
    got = connected_components(res.edges)
    want = connected_components(max_power_graph(res.topology))
    ok = got == want
    sys.stdout.write(f"nodes={len(res.topology.ids)} edges={len(res.edges.undirected())} "
                     f"components={len(got)} max_power_components={len(want)} events={len(res.trace)} "
                     f"{'stable-match' if ok else 'MISMATCH'}\n")
    return EXIT_OK if ok else EXIT_ASSERT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topoctl", description="Cone-based topology control experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random topology as JSON")
    _add_network(g)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    opts = ["basic", "shrink-back", "asym", "asym-no-shrink", "pairwise"]
    for name, func, help_ in (("run", cmd_run, "discover and optimize one network"),
                              ("export", cmd_export, "render a network or result")):
        r = sub.add_parser(name, help=help_)
        _add_network(r)
        r.add_argument("--alpha", default="5pi/6", help="cone angle: radians, 5pi/6 or 150deg")
        r.add_argument("--opt", choices=opts, default="basic")
        r.add_argument("--threshold", choices=("node", "global"), default="node")
        r.add_argument("-o", "--output")
        if name == "run":
            r.add_argument("--format", choices=FORMATS)
            r.add_argument("--removal-log", help="write the removal log CSV here")
        else:
            r.add_argument("--format", choices=FORMATS, default="json")
            r.add_argument("--what", choices=("edges", "topology", "cbtc", "removal-log"), default="edges")
        r.set_defaults(func=func)

    t = sub.add_parser("table1", help="average degree/radius over random networks (CSV)")
    t.add_argument("--networks", type=int)
    t.add_argument("--nodes", type=int)
    t.add_argument("--seed", type=int)
    t.add_argument("--alphas", help="comma-separated angles")
    t.add_argument("--regimes", help="comma-separated regimes")
    t.add_argument("--threshold", choices=("node", "global"))
    t.add_argument("--workers", type=int)
    t.add_argument("--growth", type=float)
    t.add_argument("--range", type=float, default=500.0)
    t.add_argument("--config", help="ExperimentConfig JSON; flags override it")
    t.add_argument("--raw", help="write per-network values and both averages as JSON")
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_table1)

    c = sub.add_parser("counterexample", help="check the hand-built constructions")
    c.add_argument("which", choices=("example1", "disconnect", "all"))
    c.add_argument("--dot-dir")
    c.set_defaults(func=cmd_counterexample)

    rc = sub.add_parser("reconfig", help="simulate beacons and reconfiguration over a timeline")
    _add_network(rc)
    rc.add_argument("--timeline", help="JSON list of events")
    rc.add_argument("--alpha", default="5pi/6")
    rc.add_argument("--opt", choices=opts, default="shrink-back")
    rc.add_argument("--horizon", type=float, default=30.0)
    rc.add_argument("--loss-seed", type=int, default=0)
    rc.add_argument("--period", type=float, default=1.0)
    rc.add_argument("--miss", type=int, default=3)
    rc.add_argument("--beacon-rule", choices=("correct", "shrunk"), default="correct")
    rc.add_argument("--trace", help="write the JSON-lines trace here")
    rc.set_defaults(func=cmd_reconfig)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GuaranteeViolation, StabilizationError) as exc:
        print(f"topoctl: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except (UsageError, ValueError, OSError) as exc:
        print(f"topoctl: {exc}", file=sys.stderr)
        return EXIT_USAGE

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
