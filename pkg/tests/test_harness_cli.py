import json
import math
import xml.etree.ElementTree as ET

import pytest

from topoctl import cli
from topoctl.cbtc import run_cbtc
from topoctl.export import edges_to_csv, edges_to_dot, edges_to_json, edges_to_svg, export_edges, UnsupportedExport
from topoctl.harness import (ExperimentConfig, ExperimentError, _network_metrics, find_row, format_alpha,
                             parse_alpha, rows_to_csv, rows_to_raw_json, run_counterexamples, run_table1)
from topoctl.network import EdgeSet, Label, generate_random
from topoctl.optimizations import optimize
from topoctl.reconfig import EventKind, SimEvent, dump_timeline

SMALL = dict(network_count=3, node_count=40, bounds=(900.0, 900.0))


@pytest.mark.parametrize("text,value", [("5pi/6", 5 * math.pi / 6), ("pi", math.pi), ("150deg", 5 * math.pi / 6),
                                        ("2.5", 2.5), ("2*pi/3", 2 * math.pi / 3), ("π/2", math.pi / 2)])
def test_parse_alpha(text, value):
    assert parse_alpha(text) == pytest.approx(value)


def test_parse_alpha_rejects_garbage():
    with pytest.raises(ValueError):
        parse_alpha("wide")


def test_format_alpha():
    assert format_alpha(5 * math.pi / 6) == "5pi/6"
    assert format_alpha(math.pi) == "pi"
    assert format_alpha(1.0) == "1.000000"


def test_table_rows_and_csv_are_reproducible():
    cfg = ExperimentConfig(**SMALL)
    a, b = rows_to_csv(run_table1(cfg)), rows_to_csv(run_table1(cfg))
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "regime,alpha,mean_degree,mean_radius,networks,seed"
    assert lines[1].startswith("max-power,,") and ",500.0000,3,0" in lines[1]
    assert not any(line.startswith("asym,5pi/6") for line in lines)


def test_parallel_order_matches_serial():
    serial = run_table1(ExperimentConfig(**SMALL))
    parallel = run_table1(ExperimentConfig(**SMALL, workers=2))
    assert rows_to_csv(serial) == rows_to_csv(parallel)


def test_means_are_network_averages_and_raw_keeps_both():
    rows = run_table1(ExperimentConfig(**SMALL))
    row = find_row(rows, "basic", 5 * math.pi / 6)
    assert row.mean_degree == pytest.approx(sum(d for d, _ in row.per_network) / 3)
    doc = json.loads(rows_to_raw_json(rows))
    assert {"network_weighted", "node_weighted", "per_network"} <= set(doc[0])
    assert [p["seed"] for p in doc[1]["per_network"]] == [0, 1, 2]


def test_degree_non_increasing_along_stack():
    cfg = ExperimentConfig(**SMALL)
    for seed in cfg.seeds():
        vals = dict(zip(cfg.cells(), _network_metrics((cfg, seed))))
        for alpha in cfg.alphas:
            chain = [vals[(alpha, r)][0] for r in cfg.regimes if (alpha, r) in vals and r.value != "asym-no-shrink"]
            assert chain == sorted(chain, reverse=True)


def test_config_json_round_trip():
    cfg = ExperimentConfig(**SMALL, base_seed=7)
    again = ExperimentConfig.from_json(cfg.to_json())
    assert again == cfg
    assert ExperimentConfig.from_json(cfg.to_json(), network_count=5).network_count == 5


def test_failure_names_the_seed():
    cfg = ExperimentConfig(network_count=1, node_count=10, alphas=(7.0,), base_seed=42)
    with pytest.raises(ExperimentError) as info:
        run_table1(cfg)
    assert info.value.seed == 42 and "42" in str(info.value)


def test_counterexample_report():
    rep = run_counterexamples()
    assert rep.passed, rep.summary()
    assert "digraph N_alpha" in rep.renderings["example1"]
    assert rep.renderings["disconnect"].startswith("graph E_alpha")


def test_exports_are_stable_and_well_formed():
    t = generate_random(1, 30)
    e = optimize(run_cbtc(t, 5 * math.pi / 6), "pairwise").final
    for fmt in ("json", "dot", "csv", "svg"):
        assert export_edges(t, e, fmt) == export_edges(t, e, fmt)
    ET.fromstring(edges_to_svg(t, e))
    assert len(json.loads(edges_to_json(t, e))["edges"]) == len(e.undirected())
    with pytest.raises(UnsupportedExport):
        export_edges(t, e, "png")


def test_empty_edge_set_exports():
    t = generate_random(1, 3)
    e = EdgeSet(Label.E_ALPHA, t.ids, frozenset(), True)
    assert json.loads(edges_to_json(t, e))["edges"] == []
    assert edges_to_csv(t, e) == "u,v,length\n"
    assert edges_to_dot(t, e).startswith("graph E_alpha {")
    ET.fromstring(edges_to_svg(t, e))


def test_cli_run_and_exit_codes(tmp_path, capsys):
    topo = tmp_path / "t.json"
    assert cli.main(["generate", "--nodes", "30", "--seed", "3", "-o", str(topo)]) == 0
    out = tmp_path / "e.csv"
    log = tmp_path / "log.csv"
    assert cli.main(["run", "--topology", str(topo), "--alpha", "2pi/3", "--opt", "pairwise",
                     "--format", "csv", "-o", str(out), "--removal-log", str(log)]) == 0
    assert out.read_text().startswith("u,v,length")
    assert log.read_text().startswith("u,v,reason,stage")
    assert cli.main(["run", "--topology", str(topo), "--alpha", "5pi/6", "--opt", "asym"]) == 3
    assert cli.main(["run", "--alpha", "wide"]) == 2
    assert cli.main(["export", "--topology", str(topo), "--what", "topology", "--format", "svg"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["run", "--opt", "everything"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_cli_table1_and_counterexample(tmp_path, capsys):
    out, raw = tmp_path / "a.csv", tmp_path / "raw.json"
    args = ["table1", "--networks", "2", "--nodes", "30", "--seed", "4", "--regimes", "basic,pairwise",
            "-o", str(out), "--raw", str(raw)]
    assert cli.main(args) == 0
    first = out.read_bytes()
    assert cli.main(args) == 0
    assert out.read_bytes() == first
    assert json.loads(raw.read_text())[0]["regime"] == "max-power"
    assert cli.main(["counterexample", "all", "--dot-dir", str(tmp_path / "dots")]) == 0
    assert (tmp_path / "dots" / "disconnect.dot").exists()
    capsys.readouterr()


def test_cli_reconfig(tmp_path, capsys):
    tl = tmp_path / "tl.json"
    tl.write_text(dump_timeline([SimEvent(1.0, 2, EventKind.FAIL)]))
    trace = tmp_path / "trace.jsonl"
    code = cli.main(["reconfig", "--nodes", "30", "--width", "900", "--height", "900", "--timeline", str(tl),
                     "--horizon", "10", "--trace", str(trace)])
    assert code == 0
    lines = [json.loads(x) for x in trace.read_text().splitlines()]
    assert lines[0]["event"] == "fail"
    assert "stable-match" in capsys.readouterr().out
    assert cli.main(["reconfig", "--nodes", "10", "--timeline", str(tl), "--horizon", "2"]) == 3
