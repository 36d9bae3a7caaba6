"""Deterministic text renderings: JSON, DOT, CSV and SVG."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Mapping

from .cbtc import CbtcResult
from .network import EdgeSet, Topology
from .optimizations import Removal

FORMATS = ("json", "dot", "csv", "svg")


class UnsupportedExport(ValueError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def edges_to_json(t: Topology, e: EdgeSet) -> str:
    pairs = e.undirected() if e.symmetric else e.sorted_edges()
    doc = {
        "label": e.label.value,
        "symmetric": e.symmetric,
        "nodes": [{"id": u, "x": float(t.position(u)[0]), "y": float(t.position(u)[1])} for u in e.nodes],
        "edges": [{"u": u, "v": v, "length": t.distance(u, v)} for u, v in pairs],
    }
    return json.dumps(doc, indent=1) + "\n"


def cbtc_to_json(r: CbtcResult) -> str:
    doc = {
        "alpha": r.alpha,
        "nodes": [{
            "id": u,
            "power": s.power,
            "boundary": s.boundary,
            "rad_minus": r.radii[u].rad_minus,
            "rad": r.radii[u].rad,
            "discovered": sorted(rec.peer for rec in s.neighbors),
            "closure": sorted(r.e_alpha.neighbors(u)),
        } for u, s in sorted(r.states.items())],
    }
    return json.dumps(doc, indent=1) + "\n"


def edges_to_dot(t: Topology, e: EdgeSet, names: Mapping[str, int] | None = None, title: str | None = None) -> str:
    label_of = {v: k for k, v in (names or {}).items()}
    kind, arrow = ("graph", "--") if e.symmetric else ("digraph", "->")
    out = [f"{kind} {e.label.value} {{"]
    if title:
        out.append(f'  label="{title}";')
    for u in e.nodes:
        x, y = t.position(u)
        name = label_of.get(u, str(u))
        out.append(f'  {u} [label="{name}", pos="{_fmt(x)},{_fmt(y)}!"];')
    pairs = e.undirected() if e.symmetric else e.sorted_edges()
    for u, v in pairs:
        out.append(f'  {u} {arrow} {v} [len="{_fmt(t.distance(u, v))}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def edges_to_csv(t: Topology, e: EdgeSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("u", "v", "length"))
    for u, v in (e.undirected() if e.symmetric else e.sorted_edges()):
        w.writerow((u, v, _fmt(t.distance(u, v))))
    return buf.getvalue()


def edges_to_svg(t: Topology, e: EdgeSet, size: float = 800.0, margin: float = 20.0) -> str:
    """Nodes to scale inside the bounding box, one line per undirected edge."""
    if len(t.ids):
        xs, ys = t.positions[:, 0], t.positions[:, 1]
        x0, y0 = min(0.0, float(xs.min())), min(0.0, float(ys.min()))
        x1, y1 = max(t.bounds[0], float(xs.max())), max(t.bounds[1], float(ys.max()))
    else:
        x0 = y0 = 0.0
        x1, y1 = t.bounds
    span = max(x1 - x0, y1 - y0, 1e-9)
    k = (size - 2 * margin) / span
    w, h = (x1 - x0) * k + 2 * margin, (y1 - y0) * k + 2 * margin

    def px(u: int) -> tuple[str, str]:
        x, y = t.position(u)
        # flip y so the picture matches the usual axes
        return _fmt(margin + (x - x0) * k), _fmt(h - margin - (y - y0) * k)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" height="{_fmt(h)}" '
           f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
           f'<rect width="100%" height="100%" fill="white"/>',
           f'<g stroke="black" stroke-width="1">']
    for u, v in e.undirected():
        (ax, ay), (bx, by) = px(u), px(v)
        out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
    out.append("</g>")
    out.append('<g fill="red">')
    for u in e.nodes:
        cx, cy = px(u)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="3"><title>{u}</title></circle>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def removal_log_csv(log: Iterable[Removal]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("u", "v", "reason", "stage"))
    for rec in log:
        w.writerow(tuple(rec))
    return buf.getvalue()


def export_edges(t: Topology, e: EdgeSet, fmt: str) -> str:
    if fmt == "json":
        return edges_to_json(t, e)
    if fmt == "dot":
        return edges_to_dot(t, e)
    if fmt == "csv":
        return edges_to_csv(t, e)
    if fmt == "svg":
        return edges_to_svg(t, e)
    raise UnsupportedExport(f"unsupported format {fmt!r}; choose from {FORMATS}")
