"""Shared brute-force oracles, written independently of the package code."""

from __future__ import annotations

import math
from collections import deque

import numpy as np
import pytest

TWO_PI = 2 * math.pi

ACCEPTANCE_LINES: list[str] = []


def bfs_components(nodes, edges):
    adj = {u: set() for u in nodes}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, comps = set(), []
    for s in sorted(nodes):
        if s in seen:
            continue
        comp, q = {s}, deque([s])
        seen.add(s)
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    q.append(y)
        comps.append(frozenset(comp))
    return set(comps)


def reachable_with_shorter(t, edges, u, v, limit):
    """BFS from u to v using only edges strictly shorter than ``limit``."""
    adj = {}
    for a, b in edges:
        if t.distance(a, b) < limit:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    seen, q = {u}, deque([u])
    while q:
        x = q.popleft()
        if x == v:
            return True
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                q.append(y)
    return False


def sampled_gap(dirs, alpha, samples=20000):
    """True if some cone of width alpha (sampled bisectors) holds no direction."""
    if len(dirs) == 0:
        return True
    d = np.asarray(dirs)
    for c in np.linspace(0, TWO_PI, samples, endpoint=False):
        diff = np.abs((d - c + math.pi) % TWO_PI - math.pi)
        if np.all(diff > alpha / 2 + 1e-7):
            return True
    return False


def naive_cbtc(points, alpha, R=500.0, P=1.0, p0=None, growth=2.0):
    """Literal growing loop: multiply power, re-scan every node, test gaps by sorting."""
    pts = np.asarray(points, float)
    n = len(pts)
    p0 = P * 2.0 ** -40 if p0 is None else p0
    out = {}
    for u in range(n):
        p = p0
        found = {}
        while True:
            gap = True
            if len(found) >= 2:
                a = sorted(found.values())
                gaps = [b - c for b, c in zip(a[1:], a)] + [a[0] + TWO_PI - a[-1]]
                gap = max(gaps) > alpha + 1e-9
            if not (p < P and gap):
                break
            p = min(growth * p, P)
            reach = R * (p / P) ** 0.5
            for v in range(n):
                if v != u and v not in found:
                    d = math.dist(pts[u], pts[v])
                    if d <= reach + 1e-9 and d <= R:
                        found[v] = math.atan2(pts[v][1] - pts[u][1], pts[v][0] - pts[u][0]) % TWO_PI
        out[u] = (p, set(found))
    return out


@pytest.fixture
def acceptance_report():
    def record(line: str) -> None:
        print(line)
        ACCEPTANCE_LINES.append(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
