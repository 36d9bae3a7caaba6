import math

import pytest

from topoctl.cbtc import NeighborRecord, build_example1, run_cbtc
from topoctl.network import ContractViolation, EdgeSet, Label, Topology, connected_components, generate_random, max_power_graph
from topoctl.optimizations import (GuaranteeViolation, Regime, asymmetric_removal, is_redundant, optimize,
                                   pairwise_removal, removal_notifications, shrink_back, shrink_level)
from topoctl.radio import RadioModel

from conftest import TWO_PI


def rec(peer, direction, level):
    return NeighborRecord(peer, direction, 0.0, 0.0, 1.0, level)


def test_shrink_level_drops_redundant_far_tag():
    recs = [rec(1, 0.0, 1), rec(2, 2 * math.pi / 3, 1), rec(3, 4 * math.pi / 3, 1), rec(4, math.pi / 6, 40)]
    assert shrink_level(recs, 5 * math.pi / 6) == 1


def test_shrink_level_keeps_tag_that_adds_coverage():
    recs = [rec(1, 0.0, 1), rec(2, math.pi, 5)]
    assert shrink_level(recs, math.pi / 2) == 5
    assert shrink_level([], 1.0) == 0


def test_shrink_back_only_touches_boundary_nodes():
    t = generate_random(2, 100)
    r = run_cbtc(t, 5 * math.pi / 6)
    e_s, power, n_s = shrink_back(r)
    assert e_s.edges <= r.e_alpha.edges and e_s.is_symmetric()
    for u, s in r.states.items():
        assert power[u] <= s.power
        mine = {b for a, b in n_s.edges if a == u}
        if not s.boundary:
            assert mine == s.peers and power[u] == s.power
        else:
            assert mine <= s.peers


def brute_redundant(t, edges, u, v):
    duv = t.direction(u, v)
    key = (t.distance(u, v), max(u, v), min(u, v))
    for a, w in edges:
        if a != u or w == v:
            continue
        delta = abs(duv - t.direction(u, w)) % TWO_PI
        delta = min(delta, TWO_PI - delta)
        if delta < math.pi / 3 and (t.distance(u, w), max(u, w), min(u, w)) < key:
            return True
    return False


def brute_pairwise(t, e):
    drop = set()
    for u in e.nodes:
        inc = [v for a, v in e.edges if a == u]
        if not inc:
            continue
        key = {v: (t.distance(u, v), max(u, v), min(u, v)) for v in inc}
        red = {v: brute_redundant(t, e.edges, u, v) for v in inc}
        cut = max(key[v] for v in inc if not red[v])
        drop |= {frozenset((u, v)) for v in inc if red[v] and key[v] > cut}
    return {(a, b) for a, b in e.edges if frozenset((a, b)) not in drop}


def sym(t, pairs):
    return EdgeSet.from_pairs(Label.E_ALPHA, t.ids, pairs, symmetric=True)


def test_redundant_examples():
    w = (0.9 * math.cos(math.radians(20)), 0.9 * math.sin(math.radians(20)))
    t = Topology.from_points([(0, 0), (1, 0), w])
    e = sym(t, [(0, 1), (0, 2)])
    assert is_redundant(t, e, 0, 1) and not is_redundant(t, e, 0, 2)
    lone = sym(t, [(0, 1)])
    assert not is_redundant(t, lone, 0, 1)
    with pytest.raises(ContractViolation):
        is_redundant(t, lone, 0, 2)


@pytest.mark.parametrize("ids", [(0, 1, 2), (0, 2, 1), (1, 0, 2), (2, 1, 0)])
def test_equal_lengths_exactly_one_redundant(ids):
    u, a, b = ids
    pts = {u: (0.0, 0.0), a: (1.0, 0.0), b: (math.cos(math.pi / 6), math.sin(math.pi / 6))}
    t = Topology.from_points([pts[i] for i in range(3)])
    e = sym(t, [(u, a), (u, b)])
    flags = [is_redundant(t, e, u, a), is_redundant(t, e, u, b)]
    assert flags.count(True) == 1
    # the larger (hi, lo) id pair is the dominated one
    loser = a if (max(u, a), min(u, a)) > (max(u, b), min(u, b)) else b
    assert is_redundant(t, e, u, loser)


def test_triangle_drops_longest():
    t = Topology.from_points([(0, 0), (10, 0), (5, 8)])
    e = sym(t, [(0, 1), (1, 2), (0, 2)])
    out, log = pairwise_removal(t, e)
    assert out.undirected() == [(0, 2), (1, 2)]
    assert [(x.u, x.v) for x in log] == [(0, 1)]


def test_pairwise_matches_brute_force():
    for seed in range(8):
        t = generate_random(seed, 60, bounds=(1000, 1000))
        e = optimize(run_cbtc(t, 5 * math.pi / 6), "shrink-back").final
        out, _ = pairwise_removal(t, e)
        assert out.edges == brute_pairwise(t, e)


def test_pairwise_rejects_asymmetric():
    t = Topology.from_points([(0, 0), (1, 0)])
    with pytest.raises(ContractViolation):
        pairwise_removal(t, EdgeSet.from_pairs(Label.N_ALPHA, [0, 1], [(0, 1)], symmetric=False))
    with pytest.raises(ValueError):
        pairwise_removal(t, sym(t, [(0, 1)]), threshold="mean")


def test_global_threshold_keeps_a_superset():
    t = generate_random(3, 100)
    e = optimize(run_cbtc(t, 5 * math.pi / 6), "shrink-back").final
    node, _ = pairwise_removal(t, e, "node")
    glob, _ = pairwise_removal(t, e, "global")
    assert node.edges <= glob.edges <= e.edges


def test_asymmetric_removal_identity_and_guard():
    t = generate_random(6, 80)
    r = run_cbtc(t, 2 * math.pi / 3)
    minus = asymmetric_removal(r)
    assert minus.edges == {(a, b) for a, b in r.n_alpha.edges if (b, a) in r.n_alpha.edges}
    note = removal_notifications(r.n_alpha)
    for u, told in note.items():
        assert told == r.reverse_contacts[u]
    with pytest.raises(GuaranteeViolation):
        asymmetric_removal(run_cbtc(t, 5 * math.pi / 6))


def test_example1_asymmetry_removed_when_allowed():
    r = run_cbtc(build_example1(math.pi / 24), 3 * math.pi / 4)
    with pytest.raises(GuaranteeViolation):
        optimize(r, Regime.ASYM)


@pytest.mark.parametrize("alpha", [2 * math.pi / 3, 5 * math.pi / 6])
def test_stack_is_nested_and_connected(alpha):
    for seed in range(5):
        t = generate_random(seed, 100, model=RadioModel(growth_factor=1.1))
        r = run_cbtc(t, alpha)
        want = connected_components(max_power_graph(t))
        full = optimize(r, "pairwise")
        chain = [r.e_alpha, full.e_alpha_s]
        if full.e_alpha_minus is not None:
            chain.append(full.e_alpha_minus)
        chain.append(full.e_alpha_nr)
        for big, small in zip(chain, chain[1:]):
            assert small.edges <= big.edges
        for e in chain:
            assert e.is_symmetric() and connected_components(e) == want
        gone = {(x.u, x.v) for x in full.removal_log}
        assert gone == set(r.e_alpha.undirected()) - set(full.final.undirected())


def test_regime_parsing():
    assert Regime.parse("shrink") is Regime.SHRINK_BACK
    assert Regime.parse("all") is Regime.PAIRWISE
    with pytest.raises(ValueError):
        Regime.parse("nope")
