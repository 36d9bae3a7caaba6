import itertools
import math

import numpy as np
import pytest

from topoctl.geometry import DegenerateGeometryError
from topoctl.network import (ContractViolation, EdgeId, EdgeSet, GenerationError, Label, Topology,
                             connected_components, edge_id, generate_random, max_power_graph, same_partition)
from topoctl.radio import RadioModel

from conftest import bfs_components


def test_generation_is_seeded_and_bounded():
    a = generate_random(5, 50)
    b = generate_random(5, 50)
    assert a == b and a.to_json() == b.to_json()
    assert a != generate_random(6, 50)
    assert np.all(a.positions >= 0) and np.all(a.positions <= 1500)


def test_generation_errors():
    with pytest.raises(GenerationError):
        generate_random(0, 0)
    with pytest.raises(GenerationError):
        generate_random(0, 10, bounds=(0, 5))
    with pytest.raises(GenerationError):
        generate_random(0, 50, bounds=(1, 1), min_separation=1.0)


def test_json_round_trip():
    t = generate_random(1, 20)
    assert Topology.from_json(t.to_json()) == t


def test_coincident_nodes_rejected():
    with pytest.raises(DegenerateGeometryError):
        Topology.from_points([(1, 1), (1, 1)])


def test_max_power_graph_includes_exact_range():
    t = Topology.from_points([(0, 0), (500, 0), (1000.0001, 0)])
    g = max_power_graph(t)
    assert (0, 1) in g and (1, 0) in g and (1, 2) not in g
    assert g.symmetric


def test_components_match_bfs():
    for seed in range(20):
        t = generate_random(seed, 40, bounds=(2000, 2000))
        g = max_power_graph(t)
        assert set(connected_components(g)) == bfs_components(t.ids, g.edges)


def test_components_need_symmetry():
    e = EdgeSet.from_pairs(Label.N_ALPHA, [0, 1], [(0, 1)], symmetric=False)
    with pytest.raises(ContractViolation):
        connected_components(e)
    with pytest.raises(ContractViolation):
        EdgeSet(Label.E_ALPHA, (0, 1), frozenset({(0, 1)}), True)


def test_edge_id_total_order_exhaustive():
    # square corners: four sides tie on length, node ids break ties
    t = Topology.from_points([(0, 0), (1, 0), (1, 1), (0, 1)])
    ids = [edge_id(t, u, v) for u, v in itertools.combinations(range(4), 2)]
    assert len(set(ids)) == len(ids)
    for a, b in itertools.permutations(ids, 2):
        assert (a < b) != (b < a)
    sides = sorted(i for i in ids if abs(i.length - 1) < 1e-12)
    assert [(s.hi, s.lo) for s in sides] == [(1, 0), (2, 1), (3, 0), (3, 2)]
    assert edge_id(t, 2, 0) == edge_id(t, 0, 2) == EdgeId(math.sqrt(2), 2, 0)


def test_closure_and_mutual():
    e = EdgeSet.from_pairs(Label.N_ALPHA, [0, 1, 2], [(0, 1), (1, 0), (1, 2)], symmetric=False)
    assert e.closure(Label.E_ALPHA).edges == {(0, 1), (1, 0), (1, 2), (2, 1)}
    assert e.mutual(Label.E_ALPHA_MINUS).edges == {(0, 1), (1, 0)}
    assert same_partition([frozenset({0, 1})], [frozenset({1, 0})])
