import math

import numpy as np
import pytest

from topoctl.cbtc import (COUNTER_NAMES, EXAMPLE1_NAMES, ConstructionError, build_counter_5pi6, build_example1,
                          run_cbtc)
from topoctl.geometry import has_alpha_gap
from topoctl.network import Topology, connected_components, generate_random, max_power_graph
from topoctl.radio import RadioModel

from conftest import bfs_components, naive_cbtc

U0, U1, U2, U3, V = (EXAMPLE1_NAMES[k] for k in ("u0", "u1", "u2", "u3", "v"))

# law-of-sines/cosines distances, computed by hand outside the package
EXAMPLE1_DISTANCES = {
    # eps: (d(u0,u1), d(u1,v), d(u1,u3), d(u1,u2))
    math.pi / 96: (490.287108, 509.177479, 646.870404, 864.789253),
    math.pi / 24: (458.042765, 533.402097, 599.954884, 846.352670),
    11 * math.pi / 96: (366.267133, 569.638793, 475.902555, 722.750050),
}


@pytest.mark.parametrize("eps", sorted(EXAMPLE1_DISTANCES))
def test_example1_geometry(eps):
    t = build_example1(eps, strict=False)
    d01, d1v, d13, d12 = EXAMPLE1_DISTANCES[eps]
    assert t.distance(U0, V) == 500.0
    assert t.distance(U0, U1) == pytest.approx(d01, abs=1e-6)
    assert t.distance(U0, U2) == pytest.approx(d01, abs=1e-6)
    assert t.distance(U1, V) == pytest.approx(d1v, abs=1e-6)
    assert t.distance(U1, U3) == pytest.approx(d13, abs=1e-6)
    assert t.distance(U1, U2) == pytest.approx(d12, abs=1e-6)
    assert t.distance(U0, U3) == 250.0
    assert t.distance(U1, V) > 500 > t.distance(U0, U1)


def test_example1_rejects_out_of_range_epsilon():
    for bad in (0.0, math.pi / 12, 11 * math.pi / 96):
        with pytest.raises(ConstructionError):
            build_example1(bad)


@pytest.mark.parametrize("eps", [math.pi / 96, math.pi / 24])
def test_example1_one_way_discovery(eps):
    r = run_cbtc(build_example1(eps), 5 * math.pi / 6)
    assert r.states[U0].peers == {U1, U2, U3}
    assert r.states[V].peers == {U0}
    assert (V, U0) in r.n_alpha and (U0, V) not in r.n_alpha
    assert V in r.reverse_contacts[U0]


def test_example1_at_two_thirds_pi_is_symmetric():
    r = run_cbtc(build_example1(math.pi / 24), 2 * math.pi / 3)
    assert all((b, a) in r.n_alpha for a, b in r.n_alpha.edges)


def test_isolated_node_is_boundary_at_full_power():
    r = run_cbtc(Topology.from_points([(3, 4)]), 5 * math.pi / 6)
    s = r.states[0]
    assert s.boundary and s.power == 1.0 and not s.neighbors


def test_counter_construction_distances():
    for eps in (math.pi / 72, math.pi / 36, math.pi / 18, math.pi / 6):
        t = build_counter_5pi6(eps)
        u = [COUNTER_NAMES[f"u{i}"] for i in range(4)]
        v = [COUNTER_NAMES[f"v{i}"] for i in range(4)]
        assert t.distance(u[0], v[0]) == 500.0
        assert t.distance(u[0], u[2]) == pytest.approx(250.0)
        assert t.distance(u[0], u[3]) < 500 < t.distance(v[0], u[3])
        cross = [t.distance(a, b) for a in u for b in v if (a, b) != (u[0], v[0])]
        assert min(cross) > 500
        assert len(connected_components(max_power_graph(t))) == 1
    with pytest.raises(ConstructionError):
        build_counter_5pi6(math.pi / 5)


def test_counter_power_stops_below_maximum():
    eps = math.pi / 36
    t = build_counter_5pi6(eps)
    r = run_cbtc(t, 5 * math.pi / 6 + eps)
    m = t.model
    need = max(m.power_for_distance(t.distance(0, 3)), m.power_for_distance(250.0))
    assert need <= r.states[0].power < min(1.0, need * m.growth_factor + 1e-12)
    assert len(connected_components(r.e_alpha)) == 2
    assert len(connected_components(run_cbtc(t, 5 * math.pi / 6).e_alpha)) == 1


@pytest.mark.parametrize("alpha", [math.pi / 2, 2 * math.pi / 3, 5 * math.pi / 6, math.pi])
def test_matches_literal_loop(alpha):
    m = RadioModel()
    for seed in range(6):
        t = generate_random(seed, 40, bounds=(1200, 1200), model=m)
        want = naive_cbtc(t.positions, alpha)
        r = run_cbtc(t, alpha)
        for u in t.ids:
            assert r.states[u].power == pytest.approx(want[u][0], rel=1e-12)
            assert r.states[u].peers == want[u][1]


def test_result_invariants():
    t = generate_random(11, 80)
    alpha = 5 * math.pi / 6
    r = run_cbtc(t, alpha)
    assert r.e_alpha.edges == r.n_alpha.edges | {(b, a) for a, b in r.n_alpha.edges}
    m = t.model
    for u, s in r.states.items():
        assert m.p0 <= s.power <= m.max_power
        assert r.radii[u].rad_minus <= r.radii[u].rad
        if not s.boundary:
            assert not has_alpha_gap(s.directions, alpha)
        else:
            assert s.power == m.max_power
        for rec in s.neighbors:
            assert rec.required_power <= rec.power_tag * (1 + 1e-12)
            assert rec.power_tag <= s.power
            assert rec.power_tag <= m.growth_factor * rec.required_power + 1e-12
        assert s.iterations <= m.max_iterations()
    assert set(connected_components(r.e_alpha)) == bfs_components(t.ids, max_power_graph(t).edges)


def test_power_monotone_in_alpha():
    t = generate_random(4, 60)
    alphas = [math.pi / 2, 2 * math.pi / 3, 5 * math.pi / 6, math.pi]
    runs = [run_cbtc(t, a) for a in alphas]
    for u in t.ids:
        powers = [r.states[u].power for r in runs]
        assert powers == sorted(powers, reverse=True)


def test_deterministic():
    t = generate_random(9, 50)
    a, b = run_cbtc(t, 2.0), run_cbtc(t, 2.0)
    assert a.states == b.states and a.e_alpha == b.e_alpha


def test_alpha_domain():
    with pytest.raises(ValueError):
        run_cbtc(generate_random(0, 3), 0.0)
