import networkx as nx
import numpy as np
import pytest

from nettomo.exceptions import ValidationError
from nettomo.netgraph import Network, Path
from nettomo.topogen import (TopoConfig, generate_topology, make_instance, prune,
                             shortest_path_routing)

from conftest import CANDIDATES_6


def to_nx(net):
    g = nx.MultiGraph()
    g.add_nodes_from(net.nodes)
    for u, v, lid in net.edges:
        g.add_edge(u, v, key=lid)
    return g


def test_config_validation():
    with pytest.raises(ValidationError):
        TopoConfig(5, 2.1, 1, 0)
    with pytest.raises(ValidationError):
        TopoConfig(5, 2.1, 5, 0)
    with pytest.raises(ValidationError):
        TopoConfig(50, 1.9, 5, 0)


def test_deterministic():
    a = generate_topology(TopoConfig(50, 2.1, 5, 1))
    b = generate_topology(TopoConfig(50, 2.1, 5, 1))
    c = generate_topology(TopoConfig(50, 2.1, 5, 2))
    assert a.edges == b.edges and a.boundary == b.boundary
    assert a.edges != c.edges


def test_smallest_instance_is_a_line():
    net = generate_topology(TopoConfig(3, 2.5, 2, 0))
    assert net.n_links == 2
    assert all(net.degrees[b] == 1 for b in net.boundary)
    paths = shortest_path_routing(net)
    assert len(paths) == 1 and len(paths[0]) == 2


@pytest.mark.parametrize("seed", range(5))
def test_generated_graph_shape(seed):
    net = generate_topology(TopoConfig(200, 2.1, 10, seed))
    g = to_nx(net)
    assert nx.is_connected(g)
    assert len(net.nodes) == 200
    assert len(net.boundary) == 10 and all(net.degrees[b] == 1 for b in net.boundary)
    hosts = [next(iter(g[b])) for b in net.boundary]
    assert len(set(hosts)) == 10


def test_power_law_tail():
    # log-log regression on the complementary cumulative degree histogram
    slopes = []
    for seed in range(5):
        net = generate_topology(TopoConfig(200, 2.1, 5, seed))
        d = np.array([net.degrees[v] for v in net.nodes if v not in net.boundary])
        ks = np.unique(d)
        ccdf = np.array([(d >= k).mean() for k in ks])
        slopes.append(1 - np.polyfit(np.log(ks), np.log(ccdf), 1)[0])
        assert abs(slopes[-1] - 2.1) <= 0.5
    print(f"\n[topogen] fitted exponents: {[round(float(s), 2) for s in slopes]}")


def test_four_boundary_network_paths(fig2_network):
    paths = shortest_path_routing(fig2_network)
    assert len(paths) == 6
    assert sorted(sorted(p.links) for p in paths) == sorted(sorted(p) for p in CANDIDATES_6)


def test_line_of_three_links():
    net = Network((0, 1, 2, 3), ((0, 1, 0), (1, 2, 1), (2, 3, 2)), frozenset({0, 3}))
    paths = shortest_path_routing(net)
    assert [p.links for p in paths] == [(0, 1, 2)]


def test_lexicographic_tie_break():
    # square 0-1-3, 0-2-3: both length 2; node sequence 0,1,3 wins
    net = Network((0, 1, 2, 3), ((0, 2, 0), (2, 3, 1), (0, 1, 2), (1, 3, 3)), frozenset({0, 3}))
    (p,) = shortest_path_routing(net)
    assert p.node_sequence(net) == [0, 1, 3]


@pytest.mark.parametrize("seed", range(6))
def test_paths_are_shortest_bfs_oracle(seed):
    net = generate_topology(TopoConfig(120, 2.3, 8, seed))
    g = to_nx(net)
    paths = shortest_path_routing(net)
    bnd = sorted(net.boundary)
    assert len(paths) == len(bnd) * (len(bnd) - 1) // 2
    for p in paths:
        s, t = p.endpoints
        seq = p.node_sequence(net)
        assert seq[0] == s and seq[-1] == t
        assert len(p) == nx.shortest_path_length(g, s, t)
        # no equally short path with a smaller node sequence
        assert seq == min(nx.all_shortest_paths(g, s, t))


def test_prune_removes_spur():
    # 0-1-2 line plus spur 1-3 used by nobody; boundary 0, 2
    net = Network((0, 1, 2, 3), ((0, 1, 0), (1, 2, 1), (1, 3, 2)), frozenset({0, 2}))
    inst = prune(net, [Path((0, 1), (0, 2))])
    assert 3 not in inst.network.nodes
    assert inst.network.n_links == 1  # the spur goes, then node 1 is contracted
    assert inst.routing.entries.tolist() == [[1]]
    events = [e["event"] for e in inst.log]
    assert events[0] == "remove_link" and "contract" in events


def test_prune_contracts_chain():
    net = Network(("a", "b", "c"), (("a", "b", 0), ("b", "c", 1)), frozenset({"a", "c"}))
    inst = prune(net, [Path((0, 1))])
    assert inst.network.edges == (("a", "c", 0),)
    assert inst.routing.paths[0].links == (0,)


def test_prune_keeps_boundary_degree_two():
    net = Network(("a", "b", "c"), (("a", "b", 0), ("b", "c", 1)), frozenset({"a", "b", "c"}))
    inst = prune(net, [Path((0,)), Path((1,)), Path((0, 1))])
    assert inst.network.n_links == 2


def test_prune_four_boundary_network_unchanged(fig2_network):
    inst = prune(fig2_network, [Path(tuple(p)) for p in CANDIDATES_6])
    assert inst.network.n_links == 5 and inst.log == ()


@pytest.mark.parametrize("seed", range(20))
def test_prune_idempotent_and_invariants(seed):
    cfg = TopoConfig(150, 2.2, 4 + seed % 5, seed)
    inst = make_instance(cfg)
    again = prune(inst.network, inst.routing.paths)
    assert again.routing == inst.routing and again.network.edges == inst.network.edges
    assert again.log == ()
    assert (inst.routing.entries.sum(axis=0) >= 1).all()
    for v in inst.network.nodes:
        if v not in inst.network.boundary:
            assert inst.network.degrees[v] != 2
    for p in inst.routing.paths:
        seq = p.node_sequence(inst.network)
        assert seq[0] in inst.network.boundary and seq[-1] in inst.network.boundary


def test_make_instance_deterministic():
    a = make_instance(TopoConfig(200, 2.1, 10, 4))
    b = make_instance(TopoConfig(200, 2.1, 10, 4))
    assert a.routing == b.routing and a.log == b.log
