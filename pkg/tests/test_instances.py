import pytest
from hypothesis import given

from conftest import seeds
from dunicast.errors import UnknownInstance
from dunicast.feasibility import pair_connectivity
from dunicast.graph import topological_order
from dunicast.instances import NAMES, GeneratorParams, build, canned, random_net


def test_every_canned_instance_builds():
    for name in NAMES:
        net = canned(name)
        assert net.dag.name(net.s1) == "s1" and net.dag.name(net.t2) == "t2"
        assert pair_connectivity(net).unicast_connected


def test_lookup_is_case_insensitive():
    assert canned("butterfly") == canned("BUTTERFLY")
    with pytest.raises(UnknownInstance):
        canned("nope")


def test_build_keeps_arc_order():
    net = build(["s1", "s2", "t1", "t2"], [("s2", "t2"), ("s1", "t1")])
    assert net.edge_between("s2", "t2") == 0 and net.edge_between("s1", "t1") == 1


@pytest.mark.parametrize("kw", [
    {"node_count": (3, 5)}, {"node_count": (6, 5)}, {"edge_count": (5, 4)},
    {"edge_count": (-1, 4)},
])
def test_params_validation(kw):
    with pytest.raises(ValueError):
        GeneratorParams(**kw)


@given(seeds)
def test_generator_is_deterministic(seed):
    params = GeneratorParams(seed=seed)
    assert random_net(params) == random_net(params)


@given(seeds)
def test_generator_output(seed):
    params = GeneratorParams(seed=seed)
    net = random_net(params)
    n = len(net.dag.nodes)
    assert params.node_count[0] <= n <= params.node_count[1]
    assert len(net.dag.edges) <= params.edge_count[1] + n
    assert len(topological_order(net.dag)) == n
    assert pair_connectivity(net).unicast_connected
    assert (net.s1, net.s2, net.t1, net.t2) == (0, 1, 2, 3)


def test_unconnected_generation_is_allowed():
    nets = [random_net(GeneratorParams(seed=s, ensure_connected=False, edge_count=(0, 2)))
            for s in range(30)]
    assert any(not pair_connectivity(n).unicast_connected for n in nets)
