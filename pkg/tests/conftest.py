import logging

import pytest
from hypothesis import settings, strategies as st

from dunicast.graph import Dag, DoubleUnicastNet, Edge
from dunicast.instances import GeneratorParams, canned, random_net

settings.register_profile("dunicast", max_examples=60, deadline=None)
settings.load_profile("dunicast")

FEASIBLE = ("DISJOINT", "BUTTERFLY", "GRAIL", "HALF_BUTTERFLY_AUG", "GRAIL_I4", "GRAIL_I5",
            "REDUCTION")
INFEASIBLE = ("BOTTLENECK", "CROSSED")


@pytest.fixture(autouse=True)
def _quiet_synthesis(caplog):
    caplog.set_level(logging.WARNING)


@pytest.fixture
def butterfly():
    return canned("BUTTERFLY")


@pytest.fixture
def bottleneck():
    return canned("BOTTLENECK")


def corpus(count=1000, **kw):
    """The default seeded corpus: one network per seed 0..count-1."""
    return [random_net(GeneratorParams(seed=i, **kw)) for i in range(count)]


def stress_corpus(count=300):
    """Larger networks, biased towards overlapping sessions (more Case II)."""
    return corpus(count, node_count=(6, 10), edge_count=(8, 16), overlap_bias=0.9)


@st.composite
def small_dags(draw, max_nodes=7, max_edges=10):
    """Arbitrary small DAG: forward arcs over a shuffled node line."""
    n = draw(st.integers(2, max_nodes))
    line = draw(st.permutations(range(n)))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] < p[1])
    arcs = draw(st.lists(pairs, max_size=max_edges))
    edges = tuple(Edge(i, line[a], line[b]) for i, (a, b) in enumerate(arcs))
    return Dag(tuple(range(n)), edges)


@st.composite
def small_nets(draw, max_nodes=7, max_edges=10):
    """Arbitrary small double-unicast network (sessions may be disconnected)."""
    dag = draw(small_dags(max_nodes=max_nodes, max_edges=max_edges))
    nodes = st.sampled_from(dag.nodes)
    s1, s2 = draw(nodes), draw(nodes)
    t1 = draw(nodes.filter(lambda v: v != s1))
    t2 = draw(nodes.filter(lambda v: v != s2))
    return DoubleUnicastNet(dag, s1, s2, t1, t2)


seeds = st.integers(0, 10 ** 6)


def generated_nets(node_count=(4, 7), edge_count=(4, 10), overlap_bias=0.6):
    """Connected generator output, small enough for brute force."""
    return seeds.map(lambda s: random_net(GeneratorParams(
        node_count=node_count, edge_count=edge_count, seed=s, overlap_bias=overlap_bias)))
