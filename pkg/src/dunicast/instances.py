"""Canned double-unicast networks and a seeded random generator."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import UnknownInstance
from .graph import Dag, DoubleUnicastNet, Edge, two_edge_disjoint_paths


def build(node_names: list[str], arcs: list[tuple[str, str]]) -> DoubleUnicastNet:
    """Network from named nodes and arcs; edge ids follow the arc order.

    The four distinguished nodes must be named s1, s2, t1 and t2.
    """
    index = {name: i for i, name in enumerate(node_names)}
    edges = tuple(Edge(i, index[t], index[h]) for i, (t, h) in enumerate(arcs))
    dag = Dag(tuple(range(len(node_names))), edges, tuple(enumerate(node_names)))
    return DoubleUnicastNet(dag, index["s1"], index["s2"], index["t1"], index["t2"])


_BUTTERFLY_NODES = ["s1", "s2", "m", "n", "t1", "t2"]
_BOTTLENECK_ARCS = [("s1", "m"), ("s2", "m"), ("m", "n"), ("n", "t1"), ("n", "t2")]

# Arc lists; stem edges come first so the canonical (s1,t1) path runs
# along the stem.
_CANNED = {
    "DISJOINT": (["s1", "s2", "t1", "t2"], [("s1", "t1"), ("s2", "t2")]),
    "BOTTLENECK": (_BUTTERFLY_NODES, _BOTTLENECK_ARCS),
    "CROSSED": (_BUTTERFLY_NODES, _BOTTLENECK_ARCS + [("s1", "t2")]),
    "BUTTERFLY": (_BUTTERFLY_NODES, _BOTTLENECK_ARCS + [("s1", "t2"), ("s2", "t1")]),
    "GRAIL": (
        ["s1", "s2", "a", "g", "b", "c", "t1", "t2"],
        [("s1", "a"), ("s2", "a"), ("a", "g"), ("g", "b"), ("b", "c"), ("s1", "b"),
         ("g", "t1"), ("c", "t1"), ("c", "t2")],
    ),
    # The two handles s1-w-z-b and g-w-z-t2 share the edge w->z.
    "HALF_BUTTERFLY_AUG": (
        ["s1", "s2", "a", "g", "b", "c", "w", "z", "t1", "t2"],
        [("s1", "a"), ("s2", "a"), ("a", "g"), ("g", "b"), ("b", "c"), ("c", "t1"),
         ("c", "t2"), ("s1", "w"), ("g", "w"), ("w", "z"), ("z", "b"), ("z", "t2")],
    ),
    # HALF_BUTTERFLY_AUG plus s2->b: both merge points sit at b, e1 cuts
    # neither session, and deleting s2->b restores the half-butterfly.
    "REDUCTION": (
        ["s1", "s2", "a", "g", "b", "c", "w", "z", "t1", "t2"],
        [("s1", "a"), ("s2", "a"), ("a", "g"), ("g", "b"), ("b", "c"), ("c", "t1"),
         ("c", "t2"), ("s1", "w"), ("g", "w"), ("w", "z"), ("z", "b"), ("z", "t2"),
         ("s2", "b")],
    ),
    # Stem a g1 b1 g2 b2 g3 b3 c; handle i leaves g_{i-1} and lands on b_i.
    "GRAIL_I4": (
        ["s1", "s2", "a", "g1", "b1", "g2", "b2", "g3", "b3", "c", "t1", "t2"],
        [("s1", "a"), ("s2", "a"), ("a", "g1"), ("g1", "b1"), ("b1", "g2"), ("g2", "b2"),
         ("b2", "g3"), ("g3", "b3"), ("b3", "c"), ("c", "t1"), ("c", "t2"),
         ("s1", "b1"), ("g1", "b2"), ("g2", "b3"), ("g3", "t1")],
    ),
    "GRAIL_I5": (
        ["s1", "s2", "a", "g1", "b1", "g2", "b2", "g3", "b3", "g4", "b4", "c", "t1", "t2"],
        [("s1", "a"), ("s2", "a"), ("a", "g1"), ("g1", "b1"), ("b1", "g2"), ("g2", "b2"),
         ("b2", "g3"), ("g3", "b3"), ("b3", "g4"), ("g4", "b4"), ("b4", "c"), ("c", "t1"),
         ("c", "t2"), ("s1", "b1"), ("g1", "b2"), ("g2", "b3"), ("g3", "b4"), ("g4", "t2")],
    ),
}

NAMES = ("DISJOINT", "BOTTLENECK", "CROSSED", "BUTTERFLY", "GRAIL", "HALF_BUTTERFLY_AUG",
         "GRAIL_I4", "GRAIL_I5", "REDUCTION")


def canned(name: str) -> DoubleUnicastNet:
    key = name.upper()
    if key not in _CANNED:
        raise UnknownInstance(name)
    nodes, arcs = _CANNED[key]
    return build(list(nodes), list(arcs))


@dataclass(frozen=True)
class GeneratorParams:
    node_count: tuple[int, int] = (4, 8)
    edge_count: tuple[int, int] = (4, 14)
    seed: int = 0
    ensure_connected: bool = True
    # share of seeds whose random arcs may not open edge-disjoint session paths
    overlap_bias: float = 0.6

    def __post_init__(self) -> None:
        lo, hi = self.node_count
        if lo < 4 or hi < lo:
            raise ValueError("node_count must be a nonempty range with minimum >= 4")
        if self.edge_count[1] < self.edge_count[0] or self.edge_count[0] < 0:
            raise ValueError("edge_count must be a nonempty range")


def random_net(params: GeneratorParams) -> DoubleUnicastNet:
    """Random double-unicast DAG, fully determined by ``params.seed``.

    Nodes are shuffled onto a line and every edge points forward along it.
    With ``ensure_connected`` an (s1,t1) and an (s2,t2) path are laid down
    before the random edges, the second reusing part of the first.  For
    an ``overlap_bias`` share of seeds, random arcs that would create
    edge-disjoint session paths are skipped; the edge count is then a
    target rather than a guarantee.  Nodes 0..3 are s1, s2, t1, t2.
    """
    rng = random.Random(params.seed)
    n = rng.randint(*params.node_count)
    m_target = rng.randint(*params.edge_count)
    middle = list(range(4, n))
    rng.shuffle(middle)
    if rng.random() < 0.75:
        # sources first and terminals last, so both sessions cross the middle
        line = rng.sample([0, 1], 2) + middle + rng.sample([2, 3], 2)
    else:
        line = list(range(n))
        rng.shuffle(line)
    at = {v: i for i, v in enumerate(line)}
    for s, t in ((0, 2), (1, 3)):
        if at[s] > at[t]:
            line[at[s]], line[at[t]] = t, s
            at[s], at[t] = at[t], at[s]
    arcs: list[tuple[int, int]] = []

    def lay(chain: list[int]) -> None:
        arcs.extend(a for a in zip(chain, chain[1:]) if a not in arcs)

    if params.ensure_connected:
        between = line[at[0] + 1:at[2]]
        # leave room for the two arcs that attach the second session
        room = min(len(between), max(0, m_target - 3))
        hops1 = sorted(rng.sample(between, rng.randint(min(2, room), room)), key=at.get)
        lay([0] + hops1 + [2])
        # the second path reuses a contiguous run of the first one (sharing
        # at least one edge) when the line order allows it
        usable = [v for v in hops1 if at[1] < at[v] < at[3]]
        run: list[int] = []
        if len(usable) >= 2 and rng.random() < 0.8:
            i = rng.randrange(len(usable) - 1)
            run = usable[i:i + rng.randint(2, len(usable) - i)]
        lay([1] + run + [3])
    names = ["s1", "s2", "t1", "t2"] + [f"v{i}" for i in range(4, n)]

    def network(arc_list) -> DoubleUnicastNet:
        edges = tuple(Edge(i, t, h) for i, (t, h) in enumerate(arc_list))
        return DoubleUnicastNet(Dag(tuple(range(n)), edges, tuple(enumerate(names))), 0, 1, 2, 3)

    keep_overlap = params.ensure_connected and rng.random() < params.overlap_bias
    if keep_overlap and two_edge_disjoint_paths(network(arcs)) is not None:
        keep_overlap = False
    attempts = 0
    while len(arcs) < m_target and attempts < 20 * m_target:
        attempts += 1
        i, j = sorted(rng.sample(range(n), 2))
        arc = (line[i], line[j])
        if arc in arcs and rng.random() >= 0.1:
            continue
        if keep_overlap and two_edge_disjoint_paths(network(arcs + [arc])) is not None:
            continue
        arcs.append(arc)
    return network(arcs)
