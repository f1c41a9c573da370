"""Immutable DAG multigraphs, paths and the reachability primitives.

Node and edge identifiers are plain integers.  Every tie between valid
choices (topological order, path search) is broken by the smaller
identifier, so all results are reproducible.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import CycleDetected, EndpointMismatch, NotOnPath


@dataclass(frozen=True, order=True)
class Edge:
    id: int
    tail: int
    head: int


def _kahn(nodes: Iterable[int], edges: Iterable[Edge]) -> tuple[int, ...]:
    indeg = {v: 0 for v in nodes}
    out: dict[int, list[int]] = {v: [] for v in indeg}
    for e in edges:
        indeg[e.head] += 1
        out[e.tail].append(e.head)
    heap = [v for v, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != len(indeg):
        stuck = sorted(v for v, d in indeg.items() if d > 0)
        raise CycleDetected(f"directed cycle through nodes {stuck}")
    return tuple(order)


@dataclass(frozen=True)
class Dag:
    """A directed acyclic multigraph.

    ``names`` optionally maps node ids to display names (used by file I/O
    and the canned instances); it does not affect any algorithm.
    """

    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]
    names: tuple[tuple[int, str], ...] = ()

    _out: dict = field(init=False, repr=False, compare=False)
    _in: dict = field(init=False, repr=False, compare=False)
    _by_id: dict = field(init=False, repr=False, compare=False)
    _order: tuple = field(init=False, repr=False, compare=False)
    _rank: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        nodes = tuple(sorted(set(self.nodes)))
        edges = tuple(sorted(self.edges, key=lambda e: e.id))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "names", tuple(sorted(dict(self.names).items())))
        node_set = set(nodes)
        by_id: dict[int, Edge] = {}
        out: dict[int, list[Edge]] = {v: [] for v in nodes}
        inc: dict[int, list[Edge]] = {v: [] for v in nodes}
        for e in edges:
            if e.id in by_id:
                raise ValueError(f"duplicate edge id {e.id}")
            if e.tail not in node_set or e.head not in node_set:
                raise ValueError(f"edge {e.id} has an undeclared endpoint")
            by_id[e.id] = e
            out[e.tail].append(e)
            inc[e.head].append(e)
        order = _kahn(nodes, edges)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_out", {v: tuple(es) for v, es in out.items()})
        object.__setattr__(self, "_in", {v: tuple(es) for v, es in inc.items()})
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_rank", {v: i for i, v in enumerate(order)})

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]], names=None) -> "Dag":
        """Build from ``(tail, head)`` pairs; edge ids follow list position."""
        edges = tuple(Edge(i, t, h) for i, (t, h) in enumerate(pairs))
        named = tuple(enumerate(names)) if names is not None else ()
        return cls(tuple(range(n)), edges, named)

    def edge(self, eid: int) -> Edge:
        return self._by_id[eid]

    def has_edge(self, eid: int) -> bool:
        return eid in self._by_id

    def out_edges(self, v: int) -> tuple[Edge, ...]:
        return self._out[v]

    def in_edges(self, v: int) -> tuple[Edge, ...]:
        return self._in[v]

    def rank(self, v: int) -> int:
        """Position of ``v`` in the canonical topological order."""
        return self._rank[v]

    @property
    def order(self) -> tuple[int, ...]:
        return self._order

    def name(self, v: int) -> str:
        return dict(self.names).get(v, str(v))

    def node_by_name(self, name: str) -> int:
        for v, nm in self.names:
            if nm == name:
                return v
        raise KeyError(name)

    def without_edges(self, eids: Iterable[int]) -> "Dag":
        drop = set(eids)
        return Dag(self.nodes, tuple(e for e in self.edges if e.id not in drop), self.names)

    def with_edges(self, pairs: Iterable[tuple[int, int]]) -> "Dag":
        next_id = max((e.id for e in self.edges), default=-1) + 1
        extra = tuple(Edge(next_id + i, t, h) for i, (t, h) in enumerate(pairs))
        return Dag(self.nodes, self.edges + extra, self.names)


def topological_order(dag: Dag) -> list[int]:
    """Canonical topological order: Kahn's algorithm, smallest ready id first."""
    return list(dag.order)


def _search(dag: Dag, starts, forbidden_edges, forbidden_nodes, forward: bool) -> frozenset[int]:
    fe = frozenset(forbidden_edges)
    fn = frozenset(forbidden_nodes)
    seen = {v for v in starts if v not in fn}
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for e in dag._out[v] if forward else dag._in[v]:
            if e.id in fe:
                continue
            w = e.head if forward else e.tail
            if w not in seen and w not in fn:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def reachable_from(dag: Dag, sources: Iterable[int], forbidden_edges: Iterable[int] = (),
                   forbidden_nodes: Iterable[int] = ()) -> frozenset[int]:
    """Nodes reachable from ``sources`` avoiding the forbidden edges and nodes."""
    return _search(dag, sources, forbidden_edges, forbidden_nodes, True)


def reaching(dag: Dag, targets: Iterable[int], forbidden_edges: Iterable[int] = (),
             forbidden_nodes: Iterable[int] = ()) -> frozenset[int]:
    """Nodes from which some target is reachable (the backward closure)."""
    return _search(dag, targets, forbidden_edges, forbidden_nodes, False)


@dataclass(frozen=True)
class Path:
    """A directed path given by its node sequence and edge-id sequence."""

    nodes: tuple[int, ...]
    edges: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.nodes:
            raise ValueError("a path has at least one node")
        if len(self.edges) != len(self.nodes) - 1:
            raise ValueError("path needs exactly one edge between consecutive nodes")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("path repeats a node")

    @classmethod
    def trivial(cls, v: int) -> "Path":
        return cls((v,), ())

    @classmethod
    def from_edges(cls, dag: Dag, eids: Iterable[int], start: Optional[int] = None) -> "Path":
        eids = tuple(eids)
        if not eids:
            if start is None:
                raise ValueError("zero-edge path needs a start node")
            return cls.trivial(start)
        nodes = [dag.edge(eids[0]).tail]
        for eid in eids:
            e = dag.edge(eid)
            if e.tail != nodes[-1]:
                raise EndpointMismatch(f"edge {eid} does not continue the path")
            nodes.append(e.head)
        if start is not None and nodes[0] != start:
            raise EndpointMismatch("path does not begin at start")
        return cls(tuple(nodes), eids)

    @property
    def start(self) -> int:
        return self.nodes[0]

    @property
    def end(self) -> int:
        return self.nodes[-1]

    def __len__(self) -> int:
        return len(self.edges)

    def index(self, v: int) -> int:
        try:
            return self.nodes.index(v)
        except ValueError:
            raise NotOnPath(f"node {v} is not on the path") from None

    def section(self, vj: int, vk: int) -> "Path":
        return section(self, vj, vk)

    def __add__(self, other: "Path") -> "Path":
        return concat(self, other)


def section(p: Path, vj: int, vk: int) -> Path:
    """The sub-path of ``p`` from ``vj`` to ``vk``."""
    i, k = p.index(vj), p.index(vk)
    if i > k:
        raise NotOnPath(f"node {vj} does not precede {vk} on the path")
    return Path(p.nodes[i:k + 1], p.edges[i:k])


def concat(p1: Path, p2: Path) -> Path:
    if p1.end != p2.start:
        raise EndpointMismatch(f"path ends at {p1.end} but next starts at {p2.start}")
    return Path(p1.nodes + p2.nodes[1:], p1.edges + p2.edges)


def find_path(dag: Dag, src: int, dst: int, forbidden_edges: Iterable[int] = (),
              forbidden_nodes: Iterable[int] = ()) -> Optional[Path]:
    """Lexicographically smallest edge-id sequence from ``src`` to ``dst``.

    Returns None when every route is blocked.
    """
    fe = frozenset(forbidden_edges)
    fn = frozenset(forbidden_nodes)
    if src in fn or dst in fn:
        return None
    alive = reaching(dag, (dst,), fe, fn)
    if src not in alive:
        return None
    nodes, eids = [src], []
    v = src
    while v != dst:
        # out-edges are sorted by id, so the first live one is the smallest
        e = next(e for e in dag.out_edges(v) if e.id not in fe and e.head in alive)
        eids.append(e.id)
        nodes.append(e.head)
        v = e.head
    return Path(tuple(nodes), tuple(eids))


@dataclass(frozen=True)
class DoubleUnicastNet:
    """A DAG with two unicast sessions ``s1 -> t1`` and ``s2 -> t2``."""

    dag: Dag
    s1: int
    s2: int
    t1: int
    t2: int

    def __post_init__(self) -> None:
        node_set = set(self.dag.nodes)
        for v in (self.s1, self.s2, self.t1, self.t2):
            if v not in node_set:
                raise ValueError(f"node {v} is not in the graph")
        if self.s1 == self.t1 or self.s2 == self.t2:
            raise ValueError("a source cannot be its own terminal")

    def swapped(self) -> "DoubleUnicastNet":
        """Exchange the roles of the two sessions."""
        return DoubleUnicastNet(self.dag, self.s2, self.s1, self.t2, self.t1)

    def without_edges(self, eids: Iterable[int]) -> "DoubleUnicastNet":
        return DoubleUnicastNet(self.dag.without_edges(eids), self.s1, self.s2, self.t1, self.t2)

    def with_edges(self, pairs: Iterable[tuple[int, int]]) -> "DoubleUnicastNet":
        return DoubleUnicastNet(self.dag.with_edges(pairs), self.s1, self.s2, self.t1, self.t2)

    def node(self, name: str) -> int:
        return self.dag.node_by_name(name)

    def edge_between(self, tail: str, head: str) -> int:
        """Smallest edge id from ``tail`` to ``head`` (looked up by name)."""
        t, h = self.node(tail), self.node(head)
        for e in self.dag.out_edges(t):
            if e.head == h:
                return e.id
        raise KeyError(f"{tail}->{head}")


def two_edge_disjoint_paths(net: DoubleUnicastNet) -> Optional[tuple[Path, Path]]:
    """Edge-disjoint ``(s1,t1)`` and ``(s2,t2)`` paths, or None if none exist.

    Edge-disjointness in G is vertex-disjointness in the line graph of G
    (with a private source and sink vertex per session).  On that DAG two
    vertex-disjoint paths are decided exactly by the two-pebble game: a
    state is the pair of pebble positions and only the pebble that is
    earlier in topological order may advance, onto a vertex not held by
    the other pebble.
    """
    dag = net.dag
    S1, S2, T1, T2 = "S1", "S2", "T1", "T2"
    sink = {1: T1, 2: T2}

    def key(x) -> tuple[int, int]:
        if x in (S1, S2):
            return (-1, 0 if x == S1 else 1)
        if x in (T1, T2):
            return (len(dag.nodes), 0 if x == T1 else 1)
        e = dag.edge(x)
        return (dag.rank(e.tail), e.id)

    def succ(x):
        if x == S1:
            return [e.id for e in dag.out_edges(net.s1)]
        if x == S2:
            return [e.id for e in dag.out_edges(net.s2)]
        if x in (T1, T2):
            return []
        head = dag.edge(x).head
        nxt = [e.id for e in dag.out_edges(head)]
        if head == net.t1:
            nxt.append(T1)
        if head == net.t2:
            nxt.append(T2)
        return nxt

    start = (S1, S2)
    goal = (T1, T2)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if state == goal:
            break
        p, q = state
        if p == T1:
            mover = 2
        elif q == T2:
            mover = 1
        else:
            mover = 1 if key(p) < key(q) else 2
        here, other = (p, q) if mover == 1 else (q, p)
        for w in succ(here):
            if w == other or w in (T1, T2) and w != sink[mover]:
                continue
            nxt = (w, q) if mover == 1 else (p, w)
            if nxt not in parent:
                parent[nxt] = state
                queue.append(nxt)
    if goal not in parent:
        return None
    trail1: list = []
    trail2: list = []
    state = goal
    while state is not None:
        for trail, x in ((trail1, state[0]), (trail2, state[1])):
            if not trail or trail[-1] != x:
                trail.append(x)
        state = parent[state]
    e1 = [x for x in reversed(trail1) if isinstance(x, int)]
    e2 = [x for x in reversed(trail2) if isinstance(x, int)]
    return (Path.from_edges(dag, e1, net.s1), Path.from_edges(dag, e2, net.s2))
