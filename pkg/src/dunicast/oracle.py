"""Exhaustive search over scalar GF(2) codes, as independent ground truth.

Edges are assigned in canonical order (topological rank of the tail, then
edge id), so a tail's available span is final when its out-edges are
chosen and each edge only ranges over that span.  Values are tried in the
lexicographic order of their ``(a, b)`` pairs, making the first code found
the lexicographically first valid code.  Two sound prunings keep the
search small:

* an optimistic span per node (unassigned edges may carry anything their
  tail could ever know) must still contain the demanded unit vector at
  each terminal;
* frontier states already shown to be dead are memoized.

Edges that cannot reach a terminal are fixed to zero; this never changes
feasibility and zero is the first value tried anyway.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from .codec import LINE, SPAN, ZERO_SPACE, Gf2Vec2, NetworkCode, in_span, verify
from .errors import OracleTooLarge, PairDisconnected
from .feasibility import feasible_11, pair_connectivity
from .graph import DoubleUnicastNet, reachable_from, reaching

log = logging.getLogger(__name__)

# (a, b) lexicographic order: (0,0) < (0,1) < (1,0) < (1,1)
VALUE_ORDER = (Gf2Vec2.ZERO, Gf2Vec2.X2, Gf2Vec2.X1, Gf2Vec2.X1X2)


@dataclass(frozen=True)
class OracleConfig:
    max_search_space: int = 2 ** 24
    determinize: bool = True

    def __post_init__(self) -> None:
        if self.max_search_space <= 0:
            raise ValueError("max_search_space must be positive")


def static_bound(net: DoubleUnicastNet) -> int:
    """Product of per-edge domain sizes before any search-time pruning."""
    dag = net.dag
    from1 = reachable_from(dag, (net.s1,))
    from2 = reachable_from(dag, (net.s2,))
    live = reaching(dag, (net.t1, net.t2))
    bound = 1
    for e in dag.edges:
        if e.head not in live:
            continue
        dim = (e.tail in from1) + (e.tail in from2)
        bound *= 2 ** dim
    return bound


class _Search:
    def __init__(self, net: DoubleUnicastNet, budget: int) -> None:
        dag = net.dag
        self.net = net
        self.budget = budget
        self.visited = 0
        live = reaching(dag, (net.t1, net.t2))
        self.edges = sorted(dag.edges, key=lambda e: (dag.rank(e.tail), e.id))
        self.relevant = [e.head in live for e in self.edges]
        self.n = len(self.edges)
        self.order = dag.order
        self.rank = {v: i for i, v in enumerate(self.order)}
        self.pos = {e.id: i for i, e in enumerate(self.edges)}
        self.src_mask = {}
        for v in self.order:
            m = ZERO_SPACE
            if v == net.s1:
                m = SPAN[m][LINE[Gf2Vec2.X1]]
            if v == net.s2:
                m = SPAN[m][LINE[Gf2Vec2.X2]]
            self.src_mask[v] = m
        self.in_pos = {v: [self.pos[e.id] for e in dag.in_edges(v)] for v in self.order}
        self.tail = [e.tail for e in self.edges]
        self.tail_rank = [self.rank[e.tail] for e in self.edges]
        self.values = [0] * self.n
        self.dead: set = set()

    def _optimistic_ok(self, k: int) -> bool:
        """Can t1 and t2 still decode given edges ``0..k-1`` are fixed?"""
        opt = {}
        for v in self.order:
            m = self.src_mask[v]
            for p in self.in_pos[v]:
                m = SPAN[m][LINE[self.values[p]] if p < k else opt[self.tail[p]]]
            opt[v] = m
        return in_span(Gf2Vec2.X1, opt[self.net.t1]) and in_span(Gf2Vec2.X2, opt[self.net.t2])

    def _frontier_key(self, k: int):
        # the future depends only on partial spans of nodes at or after the
        # tail of edge k; those are determined by assigned edges into them
        r = self.tail_rank[k]
        return (k, tuple(self.values[p] for p in range(k)
                         if self.rank[self.edges[p].head] >= r))

    def run(self) -> Optional[list[int]]:
        return self.values if self._dfs(0) else None

    def _dfs(self, k: int) -> bool:
        self.visited += 1
        if self.visited > self.budget:
            raise OracleTooLarge(f"search exceeded {self.budget} partial assignments")
        if k == self.n:
            return True
        key = self._frontier_key(k)
        if key in self.dead:
            return False
        if not self.relevant[k]:
            self.values[k] = 0
            if self._dfs(k + 1):
                return True
            self.dead.add(key)
            return False
        tail = self.tail[k]
        mask = self.src_mask[tail]
        for p in self.in_pos[tail]:
            mask = SPAN[mask][LINE[self.values[p]]]
        for val in VALUE_ORDER:
            if not in_span(val, mask):
                continue
            self.values[k] = val
            if self._optimistic_ok(k + 1) and self._dfs(k + 1):
                return True
        self.values[k] = 0
        self.dead.add(key)
        return False


def exhaustive_scalar_codes(net: DoubleUnicastNet,
                            config: Optional[OracleConfig] = None) -> Optional[NetworkCode]:
    """Lexicographically first valid scalar GF(2) code, or None if none exists."""
    config = config or OracleConfig()
    conn = pair_connectivity(net)
    if not conn.unicast_connected:
        raise PairDisconnected("oracle needs both sessions connected")
    search = _Search(net, config.max_search_space)
    values = search.run()
    log.debug("oracle visited %d partial assignments", search.visited)
    if values is None:
        return None
    code = NetworkCode.from_mapping(net, {e.id: values[i] for i, e in enumerate(search.edges)})
    assert verify(net, code).valid
    return code


@dataclass(frozen=True)
class AgreementRecord:
    feasible: bool
    oracle_found: bool

    @property
    def equal(self) -> bool:
        return self.feasible == self.oracle_found


def agreement_check(net: DoubleUnicastNet, config: Optional[OracleConfig] = None) -> AgreementRecord:
    """Compare the blocking-edge verdict with exhaustive code search."""
    found = exhaustive_scalar_codes(net, config) is not None
    return AgreementRecord(feasible_11(net), found)
