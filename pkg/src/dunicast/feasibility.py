"""Blocking-edge test for rate (1,1), capacity region and time sharing."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import networkx as nx

from .errors import PairDisconnected, RateOutsideRegion
from .graph import DoubleUnicastNet, Path, find_path, reachable_from


@dataclass(frozen=True)
class PairConnectivity:
    s1_t1: bool
    s2_t2: bool
    s1_t2: bool
    s2_t1: bool

    @property
    def unicast_connected(self) -> bool:
        return self.s1_t1 and self.s2_t2


def pair_connectivity(net: DoubleUnicastNet, forbidden_edges=()) -> PairConnectivity:
    from1 = reachable_from(net.dag, (net.s1,), forbidden_edges)
    from2 = reachable_from(net.dag, (net.s2,), forbidden_edges)
    return PairConnectivity(net.t1 in from1, net.t2 in from2, net.t2 in from1, net.t1 in from2)


@dataclass(frozen=True)
class BlockingEdgeReport:
    edge: int
    disconnects_11: bool
    disconnects_22: bool
    disconnects_12: bool
    disconnects_21: bool

    @property
    def blocking(self) -> bool:
        return (self.disconnects_11 and self.disconnects_22
                and (self.disconnects_12 or self.disconnects_21))

    @property
    def cuts_both_only(self) -> bool:
        """Disconnects both sessions but neither cross pair."""
        return (self.disconnects_11 and self.disconnects_22
                and not self.disconnects_12 and not self.disconnects_21)


def edge_report(net: DoubleUnicastNet, eid: int) -> BlockingEdgeReport:
    """Which of the four source-terminal pairs lose connectivity without ``eid``."""
    c = pair_connectivity(net, (eid,))
    return BlockingEdgeReport(eid, not c.s1_t1, not c.s2_t2, not c.s1_t2, not c.s2_t1)


def _require_connected(net: DoubleUnicastNet) -> tuple[Path, Path]:
    p1 = find_path(net.dag, net.s1, net.t1)
    p2 = find_path(net.dag, net.s2, net.t2)
    if p1 is None or p2 is None:
        raise PairDisconnected("both (s1,t1) and (s2,t2) must be connected")
    return p1, p2


def blocking_edges(net: DoubleUnicastNet) -> list[BlockingEdgeReport]:
    """One report per edge shared by the canonical (s1,t1) and (s2,t2) paths.

    An edge that disconnects a pair lies on every path of that pair, so no
    edge outside this intersection can disconnect both sessions.
    """
    p1, p2 = _require_connected(net)
    shared = sorted(set(p1.edges) & set(p2.edges))
    return [edge_report(net, e) for e in shared]


def feasible_11(net: DoubleUnicastNet) -> bool:
    """Whether rate (1,1) is achievable: no blocking edge exists."""
    return not any(r.blocking for r in blocking_edges(net))


@dataclass(frozen=True)
class SumRateOne:
    """Exactly the rate pairs with r1 + r2 <= 1."""

    def contains(self, r1: Fraction, r2: Fraction) -> Optional[bool]:
        return r1 >= 0 and r2 >= 0 and r1 + r2 <= 1

    def describe(self) -> str:
        return "r1+r2<=1"


@dataclass(frozen=True)
class ContainsUnitPair:
    """(1,1) is achievable; the rest of the region is not characterized."""

    def contains(self, r1: Fraction, r2: Fraction) -> Optional[bool]:
        if r1 < 0 or r2 < 0:
            return False
        if r1 <= 1 and r2 <= 1:
            return True
        return None

    def describe(self) -> str:
        return "contains (1,1)"


@dataclass(frozen=True)
class Degenerate:
    """A session is disconnected; the other is a single unicast (min-cut)."""

    max_r1: int
    max_r2: int

    def contains(self, r1: Fraction, r2: Fraction) -> Optional[bool]:
        return 0 <= r1 <= self.max_r1 and 0 <= r2 <= self.max_r2

    def describe(self) -> str:
        return f"r1<={self.max_r1}, r2<={self.max_r2}"


RateRegion = Union[SumRateOne, ContainsUnitPair, Degenerate]


def min_cut(net: DoubleUnicastNet, s: int, t: int) -> int:
    g = nx.DiGraph()
    g.add_nodes_from(net.dag.nodes)
    for e in net.dag.edges:
        if g.has_edge(e.tail, e.head):
            g[e.tail][e.head]["capacity"] += 1
        else:
            g.add_edge(e.tail, e.head, capacity=1)
    return int(nx.maximum_flow_value(g, s, t))


def capacity_region(net: DoubleUnicastNet) -> RateRegion:
    conn = pair_connectivity(net)
    if not conn.unicast_connected:
        return Degenerate(min_cut(net, net.s1, net.t1), min_cut(net, net.s2, net.t2))
    if feasible_11(net):
        return ContainsUnitPair()
    return SumRateOne()


class SymmetricCapacity(enum.Enum):
    ZERO = "0"
    HALF = "1/2"
    AT_LEAST_ONE = ">=1"

    @property
    def lower_bound(self) -> Fraction:
        return {"0": Fraction(0), "1/2": Fraction(1, 2), ">=1": Fraction(1)}[self.value]


def symmetric_capacity(net: DoubleUnicastNet) -> SymmetricCapacity:
    if not pair_connectivity(net).unicast_connected:
        return SymmetricCapacity.ZERO
    return SymmetricCapacity.AT_LEAST_ONE if feasible_11(net) else SymmetricCapacity.HALF


@dataclass(frozen=True)
class Slot:
    source: Optional[int]  # 1, 2, or None for an idle slot
    path: Optional[Path]


@dataclass(frozen=True)
class TimeShareSchedule:
    n: int
    slots: tuple[Slot, ...]

    def count(self, source: int) -> int:
        return sum(1 for s in self.slots if s.source == source)


def time_share_schedule(net: DoubleUnicastNet, r1, r2) -> TimeShareSchedule:
    """Route x1 for r1*n slots, then x2 for r2*n slots, then idle."""
    r1, r2 = Fraction(r1), Fraction(r2)
    if r1 < 0 or r2 < 0 or r1 + r2 > 1:
        raise RateOutsideRegion(f"({r1}, {r2}) is outside r1+r2<=1")
    p1, p2 = _require_connected(net)
    n = math.lcm(r1.denominator, r2.denominator)
    k1, k2 = int(r1 * n), int(r2 * n)
    slots = [Slot(1, p1)] * k1 + [Slot(2, p2)] * k2 + [Slot(None, None)] * (n - k1 - k2)
    return TimeShareSchedule(n, tuple(slots))
