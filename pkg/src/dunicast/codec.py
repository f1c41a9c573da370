"""Scalar GF(2) network codes: verification and bit-level simulation.

An edge carries ``a*x1 + b*x2`` over GF(2).  The coefficient pair is kept
as a two-bit integer (bit 0 for x1, bit 1 for x2), so XOR of integers is
addition of coefficient vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .errors import BlockLengthMismatch, DomainMismatch, InvalidCode
from .graph import DoubleUnicastNet


class Gf2Vec2(IntEnum):
    ZERO = 0
    X1 = 1
    X2 = 2
    X1X2 = 3

    @classmethod
    def from_pair(cls, a: int, b: int) -> "Gf2Vec2":
        if a not in (0, 1) or b not in (0, 1):
            raise ValueError(f"coefficients must be bits, got ({a}, {b})")
        return cls(a | (b << 1))

    @property
    def a(self) -> int:
        return self & 1

    @property
    def b(self) -> int:
        return self >> 1

    @property
    def pair(self) -> tuple[int, int]:
        return (self.a, self.b)

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "Gf2Vec2":
        for v, s in _LABELS.items():
            if s == text:
                return cls(v)
        raise ValueError(f"unknown symbol label {text!r}")

    def swapped(self) -> "Gf2Vec2":
        """The same combination with the roles of x1 and x2 exchanged."""
        return Gf2Vec2.from_pair(self.b, self.a)

    def apply(self, x1: int, x2: int) -> int:
        return (self.a & x1) ^ (self.b & x2)


_LABELS = {0: "-", 1: "x1", 2: "x2", 3: "x1+x2"}

# A subspace of GF(2)^2 is stored as a 4-bit membership mask over the
# vectors 0..3; ``SPAN[m1][m2]`` is the join of two subspaces.
ZERO_SPACE = 0b0001
FULL_SPACE = 0b1111
LINE = {v: 0b0001 | (1 << v) for v in range(4)}
LINE[0] = ZERO_SPACE


def _join(m1: int, m2: int) -> int:
    members = [v for v in range(4) if m1 >> v & 1] + [v for v in range(4) if m2 >> v & 1]
    closed = {0}
    for v in members:
        closed |= {c ^ v for c in closed}
    return sum(1 << v for v in closed)


SPAN = [[_join(a, b) for b in range(16)] for a in range(16)]


def span_mask(vectors: Iterable[int]) -> int:
    m = ZERO_SPACE
    for v in vectors:
        m = SPAN[m][LINE[v]]
    return m


def in_span(vec: int, mask: int) -> bool:
    return bool(mask >> vec & 1)


def source_vectors(net: DoubleUnicastNet, v: int) -> list[Gf2Vec2]:
    """Unit vectors injected at ``v`` (both when the sources coincide)."""
    out = []
    if v == net.s1:
        out.append(Gf2Vec2.X1)
    if v == net.s2:
        out.append(Gf2Vec2.X2)
    return out


@dataclass(frozen=True)
class NetworkCode:
    """Total map from edge id to coefficient vector."""

    vectors: tuple[tuple[int, Gf2Vec2], ...]

    @classmethod
    def from_mapping(cls, net: DoubleUnicastNet, mapping: Mapping[int, int]) -> "NetworkCode":
        """Build a total code; edges missing from ``mapping`` carry nothing."""
        ids = {e.id for e in net.dag.edges}
        extra = set(mapping) - ids
        if extra:
            raise DomainMismatch(f"code mentions unknown edges {sorted(extra)}")
        return cls(tuple((eid, Gf2Vec2(mapping.get(eid, 0))) for eid in sorted(ids)))

    @classmethod
    def zero(cls, net: DoubleUnicastNet) -> "NetworkCode":
        return cls.from_mapping(net, {})

    def as_dict(self) -> dict[int, Gf2Vec2]:
        return dict(self.vectors)

    def __getitem__(self, eid: int) -> Gf2Vec2:
        return self.as_dict()[eid]

    def swapped(self) -> "NetworkCode":
        return NetworkCode(tuple((e, v.swapped()) for e, v in self.vectors))

    def restricted_to(self, net: DoubleUnicastNet) -> "NetworkCode":
        keep = {e.id for e in net.dag.edges}
        return NetworkCode(tuple((e, v) for e, v in self.vectors if e in keep))

    def extended_to(self, net: DoubleUnicastNet) -> "NetworkCode":
        """Same code on a supergraph; the additional edges carry nothing."""
        return NetworkCode.from_mapping(net, self.as_dict())


def _check_domain(net: DoubleUnicastNet, code: NetworkCode) -> dict[int, Gf2Vec2]:
    vec = code.as_dict()
    if set(vec) != {e.id for e in net.dag.edges}:
        raise DomainMismatch("code domain differs from the edge set")
    return vec


@dataclass(frozen=True)
class VerifyReport:
    computable: tuple[tuple[int, bool], ...]
    t1_decodable: bool
    t2_decodable: bool

    @property
    def bad_edges(self) -> list[int]:
        return [e for e, ok in self.computable if not ok]

    @property
    def valid(self) -> bool:
        return not self.bad_edges and self.t1_decodable and self.t2_decodable


def _available(net: DoubleUnicastNet, vec: Mapping[int, int], v: int) -> list[int]:
    """Vectors visible at ``v``: in-edges by id, then own source symbols."""
    return [vec[e.id] for e in net.dag.in_edges(v)] + [int(s) for s in source_vectors(net, v)]


def verify(net: DoubleUnicastNet, code: NetworkCode) -> VerifyReport:
    vec = _check_domain(net, code)
    ok = {}
    for v in net.dag.order:
        mask = span_mask(_available(net, vec, v))
        for e in net.dag.out_edges(v):
            ok[e.id] = in_span(vec[e.id], mask)
    t1 = in_span(Gf2Vec2.X1, span_mask(_available(net, vec, net.t1)))
    t2 = in_span(Gf2Vec2.X2, span_mask(_available(net, vec, net.t2)))
    return VerifyReport(tuple(sorted(ok.items())), t1, t2)


def combination(items: Sequence[int], target: int) -> Optional[tuple[int, ...]]:
    """Indices of the first subset of ``items`` whose XOR is ``target``.

    Subsets are tried by size, then lexicographically by index tuple; in
    GF(2)^2 at most two items are ever needed.
    """
    if target == 0:
        return ()
    for r in (1, 2):
        for idx in combinations(range(len(items)), r):
            acc = 0
            for i in idx:
                acc ^= items[i]
            if acc == target:
                return idx
    return None


@dataclass(frozen=True)
class Simulation:
    edge_values: tuple[tuple[int, Optional[int]], ...]
    decoded: tuple[Optional[int], Optional[int]]
    consistent: bool

    def value(self, eid: int) -> Optional[int]:
        return dict(self.edge_values)[eid]


def simulate(net: DoubleUnicastNet, code: NetworkCode, x1: int, x2: int,
             check: bool = True) -> Simulation:
    """Push the bits ``x1``, ``x2`` through the network.

    Each node forms every outgoing value from the bits it actually received,
    using the first combination of its inputs that yields the edge's
    coefficient vector; terminals decode the same way.  An edge that cannot
    be formed carries None.  ``consistent`` is True when every edge value
    matches ``a*x1 + b*x2``.  With ``check`` the code must verify first.
    """
    vec = _check_domain(net, code)
    if check and not verify(net, code).valid:
        raise InvalidCode("code does not verify")
    bit = {Gf2Vec2.X1: x1 & 1, Gf2Vec2.X2: x2 & 1}
    values: dict[int, Optional[int]] = {}

    def inputs(v: int) -> tuple[list[int], list[Optional[int]]]:
        vs = [vec[e.id] for e in net.dag.in_edges(v)]
        bs = [values[e.id] for e in net.dag.in_edges(v)]
        for s in source_vectors(net, v):
            vs.append(int(s))
            bs.append(bit[s])
        return vs, bs

    def form(vs, bs, target) -> Optional[int]:
        idx = combination(vs, target)
        if idx is None or any(bs[i] is None for i in idx):
            return None
        acc = 0
        for i in idx:
            acc ^= bs[i]
        return acc

    for v in net.dag.order:
        vs, bs = inputs(v)
        for e in net.dag.out_edges(v):
            values[e.id] = form(vs, bs, vec[e.id])
    d1 = form(*inputs(net.t1), Gf2Vec2.X1)
    d2 = form(*inputs(net.t2), Gf2Vec2.X2)
    consistent = all(values[e] == vec[e].apply(x1, x2) for e in values)
    return Simulation(tuple(sorted(values.items())), (d1, d2), consistent)


def decodes_everything(net: DoubleUnicastNet, code: NetworkCode) -> bool:
    """True when simulation is consistent and decodes all four inputs."""
    for x1 in (0, 1):
        for x2 in (0, 1):
            sim = simulate(net, code, x1, x2, check=False)
            if not sim.consistent or sim.decoded != (x1, x2):
                return False
    return True


def simulate_schedule(net: DoubleUnicastNet, schedule, x1_block: Sequence[int],
                      x2_block: Sequence[int]) -> tuple[list[int], list[int]]:
    """Run a time-sharing schedule slot by slot; returns what t1 and t2 receive.

    In every slot the routed symbol is copied hop by hop along the slot's
    path, and the terminal reads it off the last edge.
    """
    need1 = sum(1 for s in schedule.slots if s.source == 1)
    need2 = sum(1 for s in schedule.slots if s.source == 2)
    if len(x1_block) != need1 or len(x2_block) != need2:
        raise BlockLengthMismatch(
            f"schedule carries {need1}+{need2} symbols, got {len(x1_block)}+{len(x2_block)}")
    pending = {1: list(x1_block), 2: list(x2_block)}
    got: dict[int, list[int]] = {1: [], 2: []}
    terminal = {1: net.t1, 2: net.t2}
    for slot in schedule.slots:
        if slot.source is None:
            continue
        symbol = pending[slot.source].pop(0)
        at = {slot.path.start: symbol}
        for eid in slot.path.edges:
            e = net.dag.edge(eid)
            at[e.head] = at[e.tail]
        if slot.path.end != terminal[slot.source]:
            raise InvalidCode("slot path does not end at the terminal")
        got[slot.source].append(at[slot.path.end])
    return got[1], got[2]
