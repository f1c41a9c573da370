"""Constructive XOR code synthesis for networks that support rate (1,1).

The construction follows the case split of the achievability argument:

* Case I    - edge-disjoint session paths: plain routing.
* Case IIA  - some edge cuts both sessions but no cross pair: a hidden
              butterfly around the stem.
* Case IIB  - no edge cuts both sessions.  Depending on what the first
              stem edge ``e1`` cuts, a chain of handles (a grail) is built
              directly, after swapping the session roles, or after
              deleting edges until one of those two shapes appears.

Plans assign symbols to whole paths; ``lower_plan`` turns a plan into
per-edge vectors and every result is re-verified before it is returned.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from .codec import Gf2Vec2, NetworkCode, verify
from .errors import (CaseMismatch, ChainStuck, Infeasible, PairDisconnected, PlanInfeasible,
                     ReductionStuck)
from .feasibility import blocking_edges, edge_report, pair_connectivity
from .graph import (DoubleUnicastNet, Path, find_path, reachable_from, reaching,
                    two_edge_disjoint_paths)
from .oracle import OracleConfig, exhaustive_scalar_codes

log = logging.getLogger(__name__)

X1, X2, X12 = Gf2Vec2.X1, Gf2Vec2.X2, Gf2Vec2.X1X2


@dataclass(frozen=True)
class StemDecomposition:
    """An (s1,t1) path ``path`` with the section ``n1 .. nk`` it shares with
    the second session, plus the connecting paths ``t1_path`` (s2 to n1) and
    ``t2_path`` (nk to t2)."""

    path: Path
    n1: int
    nk: int
    t1_path: Path
    t2_path: Path

    @property
    def stem(self) -> Path:
        return self.path.section(self.n1, self.nk)

    @property
    def interior(self) -> tuple[int, ...]:
        return self.stem.nodes[1:-1]

    @property
    def stem_edges(self) -> tuple[int, ...]:
        return self.stem.edges

    @property
    def head(self) -> Path:
        """The part of ``path`` before the stem."""
        return self.path.section(self.path.start, self.n1)

    @property
    def tail(self) -> Path:
        """The part of ``path`` after the stem."""
        return self.path.section(self.nk, self.path.end)

    def stem_position(self, v: int) -> int:
        return self.stem.index(v)

    def swapped(self) -> "StemDecomposition":
        """The same stem seen from the second session.

        ``t1_path + stem + t2_path`` is an (s2,t2) path whose first node
        reachable from s1 is n1 and whose last node reaching t1 is nk, so the
        stem is unchanged and the connecting paths trade places.
        """
        return StemDecomposition(self.t1_path + self.stem + self.t2_path, self.n1, self.nk,
                                 self.head, self.tail)


def find_stem(net: DoubleUnicastNet, path: Optional[Path] = None) -> StemDecomposition:
    """Stem decomposition of a Case II network.

    Starts from ``path`` (default: the canonical (s1,t1) path) and reroutes
    it while some strict ancestor of n1 is reachable from both sources, or
    some strict descendant of nk reaches both terminals.  Each reroute moves
    n1 strictly up or nk strictly down, so the loop terminates.
    """
    if two_edge_disjoint_paths(net) is not None:
        raise CaseMismatch("edge-disjoint session paths exist (Case I)")
    dag = net.dag
    if path is None:
        path = find_path(dag, net.s1, net.t1)
        if path is None:
            raise PairDisconnected("(s1,t1) is not connected")
    from1 = reachable_from(dag, (net.s1,))
    from2 = reachable_from(dag, (net.s2,))
    to1 = reaching(dag, (net.t1,))
    to2 = reaching(dag, (net.t2,))
    both_sources = from1 & from2
    both_terminals = to1 & to2
    for _ in range(2 * len(dag.nodes) + 2):
        n1 = next((v for v in path.nodes if v in from2), None)
        nk = next((v for v in reversed(path.nodes) if v in to2), None)
        if n1 is None or nk is None or path.index(n1) >= path.index(nk):
            raise CaseMismatch("the second session does not overlap the path")
        above = (reaching(dag, (n1,)) - {n1}) & both_sources
        if above:
            w = min(above, key=dag.rank)
            path = (find_path(dag, net.s1, w) + find_path(dag, w, n1)
                    + path.section(n1, path.end))
            continue
        below = (reachable_from(dag, (nk,)) - {nk}) & both_terminals
        if below:
            d = max(below, key=dag.rank)
            path = (path.section(path.start, nk) + find_path(dag, nk, d)
                    + find_path(dag, d, net.t1))
            continue
        return StemDecomposition(path, n1, nk, find_path(dag, net.s2, n1),
                                 find_path(dag, nk, net.t2))
    raise CaseMismatch("stem rerouting did not settle")


def edges_cutting_both(net: DoubleUnicastNet, stem: Optional[StemDecomposition] = None) -> frozenset[int]:
    """Edges whose removal disconnects both sessions but neither cross pair.

    Such an edge cuts (s1,t1), so scanning one (s1,t1) path is exhaustive.
    """
    path = stem.path if stem is not None else find_path(net.dag, net.s1, net.t1)
    if path is None:
        raise PairDisconnected("(s1,t1) is not connected")
    return frozenset(e for e in path.edges if edge_report(net, e).cuts_both_only)


def intermediate_nodes(net: DoubleUnicastNet, stem: StemDecomposition) -> frozenset[int]:
    """n1, nk and every node that is both a descendant of n1 and an ancestor of nk."""
    dag = net.dag
    between = reachable_from(dag, (stem.n1,)) & reaching(dag, (stem.nk,))
    return frozenset(between | {stem.n1, stem.nk})


@dataclass(frozen=True)
class Role:
    name: str
    path: Path
    label: Gf2Vec2


@dataclass(frozen=True)
class CodePlan:
    """Symbols assigned to whole paths.  ``segments`` lists the labels of
    consecutive stem segments (empty for plans without a segmented stem)."""

    roles: tuple[Role, ...]
    segments: tuple[Gf2Vec2, ...] = ()

    def role(self, name: str) -> Role:
        for r in self.roles:
            if r.name == name:
                return r
        raise KeyError(name)

    def names(self) -> list[str]:
        return [r.name for r in self.roles]

    def swapped(self) -> "CodePlan":
        return CodePlan(tuple(replace(r, label=r.label.swapped()) for r in self.roles),
                        tuple(s.swapped() for s in self.segments))


def lower_plan(net: DoubleUnicastNet, plan: CodePlan) -> NetworkCode:
    """Per-edge vectors for a plan.

    Edges are visited in topological order.  An edge carries the XOR of the
    distinct symbols currently held by the roles that traverse it, and from
    then on each of those roles holds that combined symbol.  Edges used by
    no role carry nothing.
    """
    dag = net.dag
    users: dict[int, list[int]] = defaultdict(list)
    for i, r in enumerate(plan.roles):
        for eid in r.path.edges:
            users[eid].append(i)
    held = [int(r.label) for r in plan.roles]
    out = {}
    for e in sorted(dag.edges, key=lambda e: (dag.rank(e.tail), e.id)):
        value = 0
        for sym in {held[i] for i in users.get(e.id, ())}:
            value ^= sym
        out[e.id] = value
        for i in users.get(e.id, ()):
            held[i] = value
    return NetworkCode.from_mapping(net, out)


def _pick_path(net: DoubleUnicastNet, src: int, dst: int, forbidden_nodes: Iterable[int],
               avoid: Sequence[Iterable[int]]) -> Optional[Path]:
    """Canonical path avoiding the first edge set in ``avoid`` that still
    leaves one; falls back to ignoring all of them."""
    forbidden_nodes = frozenset(forbidden_nodes)
    for edges in list(avoid) + [()]:
        p = find_path(net.dag, src, dst, edges, forbidden_nodes)
        if p is not None:
            return p
    return None


def butterfly_plan(net: DoubleUnicastNet, stem: StemDecomposition) -> CodePlan:
    """x1+x2 on the stem, with side paths U1 (s1 to t2) and U2 (s2 to t1)
    that avoid every node between n1 and nk."""
    if not edges_cutting_both(net, stem):
        raise PlanInfeasible("no edge cuts both sessions alone; not a butterfly")
    if any(r.blocking for r in blocking_edges(net)):
        raise PlanInfeasible("network has a blocking edge")
    between = intermediate_nodes(net, stem)
    mixed = set(stem.t2_path.edges) | set(stem.tail.edges)
    u1 = _pick_path(net, net.s1, net.t2, between,
                    [mixed | set(stem.t1_path.edges), mixed])
    if u1 is None:
        raise PlanInfeasible("no (s1,t2) path avoids the stem region")
    used = set(u1.edges)
    u2 = _pick_path(net, net.s2, net.t1, between,
                    [mixed | used | set(stem.head.edges), mixed | used, used])
    if u2 is None:
        raise PlanInfeasible("no (s2,t1) path avoids the stem region")
    return CodePlan((
        Role("P(s1:n1)", stem.head, X1),
        Role("T1", stem.t1_path, X2),
        Role("U1", u1, X1),
        Role("U2", u2, X2),
        Role("stem", stem.stem, X12),
        Role("T2", stem.t2_path, X12),
        Role("P(nk:t1)", stem.tail, X12),
    ))


def merge_point(net: DoubleUnicastNet, stem: StemDecomposition) -> tuple[int, Path]:
    """Latest node of (interior stem nodes + t1) that s1 reaches without
    using a stem edge, and the canonical such path.

    Any stem-avoiding prefix extends to a full (s1,t1) path along ``path``,
    so this equals the latest first-contact point over all (s1,t1) paths
    that avoid e1.
    """
    dag = net.dag
    stem_edges = set(stem.stem_edges)
    reach = reachable_from(dag, (net.s1,), stem_edges)
    if net.t1 in reach:
        target = net.t1
    else:
        hits = [v for v in stem.interior if v in reach]
        if not hits:
            raise ChainStuck("s1 cannot reach the stem interior without the stem")
        target = hits[-1]
    return target, find_path(dag, net.s1, target, stem_edges)


@dataclass(frozen=True)
class Handle:
    start: int
    path: Path
    end: int


@dataclass(frozen=True)
class HandleChain:
    """Handles Q_1..Q_I; ``terminal`` is the terminal node reached by Q_I.

    ``swapped`` marks a chain built with the session roles exchanged; its
    nodes are the same but "t1" then means the original t2.
    """

    handles: tuple[Handle, ...]
    terminal: int
    swapped: bool = False

    def __len__(self) -> int:
        return len(self.handles)

    @property
    def ends(self) -> tuple[int, ...]:
        return tuple(h.end for h in self.handles)


def _first_edge_cut(net: DoubleUnicastNet, stem: StemDecomposition):
    r = edge_report(net, stem.stem_edges[0])
    return r.disconnects_11, r.disconnects_22


def handle_chain(net: DoubleUnicastNet, stem: StemDecomposition, case: str = "IIB(i)") -> HandleChain:
    """Iteratively find the handles of a Case IIB(i) network.

    v_1 is the merge point of s1; each later v_i is the latest node among
    the stem interior and the terminals that the interior of the segment
    ``v_{i-2} .. v_{i-1}`` reaches without stem edges (v_0 = n1).  For
    Case IIB(ii) the chain is built on the role-swapped network.
    """
    if case == "IIB(ii)":
        chain = handle_chain(net.swapped(), stem.swapped(), "IIB(i)")
        return replace(chain, swapped=True)
    if case != "IIB(i)":
        raise ValueError(f"unknown case {case!r}")
    cuts11, cuts22 = _first_edge_cut(net, stem)
    if cuts11 or not cuts22:
        raise CaseMismatch("e1 must disconnect (s2,t2) and not (s1,t1)")
    dag = net.dag
    stem_edges = set(stem.stem_edges)
    nodes = stem.stem.nodes
    pos = {v: i for i, v in enumerate(nodes)}
    m0, q1 = merge_point(net, stem)
    if m0 == net.t1:
        raise ChainStuck("s1 reaches t1 without the stem; network is in Case I")
    ends = [stem.n1, m0]
    handles = [Handle(net.s1, q1, m0)]
    terminals = {net.t1, net.t2}
    while ends[-1] not in terminals:
        if len(handles) > len(nodes):
            raise ChainStuck("handle chain does not terminate")
        a, b = ends[-2], ends[-1]
        inner = nodes[pos[a] + 1:pos[b]]
        if not inner:
            raise ChainStuck(f"segment ending at v_{len(handles)} has no interior node")
        reach = reachable_from(dag, inner, stem_edges)
        hit = sorted(t for t in terminals if t in reach)
        if len(hit) == 2:
            if net.t2 in reachable_from(dag, (net.t1,)):
                hit = [net.t2]
            elif net.t1 in reachable_from(dag, (net.t2,)):
                hit = [net.t1]
            else:
                raise ChainStuck("handle reaches both terminals")
        if hit:
            v = hit[0]
        else:
            later = [x for x in stem.interior if x in reach and pos[x] > pos[b]]
            if not later:
                raise ChainStuck(f"no handle leaves the segment ending at v_{len(handles)}")
            v = later[-1]
        used = set().union(*(h.path.edges for h in handles))
        for u in inner:
            q = find_path(dag, u, v, stem_edges | used) or find_path(dag, u, v, stem_edges)
            if q is not None:
                break
        handles.append(Handle(u, q, v))
        ends.append(v)
    return HandleChain(tuple(handles), ends[-1])


def segment_labels(count: int, last: Gf2Vec2) -> tuple[Gf2Vec2, ...]:
    """Labels for ``count`` consecutive stem segments.

    Constraints: the first segment is x2 or x1+x2 (n1 sees x2 from T1 and
    may add x1), consecutive labels differ, and the last one is ``last``.
    Picks the smallest admissible label at each position.
    """

    def can_finish(label: Gf2Vec2, i: int) -> bool:
        left = count - 1 - i
        if left == 0:
            return label == last
        if left == 1:
            return label != last
        return True

    labels: list[Gf2Vec2] = []
    for i in range(count):
        options = (X2, X12) if i == 0 else tuple(v for v in (X1, X2, X12) if v != labels[-1])
        pick = next((c for c in options if can_finish(c, i)), None)
        if pick is None:
            raise PlanInfeasible(f"no segment labelling for {count} segments ending in {last.label}")
        labels.append(pick)
    return tuple(labels)


def check_segment_labels(labels: Sequence[Gf2Vec2], last: Gf2Vec2) -> None:
    if not labels or labels[0] not in (X2, X12):
        raise PlanInfeasible("first segment must carry x2 or x1+x2")
    for i in range(1, len(labels)):
        if labels[i] == labels[i - 1] or labels[i] == Gf2Vec2.ZERO:
            raise PlanInfeasible(f"segments {i - 1} and {i} cannot both carry {labels[i].label}")
    if labels[-1] != last:
        raise PlanInfeasible(f"last segment must carry {last.label}")


def grail_plan(net: DoubleUnicastNet, stem: StemDecomposition, chain: HandleChain,
               labels: Optional[Sequence[Gf2Vec2]] = None) -> CodePlan:
    """Assign symbols to the stem segments and handles of a Case IIB(i) chain.

    Handle Q_1 carries x1 and Q_i carries the label of the segment it
    leaves.  The terminal reached by Q_I fixes the last segment: x2 when it
    is t1 (t2 then reads x2 off T2), x1 when it is t2.
    """
    count = len(chain)
    if chain.terminal not in (net.t1, net.t2):
        raise PlanInfeasible("chain does not end at a terminal")
    last = X2 if chain.terminal == net.t1 else X1
    labels = tuple(labels) if labels is not None else segment_labels(count, last)
    if len(labels) != count:
        raise PlanInfeasible("one label per stem segment is required")
    check_segment_labels(labels, last)
    cuts = [stem.n1] + [h.end for h in chain.handles[:-1]] + [stem.nk]
    positions = [stem.stem_position(v) for v in cuts]
    if any(b <= a for a, b in zip(positions, positions[1:])):
        raise PlanInfeasible("handle ends are not ordered along the stem")
    roles = [Role("T1", stem.t1_path, X2)]
    if labels[0] == X12:
        roles.append(Role("P(s1:n1)", stem.head, X1))
    for j in range(count):
        roles.append(Role(f"S{j}", stem.stem.section(cuts[j], cuts[j + 1]), labels[j]))
    for i, h in enumerate(chain.handles, start=1):
        roles.append(Role(f"Q{i}", h.path, X1 if i == 1 else labels[i - 2]))
    roles.append(Role("T2", stem.t2_path, labels[-1]))
    roles.append(Role("P(nk:t1)", stem.tail, labels[-1]))
    return CodePlan(tuple(roles), labels)


@dataclass(frozen=True)
class Reduction:
    net: DoubleUnicastNet
    stem: StemDecomposition
    removed: tuple[int, ...]
    stems: tuple[StemDecomposition, ...]


def reduce_iib_iii(net: DoubleUnicastNet, stem: StemDecomposition) -> Reduction:
    """Delete edges until the first stem edge cuts exactly one session.

    With m1 / m2 the merge points of s1 / s2 on the stem: when m1 is at or
    below m2 the first edge of s2's merge path that leaves T1 is deleted,
    otherwise (mirrored) the first edge of s1's merge path that leaves the
    head of the path.  Neither edge is on the stem.  Each deletion keeps
    every session path that matters, so the network stays in Case IIB.
    """
    cuts11, cuts22 = _first_edge_cut(net, stem)
    if cuts11 or cuts22:
        raise CaseMismatch("e1 already disconnects a session")
    if edges_cutting_both(net, stem):
        raise CaseMismatch("an edge cuts both sessions (Case IIA)")
    removed: list[int] = []
    stems = [stem]
    while True:
        cuts11, cuts22 = _first_edge_cut(net, stem)
        if cuts11 != cuts22:
            return Reduction(net, stem, tuple(removed), tuple(stems))
        if cuts11 and cuts22:
            raise ReductionStuck("e1 disconnects both sessions after deletion")
        m1, p1 = merge_point(net, stem)
        m2, p2 = merge_point(net.swapped(), stem.swapped())
        if m1 in (net.t1,) or m2 in (net.t2,):
            raise ReductionStuck("a merge point is a terminal (Case I)")
        if stem.stem_position(m1) >= stem.stem_position(m2):
            skip = set(stem.t1_path.edges)
            drop = next((e for e in p2.edges if e not in skip), None)
        else:
            skip = set(stem.head.edges)
            drop = next((e for e in p1.edges if e not in skip), None)
        if drop is None or drop in stem.stem_edges:
            raise ReductionStuck("no deletable edge on the merge path")
        net = net.without_edges((drop,))
        removed.append(drop)
        if not pair_connectivity(net).unicast_connected:
            raise ReductionStuck(f"deleting edge {drop} disconnected a session")
        if any(edge_report(net, e).disconnects_11 and edge_report(net, e).disconnects_22
               for e in stem.path.edges):
            raise ReductionStuck(f"deleting edge {drop} created an edge cutting both sessions")
        stem = find_stem(net, stem.path)
        stems.append(stem)


@dataclass
class SynthesisTrace:
    """Everything the synthesis decided, for inspection and testing.

    ``oriented`` is the network the chain and plan refer to (the swapped
    network in Case IIB(ii)); ``reduction`` is set when edges were deleted.
    """

    code: NetworkCode
    case: str
    final_case: str = ""
    stem: Optional[StemDecomposition] = None
    oriented: Optional[DoubleUnicastNet] = None
    oriented_stem: Optional[StemDecomposition] = None
    cutting_both: frozenset = frozenset()
    chain: Optional[HandleChain] = None
    plan: Optional[CodePlan] = None
    reduction: Optional[Reduction] = None
    fallback: bool = False
    fallback_reason: str = ""
    stems: list = field(default_factory=list)


def _solve(net: DoubleUnicastNet, stem: Optional[StemDecomposition] = None) -> SynthesisTrace:
    pair = two_edge_disjoint_paths(net)
    if pair is not None:
        plan = CodePlan((Role("P1", pair[0], X1), Role("P2", pair[1], X2)))
        return SynthesisTrace(lower_plan(net, plan), "I", "I", plan=plan)
    if stem is None:
        stem = find_stem(net)
    cutting = edges_cutting_both(net, stem)
    if cutting:
        plan = butterfly_plan(net, stem)
        return SynthesisTrace(lower_plan(net, plan), "IIA", "IIA", stem, net, stem, cutting,
                              plan=plan, stems=[stem])
    cuts11, cuts22 = _first_edge_cut(net, stem)
    if cuts22 and not cuts11:
        chain = handle_chain(net, stem)
        plan = grail_plan(net, stem, chain)
        return SynthesisTrace(lower_plan(net, plan), "IIB(i)", "IIB(i)", stem, net, stem,
                              chain=chain, plan=plan, stems=[stem])
    if cuts11 and not cuts22:
        snet, sstem = net.swapped(), stem.swapped()
        chain = replace(handle_chain(snet, sstem), swapped=True)
        plan = grail_plan(snet, sstem, chain)
        code = lower_plan(net, plan.swapped())
        return SynthesisTrace(code, "IIB(ii)", "IIB(ii)", stem, snet, sstem,
                              chain=chain, plan=plan, stems=[stem])
    if cuts11 and cuts22:
        raise CaseMismatch("e1 cuts both sessions but no blocking or butterfly edge was found")
    red = reduce_iib_iii(net, stem)
    sub = _solve(red.net, red.stem)
    if sub.case not in ("IIB(i)", "IIB(ii)"):
        raise ReductionStuck(f"reduced network landed in Case {sub.case}")
    sub.code = sub.code.extended_to(net)
    sub.case = "IIB(iii)"
    sub.reduction = red
    sub.stems = list(red.stems)
    return sub


def synthesize_trace(net: DoubleUnicastNet, config: Optional[OracleConfig] = None) -> SynthesisTrace:
    """Synthesize a verified XOR code, keeping the intermediate structures."""
    if not pair_connectivity(net).unicast_connected:
        raise PairDisconnected("both (s1,t1) and (s2,t2) must be connected")
    blocking = [r.edge for r in blocking_edges(net) if r.blocking]
    if blocking:
        raise Infeasible(f"edge {blocking[0]} blocks rate (1,1)")
    try:
        trace = _solve(net)
        report = verify(net, trace.code)
        reason = "" if report.valid else f"lowered code fails verification (edges {report.bad_edges})"
    except (CaseMismatch, ChainStuck, PlanInfeasible, ReductionStuck) as exc:
        trace = SynthesisTrace(NetworkCode.zero(net), "?")
        reason = f"{type(exc).__name__}: {exc}"
    if reason:
        log.warning("synthesis fallback to exhaustive search: %s", reason)
        code = exhaustive_scalar_codes(net, config)
        if code is None:
            raise Infeasible("exhaustive search found no code")
        trace.code = code
        trace.fallback = True
        trace.fallback_reason = reason
    return trace


def synthesize(net: DoubleUnicastNet, config: Optional[OracleConfig] = None) -> NetworkCode:
    """A scalar XOR code delivering x1 to t1 and x2 to t2."""
    return synthesize_trace(net, config).code
