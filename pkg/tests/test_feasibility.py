from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from conftest import FEASIBLE, INFEASIBLE, generated_nets
from dunicast.errors import PairDisconnected, RateOutsideRegion
from dunicast.feasibility import (ContainsUnitPair, Degenerate, SumRateOne, SymmetricCapacity,
                                  blocking_edges, capacity_region, edge_report, feasible_11,
                                  min_cut, pair_connectivity, symmetric_capacity,
                                  time_share_schedule)
from dunicast.instances import build, canned

HALF = Fraction(1, 2)


@pytest.mark.parametrize("name", FEASIBLE)
def test_feasible_canned(name):
    assert feasible_11(canned(name))


@pytest.mark.parametrize("name", INFEASIBLE)
def test_infeasible_canned(name):
    assert not feasible_11(canned(name))


def test_bottleneck_edge_flags(bottleneck):
    reports = blocking_edges(bottleneck)
    assert [r.edge for r in reports] == [bottleneck.edge_between("m", "n")]
    r = reports[0]
    assert r.blocking and not r.cuts_both_only
    assert (r.disconnects_11, r.disconnects_22, r.disconnects_12, r.disconnects_21) == (True,) * 4


def test_crossed_blocks_through_one_cross_pair():
    net = canned("CROSSED")
    r = edge_report(net, net.edge_between("m", "n"))
    assert r.blocking and not r.disconnects_12 and r.disconnects_21


def test_butterfly_stem_cuts_both_only(butterfly):
    r = edge_report(butterfly, butterfly.edge_between("m", "n"))
    assert r.cuts_both_only and not r.blocking


def test_disconnected_network_raises():
    net = build(["s1", "s2", "t1", "t2"], [("s1", "t1")])
    with pytest.raises(PairDisconnected):
        feasible_11(net)


@given(st.one_of(generated_nets(), generated_nets(overlap_bias=1.0)))
def test_candidate_set_is_complete(net):
    everything = {e.id for e in net.dag.edges if edge_report(net, e.id).blocking}
    assert {r.edge for r in blocking_edges(net) if r.blocking} == everything


@given(generated_nets(), st.data())
def test_adding_edges_never_hurts(net, data):
    n = len(net.dag.nodes)
    order = net.dag.order
    i = data.draw(st.integers(0, n - 2))
    j = data.draw(st.integers(i + 1, n - 1))
    bigger = net.with_edges([(order[i], order[j])])
    if feasible_11(net):
        assert feasible_11(bigger)


@given(generated_nets(), st.data())
def test_deleting_edges_never_helps(net, data):
    eid = data.draw(st.sampled_from([e.id for e in net.dag.edges]))
    smaller = net.without_edges([eid])
    assume(pair_connectivity(smaller).unicast_connected)
    if not feasible_11(net):
        assert not feasible_11(smaller)


def test_regions(bottleneck, butterfly):
    region = capacity_region(bottleneck)
    assert isinstance(region, SumRateOne) and region.describe() == "r1+r2<=1"
    assert region.contains(HALF, HALF) and not region.contains(Fraction(2, 3), Fraction(2, 3))
    region = capacity_region(butterfly)
    assert isinstance(region, ContainsUnitPair)
    assert region.contains(1, 1) and region.contains(2, 1) is None and not region.contains(-1, 0)


def test_degenerate_region_uses_min_cut():
    net = build(["s1", "s2", "a", "t1", "t2"],
                [("s1", "a"), ("s1", "a"), ("a", "t1"), ("a", "t1"), ("s1", "t1")])
    region = capacity_region(net)
    assert region == Degenerate(3, 0)
    assert region.contains(3, 0) and not region.contains(0, HALF)
    assert min_cut(net, net.s1, net.t1) == 3


def test_symmetric_capacity_values(bottleneck, butterfly):
    assert symmetric_capacity(bottleneck) is SymmetricCapacity.HALF
    assert symmetric_capacity(butterfly) is SymmetricCapacity.AT_LEAST_ONE
    net = build(["s1", "s2", "t1", "t2"], [("s1", "t1")])
    assert symmetric_capacity(net) is SymmetricCapacity.ZERO
    assert [c.lower_bound for c in SymmetricCapacity] == [0, HALF, 1]


@given(generated_nets())
def test_symmetric_capacity_is_one_of_three(net):
    cap = symmetric_capacity(net)
    region = capacity_region(net)
    assert cap.value in ("0", "1/2", ">=1")
    assert region.contains(cap.lower_bound, cap.lower_bound)


@given(st.fractions(0, 1, max_denominator=12), st.fractions(0, 1, max_denominator=12))
def test_schedule_counts(r1, r2):
    net = canned("BOTTLENECK")
    if r1 + r2 > 1:
        with pytest.raises(RateOutsideRegion):
            time_share_schedule(net, r1, r2)
        return
    s = time_share_schedule(net, r1, r2)
    assert Fraction(s.count(1), s.n) == r1 and Fraction(s.count(2), s.n) == r2
    assert len(s.slots) == s.n


def test_half_half_schedule(bottleneck):
    s = time_share_schedule(bottleneck, HALF, HALF)
    assert s.n == 2 and [slot.source for slot in s.slots] == [1, 2]
