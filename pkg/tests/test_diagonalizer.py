from __future__ import annotations

import json
import time
from fractions import Fraction as F

import pytest

from souslin.bidirected import DAPoint, DoubleArrowSpace, LexRelation, OrderInterval
from souslin.diagonalizer import (
    Status,
    diagonalize,
    recheck_refutation,
    refute_s2,
    verify_property5,
    verify_trace,
)
from souslin.errors import BudgetExhausted
from souslin.openmap import SchemeOracle, VSOracle
from souslin.scheme import vs_interval
from souslin.seqtree import Branch, Periodic
from souslin.wscheme import (
    WOracle,
    recheck_w_witness,
    verify_s1_certificate,
    w_branch,
    w_node,
    w_scheme_check,
    w_value,
)


# ---------------------------------------------------------------- mock oracle
#
# Nodes are subintervals of [0,1). Children of even-depth nodes run rightward
# (as in V^S), children of odd-depth nodes run leftward, so cut sets alternate
# sides with the level and both looking directions get served.


def child(lo: F, hi: F, n: int, depth: int) -> tuple[F, F]:
    w = hi - lo
    if depth % 2 == 0:
        return hi - w / 2**n, hi - w / 2 ** (n + 1)
    return lo + w / 2 ** (n + 1), lo + w / 2**n


def node(a) -> tuple[F, F]:
    lo, hi = F(0), F(1)
    for d, n in enumerate(a):
        lo, hi = child(lo, hi, n, d)
    return lo, hi


def mock_branch(v: F) -> Branch:
    r, d, seen, out = v, 0, {}, []
    while (r, d % 2) not in seen:
        seen[(r, d % 2)] = len(out)
        if d % 2 == 0:
            n = 0
            while not r < 1 - F(1, 2 ** (n + 1)):
                n += 1
            r = (r - (1 - F(1, 2**n))) * 2 ** (n + 1)
        else:
            n = 0
            while not r >= F(1, 2 ** (n + 1)):
                n += 1
            r = (r - F(1, 2 ** (n + 1))) * 2 ** (n + 1)
        out.append(n)
        d += 1
    start = seen[(r, d % 2)]
    return Branch(tuple(out[:start]), Periodic(tuple(out[start:])))


def mock_value(q: Branch) -> F:
    stem, cycle = q.periodic_form
    if len(cycle) % 2:
        cycle = cycle * 2
    lo, hi = node(stem)
    a0, b0 = node(stem + cycle)
    # one period is the affine map lo + w r -> lo + w (A + B r); its fixed point is the fruit
    A, B = (a0 - lo) / (hi - lo), (b0 - a0) / (hi - lo)
    return lo + (hi - lo) * A / (1 - B)


class MockSpace(DoubleArrowSpace):
    def pick_point(self, s, right):
        # a third of the way into the node keeps the code periodic with period 2
        part = s.side1 if right else s.side0
        for atom in part:
            if atom.lower < atom.upper:
                return DAPoint(atom.lower + (atom.upper - atom.lower) / 3, 1 if right else 0)
        return None


class MockOracle(SchemeOracle):
    name = "mock"

    def __init__(self):
        self.space = MockSpace(drop_max=True, rel=LexRelation())

    def node_set(self, a):
        if not a:
            return self.space.whole
        lo, hi = node(tuple(a))
        return OrderInterval((lo, 1), (hi, 1), lower_closed=True).to_set() & self.space.whole

    def cut(self, q, m):
        v = mock_value(q)
        lo, hi = node(q.restrict(m))
        if m % 2 == 0:
            return OrderInterval((v, 1), (hi, 1)).to_set() & self.space.whole
        return OrderInterval((lo, 1), (v, 0), lower_closed=True).to_set() & self.space.whole

    def fruit_members(self, q, depth=64):
        v = mock_value(q)
        return [DAPoint(v, 0), DAPoint(v, 1)]

    def branches(self, z, depth=64):
        return [mock_branch(z.x)]

    def s1_witness(self, z, q, n, depth=12):
        t = mock_branch(z.x)
        return t if t.restrict(n) == q.restrict(n) else None

    def point_map(self, p):
        return DAPoint(mock_value(p), 1)


def test_mock_coding_consistent():
    for v in (F(1, 3), F(2, 7), F(6, 11), F(5, 9)):
        b = mock_branch(v)
        assert mock_value(b) == v
        lo, hi = node(b.restrict(12))
        assert lo < v < hi


def test_mock_trace_and_property5():
    trace = diagonalize(MockOracle(), max_steps=4)
    assert [s.n for s in trace.steps] == [0, 1, 2, 3]
    assert trace.status is Status.S2_READY
    data = json.loads(json.dumps(trace.to_json()))
    assert verify_trace(data).ok
    assert verify_property5(trace, 1).ok and verify_property5(trace, 1).depth == 1
    assert verify_property5(trace, 0).ok


def test_trace_tamper_detected():
    data = json.loads(json.dumps(diagonalize(MockOracle(), max_steps=4).to_json()))
    data["steps"][1]["x_n"] = data["steps"][0]["x_n"]
    assert verify_trace(data).failed


# ---------------------------------------------------------------- W scheme


def test_w_node_examples():
    assert w_node(()) == OrderInterval(None, (F(1), 0))
    assert w_node((2,)) == OrderInterval((F(3, 4), 1), (F(7, 8), 1), lower_closed=True)
    assert w_node((2, 0)) == OrderInterval((F(3, 4), 1), (F(13, 16), 1), lower_closed=True)
    root = w_node(()).to_set()
    assert DAPoint(F(1), 0) not in root and DAPoint(F(0), 1) in root


def test_w_values_against_vs():
    for v in (F(0), F(1, 3), F(1, 2), F(6, 11), F(63, 64)):
        b = w_branch(v)
        assert w_value(b) == v
        for m in range(8):
            u = vs_interval((0,) + b.restrict(m))
            assert u.lo <= v < u.hi


def test_w_partition_on_subspace():
    assert w_scheme_check(4, 6).ok


def test_w_not_covering_with_dyadic_side0():
    space = DoubleArrowSpace(drop_max=True)
    res = w_scheme_check(4, 6, space)
    assert res.failed
    assert res.witness == {"kind": "not-covering", "node": [0], "point": {"x": "1/2", "side": 0}}
    assert recheck_w_witness(res.witness, space)


def test_w_fruit_structure():
    oracle = WOracle()
    for v in (F(1, 3), F(6, 11), F(5, 7)):
        assert oracle.fruit_members(w_branch(v)) == [DAPoint(v, 0), DAPoint(v, 1)]
    for v in (F(0), F(1, 2), F(3, 8)):
        assert oracle.fruit_members(w_branch(v)) == [DAPoint(v, 1)]


def test_w_s1_fails_at_side0():
    oracle = WOracle()
    for v in (F(1, 3), F(6, 11), F(5, 7)):
        z = DAPoint(v, 0)
        assert oracle.branches(z)
        assert oracle.s1_witness(z, w_branch(v), 3) is None
        assert verify_s1_certificate(oracle.s1_certificate(z))
    # a certificate for a point that does have a base branch must not verify
    cert = oracle.s1_certificate(DAPoint(F(1, 3), 0))
    cert["point"] = {"x": "1/3", "side": 1}
    assert not verify_s1_certificate(cert)


def test_w_diagonalizer_trace():
    start = time.perf_counter()
    trace = diagonalize(WOracle(), max_steps=4)
    elapsed = time.perf_counter() - start
    assert trace.status is Status.S1_FAILURE
    assert len(trace.steps) == 1
    s = trace.steps[0]
    assert s.x == DAPoint(F(1, 2), 1)
    assert (s.m, s.k, s.a) == (1, 2, 3)
    assert s.x_n == DAPoint(F(2, 3), 1)
    assert s.p_next == (1, 0, 0, 1)
    assert s.node_next == OrderInterval((F(17, 32), 1), (F(35, 64), 1), lower_closed=True).to_set() & WOracle().space.whole
    assert trace.failure["point"] == DAPoint(F(6, 11), 0)
    data = json.loads(json.dumps(trace.to_json()))
    assert verify_trace(data).ok
    assert verify_s1_certificate(data["certificates"][0])
    res = verify_property5(data, 1)
    assert res.verdict == "unknown" and "odd" in res.details["shortfall"]
    assert elapsed < 5


def test_diagonalize_zero_steps():
    trace = diagonalize(WOracle(), max_steps=0)
    assert trace.steps == [] and trace.status is Status.RUNNING


def test_diagonalize_on_sorgenfrey():
    trace = diagonalize(VSOracle())
    assert trace.status is Status.PRECONDITION_FAILED
    assert trace.failure["result"]["witness"]["kind"] == "A_l-not-dense"


def test_budget_exhausted_carries_trace():
    with pytest.raises(BudgetExhausted) as info:
        diagonalize(WOracle(), max_steps=2, depth_budget=2)
    assert info.value.trace is not None and info.value.trace.steps == []


def test_refute_s2_w():
    oracle = WOracle()
    p = w_branch(F(1, 3))
    res = refute_s2(oracle, p, 8, z=DAPoint(F(1, 3), 0))
    assert res.ok
    entry = res.details["refutations"][0]
    assert entry["looks"] == "left" and len(entry["witnesses"]) == 9
    for w in entry["witnesses"]:
        y = w["witness"]
        assert y.side == 1 and y.x > F(1, 3)
    assert recheck_refutation(oracle, p, json.loads(json.dumps(res.to_json()))["details"]["refutations"][0])
    assert refute_s2(oracle, p, 0, z=DAPoint(F(1, 3), 0)).ok


def test_refute_s2_no_refutation_at_base_point():
    oracle = WOracle()
    res = refute_s2(oracle, w_branch(F(1, 4)), 4, z=DAPoint(F(1, 4), 1))
    assert res.failed and res.witness["kind"] == "no-refutation"
    assert res.witness["base_branch_evidence"]["verdict"] == "holds_to_depth"


def test_verify_property5_empty():
    assert verify_property5({"relation": "lex", "space": {}, "steps": []}, 0).ok
