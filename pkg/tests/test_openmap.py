from __future__ import annotations

from fractions import Fraction as F

import pytest

from souslin.bidirected import DAPoint, OrderInterval
from souslin.errors import NoBasePoint, UnsupportedMap
from souslin.openmap import (
    VSOracle,
    base_branch_evidence,
    image_identity_check,
    induced_point,
    pushforward_node,
    recheck_image_witness,
)
from souslin.scheme import IntervalDesc, decode, encode_branch
from souslin.seqtree import AllZero, Branch, Constant
from souslin.wscheme import WOracle, w_branch


class ShiftedVS(VSOracle):
    """Mutant: every set moves one unit right while the point map stays the decoder."""

    name = "vs-shifted"

    def node_set(self, a):
        s = super().node_set(a)
        return s.apply(lambda atom: atom.replace(lower=lambda v: v + 1, upper=lambda v: v + 1))

    def cut(self, q, m):
        s = super().cut(q, m)
        return s.apply(lambda atom: atom.replace(lower=lambda v: v + 1, upper=lambda v: v + 1))

    def fruit_members(self, q, depth=64):
        return [decode(q, depth)[0] + 1]


def test_pushforward_examples():
    assert pushforward_node("decode", (0, 2)) == IntervalDesc(F(3, 4), F(7, 8))
    assert pushforward_node("double-arrow-w", (2,)) == OrderInterval((F(3, 4), 1), (F(7, 8), 1), lower_closed=True)
    w = pushforward_node("double-arrow-w", (2,)).to_set()
    assert DAPoint(F(7, 8), 0) in w and DAPoint(F(3, 4), 1) in w
    assert DAPoint(F(3, 4), 0) not in w and DAPoint(F(7, 8), 1) not in w
    with pytest.raises(UnsupportedMap):
        pushforward_node("identity", ())


def test_base_branch_evidence_vs():
    res = base_branch_evidence(VSOracle(), encode_branch(F(3, 4)), F(3, 4), 8)
    assert res.ok
    # nested shrink indices: larger canonical neighborhoods need no deeper cut
    assert res.details["shrink"] == sorted(res.details["shrink"])
    assert base_branch_evidence(VSOracle(), encode_branch(F(3, 4)), F(5, 8), 4).failed


def test_induced_point_vs():
    z, ev = induced_point(VSOracle(), Branch((0,), Constant(1)))
    assert z == F(2, 3) and ev.ok


def test_induced_point_w():
    oracle = WOracle()
    z, _ = induced_point(oracle, w_branch(F(1, 3)))
    assert z == DAPoint(F(1, 3), 1)
    with pytest.raises(NoBasePoint) as info:
        induced_point(oracle, w_branch(F(1, 3)), candidates=[DAPoint(F(1, 3), 0)])
    assert info.value.failures[0][1].witness["kind"] == "not-a-neighborhood"


@pytest.mark.parametrize("x", [F(3, 4), F(1, 3), F(-7, 5), F(0), F(22, 7)])
@pytest.mark.parametrize("n", range(7))
def test_image_identity_vs(x, n):
    assert image_identity_check(VSOracle(), encode_branch(x), n, samples=50).ok


def test_image_identity_leftmost():
    assert image_identity_check(VSOracle(), Branch((0,), AllZero()), 0, samples=10).ok


def test_shifted_pushforward_detected():
    oracle = ShiftedVS()
    p = encode_branch(F(3, 4))
    res = image_identity_check(oracle, p, 2, samples=50)
    assert res.failed
    assert res.witness["direction"] == "forward"
    assert recheck_image_witness(oracle, p, res.to_json()["witness"])
    assert not recheck_image_witness(VSOracle(), p, res.to_json()["witness"])


def test_image_identity_w_misses_side0():
    # W sends branches to side-1 points only, so side-0 points of a cut have no preimage
    res = image_identity_check(WOracle(), w_branch(F(1, 3)), 2, samples=20)
    assert res.failed and res.witness["direction"] == "reverse"
    assert res.witness["point"].side == 0
    assert recheck_image_witness(WOracle(), w_branch(F(1, 3)), res.to_json()["witness"])
