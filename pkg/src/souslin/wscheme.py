"""The W scheme on the double-arrow space.

W is the side-1 copy of V^S restricted to [0, 1), completed to order
intervals: ``W_a = [(lo,1), (hi,1))`` where ``[lo, hi) = V^S_{⟨0⟩⌢a}``.

Every non-root node contains ``(hi, 0)``, which lies in none of its children,
so W covers exactly only after all side-0 points with a dyadic value are
removed. The scheme therefore lives on X'' = X minus those points (which
also removes the maximum (1, 0)). On X'' the only branches of side-0 points
are the codes of non-dyadic values, and none of them is a base branch.
"""
from __future__ import annotations

from fractions import Fraction

from .bidirected import DAPoint, DASet, DoubleArrowSpace, OrderInterval, nbhd_basic
from .checks import CheckResult, rat
from .openmap import SchemeOracle
from .scheme import IntervalDesc, decode, periodic_branch, vs_interval
from .seqtree import Branch, FinSeq, Periodic


def w_interval(a: FinSeq) -> IntervalDesc:
    """U_a: the value interval of node ``a``; [0, 1) at the root."""
    return vs_interval((0,) + tuple(a))


def w_node(a: FinSeq) -> OrderInterval:
    """W_a as an order interval; the root is everything below (1, 0)."""
    if not a:
        return OrderInterval(None, (Fraction(1), 0))
    u = w_interval(a)
    return OrderInterval((u.lo, 1), (u.hi, 1), lower_closed=True)


def _shift(b: Branch) -> Branch:
    """Drop the first entry."""
    stem, cycle = b.periodic_form
    if stem:
        return Branch(stem[1:], Periodic(cycle)).as_periodic()
    return Branch((), Periodic(cycle[1:] + cycle[:1])).as_periodic()


def _unshift(b: Branch) -> Branch:
    """Prepend the entry 0, giving the V^S code of the same value."""
    stem, cycle = b.periodic_form
    return Branch((0,) + stem, Periodic(cycle)).as_periodic()


def w_branch(v: Fraction) -> Branch:
    """The W code of a value ``v`` in [0, 1)."""
    v = Fraction(v)
    if not 0 <= v < 1:
        raise ValueError(f"W codes live on [0, 1), got {v}")
    return _shift(periodic_branch(v))


def w_value(q: Branch) -> Fraction:
    return decode(_unshift(q))[0]


class WOracle(SchemeOracle):
    name = "double-arrow-w"

    def __init__(self, space: DoubleArrowSpace | None = None):
        self.space = space or DoubleArrowSpace(drop_dyadic_side0=True)

    def node_set(self, a: FinSeq) -> DASet:
        return w_node(tuple(a)).to_set() & self.space.whole

    def fruit_members(self, q: Branch, depth: int = 64) -> list:
        v = w_value(q)
        if q.eventually_zero():
            return [DAPoint(v, 1)]
        return [DAPoint(v, 0), DAPoint(v, 1)]

    def cut(self, q: Branch, m: int) -> DASet:
        v = w_value(q)
        if m == 0:
            return OrderInterval((v, 1), None).to_set() & self.space.whole
        hi = w_interval(q.restrict(m)).hi
        return OrderInterval((v, 1), (hi, 1)).to_set() & self.space.whole

    def branches(self, z: DAPoint, depth: int = 64) -> list[Branch]:
        if self.space.excluded(z) or z.x == 1:
            return []
        if z.side == 0 and z.x.denominator & (z.x.denominator - 1) == 0:
            # a dyadic side-0 point sits at the right end of a node and in none of its children
            return []
        return [w_branch(z.x)]

    def s1_witness(self, z: DAPoint, q: Branch, n: int, depth: int = 12) -> Branch | None:
        if z.side == 0:
            return None
        t = w_branch(z.x)
        return t if t.restrict(n) == q.restrict(n) else None

    def point_map(self, p: Branch) -> DAPoint:
        # the side-1 candidate is the only one whose cut sets are neighborhoods
        return DAPoint(w_value(p), 1)

    def s1_certificate(self, z: DAPoint, m_max: int = 8, k_max: int = 8) -> dict:
        """Why no branch of a side-0 point ``z`` is a base branch of it.

        Each cutBase element lies at or above ``z`` in the order, while each
        canonical neighborhood of ``z`` holds a side-1 point below ``z``.
        """
        bs = self.branches(z)
        cuts = [self.cut_base(q, m, z) for q in bs for m in range(m_max + 1)]
        below = []
        for k in range(k_max + 1):
            u = nbhd_basic(z, k).to_set().side1
            lo = next(iter(u)).lower
            below.append(DAPoint((lo + z.x) / 2, 1))
        from .serialize import branch_to_json

        return {
            "point": z.to_json(),
            "space": self.space.name,
            "branches": [branch_to_json(q) for q in bs],
            "cut_bases": [c.to_json() for c in cuts],
            "below": [y.to_json() for y in below],
        }


def verify_s1_certificate(cert: dict) -> bool:
    """Offline check of an (S1) failure certificate for a side-0 point."""
    z = DAPoint.from_json(cert["point"])
    if z.side != 0 or not cert["branches"]:
        return False
    at_or_above = OrderInterval((z.x, 0), None, lower_closed=True).to_set()
    cuts = [DASet.from_json(c) for c in cert["cut_bases"]]
    if not all(c <= at_or_above for c in cuts):
        return False
    for k, yj in enumerate(cert["below"]):
        y = DAPoint.from_json(yj)
        if not (y < z and y in nbhd_basic(z, k).to_set()):
            return False
        if any(y in c for c in cuts):
            return False
    return True


def w_scheme_check(depth: int, children: int, space: DoubleArrowSpace | None = None) -> CheckResult:
    """Exact check that children of W partition their parent inside ``space``.

    Children past the ``children`` bound are accounted for by their union,
    the order interval from (last, 1) up to but excluding (top, 0), where
    ``last`` is the last listed child's right end and ``top`` the parent's.
    Each of those children ends with its own (hi, 0), yet none reaches (top, 0).
    """
    space = space or DoubleArrowSpace(drop_dyadic_side0=True)
    oracle = WOracle(space)
    frontier: list[FinSeq] = [()]
    for _ in range(depth):
        nxt = []
        for a in frontier:
            parent = oracle.node_set(a)
            kids = [oracle.node_set(a + (n,)) for n in range(children)]
            for s in range(children):
                if not space.subset(kids[s], parent):
                    return CheckResult.fails({"kind": "escape", "node": list(a + (s,))})
                for t in range(s + 1, children):
                    if not (kids[s] & kids[t]).is_empty:
                        return CheckResult.fails({"kind": "overlap", "node": list(a + (t,)), "with": list(a + (s,))})
                u = w_interval(a + (s,))
                if u.lo > 0 and not space.is_neighborhood(kids[s], DAPoint(u.lo, 1)):
                    return CheckResult.fails({"kind": "not-open", "node": list(a + (s,))})
            last = w_interval(a + (children - 1,)).hi
            top = w_interval(a).hi
            rest = OrderInterval((last, 1), (top, 0), lower_closed=True).to_set()
            union = rest
            for kid in kids:
                union = union | kid
            bad = space.first_escape(parent, union)
            if bad is not None:
                return CheckResult.fails({"kind": "not-covering", "node": list(a), "point": bad.to_json()})
            nxt.extend(a + (n,) for n in range(children))
        frontier = nxt
    return CheckResult.holds(depth, space=space.name, children=children)


def recheck_w_witness(witness: dict, space: DoubleArrowSpace) -> bool:
    """True when a recorded covering failure is real: the point is in the node and in no child."""
    if witness["kind"] != "not-covering":
        return False
    a = tuple(witness["node"])
    z = DAPoint.from_json(witness["point"])
    if not space.member(z, w_node(a).to_set()):
        return False
    u = w_interval(a)
    # every child's value interval lies inside [lo, hi); (hi, 0) needs one ending exactly at hi
    if z.side == 0 and z.x == u.hi:
        return True
    return False


def describe_point(z: DAPoint) -> str:
    return f"({rat(z.x)}, {z.side})"
