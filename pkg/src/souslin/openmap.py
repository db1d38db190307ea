"""Scheme oracles, pushforward of S along a map, and the induced point map.

An oracle answers the finitely many questions the constructions ask about a
candidate scheme ``V``: node sets, cut sets, fruit candidates, branches of a
point and (S1) witnesses. Sets and points belong to the oracle's ``space``,
which owns membership, inclusion and the neighborhood test.
"""
from __future__ import annotations

import random
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any

import portion as P

from .checks import CheckResult, Tri
from .errors import NoBasePoint, SouslinError, UnsupportedMap
from .scheme import decode, encode_branch, vs_interval
from .seqtree import AllZero, Branch, Constant, FinSeq, in_rsequences
from .topology import cut_vs, half_open, sample_sigma_member


class SchemeOracle(ABC):
    name: str = "oracle"
    space: Any

    @abstractmethod
    def node_set(self, a: FinSeq):
        """V_a as a set of the space."""

    @abstractmethod
    def cut(self, q: Branch, m: int):
        """cut(V, q, m) as a set of the space."""

    @abstractmethod
    def fruit_members(self, q: Branch, depth: int = 64) -> list:
        """Every point of fruit(V, q), or a superset of candidates."""

    @abstractmethod
    def branches(self, x, depth: int = 64) -> list[Branch]:
        """Branches of ``x``; may be empty."""

    def s1_witness(self, x, q: Branch, n: int, depth: int = 12) -> Branch | None:
        """A base branch t of ``x`` with t↾n = q↾n, or None."""
        for t in self.branches(x, depth):
            if t.restrict(n) == q.restrict(n) and base_branch_evidence(self, t, x, depth).ok:
                return t
        return None

    def cut_base(self, q: Branch, m: int, x):
        return self.space.with_point(self.cut(q, m), x)

    def shrink_index(self, q: Branch, x, target, start: int = 0, budget: int = 64, need_nbhd: bool = False) -> int | None:
        """Least m >= start with cut(V, q, m) ∪ {x} inside ``target``."""
        for m in range(start, budget + 1):
            element = self.cut_base(q, m, x)
            if self.space.subset(element, target) and (not need_nbhd or self.space.is_neighborhood(element, x)):
                return m
        return None

    def point_map(self, p: Branch):
        return induced_point(self, p)[0]


class VSOracle(SchemeOracle):
    """V^S on the Sorgenfrey line; the map is the decoder."""

    name = "vs"

    def __init__(self):
        from .bidirected import SorgenfreySpace

        self.space = SorgenfreySpace()

    def node_set(self, a: FinSeq):
        node = vs_interval(tuple(a))
        return half_open(node.lo, node.hi)

    def cut(self, q: Branch, m: int):
        return cut_vs(q, m).as_set

    def fruit_members(self, q: Branch, depth: int = 64) -> list:
        return [decode(q, depth)[0]]

    def branches(self, x, depth: int = 64) -> list[Branch]:
        return [encode_branch(Fraction(x))]

    def s1_witness(self, x, q: Branch, n: int, depth: int = 12) -> Branch | None:
        t = encode_branch(Fraction(x))
        return t if t.restrict(n) == q.restrict(n) else None

    def point_map(self, p: Branch):
        return decode(p)[0]


def pushforward_node(map_name: str, a: FinSeq):
    """The image of the cylinder S_a under a built-in map."""
    if map_name in ("decode", "vs"):
        return vs_interval(tuple(a))
    if map_name in ("double-arrow-w", "w"):
        from .wscheme import w_node

        return w_node(tuple(a))
    raise UnsupportedMap(f"unknown map {map_name!r}; supported: decode, double-arrow-w")


def base_branch_evidence(oracle: SchemeOracle, q: Branch, z, depth: int = 12) -> CheckResult:
    """Bounded evidence that ``q`` is a base branch of ``z``.

    Checks that ``z`` lies in V_{q↾m} and that cut(V, q, m) ∪ {z} is a
    neighborhood of ``z`` for m <= depth, and that these sets shrink into
    each of the first ``depth`` canonical neighborhoods of ``z``.
    """
    space = oracle.space
    budget = 4 * depth + 16
    for m in range(depth + 1):
        if not space.member(z, oracle.node_set(q.restrict(m))):
            return CheckResult.fails({"kind": "not-in-node", "point": z, "m": m})
        if not space.is_neighborhood(oracle.cut_base(q, m, z), z):
            return CheckResult.fails({"kind": "not-a-neighborhood", "point": z, "m": m})
    inner = []
    for k in range(depth + 1):
        m = oracle.shrink_index(q, z, space.canonical_nbhd(z, k), 0, budget)
        if m is None:
            return CheckResult.unknown(budget, point=z, k=k)
        inner.append(m)
    return CheckResult.holds(depth, point=z, shrink=inner)


def induced_point(oracle: SchemeOracle, p: Branch, depth: int = 12, candidates: list | None = None):
    """The unique fruit candidate of ``p`` whose base-branch evidence succeeds."""
    cands = oracle.fruit_members(p, depth) if candidates is None else candidates
    passing, failures = [], []
    for z in cands:
        ev = base_branch_evidence(oracle, p, z, depth)
        (passing if ev.ok else failures).append((z, ev))
    if not passing:
        raise NoBasePoint(f"no candidate point has {p} as a base branch", failures)
    if len(passing) > 1:
        raise SouslinError(f"several points claim {p} as a base branch: {[z for z, _ in passing]}")
    return passing[0]


def sample_from(space, s, rng: random.Random):
    """A random point of ``s`` (exact), for the supported spaces."""
    from .bidirected import DAPoint, DASet

    def pick(atom):
        lo, hi = atom.lower, atom.upper
        if lo == hi:
            return lo
        if lo == -P.inf:
            lo = hi - 1 - rng.randrange(4)
        if hi == P.inf:
            hi = lo + 1 + rng.randrange(4)
        return lo + (hi - lo) * Fraction(rng.randrange(1, 1024), 1024 + rng.randrange(1, 7))

    if isinstance(s, DASet):
        for _ in range(64):
            side = rng.choice((0, 1))
            atoms = [a for a in s.part(side) if not a.empty]
            if atoms:
                z = DAPoint(pick(rng.choice(atoms)), side)
                if not space.excluded(z):
                    return z
        return None
    atoms = [a for a in s if not a.empty]
    return pick(rng.choice(atoms)) if atoms else None


def _probes(space, s) -> list:
    """Points of ``s`` very close to each end of every atom."""
    from .bidirected import DAPoint, DASet

    out = []
    parts = [(side, s.part(side)) for side in (1, 0)] if isinstance(s, DASet) else [(None, s)]
    for side, part in parts:
        for atom in part:
            if atom.empty or atom.lower == atom.upper:
                continue
            lo, hi = atom.lower, atom.upper
            if lo == -P.inf or hi == P.inf:
                continue
            for t in (10, 30):
                for v in (lo + (hi - lo) / 3**t, hi - (hi - lo) / 3**t):
                    z = v if side is None else DAPoint(v, side)
                    if side is None or not space.excluded(z):
                        out.append(z)
    return out


def _branch_json(b: Branch):
    from .serialize import branch_to_json

    return branch_to_json(b)


def image_identity_check(
    oracle: SchemeOracle, p: Branch, n: int, samples: int = 50, seed: int = 0, depth: int = 10
) -> CheckResult:
    """Sampled check of f[cut(S, p, n) ∪ {p}] = cut(V, p, n) ∪ {f(p)} in both directions."""
    space = oracle.space
    fp, _ = induced_point(oracle, p, depth)
    target = space.with_point(oracle.cut(p, n), fp)
    rng = random.Random(seed)
    for i in range(samples):
        b = sample_sigma_member(p, n, rng)
        if i % 3 == 1 and not b.same_as(p):
            b = Branch(b.prefix, Constant(rng.randrange(1, 4)))
        try:
            y = oracle.point_map(b)
        except NoBasePoint as exc:
            return CheckResult.fails({"direction": "forward", "member": _branch_json(b), "n": n, "reason": str(exc)})
        if not space.member(y, target):
            return CheckResult.fails({"direction": "forward", "member": _branch_json(b), "image": y, "n": n})
    cut = oracle.cut(p, n)
    points = [sample_from(space, cut, rng) for _ in range(samples)] + _probes(space, cut)
    for y in points:
        if y is None:
            continue
        ok = False
        for b in oracle.branches(y):
            if in_rsequences(b, p, n) is Tri.TRUE and oracle.point_map(b) == y:
                ok = True
                break
        if not ok:
            return CheckResult.fails({"direction": "reverse", "point": y, "n": n})
    return CheckResult.holds(depth, n=n, samples=samples, point=fp)


def recheck_image_witness(oracle: SchemeOracle, p: Branch, witness: dict) -> bool:
    """True when a recorded image-identity violation is real."""
    from .serialize import branch_from_json

    n = witness["n"]
    space = oracle.space
    fp, _ = induced_point(oracle, p)
    target = space.with_point(oracle.cut(p, n), fp)
    if witness["direction"] == "forward":
        b = branch_from_json(witness["member"])
        if not (b.same_as(p) or in_rsequences(b, p, n) is Tri.TRUE):
            return False
        try:
            return not space.member(oracle.point_map(b), target)
        except NoBasePoint:
            return True
    from .serialize import point_from_json

    y = point_from_json(witness["point"])
    if not space.member(y, oracle.cut(p, n)):
        return False
    return not any(
        in_rsequences(b, p, n) is Tri.TRUE and oracle.point_map(b) == y for b in oracle.branches(y)
    )


def leftmost_branch() -> Branch:
    return Branch((0,), AllZero())
