"""Cut sets, the topology generated by them, and bounded-depth axiom checks.

Subsets of the real line are ``portion`` interval unions over ``Fraction``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Callable

import portion as P

from .checks import CheckResult, Tri
from .errors import PreconditionFailed
from .scheme import decode, encode, vs_interval
from .seqtree import (
    AllZero,
    Antichain,
    Branch,
    FinSeq,
    all_finseqs,
    in_rsubtree,
    minimal_rsubtree_antichain,
    minimalize,
)

RealSet = P.Interval


def half_open(lo, hi) -> RealSet:
    return P.closedopen(-P.inf if lo is None else Fraction(lo), P.inf if hi is None else Fraction(hi))


def _outer_cells(i: int) -> RealSet:
    """Union of the unit cells whose level-1 index exceeds that of ``[i, i+1)``."""
    lower, upper = (-i, i + 1) if i >= 0 else (i, -i)
    return P.open(-P.inf, lower) | P.closedopen(upper, P.inf)


@dataclass(frozen=True)
class CutDesc:
    """cut(V^S, q, n): the open interval (x, j), plus the outer unit cells when n = 0."""

    x: Fraction
    hi: Fraction
    n: int

    @property
    def as_set(self) -> RealSet:
        inner = P.open(self.x, self.hi)
        if self.n == 0:
            return inner | _outer_cells(floor(self.x))
        return inner

    def contains(self, y: Fraction) -> bool:
        return Fraction(y) in self.as_set

    def with_point(self) -> RealSet:
        return self.as_set | P.singleton(self.x)


def cut_vs(q: Branch, n: int) -> CutDesc:
    x, _ = decode(q)
    node = vs_interval(q.restrict(max(n, 1)))
    return CutDesc(x, node.hi, n)


def cut_base_element(x: Fraction, m: int) -> RealSet:
    """The m-th member of cutBase at ``x``, built from the code of ``x`` alone."""
    x = Fraction(x)
    if m == 0:
        i = floor(x)
        return P.closedopen(x, i + 1) | _outer_cells(i)
    return half_open(x, vs_interval(encode(x, m)).hi)


def sigma_basic_member(z: Branch, p: Branch, n: int, depth_budget: int = 64) -> Tri:
    """Is ``z`` in cut(S, p, n) ∪ {p}."""
    if z.same_as(p):
        return Tri.TRUE
    from .seqtree import in_rsequences

    return in_rsequences(z, p, n, depth_budget)


def sample_sigma_member(x: Branch, m: int, rng: random.Random, spread: int = 4) -> Branch:
    """A random element of cut(S, x, m) ∪ {x}, drawn through the minimal antichain."""
    if rng.random() < 0.1:
        return x
    level = m + rng.randrange(spread)
    stem = x.restrict(level) + (x.at(level) + 1 + rng.randrange(3),)
    extra = tuple(rng.randrange(4) for _ in range(rng.randrange(3)))
    return Branch(stem + extra, AllZero())


def base_refinement(
    p: Branch,
    n: int,
    q: Branch,
    m: int,
    x: Branch,
    depth_budget: int = 64,
    samples: int = 50,
    seed: int = 0,
) -> int:
    """The index k with cut(S, x, k) ∪ {x} inside both basic sets around ``x``."""
    if sigma_basic_member(x, p, n, depth_budget) is not Tri.TRUE:
        raise PreconditionFailed(f"{x} is not in the basic set of ({p}, {n})")
    if sigma_basic_member(x, q, m, depth_budget) is not Tri.TRUE:
        raise PreconditionFailed(f"{x} is not in the basic set of ({q}, {m})")
    k = max(n, m)
    rng = random.Random(seed)
    for _ in range(samples):
        z = sample_sigma_member(x, k, rng)
        for base, level in ((p, n), (q, m)):
            if sigma_basic_member(z, base, level, depth_budget) is not Tri.TRUE:
                raise AssertionError(f"refinement sample {z} escapes ({base}, {level})")
    return k


# ---------------------------------------------------------------- Aqn brute force

AntichainFn = Callable[[Branch, int, int], Antichain]


class _Universe:
    """Branches ``s ⌢ 0^ω`` with lh(s) < depth and entries < bound, deduplicated."""

    def __init__(self, entry_bound: int, depth_bound: int):
        self.B, self.D = entry_bound, depth_bound
        seen: dict = {}
        for s in all_finseqs(entry_bound, depth_bound - 1):
            b = Branch(s, AllZero()).as_periodic()
            seen.setdefault(b.canonical, b)
        self.items: list[Branch] = list(seen.values())
        self.horizon = depth_bound + 1
        self.pref = [b.restrict(self.horizon) for b in self.items]
        # index-level relation tables, computed once through the library
        from .seqtree import lex_before

        self.lt = [[lex_before(a, b) is Tri.TRUE for b in self.items] for a in self.items]

    def rseq(self, p: int, q: int, n: int) -> bool:
        return self.lt[q][p] and self.pref[p][:n] == self.pref[q][:n]


def aqn_bruteforce(
    entry_bound: int,
    depth_bound: int,
    antichain_fn: AntichainFn = minimal_rsubtree_antichain,
) -> CheckResult:
    """Exhaustive check of items (i)-(iv) about rsequences, rsubtree and cut on S."""
    if entry_bound < 2 or depth_bound < 2:
        raise ValueError("need entry_bound >= 2 and depth_bound >= 2")
    U = _Universe(entry_bound, depth_bound)
    idx = range(len(U.items))
    levels = range(depth_bound + 1)
    enc = lambda i: list(U.pref[i])  # noqa: E731
    base = {"entry_bound": entry_bound, "depth_bound": depth_bound}
    counts = dict.fromkeys(("i", "ii", "iii", "iv"), 0)

    for q in idx:
        for n in levels:
            for m in range(n, depth_bound + 1):
                for p in idx:
                    counts["i"] += 1
                    if U.rseq(p, q, m) and not U.rseq(p, q, n):
                        return CheckResult.fails({"item": "i", "q": enc(q), "p": enc(p), "n": n, "m": m, **base})
    for q in idx:
        for p in idx:
            if not (U.lt[p][q] or p == q):
                continue
            for n in levels:
                if U.pref[p][:n] != U.pref[q][:n]:
                    continue
                for r in idx:
                    counts["ii"] += 1
                    if U.rseq(r, q, n) and not U.rseq(r, p, n):
                        return CheckResult.fails(
                            {"item": "ii", "q": enc(q), "p": enc(p), "r": enc(r), "n": n, **base}
                        )
    maxlen = depth_bound + 1
    finseqs = list(all_finseqs(entry_bound, maxlen))
    for q in idx:
        qb = U.items[q]
        for n in levels:
            subtree = {s for s in finseqs if in_rsubtree(s, qb, n)}
            for p in idx:
                counts["iii"] += 1
                via_subtree = any(U.pref[p][:k] in subtree for k in range(n + 1, maxlen + 1))
                if via_subtree != U.rseq(p, q, n):
                    return CheckResult.fails({"item": "iii", "q": enc(q), "p": enc(p), "n": n, **base})
            if n >= maxlen:
                continue
            chain = antichain_fn(qb, n, maxlen - 1)
            brute = minimalize(subtree)
            listed = {s for s in chain.members(entry_bound) if len(s) <= maxlen}
            if listed != brute:
                return CheckResult.fails(
                    {"item": "iv-antichain", "q": enc(q), "n": n, "extra": sorted(map(list, listed - brute)),
                     "missing": sorted(map(list, brute - listed)), **base}
                )
            counts["iv"] += 1
            fruit_union = {y for y in idx if U.rseq(y, q, n)}
            chain_union = {y for y in idx if chain.covers(U.items[y])}
            node = U.pref[q][:n]
            predicate = {
                y
                for y in idx
                if U.pref[y][:n] == node
                and any(U.pref[b] == U.pref[y] and U.rseq(b, q, n) for b in idx)
            }
            if not fruit_union == chain_union == predicate:
                odd = sorted((fruit_union ^ chain_union) | (fruit_union ^ predicate))[0]
                return CheckResult.fails({"item": "iv", "q": enc(q), "n": n, "y": enc(odd), **base})
    return CheckResult.holds(depth_bound, universe=len(U.items), instances=counts, **base)


def _minimal_member(s: FinSeq, q: Branch, n: int) -> bool:
    return in_rsubtree(s, q, n) and not any(in_rsubtree(s[:k], q, n) for k in range(len(s)))


def recheck_aqn_witness(witness: dict, antichain_fn: AntichainFn = minimal_rsubtree_antichain) -> bool:
    """Re-evaluate a recorded Aqn violation from scratch; True when it is real."""
    from .seqtree import in_rsequences

    def br(s):
        return Branch(tuple(s), AllZero())

    item = witness["item"]
    q, n = br(witness["q"]), witness["n"]
    if item == "i":
        p = br(witness["p"])
        return in_rsequences(p, q, witness["m"]) is Tri.TRUE and in_rsequences(p, q, n) is not Tri.TRUE
    if item == "ii":
        p, r = br(witness["p"]), br(witness["r"])
        return in_rsequences(r, q, n) is Tri.TRUE and in_rsequences(r, p, n) is not Tri.TRUE
    if item == "iii":
        p = br(witness["p"])
        maxlen = witness["depth_bound"] + 1
        hit = any(in_rsubtree(p.restrict(k), q, n) for k in range(n + 1, maxlen + 1))
        return hit != (in_rsequences(p, q, n) is Tri.TRUE)
    if item == "iv-antichain":
        extra = any(not _minimal_member(tuple(s), q, n) for s in witness["extra"])
        return extra or any(_minimal_member(tuple(s), q, n) for s in witness["missing"])
    if item == "iv":
        y = br(witness["y"])
        chain = antichain_fn(q, n, witness["depth_bound"])
        return chain.covers(y) != (in_rsequences(y, q, n) is Tri.TRUE)
    return False


# ---------------------------------------------------------------- (S2) evidence


def s2_check_vs(q: Branch, m_max: int) -> CheckResult:
    """Bounded evidence that ``q`` is a base branch of its decoded point."""
    x, exact = decode(q)
    widths: list[str] = []
    prev = None
    for m in range(1, m_max + 1):
        node = vs_interval(q.restrict(m))
        if not node.contains(x):
            return CheckResult.fails({"kind": "not-a-branch", "m": m, "x": x})
        if encode(x, m) != q.restrict(m):
            return CheckResult.fails({"kind": "code-mismatch", "m": m, "x": x})
        element = cut_vs(q, m).with_point()
        if element != half_open(x, node.hi) or element != cut_base_element(x, m):
            return CheckResult.fails({"kind": "not-basic", "m": m, "x": x})
        width = node.hi - x
        if width > Fraction(2) / 2**m:
            return CheckResult.fails({"kind": "width", "m": m, "x": x, "width": width})
        if prev is not None and not (element in prev and element != prev):
            return CheckResult.fails({"kind": "not-shrinking", "m": m, "x": x})
        prev = element
        widths.append(str(width))
    return CheckResult.holds(m_max, x=x, exact=exact, widths=widths)
