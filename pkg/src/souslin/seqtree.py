"""Finite sequences of naturals, rule-backed elements of Baire space, and ◁.

A finite sequence is a plain ``tuple[int, ...]``. An infinite sequence is a
:class:`Branch`: a finite prefix followed by a total tail rule. Every rule in
the closed set below produces an ultimately periodic word, which is what makes
equality and ◁ decidable without a depth cut-off.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import lcm
from typing import Iterable, Iterator, Union

from .checks import Tri
from .errors import InvalidArgs, OutOfRange

FinSeq = tuple[int, ...]


@dataclass(frozen=True)
class AllZero:
    pass


@dataclass(frozen=True)
class Constant:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise InvalidArgs(f"tail constant must be a natural, got {self.k}")


@dataclass(frozen=True)
class Periodic:
    period: FinSeq

    def __post_init__(self):
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise InvalidArgs("periodic tail needs a nonempty period")
        if any(e < 0 for e in self.period):
            raise InvalidArgs(f"period entries must be naturals: {self.period}")


@dataclass(frozen=True)
class Encoded:
    """Entries of the interval-scheme code of ``x``, at absolute positions."""

    x: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))


TailRule = Union[AllZero, Constant, Periodic, Encoded]


@dataclass(frozen=True)
class Branch:
    prefix: FinSeq = ()
    tail: TailRule = AllZero()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if any(e < 0 for e in self.prefix):
            raise InvalidArgs(f"prefix entries must be naturals: {self.prefix}")

    def at(self, i: int) -> int:
        if i < 0:
            raise OutOfRange(i)
        if i < len(self.prefix):
            return self.prefix[i]
        tail = self.tail
        if isinstance(tail, AllZero):
            return 0
        if isinstance(tail, Constant):
            return tail.k
        if isinstance(tail, Periodic):
            return tail.period[(i - len(self.prefix)) % len(tail.period)]
        from .scheme import encoding_stream

        return encoding_stream(tail.x).entry(i)

    def restrict(self, n: int) -> FinSeq:
        if n < 0:
            raise OutOfRange(n)
        if isinstance(self.tail, Encoded) and n > len(self.prefix):
            from .scheme import encoding_stream

            rest = encoding_stream(self.tail.x).entries(n)[len(self.prefix):]
            return self.prefix + tuple(rest)
        return tuple(self.at(i) for i in range(n))

    @cached_property
    def periodic_form(self) -> tuple[FinSeq, FinSeq]:
        """(stem, cycle) with ``self = stem ⌢ cycle ⌢ cycle ⌢ ...``; not minimal."""
        tail = self.tail
        if isinstance(tail, AllZero):
            return self.prefix, (0,)
        if isinstance(tail, Constant):
            return self.prefix, (tail.k,)
        if isinstance(tail, Periodic):
            return self.prefix, tail.period
        from .scheme import encoding_stream

        stem, cycle = encoding_stream(tail.x).periodic_form()
        p = len(self.prefix)
        if p <= len(stem):
            return self.prefix + stem[p:], cycle
        shift = (p - len(stem)) % len(cycle)
        return self.prefix, cycle[shift:] + cycle[:shift]

    @cached_property
    def canonical(self) -> tuple[FinSeq, FinSeq]:
        """Shortest stem and primitive cycle; equal words have equal forms."""
        stem, cycle = self.periodic_form
        n = len(cycle)
        for d in range(1, n + 1):
            if n % d == 0 and cycle == cycle[:d] * (n // d):
                cycle = cycle[:d]
                break
        while stem and stem[-1] == cycle[-1]:
            stem = stem[:-1]
            cycle = cycle[-1:] + cycle[:-1]
        return stem, cycle

    def as_periodic(self) -> "Branch":
        stem, cycle = self.canonical
        if cycle == (0,):
            return Branch(stem, AllZero())
        if len(cycle) == 1:
            return Branch(stem, Constant(cycle[0]))
        return Branch(stem, Periodic(cycle))

    def same_as(self, other: "Branch") -> bool:
        return self.canonical == other.canonical

    def eventually_zero(self) -> bool:
        return self.canonical[1] == (0,)

    def __str__(self):
        stem, cycle = self.periodic_form
        return "⟨" + ",".join(map(str, stem)) + ";(" + ",".join(map(str, cycle)) + ")^ω⟩"


Seq = Union[FinSeq, Branch]


def fmt_seq(s: FinSeq) -> str:
    return "⟨" + ",".join(str(e) for e in s) + "⟩"


def lh(s: Seq) -> int | None:
    """Length; ``None`` stands for ω."""
    return None if isinstance(s, Branch) else len(s)


def restrict(s: Seq, n: int) -> FinSeq:
    if isinstance(s, Branch):
        return s.restrict(n)
    if n < 0 or n > len(s):
        raise OutOfRange(f"restrict to {n} of a sequence of length {len(s)}")
    return tuple(s[:n])


def _entry(s: Seq, i: int) -> int:
    return s.at(i) if isinstance(s, Branch) else s[i]


def is_prefix(s: FinSeq, t: Seq) -> bool:
    n = len(s)
    if isinstance(t, Branch):
        return tuple(s) == t.restrict(n)
    return len(t) >= n and tuple(t[:n]) == tuple(s)


def is_proper_prefix(s: FinSeq, t: Seq) -> bool:
    return is_prefix(s, t) and (isinstance(t, Branch) or len(t) > len(s))


def _agreement_bound(a: Branch, b: Branch) -> int:
    sa, ca = a.periodic_form
    sb, cb = b.periodic_form
    return max(len(sa), len(sb)) + lcm(len(ca), len(cb))


def first_divergence(a: Seq, b: Seq, depth_budget: int | None = None) -> int | None:
    """Least n at which both are defined and differ, or ``None``.

    For two branches the scan stops at ``depth_budget`` and falls back on the
    symbolic agreement bound, so the answer is always exact.
    """
    la, lb = lh(a), lh(b)
    if la is not None or lb is not None:
        limit = min(x for x in (la, lb) if x is not None)
        for n in range(limit):
            if _entry(a, n) != _entry(b, n):
                return n
        return None
    scan = 64 if depth_budget is None else depth_budget + 1
    for n in range(scan):
        if a.at(n) != b.at(n):
            return n
    if a.canonical == b.canonical:
        return None
    for n in range(scan, _agreement_bound(a, b)):
        if a.at(n) != b.at(n):
            return n
    raise AssertionError("distinct ultimately periodic words must diverge within the bound")


def lex_before(a: Seq, b: Seq, depth_budget: int = 64) -> Tri:
    """``a ◁ b``: some n has a↾n = b↾n and a(n) < b(n).

    Every supported tail rule is decidable, so the answer is never UNKNOWN for
    the rules in this module.
    """
    n = first_divergence(a, b, depth_budget)
    if n is None:
        return Tri.FALSE
    return Tri.of(_entry(a, n) < _entry(b, n))


def lex_before_or_equal(a: Branch, b: Branch, depth_budget: int = 64) -> Tri:
    if a.same_as(b):
        return Tri.TRUE
    return lex_before(a, b, depth_budget)


@dataclass(frozen=True)
class RangeRecord:
    """All sequences ``stem ⌢ k`` with ``k >= start``."""

    stem: FinSeq
    start: int

    def contains_seq(self, s: FinSeq) -> bool:
        n = len(self.stem)
        return len(s) == n + 1 and tuple(s[:n]) == self.stem and s[n] >= self.start

    def is_below(self, s: Seq) -> bool:
        """Some element of the range is a prefix of ``s``."""
        n = len(self.stem)
        if lh(s) is not None and lh(s) <= n:
            return False
        return restrict(s, n) == self.stem and _entry(s, n) >= self.start

    def to_json(self) -> dict:
        return {"stem": list(self.stem), "from": self.start}


@dataclass(frozen=True)
class Antichain:
    records: tuple[RangeRecord, ...]

    def __iter__(self) -> Iterator[RangeRecord]:
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def contains_seq(self, s: FinSeq) -> bool:
        return any(r.contains_seq(s) for r in self.records)

    def covers(self, s: Seq) -> bool:
        """``s`` extends some element of the antichain."""
        return any(r.is_below(s) for r in self.records)

    def members(self, entry_bound: int) -> set[FinSeq]:
        out = set()
        for r in self.records:
            for k in range(r.start, entry_bound):
                out.add(r.stem + (k,))
        return out

    def to_json(self) -> list:
        return [r.to_json() for r in self.records]


def minimal_rsubtree_antichain(q: Branch, n: int, level_max: int) -> Antichain:
    """Minimal elements of rsubtree(q, n) of length at most ``level_max + 1``.

    Each level m in [n, level_max] contributes ``q↾m ⌢ k`` for k > q(m).
    """
    if n > level_max or n < 0:
        raise InvalidArgs(f"need 0 <= n <= level_max, got n={n}, level_max={level_max}")
    return Antichain(
        tuple(RangeRecord(q.restrict(m), q.at(m) + 1) for m in range(n, level_max + 1))
    )


def in_rsubtree(s: FinSeq, q: Branch, n: int, depth_budget: int = 64) -> bool:
    """Direct membership test for rsubtree(q, n), straight from the definition."""
    return (
        len(s) > n
        and tuple(s[:n]) == q.restrict(n)
        and lex_before(q, s, depth_budget) is Tri.TRUE
    )


def in_rsequences(p: Branch, q: Branch, n: int, depth_budget: int = 64) -> Tri:
    """Is p in rsequences(q, n), i.e. q ◁ p and p↾n = q↾n."""
    if p.restrict(n) != q.restrict(n):
        return Tri.FALSE
    return lex_before(q, p, depth_budget)


def all_finseqs(entry_bound: int, max_len: int) -> Iterator[FinSeq]:
    for length in range(max_len + 1):
        yield from product(range(entry_bound), repeat=length)


def minimalize(seqs: Iterable[FinSeq]) -> set[FinSeq]:
    seqs = set(seqs)
    return {s for s in seqs if not any(t != s and is_prefix(t, s) for t in seqs)}


def rsubtree_minimal_bruteforce(
    q: Branch, n: int, entry_bound: int, max_len: int
) -> set[FinSeq]:
    """Exhaustive oracle: minimal members of rsubtree(q, n) among bounded sequences."""
    members = [s for s in all_finseqs(entry_bound, max_len) if in_rsubtree(s, q, n)]
    return minimalize(members)
