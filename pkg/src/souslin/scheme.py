"""The Baire scheme S and the half-open interval scheme V^S on the real line.

V^S splits every node [i, j) geometrically toward j: child n is
``[j - (j-i)/2^n, j - (j-i)/2^(n+1))``. In coordinates relative to the parent
the child index of a point is the length of the leading run of 1-bits in its
binary expansion, which is what makes the encoder a small integer automaton.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Iterator

from .checks import CheckResult
from .errors import OutOfInterval
from .seqtree import Branch, Encoded, FinSeq, Periodic, is_prefix


def zig(n: int) -> int:
    """0, -1, 1, -2, 2, ... : the level-1 enumeration of the integers."""
    return n // 2 if n % 2 == 0 else -(n + 1) // 2


def level1_index(i: int) -> int:
    return 2 * i if i >= 0 else -2 * i - 1


@dataclass(frozen=True)
class IntervalDesc:
    """``[lo, hi)`` over the rationals; ``None`` bounds are infinite.

    ``IntervalDesc()`` is the whole line. Rays ``[lo, inf)`` are allowed
    because cut sets at level 0 are rays.
    """

    lo: Fraction | None = None
    hi: Fraction | None = None
    empty: bool = False

    def __post_init__(self):
        if self.empty:
            object.__setattr__(self, "lo", None)
            object.__setattr__(self, "hi", None)
            return
        for name in ("lo", "hi"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, Fraction(v))
        if self.lo is not None and self.hi is not None and not self.lo < self.hi:
            raise ValueError(f"half-open interval needs lo < hi, got [{self.lo}, {self.hi})")

    @classmethod
    def whole(cls) -> "IntervalDesc":
        return cls()

    @classmethod
    def empty_set(cls) -> "IntervalDesc":
        return cls(empty=True)

    @property
    def is_whole(self) -> bool:
        return not self.empty and self.lo is None and self.hi is None

    @property
    def length(self) -> Fraction | None:
        if self.empty:
            return Fraction(0)
        if self.lo is None or self.hi is None:
            return None
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        if self.empty:
            return False
        return (self.lo is None or self.lo <= x) and (self.hi is None or x < self.hi)

    def subset_of(self, other: "IntervalDesc") -> bool:
        if self.empty:
            return True
        if other.empty:
            return False
        lo_ok = other.lo is None or (self.lo is not None and other.lo <= self.lo)
        hi_ok = other.hi is None or (self.hi is not None and self.hi <= other.hi)
        return lo_ok and hi_ok

    def overlaps(self, other: "IntervalDesc") -> bool:
        if self.empty or other.empty:
            return False
        left = self.lo if other.lo is None else other.lo if self.lo is None else max(self.lo, other.lo)
        right = self.hi if other.hi is None else other.hi if self.hi is None else min(self.hi, other.hi)
        return left is None or right is None or left < right

    def __str__(self):
        if self.empty:
            return "∅"
        if self.is_whole:
            return "ℝ"
        lo = "-∞" if self.lo is None else str(self.lo)
        hi = "∞" if self.hi is None else str(self.hi)
        return f"[{lo}, {hi})"


WHOLE = IntervalDesc()


def split(parent: IntervalDesc, n: int) -> IntervalDesc:
    i, j = parent.lo, parent.hi
    w = j - i
    return IntervalDesc(j - w / 2**n, j - w / 2 ** (n + 1))


class VSScheme:
    """The concrete interval scheme; subclass and override ``interval`` to tamper."""

    name = "vs"

    def interval(self, a: FinSeq) -> IntervalDesc:
        return vs_interval(a)

    def children(self, a: FinSeq, k: int) -> list[IntervalDesc]:
        return [self.interval(tuple(a) + (n,)) for n in range(k)]


@lru_cache(maxsize=1 << 16)
def vs_interval(a: FinSeq) -> IntervalDesc:
    a = tuple(a)
    if not a:
        return WHOLE
    if len(a) == 1:
        z = zig(a[0])
        return IntervalDesc(Fraction(z), Fraction(z + 1))
    return split(vs_interval(a[:-1]), a[-1])


VS = VSScheme()


def child_index(parent: IntervalDesc, x: Fraction) -> int:
    """The n with ``x`` in child n of ``parent``, by exact doubling."""
    x = Fraction(x)
    if parent.lo is None or parent.hi is None or not parent.contains(x):
        raise OutOfInterval(f"{x} is not in {parent}")
    gap, width = parent.hi - x, parent.hi - parent.lo
    n = 0
    while 2 * gap <= width:
        gap *= 2
        n += 1
    return n


class EncodingStream:
    """Lazily grown code of a rational ``x`` in V^S.

    After the integer level the position of ``x`` inside the current node is
    ``a/d`` for a fixed ``d``; each level maps ``a`` to the next state, so the
    code is ultimately periodic and its period can be found by state reuse.
    """

    def __init__(self, x: Fraction):
        self.x = Fraction(x)
        base = floor(self.x)
        frac = self.x - base
        self.d = frac.denominator
        self._head = level1_index(base)
        self._states = [frac.numerator]  # state before position i+1
        self._entries = [self._head]
        self._seen = {frac.numerator: 0}
        self._cycle_at: tuple[int, int] | None = None

    @staticmethod
    def _step(a: int, d: int) -> tuple[int, int]:
        n = (d // (d - a)).bit_length() - 1
        return n, 2 ** (n + 1) * a - (2 ** (n + 1) - 2) * d

    def _grow(self) -> None:
        a = self._states[-1]
        n, nxt = self._step(a, self.d)
        self._entries.append(n)
        self._states.append(nxt)
        if self._cycle_at is None:
            if nxt in self._seen:
                self._cycle_at = (self._seen[nxt], len(self._states) - 1)
            else:
                self._seen[nxt] = len(self._states) - 1

    def entry(self, i: int) -> int:
        while len(self._entries) <= i:
            self._grow()
        return self._entries[i]

    def entries(self, n: int) -> FinSeq:
        if n > 0:
            self.entry(n - 1)
        return tuple(self._entries[:n])

    def relative_position(self, depth: int) -> Fraction:
        """Where ``x`` sits inside its depth-``depth`` node, as a fraction of its width."""
        if depth < 1:
            raise ValueError("relative position needs depth >= 1")
        self.entry(depth - 1)
        while len(self._states) < depth:
            self._grow()
        return Fraction(self._states[depth - 1], self.d)

    def periodic_form(self) -> tuple[FinSeq, FinSeq]:
        while self._cycle_at is None:
            self._grow()
        first, again = self._cycle_at
        # state index s precedes entry index s+1
        self.entry(again)
        return tuple(self._entries[: first + 1]), tuple(self._entries[first + 1 : again + 1])


@lru_cache(maxsize=4096)
def encoding_stream(x: Fraction) -> EncodingStream:
    return EncodingStream(Fraction(x))


def encode(x: Fraction, depth: int) -> FinSeq:
    return encoding_stream(Fraction(x)).entries(depth)


def encode_branch(x: Fraction) -> Branch:
    return Branch((), Encoded(Fraction(x)))


def periodic_branch(x: Fraction) -> Branch:
    """The code of ``x`` as an explicit stem plus cycle."""
    stem, cycle = encoding_stream(Fraction(x)).periodic_form()
    return Branch(stem, Periodic(cycle)).as_periodic()



def _affine(cycle: FinSeq) -> tuple[Fraction, Fraction]:
    """``(A, B)`` with one pass of ``cycle`` acting as ``s -> A + B s`` on relative positions."""
    A, B = Fraction(0), Fraction(1)
    for n in reversed(cycle):
        # s -> (1 - 2^-n) + 2^-(n+1) s, composed outermost-first
        A, B = (1 - Fraction(1, 2**n)) + Fraction(1, 2 ** (n + 1)) * A, Fraction(1, 2 ** (n + 1)) * B
    return A, B


def decode(b: Branch, depth_budget: int = 64) -> tuple[Fraction, bool]:
    """The fruit point of ``b`` in V^S and whether it is exact.

    Every supported tail has a closed-form limit, so ``exact`` is always true;
    the flag and budget are kept so callers can treat the result uniformly.
    """
    tail = b.tail
    if isinstance(tail, Encoded):
        p = len(b.prefix)
        if p == 0:
            return tail.x, True
        node = vs_interval(b.prefix)
        r = encoding_stream(tail.x).relative_position(p)
        return node.lo + node.length * r, True
    stem, cycle = b.periodic_form
    while len(stem) < 1:
        stem, cycle = stem + cycle[:1], cycle[1:] + cycle[:1]
    node = vs_interval(stem)
    A, B = _affine(cycle)
    return node.lo + node.length * (A / (1 - B)), True


def in_s_node(a: FinSeq, p: Branch) -> bool:
    """Membership in S_a."""
    return is_prefix(a, p)


def _nodes(depth: int, k: int) -> Iterator[FinSeq]:
    frontier: list[FinSeq] = [()]
    for _ in range(depth):
        yield from frontier
        frontier = [a + (n,) for a in frontier for n in range(k)]


def scheme_check_vs(depth: int, children: int, scheme: VSScheme = VS) -> CheckResult:
    """Exact check of the scheme axioms on all nodes of length at most ``depth``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    worst_step = Fraction(0)
    checked = 0
    for a in _nodes(depth, children):
        kids = scheme.children(a, children)
        names = [a + (n,) for n in range(children)]
        for s in range(children):
            for t in range(s + 1, children):
                if kids[s].overlaps(kids[t]):
                    return CheckResult.fails(
                        {"kind": "overlap", "parent": list(a), "node": list(names[t]), "with": list(names[s])}
                    )
        if not a:
            ints = sorted(k.lo for k in kids)
            if any(k.length != 1 or k.lo.denominator != 1 for k in kids) or ints != [
                ints[0] + i for i in range(len(ints))
            ]:
                return CheckResult.fails({"kind": "root-partition", "parent": [], "children": children})
            continue
        parent = scheme.interval(a)
        i, j = parent.lo, parent.hi
        w = j - i
        if kids[0].lo != i:
            return CheckResult.fails({"kind": "left-end", "parent": list(a), "node": list(names[0])})
        for n in range(children):
            kid = kids[n]
            if not kid.subset_of(parent):
                return CheckResult.fails({"kind": "escape", "parent": list(a), "node": list(names[n])})
            if n + 1 < children and kid.hi != kids[n + 1].lo:
                return CheckResult.fails({"kind": "gap", "parent": list(a), "node": list(names[n + 1])})
            if j - kid.hi != w / 2 ** (n + 1):
                return CheckResult.fails({"kind": "residual", "parent": list(a), "node": list(names[n])})
            if kid.length > Fraction(2) / 2 ** len(names[n]):
                return CheckResult.fails({"kind": "length", "node": list(names[n])})
            if kid.length > Fraction(1, len(a) + 1):
                return CheckResult.fails({"kind": "step", "parent": list(a), "node": list(names[n])})
            worst_step = max(worst_step, kid.length * (len(a) + 1))
        checked += 1
    return CheckResult.holds(depth, nodes_checked=checked, max_step_ratio=str(worst_step))


def recheck_scheme_witness(witness: dict, scheme: VSScheme = VS) -> bool:
    """True when the violation recorded in ``witness`` is real for ``scheme``."""
    kind = witness["kind"]
    if kind == "overlap":
        return scheme.interval(tuple(witness["node"])).overlaps(scheme.interval(tuple(witness["with"])))
    if kind == "left-end":
        return scheme.interval(tuple(witness["node"])).lo != scheme.interval(tuple(witness["parent"])).lo
    if kind == "step":
        return scheme.interval(tuple(witness["node"])).length > Fraction(1, len(witness["parent"]) + 1)
    if kind == "length":
        node = tuple(witness["node"])
        return scheme.interval(node).length > Fraction(2) / 2 ** len(node)
    if kind == "gap":
        node = tuple(witness["node"])
        prev = node[:-1] + (node[-1] - 1,)
        return scheme.interval(prev).hi != scheme.interval(node).lo
    if kind == "escape":
        return not scheme.interval(tuple(witness["node"])).subset_of(scheme.interval(tuple(witness["parent"])))
    if kind == "residual":
        node, parent = tuple(witness["node"]), scheme.interval(tuple(witness["parent"]))
        return parent.hi - scheme.interval(node).hi != parent.length / 2 ** (node[-1] + 1)
    return False

