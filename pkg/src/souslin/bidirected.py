"""The double-arrow space with exact order logic, and R-bidirectedness on it.

A set of double-arrow points is a :class:`DASet`: a pair of rational interval
unions, the values carried on side 0 and on side 1. Every canonical order
interval has such a description, so every Q-quantified condition below turns
into interval algebra on ``Fraction`` endpoints.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

import portion as P

from .checks import CheckResult, rat
from .errors import InvalidArgs, WrongSide

SIDE0_DOMAIN = P.openclosed(Fraction(0), Fraction(1))
SIDE1_DOMAIN = P.closedopen(Fraction(0), Fraction(1))


def is_dyadic(x: Fraction) -> bool:
    d = Fraction(x).denominator
    return d & (d - 1) == 0


@dataclass(frozen=True, order=True)
class DAPoint:
    """``(x, side)``; the dataclass ordering is the lexicographic order."""

    x: Fraction
    side: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        if self.side not in (0, 1):
            raise InvalidArgs(f"side must be 0 or 1, got {self.side}")
        ok = 0 < self.x <= 1 if self.side == 0 else 0 <= self.x < 1
        if not ok:
            raise InvalidArgs(f"({self.x}, {self.side}) is not a point of the double-arrow space")

    def to_json(self) -> dict:
        return {"x": rat(self.x), "side": self.side}

    @classmethod
    def from_json(cls, data: dict) -> "DAPoint":
        return cls(Fraction(data["x"]), int(data["side"]))

    def __str__(self):
        return f"({self.x},{self.side})"


def lex_lt(p: DAPoint, q: DAPoint) -> bool:
    return (p.x, p.side) < (q.x, q.side)


@dataclass(frozen=True)
class DASet:
    side0: P.Interval = field(default_factory=P.empty)
    side1: P.Interval = field(default_factory=P.empty)

    def __post_init__(self):
        object.__setattr__(self, "side0", self.side0 & SIDE0_DOMAIN)
        object.__setattr__(self, "side1", self.side1 & SIDE1_DOMAIN)

    @classmethod
    def whole(cls) -> "DASet":
        return cls(SIDE0_DOMAIN, SIDE1_DOMAIN)

    @classmethod
    def of_points(cls, points: Iterable[DAPoint]) -> "DASet":
        s0, s1 = P.empty(), P.empty()
        for z in points:
            if z.side == 0:
                s0 |= P.singleton(z.x)
            else:
                s1 |= P.singleton(z.x)
        return cls(s0, s1)

    def part(self, side: int) -> P.Interval:
        return self.side0 if side == 0 else self.side1

    def __contains__(self, z: DAPoint) -> bool:
        return z.x in self.part(z.side)

    def __or__(self, other: "DASet") -> "DASet":
        return DASet(self.side0 | other.side0, self.side1 | other.side1)

    def __and__(self, other: "DASet") -> "DASet":
        return DASet(self.side0 & other.side0, self.side1 & other.side1)

    def __sub__(self, other: "DASet") -> "DASet":
        return DASet(self.side0 - other.side0, self.side1 - other.side1)

    def __le__(self, other: "DASet") -> bool:
        return (self - other).is_empty

    @property
    def is_empty(self) -> bool:
        return self.side0.empty and self.side1.empty

    def to_json(self) -> dict:
        return {"side0": interval_to_json(self.side0), "side1": interval_to_json(self.side1)}

    @classmethod
    def from_json(cls, data: dict) -> "DASet":
        return cls(interval_from_json(data["side0"]), interval_from_json(data["side1"]))

    def __str__(self):
        return f"side0 {self.side0} | side1 {self.side1}"


def _bound_json(v):
    if v == P.inf:
        return "inf"
    if v == -P.inf:
        return "-inf"
    return rat(v)


def _bound_parse(v):
    if v == "inf":
        return P.inf
    if v == "-inf":
        return -P.inf
    return Fraction(v)


def interval_to_json(s: P.Interval) -> list:
    return [
        [atom.left == P.CLOSED, _bound_json(atom.lower), _bound_json(atom.upper), atom.right == P.CLOSED]
        for atom in s
        if not atom.empty
    ]


def interval_from_json(data: list) -> P.Interval:
    out = P.empty()
    for lc, lo, hi, rc in data:
        out |= P.Interval.from_atomic(
            P.CLOSED if lc else P.OPEN, _bound_parse(lo), _bound_parse(hi), P.CLOSED if rc else P.OPEN
        )
    return out


Bound = tuple[Fraction, int]


@dataclass(frozen=True)
class OrderInterval:
    """An interval of the lexicographic order.

    Bounds are ``(x, side)`` pairs, which need not be points of the space:
    ``(1, 1)`` and ``(0, 0)`` act as virtual ends. ``None`` is unbounded.
    """

    lower: Bound | None
    upper: Bound | None
    lower_closed: bool = False
    upper_closed: bool = False

    def _trace(self, side: int) -> P.Interval:
        lo, hi = -P.inf, P.inf
        lc = hc = False
        if self.lower is not None:
            a, sa = Fraction(self.lower[0]), self.lower[1]
            lo = a
            lc = side >= sa if self.lower_closed else side > sa
        if self.upper is not None:
            b, sb = Fraction(self.upper[0]), self.upper[1]
            hi = b
            hc = side <= sb if self.upper_closed else side < sb
        if lo != -P.inf and hi != P.inf and (lo > hi or (lo == hi and not (lc and hc))):
            return P.empty()
        return P.Interval.from_atomic(P.CLOSED if lc else P.OPEN, lo, hi, P.CLOSED if hc else P.OPEN)

    def to_set(self) -> DASet:
        return DASet(self._trace(0), self._trace(1))

    def __contains__(self, z: DAPoint) -> bool:
        return z in self.to_set()

    def to_json(self) -> dict:
        def b(v):
            return None if v is None else {"x": rat(v[0]), "side": v[1]}

        return {"lower": b(self.lower), "upper": b(self.upper), "lower_closed": self.lower_closed,
                "upper_closed": self.upper_closed}

    def __str__(self):
        lb = "[" if self.lower_closed else "("
        rb = "]" if self.upper_closed else ")"
        lo = "-∞" if self.lower is None else f"({self.lower[0]},{self.lower[1]})"
        hi = "+∞" if self.upper is None else f"({self.upper[0]},{self.upper[1]})"
        return f"{lb}{lo}, {hi}{rb}"


def nbhd_basic(z: DAPoint, k: int) -> OrderInterval:
    """The k-th canonical open neighborhood of ``z``; nested decreasing in k."""
    if z.side == 1:
        b = z.x + (1 - z.x) / 2**k
        return OrderInterval((z.x, 1), (b, 1), lower_closed=True)
    a = z.x * (1 - Fraction(1, 2**k))
    return OrderInterval((a, 0), (z.x, 1))


# ---------------------------------------------------------------- right and left germs


def _atoms(s: P.Interval) -> list:
    return [a for a in s if not a.empty]


def right_germ(s: P.Interval, x: Fraction, holes=None) -> Fraction | None:
    """Some eps > 0 with (x, x+eps) inside ``s``, or None.

    ``holes`` is a predicate on points that the surrounding space lacks; gaps
    made only of such isolated points are ignored.
    """
    atoms = _atoms(s & P.open(x, P.inf))
    if not atoms or atoms[0].lower != x:
        return None
    end = atoms[0].upper
    for nxt in atoms[1:]:
        if holes is not None and nxt.lower == end and holes(end):
            end = nxt.upper
        else:
            break
    return (end - x) if end != P.inf else Fraction(1)


def left_germ(s: P.Interval, x: Fraction, holes=None) -> Fraction | None:
    atoms = _atoms(s & P.open(-P.inf, x))
    if not atoms or atoms[-1].upper != x:
        return None
    start = atoms[-1].lower
    for prev in reversed(atoms[:-1]):
        if holes is not None and prev.upper == start and holes(start):
            start = prev.lower
        else:
            break
    return (x - start) if start != -P.inf else Fraction(1)


# ---------------------------------------------------------------- relations


class Relation:
    """A binary relation with closed-form cones ``z↑`` and ``z↓``."""

    name: str

    def __call__(self, p: DAPoint, q: DAPoint) -> bool:
        raise NotImplementedError

    def up(self, z: DAPoint) -> DASet:
        raise NotImplementedError

    def down(self, z: DAPoint) -> DASet:
        raise NotImplementedError

    def Q(self) -> DASet:
        raise NotImplementedError


class LexRelation(Relation):
    name = "lex"

    def __call__(self, p, q):
        return lex_lt(p, q)

    def up(self, z):
        return OrderInterval((z.x, z.side), None).to_set()

    def down(self, z):
        return OrderInterval(None, (z.x, z.side)).to_set()

    def Q(self):
        return DASet.whole()


def L_m_M(z: DAPoint) -> tuple[frozenset, Fraction, Fraction]:
    """Real limits of side-1 sequences converging to a side-0 point: ``({x}, x, x)``."""
    if z.side != 0:
        raise WrongSide(f"{z} lies in the dense copy of [0,1); L is defined off it")
    return frozenset({z.x}), z.x, z.x


def M(z: DAPoint) -> Fraction:
    return L_m_M(z)[2]


def r_constructed(p: DAPoint, q: DAPoint) -> bool:
    if p.side == 1 and q.side == 1:
        return p.x < q.x
    if p.side == 1 and q.side == 0:
        return p.x < M(q)
    if p.side == 0 and q.side == 1:
        return M(p) <= q.x
    # two points off [0,1): no clause applies
    return False


class ConstructedRelation(Relation):
    name = "constructed"

    def __call__(self, p, q):
        return r_constructed(p, q)

    def up(self, z):
        u = z.x
        if z.side == 1:
            return DASet(P.openclosed(u, 1), P.open(u, 1))
        return DASet(P.empty(), P.closedopen(u, 1))

    def down(self, z):
        u = z.x
        if z.side == 1:
            return DASet(P.openclosed(0, u), P.closedopen(0, u))
        return DASet(P.empty(), P.closedopen(0, u))

    def Q(self):
        return DASet(P.empty(), SIDE1_DOMAIN)


RELATIONS: dict[str, Relation] = {"lex": LexRelation(), "constructed": ConstructedRelation()}


def relation(name: str) -> Relation:
    try:
        return RELATIONS[name]
    except KeyError:
        raise InvalidArgs(f"unknown relation {name!r}; choose lex or constructed") from None


# ---------------------------------------------------------------- the spaces


class DoubleArrowSpace:
    """The double-arrow space or one of its subspaces used by the W scheme.

    ``drop_max`` removes (1, 0); ``drop_dyadic_side0`` additionally removes
    every side-0 point with a dyadic value.
    """

    def __init__(self, drop_max: bool = False, drop_dyadic_side0: bool = False, rel: Relation | None = None):
        self.drop_max = drop_max or drop_dyadic_side0
        self.drop_dyadic_side0 = drop_dyadic_side0
        self.R = rel or ConstructedRelation()
        self.name = "X''" if drop_dyadic_side0 else "X'" if drop_max else "X"

    # membership -----------------------------------------------------------
    def excluded(self, z: DAPoint) -> bool:
        if z.side == 1:
            return False
        if self.drop_dyadic_side0:
            return is_dyadic(z.x)
        return self.drop_max and z.x == 1

    def _hole0(self, x: Fraction) -> bool:
        return self.drop_dyadic_side0 and is_dyadic(x) or self.drop_max and x == 1

    @property
    def whole(self) -> DASet:
        s0 = P.open(0, 1) if self.drop_max else SIDE0_DOMAIN
        return DASet(s0, SIDE1_DOMAIN)

    def member(self, z: DAPoint, s: DASet) -> bool:
        return not self.excluded(z) and z in s

    def residue(self, s: DASet) -> DASet:
        """The part of ``s`` that survives in the space, up to isolated excluded points."""
        return s & self.whole

    def subset(self, a: DASet, b: DASet) -> bool:
        diff = (a - b) & self.whole
        if diff.side1.empty and diff.side0.empty:
            return True
        if not diff.side1.empty:
            return False
        return all(atom.lower == atom.upper and self._hole0(atom.lower) for atom in _atoms(diff.side0))

    def first_escape(self, a: DASet, b: DASet) -> DAPoint | None:
        """A point of the space in ``a`` but not in ``b``, if any."""
        diff = (a - b) & self.whole
        for side in (1, 0):
            for atom in _atoms(diff.part(side)):
                for x in _interior_samples(atom):
                    z = DAPoint(x, side)
                    if not self.excluded(z):
                        return z
        return None

    def with_point(self, s: DASet, z: DAPoint) -> DASet:
        return s | DASet.of_points([z])

    def is_neighborhood(self, s: DASet, z: DAPoint) -> bool:
        """Exact: does ``s`` contain some canonical neighborhood of ``z`` (in the space)."""
        if not self.member(z, s):
            return False
        x = z.x
        if z.side == 1:
            return right_germ(s.side1, x) is not None and right_germ(s.side0, x, self._hole0) is not None
        return left_germ(s.side1, x) is not None and left_germ(s.side0, x, self._hole0) is not None

    def canonical_nbhd(self, z: DAPoint, k: int) -> DASet:
        return nbhd_basic(z, k).to_set() & self.whole

    def neighborhood_index(self, s: DASet, z: DAPoint, limit: int = 256) -> int | None:
        for k in range(limit):
            if self.subset(self.canonical_nbhd(z, k), s):
                return k
        return None

    # bidirected structure ---------------------------------------------------
    def in_A_r(self, z: DAPoint) -> bool:
        return z.side == 1

    def A_r(self) -> DASet:
        return DASet(P.empty(), SIDE1_DOMAIN)

    def A_l(self) -> DASet:
        return DASet(self.whole.side0, P.empty())

    def Q(self) -> DASet:
        return self.R.Q() & self.whole

    def cone_up(self, z: DAPoint) -> DASet:
        return self.R.up(z)

    def cone_down(self, z: DAPoint) -> DASet:
        return self.R.down(z)

    def pick_point(self, s: DASet, right: bool) -> DAPoint | None:
        """Deterministic choice of a point of ``s`` in A_r (right) or A_l (left).

        A_r picks the midpoint of the first side-1 atom; A_l picks the
        non-dyadic rational of least denominator strictly inside the first
        side-0 atom.
        """
        if right:
            atoms = _atoms(s.side1 & SIDE1_DOMAIN)
            if not atoms:
                return None
            a = atoms[0]
            return DAPoint(a.lower if a.lower == a.upper else (a.lower + a.upper) / 2, 1)
        for atom in _atoms(s.side0 & self.whole.side0):
            x = simplest_non_dyadic(atom.lower, atom.upper)
            if x is not None:
                return DAPoint(x, 0)
        return None

    def describe(self) -> str:
        return {"X": "double-arrow space", "X'": "double-arrow space minus (1,0)",
                "X''": "double-arrow space minus all side-0 points with dyadic value"}[self.name]


def _interior_samples(atom) -> Iterator[Fraction]:
    lo, hi = atom.lower, atom.upper
    if lo == hi:
        yield lo
        return
    for d in range(2, 64):
        for n in range(1, d):
            yield lo + (hi - lo) * Fraction(n, d)


def _simplest(lo: Fraction, hi) -> Fraction:
    """The rational of least denominator (then least value) in the open interval (lo, hi)."""
    n = lo.__floor__() + 1
    if hi == P.inf or n < hi:
        return Fraction(n)
    base = n - 1
    lo, hi = lo - base, hi - base
    inner = _simplest(1 / hi, P.inf if lo == 0 else 1 / lo)
    return base + 1 / inner


def simplest_non_dyadic(lo: Fraction, hi: Fraction) -> Fraction | None:
    """The non-dyadic rational of least denominator (then least value) in (lo, hi).

    Best-first search: every fraction inside an open interval has a
    denominator at least that of the interval's simplest fraction, so
    splitting at dyadic hits and always expanding the cheapest interval
    reaches the answer first.
    """
    if not lo < hi:
        return None
    first = _simplest(lo, hi)
    heap = [(first.denominator, first, lo, hi)]
    while heap:
        _, s, a, b = heapq.heappop(heap)
        if not is_dyadic(s):
            return s
        for u, v in ((a, s), (s, b)):
            t = _simplest(u, v)
            heapq.heappush(heap, (t.denominator, t, u, v))
    return None


def dyadic_grid(n: int) -> list[DAPoint]:
    """``n`` points spread evenly over the dyadic points of finest sufficient level."""
    e = 0
    while 2 ** (e + 1) < n:
        e += 1
    pts = sorted(
        [DAPoint(Fraction(j, 2**e), 1) for j in range(2**e)]
        + [DAPoint(Fraction(j, 2**e), 0) for j in range(1, 2**e + 1)]
    )
    if n >= len(pts):
        return pts
    return [pts[(i * len(pts)) // n] for i in range(n)]


# ---------------------------------------------------------------- looks right / left


@dataclass
class BidirCheckReport:
    point: DAPoint
    direction: str
    relation: str
    k_max: int
    clause_a_k: int | None = None
    witnesses: list = field(default_factory=list)  # (k, y, k') triples
    failure: dict | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def to_json(self) -> dict:
        return {
            "point": self.point.to_json(),
            "direction": self.direction,
            "relation": self.relation,
            "k_max": self.k_max,
            "clause_a_k": self.clause_a_k,
            "witnesses": [{"k": k, "y": y.to_json(), "inner_k": kk} for k, y, kk in self.witnesses],
            "failure": self.failure,
        }


def _candidates(u: DASet, z: DAPoint, q: DASet) -> Iterator[DAPoint]:
    """Points of ``(u - {z}) ∩ q``, nearest to ``z`` first, side 1 before side 0."""
    pool = (u - DASet.of_points([z])) & q
    for side in (1, 0):
        for atom in _atoms(pool.part(side)):
            lo, hi = atom.lower, atom.upper
            if lo == hi:
                yield DAPoint(lo, side)
                continue
            for t in range(1, 8):
                for target in (z.x, lo, hi):
                    if target < lo or target > hi:
                        continue
                    step = (hi - lo) / 2 ** (t + 1)
                    for y in (target + step, target - step):
                        if lo < y < hi:
                            yield DAPoint(y, side)


def looks_check(
    z: DAPoint,
    direction: str,
    k_max: int,
    rel: Relation | str = "lex",
    space: DoubleArrowSpace | None = None,
) -> BidirCheckReport:
    """Both clauses of "looks to the R-right (left) along Q", decided by interval algebra."""
    R = relation(rel) if isinstance(rel, str) else rel
    space = space or DoubleArrowSpace(rel=R)
    if direction not in ("right", "left"):
        raise InvalidArgs(f"direction must be right or left, got {direction!r}")
    right = direction == "right"
    Q = R.Q() & space.whole
    rep = BidirCheckReport(z, direction, R.name, k_max)
    wanted = R.up(z) if right else R.down(z)
    for k in range(k_max + 1):
        u = space.canonical_nbhd(z, k)
        if space.subset((u - DASet.of_points([z])) & Q, wanted):
            rep.clause_a_k = k
            break
    if rep.clause_a_k is None:
        rep.failure = {"clause": "a", "point": z.to_json(), "direction": direction, "relation": R.name, "k_max": k_max}
        return rep
    for k in range(k_max + 1):
        u = space.canonical_nbhd(z, k)
        found = None
        for y in _candidates(u, z, Q):
            if space.excluded(y):
                continue
            cone = R.down(y) if right else R.up(y)
            if space.is_neighborhood(cone, z):
                found = (k, y, space.neighborhood_index(cone, z))
                break
        if found is None:
            rep.failure = {"clause": "b", "point": z.to_json(), "direction": direction, "relation": R.name, "k": k}
            return rep
        rep.witnesses.append(found)
    return rep


def recheck_looks_failure(failure: dict, space: DoubleArrowSpace | None = None) -> bool:
    """True when the recorded looks-failure is real: clause (a) has no canonical witness."""
    R = relation(failure["relation"])
    space = space or DoubleArrowSpace(rel=R)
    z = DAPoint.from_json(failure["point"])
    right = failure["direction"] == "right"
    wanted = R.up(z) if right else R.down(z)
    Q = R.Q() & space.whole
    if failure["clause"] == "a":
        for k in range(failure["k_max"] + 1):
            u = space.canonical_nbhd(z, k)
            bad = space.first_escape((u - DASet.of_points([z])) & Q, wanted)
            if bad is None:
                return False
            # the escaping point lies in U on the wrong side
            if (R(z, bad) if right else R(bad, z)):
                return False
        return True
    return not looks_check(z, failure["direction"], failure["k"], R, space).ok


def verify_report(rep: BidirCheckReport, space: DoubleArrowSpace | None = None) -> bool:
    """Re-verify every recorded witness of a passing report."""
    R = relation(rep.relation)
    space = space or DoubleArrowSpace(rel=R)
    right = rep.direction == "right"
    z = rep.point
    for k, y, kk in rep.witnesses:
        if y == z or y not in space.canonical_nbhd(z, k) or y not in R.Q():
            return False
        cone = R.down(y) if right else R.up(y)
        if kk is None or not space.subset(space.canonical_nbhd(z, kk), cone):
            return False
    return True


def bidirected_check(
    rel: Relation | str,
    samples: list[DAPoint],
    k_max: int,
    assignment: str = "standard",
    space: DoubleArrowSpace | None = None,
) -> tuple[CheckResult, list[BidirCheckReport]]:
    """Partition, density and the looks conditions on sampled points.

    ``standard`` puts the side-1 points in A_r and side-0 points in A_l;
    ``flipped`` swaps them and exists to exercise failure reporting.
    """
    R = relation(rel) if isinstance(rel, str) else rel
    space = space or DoubleArrowSpace(rel=R)
    flipped = assignment == "flipped"
    reports: list[BidirCheckReport] = []
    for z in sorted(samples):
        if space.excluded(z):
            continue
        for k in range(k_max + 1):
            u = space.canonical_nbhd(z, k)
            if space.residue(u).side0.empty or u.side1.empty:
                return CheckResult.fails({"kind": "density", "point": z.to_json(), "k": k}), reports
        in_right = (z.side == 1) != flipped
        rep = looks_check(z, "right" if in_right else "left", k_max, R, space)
        reports.append(rep)
        if not rep.ok:
            return CheckResult.fails(rep.failure, assignment=assignment), reports
    return CheckResult.holds(k_max, relation=R.name, points=len(reports), assignment=assignment), reports


# ---------------------------------------------------------------- L, m, M and the side-0 checks


def validate_L(z: DAPoint, sequences: int = 20, k_max: int = 12) -> CheckResult:
    """Sampling oracle for L(z) = {x}: 20 side-1 sequences increasing to x converge to z."""
    L, m, Mz = L_m_M(z)
    x = z.x
    space = DoubleArrowSpace()
    for s in range(sequences):
        c = Fraction(1, s + 1)
        rate: Callable[[int], Fraction] = (lambda j: Fraction(1, 2**j)) if s % 2 == 0 else (lambda j: Fraction(1, 2**j * (j + 1)))
        seq = lambda j: DAPoint(x * (1 - c * rate(j)), 1)  # noqa: E731
        for k in range(k_max + 1):
            u = space.canonical_nbhd(z, k)
            # rate(j) <= 2^-j, so from j = k on every term sits in U_k
            for j in range(k, k + 16):
                if seq(j) not in u:
                    return CheckResult.fails({"kind": "no-convergence", "point": z.to_json(), "seq": s, "k": k, "j": j})
        # real limit: |x - seq(j)| <= x 2^-j
        if not abs(x - seq(40).x) <= x / 2**40:
            return CheckResult.fails({"kind": "real-limit", "point": z.to_json(), "seq": s})
        # a sequence from above never enters U_1 of z
        above = DAPoint(x + (1 - x) / 2 ** (s + 2), 1) if x < 1 else None
        if above is not None and above in space.canonical_nbhd(z, 1):
            return CheckResult.fails({"kind": "above-converges", "point": z.to_json(), "seq": s})
    return CheckResult.holds(k_max, L=[rat(v) for v in L], m=rat(m), M=rat(Mz))


def technical_lemma_check(z: DAPoint, k_max: int = 8) -> CheckResult:
    """Items (i)-(v) about M(z) and m(z) on canonical neighborhoods, checked exactly."""
    _, m, Mz = L_m_M(z)
    space = DoubleArrowSpace()
    trace = [space.canonical_nbhd(z, k).side1 for k in range(k_max + 1)]
    probes = sorted({Fraction(j, 16) for j in range(16)} | {m / 2, m * Fraction(15, 16), m} - {Fraction(1)})
    probes = [y for y in probes if 0 <= y < 1]
    for k in range(1, k_max + 1):
        if not trace[k] in P.closedopen(0, Mz):
            return CheckResult.fails({"item": "i", "point": z.to_json(), "k": k})
    for k in range(k_max + 1):
        t = trace[k]
        if t.atomic and t.left == P.CLOSED and t.right == P.OPEN and not Mz <= t.upper:
            return CheckResult.fails({"item": "ii", "point": z.to_json(), "k": k})
        # shifted order intervals ((a,0),(b,1)) around z, b > x, have trace [a, b)
        for extra in (Fraction(1, 2**(k + 2)),):
            b = min(z.x + extra, Fraction(1))
            a = z.x * (1 - Fraction(1, 2**k))
            wider = OrderInterval((a, 0), (b, 1)).to_set().side1
            if wider.atomic and not wider.empty and not Mz <= wider.upper:
                return CheckResult.fails({"item": "ii", "point": z.to_json(), "k": k, "shifted": True})
    for y in probes:
        if y < m and not any(P.singleton(y) < space.canonical_nbhd(z, k).side1 for k in range(64)):
            return CheckResult.fails({"item": "iii", "point": z.to_json(), "y": rat(y)})
        for k in range(k_max + 1):
            if not trace[k].empty and P.singleton(y) < trace[k] and not y < m:
                return CheckResult.fails({"item": "iv", "point": z.to_json(), "y": rat(y), "k": k})
    for k in range(k_max + 1):
        t = trace[k]
        if t.empty or not t.lower < m:
            return CheckResult.fails({"item": "v", "point": z.to_json(), "k": k})
    return CheckResult.holds(k_max, point=z.to_json(), m=rat(m), M=rat(Mz))


# ---------------------------------------------------------------- Sorgenfrey line as a space


class SorgenfreySpace:
    """The Sorgenfrey line with its natural order as R and no left-looking part."""

    name = "S"

    def __init__(self):
        self.whole = P.open(-P.inf, P.inf)

    def member(self, x: Fraction, s: P.Interval) -> bool:
        return Fraction(x) in s

    def excluded(self, x) -> bool:
        return False

    def subset(self, a: P.Interval, b: P.Interval) -> bool:
        return a in b

    def with_point(self, s: P.Interval, x: Fraction) -> P.Interval:
        return s | P.singleton(Fraction(x))

    def canonical_nbhd(self, x: Fraction, k: int) -> P.Interval:
        return P.closedopen(Fraction(x), Fraction(x) + Fraction(1, 2**k))

    def is_neighborhood(self, s: P.Interval, x: Fraction) -> bool:
        return Fraction(x) in s and right_germ(s, Fraction(x)) is not None

    def neighborhood_index(self, s, x, limit: int = 256) -> int | None:
        for k in range(limit):
            if self.canonical_nbhd(x, k) in s:
                return k
        return None

    def in_A_r(self, x) -> bool:
        return True

    def A_r(self) -> P.Interval:
        return self.whole

    def A_l(self) -> P.Interval:
        return P.empty()

    def Q(self) -> P.Interval:
        return self.whole

    def cone_up(self, x):
        return P.open(Fraction(x), P.inf)

    def cone_down(self, x):
        return P.open(-P.inf, Fraction(x))

    def pick_point(self, s: P.Interval, right: bool):
        if not right:
            return None
        atom = _atoms(s)[0]
        lo = atom.lower if atom.lower != -P.inf else atom.upper - 1
        hi = atom.upper if atom.upper != P.inf else lo + 1
        return (lo + hi) / 2 if lo != hi else lo

    def describe(self) -> str:
        return "Sorgenfrey line"


def precheck_space(space) -> CheckResult:
    """Cheap necessary condition for bidirectedness: both A_r and A_l are nonempty and dense."""
    if isinstance(space, SorgenfreySpace):
        return CheckResult.fails({"kind": "A_l-not-dense", "space": space.name, "reason": "A_l is empty"})
    if space.A_r().is_empty or space.residue(space.A_l()).is_empty:
        return CheckResult.fails({"kind": "empty-part", "space": space.name})
    return CheckResult.holds(0, space=space.name)
