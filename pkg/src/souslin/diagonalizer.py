"""The diagonal recursion against a candidate Sorgenfrey base on a bidirected space.

Each step picks a point x of V_{p_n} on the looking side for its parity,
asks the oracle for a base branch q of x through p_n, shrinks the cut sets
of q into V_{p_n}, picks a Q-point x_n in the cut together with one of its
branches t_n, and extends p_n along q to a node p_{n+1} that lies on the
R-correct side of x_n. Either every step succeeds, or an oracle query fails
and the failure is reported with a certificate.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import portion as P

from .bidirected import DAPoint, DASet, DoubleArrowSpace, precheck_space, relation
from .checks import CheckResult, Tri, jsonable
from .errors import BudgetExhausted, InvalidArgs, NoBasePoint
from .openmap import SchemeOracle, base_branch_evidence
from .seqtree import AllZero, Branch, Constant, FinSeq, is_prefix, lex_before
from .serialize import branch_from_json, branch_to_json, point_from_json


class Status(enum.Enum):
    RUNNING = "running"
    S1_FAILURE = "s1_failure"
    S2_READY = "s2_refutation_ready"
    PRECONDITION_FAILED = "precondition_failed"


@dataclass
class DiagStep:
    n: int
    x: DAPoint
    q: Branch
    m: int
    x_n: DAPoint
    t_n: Branch
    k: int
    a: int
    p_n: FinSeq
    p_next: FinSeq
    node_next: DASet

    @property
    def parity(self) -> int:
        return self.n % 2

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "parity": "even" if self.parity == 0 else "odd",
            "x": self.x.to_json(),
            "q": branch_to_json(self.q),
            "m": self.m,
            "x_n": self.x_n.to_json(),
            "t_n": branch_to_json(self.t_n),
            "k": self.k,
            "a": self.a,
            "p_n": list(self.p_n),
            "p_next": list(self.p_next),
            "node_next": self.node_next.to_json(),
        }


@dataclass
class DiagTrace:
    oracle: str
    space: dict
    relation: str
    steps: list[DiagStep] = field(default_factory=list)
    status: Status = Status.RUNNING
    failure: dict | None = None
    certificates: list = field(default_factory=list)

    @property
    def p(self) -> FinSeq:
        return self.steps[-1].p_next if self.steps else ()

    def to_json(self) -> dict:
        return {
            "oracle": self.oracle,
            "space": self.space,
            "relation": self.relation,
            "steps": [s.to_json() for s in self.steps],
            "status": self.status.value,
            "failure": jsonable(self.failure),
            "certificates": jsonable(self.certificates),
        }


def _space_json(space) -> dict:
    if isinstance(space, DoubleArrowSpace):
        return {"name": space.name, "drop_max": space.drop_max, "drop_dyadic_side0": space.drop_dyadic_side0}
    return {"name": getattr(space, "name", "?")}


def _space_from_json(data: dict, rel_name: str) -> DoubleArrowSpace:
    return DoubleArrowSpace(data.get("drop_max", False), data.get("drop_dyadic_side0", False), relation(rel_name))


def _pick_t(oracle: SchemeOracle, space, q: Branch, m: int, x, even: bool):
    """First candidate t ∈ rsequences(q, m) whose point x_n meets the cone condition."""
    stem = q.restrict(m)
    for bump in (1, 2, 3):
        for tail in (Constant(1), AllZero()):
            t = Branch(stem + (q.at(m) + bump,), tail)
            try:
                y = oracle.point_map(t)
            except NoBasePoint:
                continue
            if y == x or not space.member(y, space.Q()) or not space.member(y, oracle.cut(q, m)):
                continue
            cone = space.cone_down(y) if even else space.cone_up(y)
            if space.is_neighborhood(cone, x):
                return t, y, cone
    return None


def diagonalize(
    oracle: SchemeOracle,
    space=None,
    max_steps: int = 4,
    depth_budget: int = 64,
) -> DiagTrace:
    """Run the recursion for up to ``max_steps`` steps.

    Choices: x is the space's deterministic pick on the looking side; m is
    the least m > lh(p_n) whose cut set, with x added, is a neighborhood of
    x inside V_{p_n}; t_n = q↾m ⌢ (q(m)+1) ⌢ 1^ω (later bumps and tails are
    tried if its point misses the cone condition); k is the least k > m with
    q↾k ◁ t_n↾k; a is the least a > k with the cut set inside the cone of
    x_n; p_{n+1} = q↾a ⌢ (q(a)+1).
    """
    space = space or oracle.space
    rel_name = getattr(getattr(space, "R", None), "name", "order")
    trace = DiagTrace(oracle.name, _space_json(space), rel_name)
    pre = precheck_space(space)
    if not pre.ok:
        trace.status = Status.PRECONDITION_FAILED
        trace.failure = {"query": "bidirected-precheck", "result": pre.to_json()}
        return trace

    p: FinSeq = ()
    for n in range(max_steps):
        even = n % 2 == 0
        node = oracle.node_set(p)
        x = space.pick_point(node & (space.A_r() if even else space.A_l()), right=even)
        if x is None:
            trace.status = Status.PRECONDITION_FAILED
            trace.failure = {"query": "pick", "n": n, "node": list(p), "side": "A_r" if even else "A_l"}
            return trace
        q = oracle.s1_witness(x, Branch(p, AllZero()), len(p), min(depth_budget, 12))
        if q is None:
            trace.status = Status.S1_FAILURE
            trace.failure = {"query": "s1_witness", "n": n, "point": x, "node": list(p)}
            cert = getattr(oracle, "s1_certificate", None)
            if cert is not None:
                trace.certificates.append(cert(x))
            return trace
        m = oracle.shrink_index(q, x, node, len(p) + 1, depth_budget, need_nbhd=True)
        if m is None:
            raise BudgetExhausted(f"no m <= {depth_budget} shrinks the cut into V_{list(p)}", trace)
        picked = _pick_t(oracle, space, q, m, x, even)
        if picked is None:
            raise BudgetExhausted(f"no Q-point with the cone condition found in cut(q, {m})", trace)
        t, y, cone = picked
        k = next(
            (k for k in range(m + 1, depth_budget + 1) if lex_before(q.restrict(k), t.restrict(k)) is Tri.TRUE),
            None,
        )
        if k is None:
            raise BudgetExhausted("no divergence level within the budget", trace)
        a = oracle.shrink_index(q, x, cone, k + 1, depth_budget)
        if a is None:
            raise BudgetExhausted(f"no a <= {depth_budget} shrinks the cut into the cone of {y}", trace)
        p_next = q.restrict(a) + (q.at(a) + 1,)
        trace.steps.append(DiagStep(n, x, q, m, y, t, k, a, p, p_next, oracle.node_set(p_next)))
        p = p_next
    if len({s.parity for s in trace.steps}) == 2:
        trace.status = Status.S2_READY
    return trace


def verify_trace(data: dict) -> CheckResult:
    """Offline re-check of a serialized trace from its recorded data alone.

    Per step: the nodes increase, x_n is a Q-point whose cone is a
    neighborhood of x, the next node lies inside that cone, and t_n extends
    p_n while p_{n+1} comes ◁-before it.
    """
    rel = relation(data["relation"])
    space = _space_from_json(data["space"], data["relation"])
    prev: FinSeq = ()
    for st in data["steps"]:
        n = st["n"]
        p_n, p_next = tuple(st["p_n"]), tuple(st["p_next"])
        t = branch_from_json(st["t_n"])
        y = point_from_json(st["x_n"])
        node = DASet.from_json(st["node_next"])
        if p_n != prev or not (len(p_n) < len(p_next) and p_next[: len(p_n)] == p_n):
            return CheckResult.fails({"n": n, "kind": "not-increasing"})
        if data["oracle"] == "double-arrow-w":
            from .wscheme import w_node

            if node != w_node(p_next).to_set() & space.whole:
                return CheckResult.fails({"n": n, "kind": "node-mismatch"})
        if not space.member(y, rel.Q()):
            return CheckResult.fails({"n": n, "kind": "x_n-not-in-Q"})
        cone = rel.down(y) if n % 2 == 0 else rel.up(y)
        if not space.is_neighborhood(cone, point_from_json(st["x"])):
            return CheckResult.fails({"n": n, "kind": "cone-not-neighborhood"})
        if not space.subset(node, cone):
            return CheckResult.fails({"n": n, "kind": "cone" if n % 2 == 0 else "cone-odd"})
        if not is_prefix(p_n, t) or lex_before(p_next, t.restrict(len(p_next))) is not Tri.TRUE:
            return CheckResult.fails({"n": n, "kind": "branch-position"})
        prev = p_next
    for cert in data.get("certificates", []):
        from .wscheme import verify_s1_certificate

        if not verify_s1_certificate(cert):
            return CheckResult.fails({"kind": "certificate"})
    return CheckResult.holds(len(data["steps"]), status=data["status"])


def verify_property5(trace: DiagTrace | dict, k_max: int) -> CheckResult:
    """For each k < k_max, Q-points of cut(V, p, k) on both R-sides of every z in V_p.

    ``p`` is approximated by the last node of the trace. The x_n of step n
    lies in cut(V, p, k) once lh(p_n) >= k, since t_n agrees with p on p_n
    and lies ◁-after it.
    """
    data = trace.to_json() if isinstance(trace, DiagTrace) else trace
    rel = relation(data["relation"])
    space = _space_from_json(data["space"], data["relation"])
    steps = data["steps"]
    if k_max == 0:
        return CheckResult.holds(0)
    last = DASet.from_json(steps[-1]["node_next"]) if steps else None
    found = []
    for k in range(k_max):
        pair = {}
        for st in steps:
            if len(st["p_n"]) < k:
                continue
            pair.setdefault(st["parity"], st)
        if len(pair) < 2:
            missing = sorted({"even", "odd"} - set(pair))
            return CheckResult.unknown(len(steps), shortfall=f"no completed {' or '.join(missing)} step past k={k}")
        ev, od = pair["even"], pair["odd"]
        x2, x1 = point_from_json(ev["x_n"]), point_from_json(od["x_n"])
        if not (space.subset(last, rel.down(x2)) and space.subset(last, rel.up(x1))):
            return CheckResult.fails({"k": k, "x_even": x2, "x_odd": x1})
        found.append({"k": k, "x_even": x2, "x_odd": x1})
    return CheckResult.holds(k_max, witnesses=found)


def refute_s2(oracle: SchemeOracle, p: Branch, k_max: int, space=None, z=None) -> CheckResult:
    """Per-k Q-points of cut(V, p, k) on the wrong R-side of each fruit candidate z.

    A point looking R-left gets a witness R-above it, one looking R-right a
    witness R-below it. When no witness exists for some k the refutation
    attempt fails, with base-branch evidence for ``p`` at ``z`` as payload.
    """
    space = space or oracle.space
    cands = [z] if z is not None else oracle.fruit_members(p)
    per_point = []
    for c in cands:
        right = space.in_A_r(c)
        cone = space.cone_down(c) if right else space.cone_up(c)
        wits = []
        for k in range(k_max + 1):
            pool = oracle.cut(p, k) & space.Q() & cone & space.whole
            y = space.first_escape(pool, DASet(P.empty(), P.empty()))
            if y is None:
                ev = base_branch_evidence(oracle, p, c, min(k_max, 12))
                return CheckResult.fails(
                    {"kind": "no-refutation", "point": c, "k": k, "base_branch_evidence": ev.to_json()}
                )
            wits.append({"k": k, "witness": y})
        per_point.append({"point": c, "looks": "right" if right else "left", "witnesses": wits})
    return CheckResult.holds(k_max, refutations=per_point)


def recheck_refutation(oracle: SchemeOracle, p: Branch, entry: dict, space=None) -> bool:
    """True when every recorded per-k witness is a Q-point of the cut on the wrong side."""
    space = space or oracle.space
    c = point_from_json(entry["point"]) if isinstance(entry["point"], dict) else entry["point"]
    right = space.in_A_r(c)
    if (entry["looks"] == "right") != right:
        return False
    for w in entry["witnesses"]:
        y = point_from_json(w["witness"]) if isinstance(w["witness"], dict) else w["witness"]
        related = space.R(y, c) if right else space.R(c, y)
        if not (related and space.member(y, space.Q()) and space.member(y, oracle.cut(p, w["k"]))):
            return False
    return True


def trace_from_json(data: Any) -> dict:
    if not isinstance(data, dict) or "steps" not in data or "status" not in data:
        raise InvalidArgs("not a trace document")
    return data
