"""Command-line front end.

Exit codes: 0 holds/true, 1 fails/false, 2 unknown or budget exhausted,
64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .checks import CheckResult, Tri, jsonable, rat
from .errors import BudgetExhausted, InvalidArgs, SouslinError
from .seqtree import AllZero, Branch, Constant, Encoded, Periodic, fmt_seq
from .serialize import branch_from_json, branch_to_json, parse_rat

EX_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _rat(text: str) -> Fraction:
    try:
        return parse_rat(text)
    except InvalidArgs as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nat(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return v


def parse_branch(text: str) -> Branch:
    """``PREFIX|TAIL`` with PREFIX like ``0,2`` and TAIL one of ``zero``,
    ``const:K``, ``periodic:1,0`` or ``encoded:p/q``; JSON objects are accepted too."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return branch_from_json(json.loads(text))
        except (ValueError, KeyError, TypeError) as exc:
            raise argparse.ArgumentTypeError(f"bad branch JSON: {exc}") from None
    prefix_text, _, tail_text = text.partition("|")
    try:
        prefix = tuple(_nat(e) for e in prefix_text.split(",") if e.strip())
        kind, _, arg = (tail_text or "zero").partition(":")
        if kind == "zero":
            tail = AllZero()
        elif kind == "const":
            tail = Constant(_nat(arg))
        elif kind == "periodic":
            tail = Periodic(tuple(_nat(e) for e in arg.split(",")))
        elif kind == "encoded":
            tail = Encoded(parse_rat(arg))
        else:
            raise argparse.ArgumentTypeError(f"unknown tail {kind!r}")
        return Branch(prefix, tail)
    except (InvalidArgs, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(jsonable(payload)))
    else:
        print(text)


def _emit_check(args, res: CheckResult, label: str) -> int:
    body = res.to_json()
    if res.ok:
        text = f"{label}: holds to depth {res.depth}"
    elif res.failed:
        text = f"{label}: fails\nwitness: {json.dumps(body['witness'])}"
    else:
        text = f"{label}: unknown (budget {res.budget})"
    _emit(args, body, text)
    return res.exit_code


def _set_text(s) -> str:
    import portion as P

    def end(v):
        return "-∞" if v == -P.inf else "∞" if v == P.inf else rat(v)

    parts = []
    for a in s:
        if a.empty:
            continue
        if a.lower == a.upper:
            parts.append("{" + end(a.lower) + "}")
            continue
        left = "[" if a.left == P.CLOSED else "("
        right = "]" if a.right == P.CLOSED else ")"
        parts.append(f"{left}{end(a.lower)}, {end(a.upper)}{right}")
    return " ∪ ".join(parts) or "∅"


def _interval_text(iv) -> str:
    lo = "-∞" if iv.lo is None else rat(iv.lo)
    hi = "∞" if iv.hi is None else rat(iv.hi)
    return f"[{lo}, {hi})" if iv.lo is not None else f"({lo}, {hi})"


# ---------------------------------------------------------------- commands


def cmd_encode(args) -> int:
    from .scheme import encode

    code = encode(args.x, args.depth)
    _emit(args, {"x": args.x, "depth": args.depth, "code": list(code)}, fmt_seq(code))
    return 0


def cmd_decode(args) -> int:
    from .scheme import decode

    value, exact = decode(args.branch, args.budget)
    _emit(args, {"branch": branch_to_json(args.branch), "value": value, "exact": exact},
          f"{rat(value)} ({'exact' if exact else 'approximate'})")
    return 0


def cmd_cut(args) -> int:
    from .bidirected import interval_to_json
    from .scheme import encode_branch
    from .topology import cut_base_element, cut_vs

    c = cut_vs(encode_branch(args.point), args.level)
    payload = {
        "point": args.point,
        "level": args.level,
        "cut": interval_to_json(c.as_set),
        "cut_base": interval_to_json(cut_base_element(args.point, args.level)),
    }
    _emit(args, payload, f"cut: {_set_text(c.as_set)}\ncut ∪ {{x}}: {_set_text(c.with_point())}")
    return 0


def cmd_scheme_dump(args) -> int:
    from .scheme import vs_interval
    from .seqtree import all_finseqs

    rows = []
    for a in all_finseqs(args.children, args.depth):
        iv = vs_interval(a)
        rows.append({"node": list(a), "interval": {"lo": None if iv.lo is None else rat(iv.lo),
                                                   "hi": None if iv.hi is None else rat(iv.hi)}})
    text = "\n".join(f"{fmt_seq(tuple(r['node'])):<20} {_interval_text(vs_interval(tuple(r['node'])))}" for r in rows)
    _emit(args, rows, text)
    return 0


def cmd_axioms(args) -> int:
    from .topology import aqn_bruteforce

    return _emit_check(args, aqn_bruteforce(args.entry_bound, args.depth), "Aqn items (i)-(iv)")


def cmd_sigma_member(args) -> int:
    from .topology import sigma_basic_member

    res = sigma_basic_member(args.z, args.p, args.n, args.budget)
    _emit(args, {"z": branch_to_json(args.z), "p": branch_to_json(args.p), "n": args.n, "member": res.value},
          res.value)
    return {Tri.TRUE: 0, Tri.FALSE: 1, Tri.UNKNOWN: 2}[res]


def cmd_doublearrow_check(args) -> int:
    from .bidirected import DAPoint, bidirected_check, dyadic_grid

    grid = dyadic_grid(args.grid) + [DAPoint(Fraction(1, 3), 0), DAPoint(Fraction(1, 3), 1)]
    res, reports = bidirected_check(args.relation, grid, args.kmax, args.assignment)
    payload = {"verdict": res.to_json(), "reports": [r.to_json() for r in reports]}
    lines = [f"{str(r.point):<14} {r.direction:<6} {'ok' if r.ok else 'FAIL'}" for r in reports]
    lines.append(f"aggregate: {res.verdict}")
    _emit(args, payload, "\n".join(lines))
    return res.exit_code


def _oracle(name: str):
    from .openmap import VSOracle
    from .wscheme import WOracle

    if name == "vs":
        return VSOracle()
    return WOracle()


def cmd_diagonalize(args) -> int:
    from .diagonalizer import Status, diagonalize

    try:
        trace = diagonalize(_oracle(args.oracle), max_steps=args.steps, depth_budget=args.budget)
        code = 0 if trace.status in (Status.RUNNING, Status.S2_READY) else 1
    except BudgetExhausted as exc:
        trace, code = exc.trace, 2
        print(f"budget exhausted: {exc}", file=sys.stderr)
    data = trace.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2)
    def pt(d):
        return f"({d['x']},{d['side']})"

    lines = [
        f"step {s['n']} ({s['parity']}): x={pt(s['x'])} m={s['m']} x_n={pt(s['x_n'])} k={s['k']} a={s['a']} "
        f"p_next={fmt_seq(tuple(s['p_next']))}"
        for s in data["steps"]
    ]
    lines.append(f"status: {data['status']}")
    if data["failure"]:
        lines.append(f"failure: {json.dumps(data['failure'])}")
    _emit(args, data, "\n".join(lines))
    return code


def cmd_verify_trace(args) -> int:
    from .diagonalizer import trace_from_json, verify_trace

    try:
        with open(args.trace, encoding="utf-8") as fh:
            data = trace_from_json(json.load(fh))
    except (OSError, ValueError) as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return EX_USAGE
    return _emit_check(args, verify_trace(data), "trace invariants")


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    parser = _Parser(prog="souslin", description="Souslin schemes, the Sorgenfrey line and the double-arrow space.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", parents=[common], help="code prefix of a rational")
    p.add_argument("--x", type=_rat, required=True)
    p.add_argument("--depth", type=_nat, required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="fruit point of a branch")
    p.add_argument("--branch", type=parse_branch, required=True, help="PREFIX|TAIL, e.g. '0|const:1'")
    p.add_argument("--budget", type=_nat, default=64)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("cut", parents=[common], help="cut set of the branch of a point")
    p.add_argument("--point", type=_rat, required=True)
    p.add_argument("--level", type=_nat, required=True)
    p.set_defaults(func=cmd_cut)

    def add_dump(p):
        p.add_argument("--depth", type=_nat, required=True)
        p.add_argument("--children", type=_nat, required=True)
        p.set_defaults(func=cmd_scheme_dump)

    add_dump(sub.add_parser("scheme-dump", parents=[common], help="list V^S nodes"))
    scheme = sub.add_parser("scheme", help="scheme commands")
    add_dump(scheme.add_subparsers(dest="action", required=True, parser_class=_Parser).add_parser(
        "dump", parents=[common], help="list V^S nodes"))

    p = sub.add_parser("axioms", parents=[common], help="brute-force check of the Aqn items")
    p.add_argument("--entry-bound", type=_nat, required=True)
    p.add_argument("--depth", type=_nat, required=True)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("sigma-member", parents=[common], help="membership in a basic set of σ_S")
    p.add_argument("--z", type=parse_branch, required=True)
    p.add_argument("--p", type=parse_branch, required=True)
    p.add_argument("--n", type=_nat, required=True)
    p.add_argument("--budget", type=_nat, default=64)
    p.set_defaults(func=cmd_sigma_member)

    def add_da(p):
        p.add_argument("--relation", choices=("lex", "constructed"), default="constructed")
        p.add_argument("--grid", type=_nat, default=20)
        p.add_argument("--kmax", type=_nat, default=5)
        p.add_argument("--assignment", choices=("standard", "flipped"), default="standard")
        p.set_defaults(func=cmd_doublearrow_check)

    add_da(sub.add_parser("doublearrow-check", parents=[common], help="bidirectedness on a grid"))
    da = sub.add_parser("doublearrow", help="double-arrow commands")
    add_da(da.add_subparsers(dest="action", required=True, parser_class=_Parser).add_parser(
        "check", parents=[common], help="bidirectedness on a grid"))

    p = sub.add_parser("diagonalize", parents=[common], help="run the diagonal recursion")
    p.add_argument("--oracle", choices=("double-arrow-w", "vs"), default="double-arrow-w")
    p.add_argument("--steps", type=_nat, default=4)
    p.add_argument("--budget", type=_nat, default=64)
    p.add_argument("--out")
    p.set_defaults(func=cmd_diagonalize)

    p = sub.add_parser("verify-trace", parents=[common], help="re-check a saved trace offline")
    p.add_argument("trace")
    p.set_defaults(func=cmd_verify_trace)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidArgs as exc:
        print(f"souslin: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except SouslinError as exc:
        print(f"souslin: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def run(argv: list[str]) -> int:
    """Like :func:`main`, but usage errors come back as an exit code instead of ``SystemExit``."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
