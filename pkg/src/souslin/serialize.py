"""JSON forms of the value types; rationals always travel as exact "p/q" text."""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Any

from .checks import rat
from .errors import InvalidArgs
from .seqtree import AllZero, Antichain, Branch, Constant, Encoded, Periodic, RangeRecord

_RAT = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rat(text: str) -> Fraction:
    """Strict rational parser: optional sign, digits, optional "/digits" (nonzero)."""
    text = str(text).strip()
    if not _RAT.match(text):
        raise InvalidArgs(f"malformed rational {text!r}; expected p or p/q")
    if "/" in text and int(text.split("/")[1]) == 0:
        raise InvalidArgs(f"zero denominator in {text!r}")
    return Fraction(text)


def branch_to_json(b: Branch) -> dict:
    t = b.tail
    if isinstance(t, AllZero):
        tail: dict[str, Any] = {"kind": "zero"}
    elif isinstance(t, Constant):
        tail = {"kind": "const", "k": t.k}
    elif isinstance(t, Periodic):
        tail = {"kind": "periodic", "period": list(t.period)}
    else:
        tail = {"kind": "encoded", "x": rat(t.x)}
    return {"prefix": list(b.prefix), "tail": tail}


def branch_from_json(data: dict) -> Branch:
    t = data["tail"]
    kind = t["kind"]
    if kind == "zero":
        tail = AllZero()
    elif kind == "const":
        tail = Constant(int(t["k"]))
    elif kind == "periodic":
        tail = Periodic(tuple(int(e) for e in t["period"]))
    elif kind == "encoded":
        tail = Encoded(parse_rat(t["x"]))
    else:
        raise InvalidArgs(f"unknown tail kind {kind!r}")
    return Branch(tuple(int(e) for e in data["prefix"]), tail)


def antichain_to_json(a: Antichain) -> list:
    return a.to_json()


def antichain_from_json(data: list) -> Antichain:
    return Antichain(tuple(RangeRecord(tuple(r["stem"]), int(r["from"])) for r in data))


def point_to_json(z) -> Any:
    if isinstance(z, Fraction) or isinstance(z, int):
        return rat(z)
    return z.to_json()


def point_from_json(data):
    """A real-line point from "p/q", a double-arrow point from {"x", "side"}."""
    from .bidirected import DAPoint

    if isinstance(data, dict):
        return DAPoint(parse_rat(data["x"]), int(data["side"]))
    if isinstance(data, (Fraction, DAPoint)):
        return data
    return parse_rat(data)
