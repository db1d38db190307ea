"""Three-valued verdicts shared by every checker."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


class Tri(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, flag: bool) -> "Tri":
        return cls.TRUE if flag else cls.FALSE

    def __bool__(self):
        # `if tri:` would silently treat UNKNOWN as true
        raise TypeError("Tri has no truth value; compare against Tri.TRUE")

    def __invert__(self) -> "Tri":
        if self is Tri.UNKNOWN:
            return self
        return Tri.FALSE if self is Tri.TRUE else Tri.TRUE


def rat(x) -> str:
    """Exact ``"p/q"`` text for a rational; integers keep the ``/1``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def jsonable(obj: Any) -> Any:
    """Deep-convert witness payloads: rationals to "p/q", tuples to lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str, float)):
        return obj
    if isinstance(obj, Fraction):
        return rat(obj)
    if isinstance(obj, Tri):
        return obj.value
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    raise TypeError(f"cannot serialize {type(obj).__name__}")


HOLDS = "holds_to_depth"
FAILS = "fails_with_witness"
UNKNOWN = "unknown"


@dataclass
class CheckResult:
    verdict: str
    depth: int | None = None
    witness: Any = None
    budget: int | None = None
    details: dict = field(default_factory=dict)

    @classmethod
    def holds(cls, depth: int, **details) -> "CheckResult":
        return cls(HOLDS, depth=depth, details=details)

    @classmethod
    def fails(cls, witness, **details) -> "CheckResult":
        return cls(FAILS, witness=witness, details=details)

    @classmethod
    def unknown(cls, budget: int, **details) -> "CheckResult":
        return cls(UNKNOWN, budget=budget, details=details)

    @property
    def ok(self) -> bool:
        return self.verdict == HOLDS

    @property
    def failed(self) -> bool:
        return self.verdict == FAILS

    @property
    def exit_code(self) -> int:
        return {HOLDS: 0, FAILS: 1, UNKNOWN: 2}[self.verdict]

    def to_json(self) -> dict:
        out: dict[str, Any] = {"verdict": self.verdict}
        if self.verdict == HOLDS:
            out["depth"] = self.depth
        elif self.verdict == FAILS:
            out["witness"] = jsonable(self.witness)
        else:
            out["budget"] = self.budget
        if self.details:
            out["details"] = jsonable(self.details)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CheckResult":
        return cls(
            data["verdict"],
            depth=data.get("depth"),
            witness=data.get("witness"),
            budget=data.get("budget"),
            details=data.get("details", {}),
        )
