"""Souslin schemes over the Baire space, the Sorgenfrey line and the double-arrow space."""
from __future__ import annotations

from .checks import CheckResult, Tri
from .errors import (
    BudgetExhausted,
    InvalidArgs,
    NoBasePoint,
    OutOfInterval,
    OutOfRange,
    PreconditionFailed,
    SouslinError,
    UnsupportedMap,
    WrongSide,
)
from .seqtree import AllZero, Branch, Constant, Encoded, Periodic

__all__ = [
    "AllZero",
    "Branch",
    "BudgetExhausted",
    "CheckResult",
    "Constant",
    "Encoded",
    "InvalidArgs",
    "NoBasePoint",
    "OutOfInterval",
    "OutOfRange",
    "Periodic",
    "PreconditionFailed",
    "SouslinError",
    "Tri",
    "UnsupportedMap",
    "WrongSide",
]
