"""Shared operator vocabulary and finite-domain specifications.

Relational and arithmetic operators appear both in the constraint language
and in the solver's constraint store, so they live here, below both.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass


class RelOp(enum.Enum):
    """Binary relational operator. The enum value is the canonical spelling."""

    EQ = "#="
    NEQ = "#\\="
    LT = "#<"
    LE = "#=<"
    GT = "#>"
    GE = "#>="

    def holds(self, a: int, b: int) -> bool:
        if self is RelOp.EQ:
            return a == b
        if self is RelOp.NEQ:
            return a != b
        if self is RelOp.LT:
            return a < b
        if self is RelOp.LE:
            return a <= b
        if self is RelOp.GT:
            return a > b
        return a >= b


# Accepted surface spellings (the # forms match CLP(FD), the bare forms Excel).
REL_SPELLINGS = {
    "#=": RelOp.EQ,
    "=": RelOp.EQ,
    "#\\=": RelOp.NEQ,
    "#<": RelOp.LT,
    "<": RelOp.LT,
    "#=<": RelOp.LE,
    "=<": RelOp.LE,
    "<=": RelOp.LE,
    "#>": RelOp.GT,
    ">": RelOp.GT,
    "#>=": RelOp.GE,
    ">=": RelOp.GE,
}


class ArithOp(enum.Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"

    def apply(self, a: int, b: int) -> int:
        if self is ArithOp.ADD:
            return a + b
        if self is ArithOp.SUB:
            return a - b
        return a * b


# Aggregation folds accept only these two operators.
AGGREGATE_OPS = (ArithOp.ADD, ArithOp.MUL)


@dataclass(frozen=True)
class IntervalDom:
    """Contiguous integer domain lo..hi (inclusive)."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval domain {self.lo}..{self.hi}")

    def values(self) -> list[int]:
        return list(range(self.lo, self.hi + 1))


@dataclass(frozen=True)
class ListDom:
    """Explicit integer domain; normalized to strictly ascending, no duplicates."""

    values_: tuple[int, ...]

    def __post_init__(self):
        if not self.values_:
            raise ValueError("empty list domain")
        norm = tuple(sorted(set(self.values_)))
        object.__setattr__(self, "values_", norm)

    def values(self) -> list[int]:
        return list(self.values_)


DomainSpec = IntervalDom | ListDom
