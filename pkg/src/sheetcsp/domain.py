"""Mutable finite integer domain used by the solver.

Representation: inclusive bounds [lo, hi] plus a hole set of excluded values
strictly between the bounds. Invariants: lo <= hi, and neither bound is a
hole, so min/max are O(1) reads. Mutators return a status code instead of
raising, because emptying a domain is ordinary control flow during search.
"""
from __future__ import annotations

from .ops import DomainSpec, IntervalDom

NO_CHANGE = 0
CHANGED = 1
EMPTY = -1

# Overflow discipline: reject models whose values could leave 64-bit range.
MAX_MAGNITUDE = 2 ** 62


class Domain:
    __slots__ = ("lo", "hi", "holes")

    def __init__(self, lo: int, hi: int, holes: set[int] | None = None):
        if lo > hi:
            raise ValueError(f"empty domain {lo}..{hi}")
        if max(abs(lo), abs(hi)) > MAX_MAGNITUDE:
            raise ValueError(f"domain bound beyond +/-2^62: {lo}..{hi}")
        self.lo = lo
        self.hi = hi
        self.holes = holes or None

    @classmethod
    def from_spec(cls, spec: DomainSpec) -> "Domain":
        if isinstance(spec, IntervalDom):
            return cls(spec.lo, spec.hi)
        values = spec.values_
        lo, hi = values[0], values[-1]
        holes = set(range(lo, hi + 1)).difference(values)
        return cls(lo, hi, holes or None)

    def copy(self) -> "Domain":
        return Domain(self.lo, self.hi, set(self.holes) if self.holes else None)

    def contains(self, v: int) -> bool:
        if v < self.lo or v > self.hi:
            return False
        return not self.holes or v not in self.holes

    @property
    def is_fixed(self) -> bool:
        return self.lo == self.hi

    def size(self) -> int:
        return self.hi - self.lo + 1 - (len(self.holes) if self.holes else 0)

    def values(self) -> list[int]:
        if not self.holes:
            return list(range(self.lo, self.hi + 1))
        holes = self.holes
        return [v for v in range(self.lo, self.hi + 1) if v not in holes]

    # -- in-place narrowing; callers trail a copy first ----------------------

    def _drop_outside_holes(self) -> None:
        if self.holes:
            lo, hi = self.lo, self.hi
            self.holes = {h for h in self.holes if lo < h < hi} or None

    def tighten_lo(self, new_lo: int) -> int:
        if new_lo <= self.lo:
            return NO_CHANGE
        if new_lo > self.hi:
            return EMPTY
        lo = new_lo
        holes = self.holes
        if holes:
            while lo in holes:
                lo += 1
            if lo > self.hi:
                return EMPTY
        self.lo = lo
        self._drop_outside_holes()
        return CHANGED

    def tighten_hi(self, new_hi: int) -> int:
        if new_hi >= self.hi:
            return NO_CHANGE
        if new_hi < self.lo:
            return EMPTY
        hi = new_hi
        holes = self.holes
        if holes:
            while hi in holes:
                hi -= 1
            if hi < self.lo:
                return EMPTY
        self.hi = hi
        self._drop_outside_holes()
        return CHANGED

    def remove(self, v: int) -> int:
        if v < self.lo or v > self.hi:
            return NO_CHANGE
        if self.holes and v in self.holes:
            return NO_CHANGE
        if self.lo == self.hi:
            return EMPTY
        if v == self.lo:
            return self.tighten_lo(v + 1)
        if v == self.hi:
            return self.tighten_hi(v - 1)
        if self.holes is None:
            self.holes = {v}
        else:
            self.holes.add(v)
        return CHANGED

    def fix(self, v: int) -> int:
        if not self.contains(v):
            return EMPTY
        if self.lo == v and self.hi == v:
            return NO_CHANGE
        self.lo = v
        self.hi = v
        self.holes = None
        return CHANGED

    def intersect(self, other: "Domain") -> int:
        """Narrow to the intersection with another domain."""
        changed = NO_CHANGE
        r = self.tighten_lo(other.lo)
        if r == EMPTY:
            return EMPTY
        changed |= r
        r = self.tighten_hi(other.hi)
        if r == EMPTY:
            return EMPTY
        changed |= r
        if other.holes:
            for h in other.holes:
                r = self.remove(h)
                if r == EMPTY:
                    return EMPTY
                changed |= r
        return CHANGED if changed else NO_CHANGE

    def __eq__(self, other):
        if not isinstance(other, Domain):
            return NotImplemented
        return self.values() == other.values()

    def __repr__(self):
        if self.lo == self.hi:
            return f"Domain({self.lo})"
        if not self.holes:
            return f"Domain({self.lo}..{self.hi})"
        return f"Domain({self.values()!r})"


def render_domain(d: Domain) -> str:
    """Text form for reports: "4", "1..5", or "[1,2,5]"."""
    if d.lo == d.hi:
        return str(d.lo)
    if not d.holes:
        return f"{d.lo}..{d.hi}"
    return "[" + ",".join(str(v) for v in d.values()) + "]"
