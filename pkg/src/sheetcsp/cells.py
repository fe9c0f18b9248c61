"""A1-style cell coordinates: parsing, formatting and rectangular ranges.

Columns are letters A..IV (bijective base 26, 1..256), rows are 1..65536.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

MAX_COL = 256  # "A" through "IV"
MAX_ROW = 65536


class RefError(ValueError):
    """Malformed or out-of-bounds reference text."""


@dataclass(frozen=True)
class CellRef:
    col: int  # 1-based, "A" == 1
    row: int  # 1-based

    def __post_init__(self):
        if not 1 <= self.col <= MAX_COL:
            raise RefError(f"column {self.col} outside 1..{MAX_COL}")
        if not 1 <= self.row <= MAX_ROW:
            raise RefError(f"row {self.row} outside 1..{MAX_ROW}")

    def __repr__(self):
        return f"CellRef({format_cell_ref(self)})"


@dataclass(frozen=True)
class CellRange:
    top_left: CellRef
    bottom_right: CellRef

    def __post_init__(self):
        tl, br = self.top_left, self.bottom_right
        if tl.col > br.col or tl.row > br.row:
            raise RefError(
                f"inverted range {format_cell_ref(tl)}:{format_cell_ref(br)}"
            )

    @property
    def n_rows(self) -> int:
        return self.bottom_right.row - self.top_left.row + 1

    @property
    def n_cols(self) -> int:
        return self.bottom_right.col - self.top_left.col + 1

    def contains(self, ref: CellRef) -> bool:
        return (
            self.top_left.col <= ref.col <= self.bottom_right.col
            and self.top_left.row <= ref.row <= self.bottom_right.row
        )

    def __repr__(self):
        return f"CellRange({format_range(self)})"


# One or more refs/ranges, e.g. the argument of ssVarRange([A1:C3,E6:F9,G10]).
RangeItem = CellRef | CellRange


def letters_to_col(letters: str) -> int:
    """Decode a column label ("A" -> 1, "Z" -> 26, "AA" -> 27); case-insensitive."""
    n = 0
    for ch in letters:
        c = ord(ch.upper()) - 64
        if not 1 <= c <= 26:
            raise RefError(f"bad column letter {ch!r} in {letters!r}")
        n = n * 26 + c
    if n > MAX_COL:
        raise RefError(f"column {letters!r} beyond IV")
    return n


def col_to_letters(col: int) -> str:
    if not 1 <= col <= MAX_COL:
        raise RefError(f"column {col} outside 1..{MAX_COL}")
    out = []
    while col:
        col, rem = divmod(col - 1, 26)
        out.append(chr(65 + rem))
    return "".join(reversed(out))


_REF_RE = re.compile(r"([A-Za-z]+)([0-9]+)\Z")


def parse_cell_ref(text: str) -> CellRef:
    s = text.strip()
    m = _REF_RE.fullmatch(s)
    if m is None:
        raise RefError(f"malformed cell reference {text!r}")
    col = letters_to_col(m.group(1))
    row = int(m.group(2))
    if not 1 <= row <= MAX_ROW:
        raise RefError(f"row {row} outside 1..{MAX_ROW} in {text!r}")
    return CellRef(col, row)


def format_cell_ref(ref: CellRef) -> str:
    return f"{col_to_letters(ref.col)}{ref.row}"


def format_range(r: CellRange) -> str:
    return f"{format_cell_ref(r.top_left)}:{format_cell_ref(r.bottom_right)}"


def format_range_item(item: RangeItem) -> str:
    if isinstance(item, CellRange):
        return format_range(item)
    return format_cell_ref(item)


def format_range_list(items: list[RangeItem] | tuple[RangeItem, ...]) -> str:
    if len(items) == 1:
        return format_range_item(items[0])
    return "[" + ",".join(format_range_item(i) for i in items) + "]"


def parse_range_item(text: str) -> RangeItem:
    s = text.strip()
    if ":" in s:
        left, _, right = s.partition(":")
        return CellRange(parse_cell_ref(left), parse_cell_ref(right))
    return parse_cell_ref(s)


def parse_range_list(text: str) -> list[RangeItem]:
    """Parse "A1:H8", "G10" or "[A1:C3,E6:F9,G10]" into an ordered item list."""
    s = text.strip()
    if not s:
        raise RefError("empty range list")
    if s.startswith("["):
        if not s.endswith("]"):
            raise RefError(f"unterminated range list {text!r}")
        parts = s[1:-1].split(",")
        if parts == [""]:
            raise RefError("empty range list")
    else:
        parts = [s]
    return [parse_range_item(p) for p in parts]


def row_major_key(ref: CellRef) -> tuple[int, int]:
    """Sort key enumerating the grid top-to-bottom, left-to-right."""
    return (ref.row, ref.col)
