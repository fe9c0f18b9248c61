"""Cell-range expansion: flatten row-major, or group by rows, columns,
diagonals, or back-diagonals.

Group order matters: aggregate constraints pair the i-th group with the
i-th right-hand-side value. Diagonal groups start at the bottom-left corner
(decreasing row-col key would be: largest row-col first), back-diagonal
groups at the top-left (smallest row+col first); within a group cells are
ordered by increasing column.
"""
from __future__ import annotations

from .cells import CellRange, CellRef, RangeItem


def var_list(source: RangeItem | list[RangeItem] | tuple[RangeItem, ...]) -> list[CellRef]:
    """Flatten to a cell list: ranges expand row-major, refs stay single."""
    if isinstance(source, CellRef):
        return [source]
    if isinstance(source, CellRange):
        tl, br = source.top_left, source.bottom_right
        return [
            CellRef(c, r)
            for r in range(tl.row, br.row + 1)
            for c in range(tl.col, br.col + 1)
        ]
    out: list[CellRef] = []
    for item in source:
        out.extend(var_list(item))
    return out


def var_list_by_row(r: CellRange) -> list[list[CellRef]]:
    tl, br = r.top_left, r.bottom_right
    return [
        [CellRef(c, row) for c in range(tl.col, br.col + 1)]
        for row in range(tl.row, br.row + 1)
    ]


def var_list_by_col(r: CellRange) -> list[list[CellRef]]:
    tl, br = r.top_left, r.bottom_right
    return [
        [CellRef(col, row) for row in range(tl.row, br.row + 1)]
        for col in range(tl.col, br.col + 1)
    ]


def var_list_by_diag(r: CellRange) -> list[list[CellRef]]:
    """Groups of constant (row - col), bottom-left group first."""
    tl, br = r.top_left, r.bottom_right
    groups = []
    for key in range(br.row - tl.col, tl.row - br.col - 1, -1):
        group = [
            CellRef(c, c + key)
            for c in range(tl.col, br.col + 1)
            if tl.row <= c + key <= br.row
        ]
        groups.append(group)
    return groups


def var_list_by_back_diag(r: CellRange) -> list[list[CellRef]]:
    """Groups of constant (row + col), top-left group first."""
    tl, br = r.top_left, r.bottom_right
    groups = []
    for key in range(tl.row + tl.col, br.row + br.col + 1):
        group = [
            CellRef(c, key - c)
            for c in range(tl.col, br.col + 1)
            if tl.row <= key - c <= br.row
        ]
        groups.append(group)
    return groups
