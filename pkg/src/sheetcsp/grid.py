"""Workbook: classified cell contents keyed by A1 references, with snapshot
and restore, and the JSON file format used by the CLI and the service.

File format: {"name": <text>, "cells": {"A1": "0..1", "J4": "ssDomain(...)"}}
where values are raw cell-input text exactly as a user would type it.
Serialization writes cell keys in row-major order so output is deterministic.
"""
from __future__ import annotations

import json

from .cells import CellRef, RefError, format_cell_ref, parse_cell_ref, row_major_key
from .sscl import (
    CellContent,
    DomainLiteral,
    Formula,
    IntValue,
    SsclError,
    classify_input,
    render_domain_spec,
)


class CellInputError(ValueError):
    """A cell's text failed to classify; carries the cell address."""

    def __init__(self, ref: CellRef, error: SsclError):
        super().__init__(f"{format_cell_ref(ref)}: {error}")
        self.ref = ref
        self.error = error


class WorkbookLoadError(ValueError):
    """One or more cells in a workbook file failed to parse."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


class SnapshotError(RuntimeError):
    """restore() called before any snapshot was taken."""


def content_text(content: CellContent) -> str:
    """The raw input text a content object round-trips to."""
    if isinstance(content, IntValue):
        return str(content.value)
    if isinstance(content, DomainLiteral):
        return render_domain_spec(content.dom)
    if isinstance(content, Formula):
        return content.source
    raise TypeError(f"not cell content: {content!r}")


class Workbook:
    """Sparse grid of classified cell contents. Absent keys are empty cells."""

    def __init__(self, name: str = ""):
        self.name = name
        self.cells: dict[CellRef, CellContent] = {}
        self.original: dict[CellRef, CellContent] | None = None

    def get(self, ref: CellRef) -> CellContent | None:
        return self.cells.get(ref)

    def set_cell(self, ref: CellRef, text: str) -> None:
        """Classify and store raw input text; blank text clears the cell."""
        s = text.strip()
        if not s:
            self.cells.pop(ref, None)
            return
        try:
            self.cells[ref] = classify_input(s)
        except SsclError as e:
            raise CellInputError(ref, e) from None

    def set_content(self, ref: CellRef, content: CellContent) -> None:
        self.cells[ref] = content

    def clear_cell(self, ref: CellRef) -> None:
        self.cells.pop(ref, None)

    def snapshot(self) -> None:
        """Save current inputs so restore() can bring them back."""
        self.original = dict(self.cells)

    def restore(self) -> None:
        if self.original is None:
            raise SnapshotError("no snapshot to restore")
        self.cells = dict(self.original)

    def copy(self) -> "Workbook":
        wb = Workbook(self.name)
        wb.cells = dict(self.cells)
        wb.original = dict(self.original) if self.original is not None else None
        return wb

    def sorted_refs(self) -> list[CellRef]:
        return sorted(self.cells, key=row_major_key)

    # -- JSON ----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        cells = {
            format_cell_ref(ref): content_text(self.cells[ref])
            for ref in self.sorted_refs()
        }
        return {"name": self.name, "cells": cells}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Workbook":
        if not isinstance(data, dict) or not isinstance(data.get("cells"), dict):
            raise WorkbookLoadError(['workbook JSON must be {"name": ..., "cells": {...}}'])
        wb = cls(str(data.get("name", "")))
        errors = []
        for key, text in data["cells"].items():
            try:
                ref = parse_cell_ref(key)
            except RefError as e:
                errors.append(f"bad cell key {key!r}: {e}")
                continue
            if not isinstance(text, str):
                errors.append(f"{key}: cell input must be a string")
                continue
            try:
                wb.set_cell(ref, text)
            except CellInputError as e:
                errors.append(str(e))
        if errors:
            raise WorkbookLoadError(errors)
        return wb


def load_workbook(path: str) -> Workbook:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise WorkbookLoadError([f"malformed JSON: {e}"]) from None
    return Workbook.from_json_dict(data)


def save_workbook(wb: Workbook, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_workbook(wb))


def dumps_workbook(wb: Workbook) -> str:
    return json.dumps(wb.to_json_dict(), indent=1) + "\n"
