"""Solve sessions: compile a workbook, enumerate solutions into a lazily
extended cache, traverse them, and reset back to the original inputs.

With an objective present, solving means branch-and-bound optimization;
the enumerable solution set is then the set of optimal-value solutions
(re-enumerated with the objective pinned to the optimum).
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from .compiler import CompiledModel, apply_solution, compile_workbook
from .grid import Workbook
from .ops import RelOp
from .solver import BudgetExceeded, LinearRel, optimize, solve_iter

DEFAULT_BUDGET = 10_000_000

SAT = "sat"
UNSAT = "unsat"
OPTIMAL = "optimal"
BUDGET_EXCEEDED = "budget_exceeded"
ERROR = "error"


@dataclass
class SolveReport:
    status: str
    count: int  # exact when exhausted, otherwise a lower bound
    exhausted: bool
    objective: int | None
    elapsed_ms: int
    error: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "count": self.count,
            "exhausted": self.exhausted,
            "objective": self.objective,
            "elapsed_ms": self.elapsed_ms,
            "error": self.error,
        }


class SolveSession:
    """One workbook, one solve state. Solutions are cached as a prefix of the
    deterministic enumeration order and extended on demand."""

    def __init__(self, workbook: Workbook, budget: int | None = DEFAULT_BUDGET):
        self.workbook = workbook
        self.budget = budget
        self.compiled: CompiledModel | None = None
        self.report: SolveReport | None = None
        self.index: int | None = None
        self._cache: list[tuple[int, ...]] = []
        self._gen = None
        self._exhausted = False

    # -- solving -----------------------------------------------------------

    def check(self) -> CompiledModel:
        """Compile without solving (raises CompileError on any issue)."""
        self.compiled = compile_workbook(self.workbook)
        return self.compiled

    def solve(self, limit: int | None = None) -> SolveReport:
        """Compile and enumerate. limit bounds how many solutions are pulled
        into the cache now (None = drain the search space)."""
        self.reset()
        started = time.monotonic()
        cm = compile_workbook(self.workbook)
        self.compiled = cm
        model = cm.model
        status = SAT
        objective_value = None
        try:
            if model.objective is not None:
                best = optimize(model, self.budget)
                if best is None:
                    status = UNSAT
                    self._exhausted = True
                else:
                    status = OPTIMAL
                    objective_value = best[model.objective[1]]
                    pinned = model.copy()
                    pinned.objective = None
                    pinned.post(LinearRel(
                        ((1, model.objective[1]),), RelOp.EQ, objective_value))
                    self._gen = solve_iter(pinned, self.budget)
                    self._fill(limit)
            else:
                self._gen = solve_iter(model, self.budget)
                self._fill(limit)
                if self._exhausted and not self._cache:
                    status = UNSAT
        except BudgetExceeded as e:
            status = BUDGET_EXCEEDED
            if e.incumbent is not None and model.objective is not None:
                objective_value = e.incumbent[model.objective[1]]
        elapsed_ms = int((time.monotonic() - started) * 1000)
        self.report = SolveReport(
            status=status,
            count=len(self._cache),
            exhausted=self._exhausted,
            objective=objective_value,
            elapsed_ms=elapsed_ms,
        )
        return self.report

    def _fill(self, limit: int | None) -> None:
        if self._gen is None or self._exhausted:
            return
        while limit is None or len(self._cache) < limit:
            try:
                self._cache.append(next(self._gen))
            except StopIteration:
                self._exhausted = True
                self._gen = None
                break
            except BudgetExceeded:
                self._gen = None
                raise

    def _sync_report_count(self) -> None:
        if self.report is not None:
            self.report.count = len(self._cache)
            self.report.exhausted = self._exhausted

    def count(self) -> int:
        """Exact solution count; drains the enumeration."""
        self._fill(None)
        self._sync_report_count()
        return len(self._cache)

    @property
    def cached_count(self) -> int:
        return len(self._cache)

    @property
    def exhausted(self) -> bool:
        return self._exhausted

    # -- traversal -----------------------------------------------------------

    def solution(self, i: int) -> tuple[int, ...]:
        if i < 0:
            raise IndexError(f"solution index {i} out of range")
        self._fill(i + 1)
        self._sync_report_count()
        if i >= len(self._cache):
            raise IndexError(f"solution index {i} out of range (count {len(self._cache)})")
        return self._cache[i]

    def solution_workbook(self, i: int) -> Workbook:
        """A display copy of the workbook with solution i written in."""
        sol = self.solution(i)
        assert self.compiled is not None
        view = self.workbook.copy()
        apply_solution(view, self.compiled, sol)
        self.index = i
        return view

    def goto(self, i: int) -> Workbook:
        return self.solution_workbook(i)

    def next(self) -> Workbook:
        return self.solution_workbook(0 if self.index is None else self.index + 1)

    def prev(self) -> Workbook:
        if self.index is None or self.index == 0:
            raise IndexError("no previous solution")
        return self.solution_workbook(self.index - 1)

    def reset(self) -> None:
        """Back to original inputs: drop the cache, report and position."""
        self.compiled = None
        self.report = None
        self.index = None
        self._cache = []
        self._gen = None
        self._exhausted = False
