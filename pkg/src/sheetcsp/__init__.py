"""sheetcsp: a constraint spreadsheet engine.

Workbook cells hold integer values, finite domains, or declarative
constraint formulas over A1-style cell ranges; a compiler lowers them to a
native finite-domain solver that enumerates and optimizes solutions and
writes them back into the grid.
"""

from .cells import (
    CellRange,
    CellRef,
    RefError,
    format_cell_ref,
    format_range,
    parse_cell_ref,
    parse_range_list,
)
from .compiler import (
    CompileError,
    CompileIssue,
    CompiledModel,
    apply_solution,
    collect_ranges,
    compile_workbook,
)
from .domain import Domain
from .grid import (
    CellInputError,
    Workbook,
    WorkbookLoadError,
    dumps_workbook,
    load_workbook,
    save_workbook,
)
from .ops import ArithOp, IntervalDom, ListDom, RelOp
from .ranges import (
    var_list,
    var_list_by_back_diag,
    var_list_by_col,
    var_list_by_diag,
    var_list_by_row,
)
from .session import SolveReport, SolveSession
from .solver import (
    BudgetExceeded,
    Diseq,
    Element,
    LinearRel,
    Model,
    ModelError,
    Mul,
    Var,
    optimize,
    post_all_different,
    post_fold_aggregate,
    propagate,
    solve_iter,
)
from .sscl import (
    DomainLiteral,
    Formula,
    IntValue,
    SsclError,
    classify_input,
    parse_constraint,
    render_ast,
)

__version__ = "0.1.0"

__all__ = [
    "ArithOp",
    "BudgetExceeded",
    "CellInputError",
    "CellRange",
    "CellRef",
    "CompileError",
    "CompileIssue",
    "CompiledModel",
    "Diseq",
    "Domain",
    "DomainLiteral",
    "Element",
    "Formula",
    "IntValue",
    "IntervalDom",
    "LinearRel",
    "ListDom",
    "Model",
    "ModelError",
    "Mul",
    "RefError",
    "RelOp",
    "SolveReport",
    "SolveSession",
    "SsclError",
    "Var",
    "Workbook",
    "WorkbookLoadError",
    "apply_solution",
    "classify_input",
    "collect_ranges",
    "compile_workbook",
    "dumps_workbook",
    "format_cell_ref",
    "format_range",
    "load_workbook",
    "optimize",
    "parse_cell_ref",
    "parse_constraint",
    "parse_range_list",
    "post_all_different",
    "post_fold_aggregate",
    "propagate",
    "render_ast",
    "save_workbook",
    "solve_iter",
    "var_list",
    "var_list_by_back_diag",
    "var_list_by_col",
    "var_list_by_diag",
    "var_list_by_row",
]
