"""Lower a workbook to a solver model.

The workbook must declare ssVarRange and ssConstraintRange somewhere. Every
cell of the variable range becomes a solver variable (its labeling order is
the row-major expansion of the declared range list); every formula inside the
constraint range lowers to solver constraints; solutions map back onto the
grid as plain integer cell values.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cells import CellRef, RangeItem, format_cell_ref
from .domain import EMPTY, Domain
from .grid import Workbook
from .ops import ArithOp, RelOp
from .ranges import (
    var_list,
    var_list_by_back_diag,
    var_list_by_col,
    var_list_by_diag,
    var_list_by_row,
)
from .solver import (
    FALSE_CONSTRAINT,
    MAX,
    MIN,
    Diseq,
    Element,
    LinearRel,
    Model,
    Mul,
    Var,
    fold_aggregate,
    mul_bounds,
    post_all_different,
)
from . import sscl
from .sscl import (
    Aggregate,
    AllDifferent,
    Binary,
    CellVar,
    Const,
    ConstraintRange,
    DomainDecl,
    DomainLiteral,
    Formula,
    IntList,
    IntValue,
    Maximize,
    Minimize,
    NthElement,
    Orientation,
    PairsOp,
    RelConstraint,
    Scalar,
    VarRange,
)

MISSING_VAR_RANGE = "MissingVarRange"
MISSING_CONSTRAINT_RANGE = "MissingConstraintRange"
DUPLICATE_RANGE_DECL = "DuplicateRangeDecl"
UNDOMAINED_VARIABLE = "UndomainedVariable"
LENGTH_MISMATCH = "LengthMismatch"
MULTIPLE_OBJECTIVES = "MultipleObjectives"
NON_CONSTRAINT_IN_CONSTRAINT_RANGE = "NonConstraintInConstraintRange"
UNKNOWN_CELL_REFERENCE = "UnknownCellReference"


@dataclass(frozen=True)
class CompileIssue:
    kind: str
    cell: CellRef | None
    message: str

    def __str__(self):
        where = format_cell_ref(self.cell) if self.cell else "workbook"
        return f"{where}: {self.kind}: {self.message}"


class CompileError(Exception):
    """Compilation failed; carries every issue found, not just the first."""

    def __init__(self, issues: list[CompileIssue]):
        super().__init__("; ".join(str(i) for i in issues))
        self.issues = issues


class _LowerError(Exception):
    def __init__(self, issue: CompileIssue):
        super().__init__(str(issue))
        self.issue = issue


@dataclass
class CompiledModel:
    model: Model
    cell_to_var: dict[CellRef, Var]
    var_cells: list[CellRef]  # labeling order
    var_range: list[RangeItem]
    constraint_range: list[RangeItem]
    objective_cell: CellRef | None = None
    diagnostics: list[str] = field(default_factory=list)


_GROUPERS = {
    Orientation.ROWS: var_list_by_row,
    Orientation.COLS: var_list_by_col,
    Orientation.DIAG: var_list_by_diag,
    Orientation.BACKDIAG: var_list_by_back_diag,
}


def collect_ranges(wb: Workbook) -> tuple[list[RangeItem], list[RangeItem]]:
    """Find the single ssVarRange and ssConstraintRange declarations."""
    issues: list[CompileIssue] = []
    var_decl = None
    cons_decl = None
    for ref in wb.sorted_refs():
        content = wb.get(ref)
        if not isinstance(content, Formula):
            continue
        ast = content.ast
        if isinstance(ast, VarRange):
            if var_decl is not None:
                issues.append(CompileIssue(
                    DUPLICATE_RANGE_DECL, ref,
                    f"ssVarRange already declared at {format_cell_ref(var_decl[0])}"))
            else:
                var_decl = (ref, list(ast.ranges))
        elif isinstance(ast, ConstraintRange):
            if cons_decl is not None:
                issues.append(CompileIssue(
                    DUPLICATE_RANGE_DECL, ref,
                    f"ssConstraintRange already declared at {format_cell_ref(cons_decl[0])}"))
            else:
                cons_decl = (ref, list(ast.ranges))
    if var_decl is None:
        issues.append(CompileIssue(
            MISSING_VAR_RANGE, None, "no ssVarRange declaration found"))
    if cons_decl is None:
        issues.append(CompileIssue(
            MISSING_CONSTRAINT_RANGE, None, "no ssConstraintRange declaration found"))
    if issues:
        raise CompileError(issues)
    return var_decl[1], cons_decl[1]


def compile_workbook(wb: Workbook) -> CompiledModel:
    return _Compiler(wb).run()


class _Compiler:
    def __init__(self, wb: Workbook):
        self.wb = wb
        self.issues: list[CompileIssue] = []
        self.diagnostics: list[str] = []
        self.unsat = False
        self.model = Model()
        self.cell_to_var: dict[CellRef, Var] = {}
        self.objective_cell: CellRef | None = None
        self.objective_at: CellRef | None = None

    def run(self) -> CompiledModel:
        wb = self.wb
        var_items, cons_items = collect_ranges(wb)

        var_cells: list[CellRef] = []
        var_set: set[CellRef] = set()
        for cell in var_list(var_items):
            if cell in var_set:
                self.diagnostics.append(
                    f"{format_cell_ref(cell)}: duplicate variable cell ignored")
            else:
                var_set.add(cell)
                var_cells.append(cell)

        cons_cells: list[CellRef] = []
        cons_set: set[CellRef] = set()
        for cell in var_list(cons_items):
            if cell not in cons_set:
                cons_set.add(cell)
                cons_cells.append(cell)

        lowerable: list[tuple[CellRef, sscl.SsclAst]] = []
        for cell in cons_cells:
            content = wb.get(cell)
            if content is None:
                continue
            if isinstance(content, Formula):
                lowerable.append((cell, content.ast))
            else:
                self.issues.append(CompileIssue(
                    NON_CONSTRAINT_IN_CONSTRAINT_RANGE, cell,
                    f"constraint range holds a value: {content!r}"))

        for ref in wb.sorted_refs():
            content = wb.get(ref)
            if (
                isinstance(content, Formula)
                and not isinstance(content.ast, (VarRange, ConstraintRange))
                and ref not in cons_set
            ):
                self.diagnostics.append(
                    f"{format_cell_ref(ref)}: formula outside the constraint range is ignored")

        # Phase 1: variable domains (cell literal intersected with every
        # covering ssDomain). An empty intersection makes the model
        # unsatisfiable but is not a compile error.
        dom_map: dict[CellRef, Domain | None] = {}
        for cell in var_cells:
            content = wb.get(cell)
            if isinstance(content, IntValue):
                dom_map[cell] = Domain(content.value, content.value)
            elif isinstance(content, DomainLiteral):
                dom_map[cell] = Domain.from_spec(content.dom)
            else:
                if isinstance(content, Formula):
                    self.diagnostics.append(
                        f"{format_cell_ref(cell)}: formula in a variable cell; "
                        "treated as empty for domain purposes")
                dom_map[cell] = None

        for at_cell, ast in lowerable:
            if not isinstance(ast, DomainDecl):
                continue
            spec_dom = Domain.from_spec(ast.dom)
            for target in var_list(ast.ranges):
                if target in var_set:
                    cur = dom_map[target]
                    if cur is None:
                        dom_map[target] = spec_dom.copy()
                    elif cur.intersect(spec_dom) == EMPTY:
                        self.unsat = True
                        self.diagnostics.append(
                            f"{format_cell_ref(target)}: domain intersection is empty")
                else:
                    content = wb.get(target)
                    if isinstance(content, IntValue):
                        if not spec_dom.contains(content.value):
                            self.unsat = True
                            self.diagnostics.append(
                                f"{format_cell_ref(target)}: value {content.value} "
                                "outside its declared domain")
                    else:
                        self.issues.append(CompileIssue(
                            UNKNOWN_CELL_REFERENCE, target,
                            f"ssDomain at {format_cell_ref(at_cell)} covers a cell "
                            "that is neither a variable nor a value"))

        for cell in var_cells:
            if dom_map[cell] is None:
                self.issues.append(CompileIssue(
                    UNDOMAINED_VARIABLE, cell, "variable cell has no finite domain"))
        if self.issues:
            raise CompileError(self.issues)

        for cell in var_cells:
            self.cell_to_var[cell] = self.model.new_var(dom_map[cell])
        self.model.label_order = [self.cell_to_var[c] for c in var_cells]

        # Phase 2: lower the remaining constraints.
        for at_cell, ast in lowerable:
            if isinstance(ast, (DomainDecl, VarRange, ConstraintRange)):
                continue
            try:
                self._lower(at_cell, ast)
            except _LowerError as e:
                self.issues.append(e.issue)
        if self.issues:
            raise CompileError(self.issues)
        if self.unsat:
            self.model.post(FALSE_CONSTRAINT)

        return CompiledModel(
            model=self.model,
            cell_to_var=self.cell_to_var,
            var_cells=var_cells,
            var_range=var_items,
            constraint_range=cons_items,
            objective_cell=self.objective_cell,
            diagnostics=self.diagnostics,
        )

    # -- reference resolution -------------------------------------------------

    def _resolve(self, cell: CellRef, at_cell: CellRef) -> Var | int:
        """A variable-range cell binds to its variable; an outside cell holding
        an integer is a constant; anything else is an error."""
        var = self.cell_to_var.get(cell)
        if var is not None:
            return var
        content = self.wb.get(cell)
        if isinstance(content, IntValue):
            return content.value
        raise _LowerError(CompileIssue(
            UNKNOWN_CELL_REFERENCE, cell,
            f"referenced from {format_cell_ref(at_cell)} but neither a variable "
            "cell nor an integer value"))

    def _resolve_all(self, cells, at_cell) -> list[Var | int]:
        return [self._resolve(c, at_cell) for c in cells]

    # -- lowering ---------------------------------------------------------------

    def _lower(self, at_cell: CellRef, ast) -> None:
        if isinstance(ast, AllDifferent):
            if ast.orientation is Orientation.ALL:
                groups = [var_list(ast.range)]
            else:
                groups = _GROUPERS[ast.orientation](ast.range)
            for group in groups:
                self._post_all_different(self._resolve_all(group, at_cell))
        elif isinstance(ast, Aggregate):
            groups = _GROUPERS[ast.orientation](ast.range)
            rhs_list = self._rhs_values(ast.rhs, len(groups), at_cell, "group")
            for group, rhs in zip(groups, rhs_list):
                items = self._resolve_all(group, at_cell)
                fold_aggregate(self.model, ast.op, items, ast.rel, rhs)
        elif isinstance(ast, PairsOp):
            left = var_list(ast.lhs)
            mid = var_list(ast.mid)
            if len(left) != len(mid):
                raise _LowerError(CompileIssue(
                    LENGTH_MISMATCH, at_cell,
                    f"ssPairsOp ranges differ in size ({len(left)} vs {len(mid)})"))
            rhs_list = self._rhs_values(ast.rhs, len(left), at_cell, "pair")
            for lc, mc, rhs in zip(left, mid, rhs_list):
                self._post_pair(
                    self._resolve(lc, at_cell), ast.op,
                    self._resolve(mc, at_cell), ast.rel, rhs)
        elif isinstance(ast, NthElement):
            if isinstance(ast.index, CellRef):
                index: Var | int = self._resolve(ast.index, at_cell)
            else:
                index = ast.index
            if isinstance(ast.items, IntList):
                items: tuple[Var | int, ...] = ast.items.values
            else:
                items = tuple(self._resolve_all(var_list(ast.items.range), at_cell))
            value = self._resolve(ast.value, at_cell)
            self.model.post(Element(index, items, value))
        elif isinstance(ast, (Minimize, Maximize)):
            var = self.cell_to_var.get(ast.var)
            if var is None:
                raise _LowerError(CompileIssue(
                    UNKNOWN_CELL_REFERENCE, ast.var,
                    f"objective at {format_cell_ref(at_cell)} must name a variable cell"))
            if self.objective_at is not None:
                raise _LowerError(CompileIssue(
                    MULTIPLE_OBJECTIVES, at_cell,
                    f"objective already declared at {format_cell_ref(self.objective_at)}"))
            self.objective_at = at_cell
            self.objective_cell = ast.var
            self.model.set_objective(MIN if isinstance(ast, Minimize) else MAX, var)
        elif isinstance(ast, RelConstraint):
            lt, lc = self._lower_expr(ast.left, at_cell)
            rt, rc = self._lower_expr(ast.right, at_cell)
            terms = dict(lt)
            for v, a in rt.items():
                terms[v] = terms.get(v, 0) - a
            terms = {v: a for v, a in terms.items() if a != 0}
            if not terms:
                if not ast.rel.holds(lc, rc):
                    self.model.post(FALSE_CONSTRAINT)
                else:
                    self.diagnostics.append(
                        f"{format_cell_ref(at_cell)}: constraint is trivially true")
                return
            self.model.post(LinearRel(
                tuple((a, v) for v, a in terms.items()), ast.rel, rc - lc))
        else:
            raise TypeError(f"cannot lower {ast!r}")

    def _post_all_different(self, items: list[Var | int]) -> None:
        if all(isinstance(x, Var) for x in items):
            post_all_different(self.model, items)
            return
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                a, b = items[i], items[j]
                if isinstance(a, Var) and isinstance(b, Var):
                    self.model.post(Diseq(a, b))
                elif isinstance(a, Var):
                    self.model.post(LinearRel(((1, a),), RelOp.NEQ, b))
                elif isinstance(b, Var):
                    self.model.post(LinearRel(((1, b),), RelOp.NEQ, a))
                elif a == b:
                    self.model.post(FALSE_CONSTRAINT)

    def _rhs_values(self, rhs, count: int, at_cell: CellRef, what: str) -> list[Var | int]:
        if isinstance(rhs, Scalar):
            return [rhs.value] * count
        if isinstance(rhs, IntList):
            values = list(rhs.values)
        else:
            values = self._resolve_all(var_list(rhs.range), at_cell)
        if len(values) != count:
            raise _LowerError(CompileIssue(
                LENGTH_MISMATCH, at_cell,
                f"{count} {what}s but {len(values)} right-hand-side values"))
        return values

    def _post_pair(self, left: Var | int, op: ArithOp, mid: Var | int,
                   rel: RelOp, rhs: Var | int) -> None:
        if op is ArithOp.MUL and isinstance(left, Var) and isinstance(mid, Var):
            if rel is RelOp.EQ:
                if isinstance(rhs, Var):
                    self.model.post(Mul(left, mid, rhs))
                else:
                    aux = self.model.new_var(Domain(rhs, rhs))
                    self.model.post(Mul(left, mid, aux))
                return
            dl, dm = self.model.domains[left], self.model.domains[mid]
            lo, hi = mul_bounds(dl.lo, dl.hi, dm.lo, dm.hi)
            aux = self.model.new_var(Domain(lo, hi))
            self.model.post(Mul(left, mid, aux))
            fold_aggregate(self.model, ArithOp.ADD, [aux], rel, rhs)
            return
        fold_aggregate(self.model, op, [left, mid], rel, rhs)

    # -- arithmetic expression flattening -----------------------------------------

    def _lower_expr(self, e, at_cell: CellRef) -> tuple[dict[Var, int], int]:
        """Flatten to (linear terms, constant); multiplications of two
        non-constant parts introduce one auxiliary variable each."""
        if isinstance(e, Const):
            return {}, e.value
        if isinstance(e, CellVar):
            r = self._resolve(e.ref, at_cell)
            if isinstance(r, Var):
                return {r: 1}, 0
            return {}, r
        if not isinstance(e, Binary):
            raise TypeError(f"not an expression: {e!r}")
        lt, lc = self._lower_expr(e.left, at_cell)
        rt, rc = self._lower_expr(e.right, at_cell)
        if e.op is ArithOp.ADD or e.op is ArithOp.SUB:
            sign = 1 if e.op is ArithOp.ADD else -1
            terms = dict(lt)
            for v, a in rt.items():
                terms[v] = terms.get(v, 0) + sign * a
            return {v: a for v, a in terms.items() if a != 0}, lc + sign * rc
        if not lt:
            return {v: a * lc for v, a in rt.items() if a * lc != 0}, lc * rc
        if not rt:
            return {v: a * rc for v, a in lt.items() if a * rc != 0}, lc * rc
        lv = self._materialize(lt, lc)
        rv = self._materialize(rt, rc)
        dl, dr = self.model.domains[lv], self.model.domains[rv]
        lo, hi = mul_bounds(dl.lo, dl.hi, dr.lo, dr.hi)
        aux = self.model.new_var(Domain(lo, hi))
        self.model.post(Mul(lv, rv, aux))
        return {aux: 1}, 0

    def _materialize(self, terms: dict[Var, int], const: int) -> Var:
        """A variable equal to the linear form (reused as-is when the form
        is already a bare variable)."""
        if const == 0 and len(terms) == 1:
            (v, a), = terms.items()
            if a == 1:
                return v
        lo = const
        hi = const
        for v, a in terms.items():
            d = self.model.domains[v]
            if a > 0:
                lo += a * d.lo
                hi += a * d.hi
            else:
                lo += a * d.hi
                hi += a * d.lo
        aux = self.model.new_var(Domain(lo, hi))
        linear = tuple((a, v) for v, a in terms.items()) + ((-1, aux),)
        self.model.post(LinearRel(linear, RelOp.EQ, -const))
        return aux


def apply_solution(wb: Workbook, cm: CompiledModel, solution: tuple[int, ...]) -> Workbook:
    """Write a solution's values into the variable cells (snapshotting the
    original inputs first if no snapshot exists)."""
    if wb.original is None:
        wb.snapshot()
    for cell, var in cm.cell_to_var.items():
        wb.set_content(cell, IntValue(solution[var]))
    return wb


def cell_roles(cm: CompiledModel) -> dict[str, str]:
    """A1 address -> "variable" | "constraint" (variable wins on overlap)."""
    roles: dict[str, str] = {}
    for cell in var_list(cm.constraint_range):
        roles[format_cell_ref(cell)] = "constraint"
    for cell in cm.var_cells:
        roles[format_cell_ref(cell)] = "variable"
    return roles
