"""The spreadsheet constraint language: cell-input classification and parsing.

Raw cell text is one of three things: an integer value, a domain literal
("2..5" or "[2,5,7]"), or a constraint formula. Formulas are the ss* function
vocabulary (ssDomain, ssAllDifferent, ssRowsAggregate, ...) plus free-form
relational expressions such as "A1+4 #< B2".
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .cells import (
    CellRange,
    CellRef,
    RangeItem,
    RefError,
    format_cell_ref,
    format_range,
    format_range_list,
    parse_cell_ref,
)
from .ops import (
    REL_SPELLINGS,
    ArithOp,
    DomainSpec,
    IntervalDom,
    ListDom,
    RelOp,
)


class SsclError(ValueError):
    """Parse failure; carries the character position of the offending token."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at column {pos + 1})")
        self.message = message
        self.pos = pos


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

class Orientation(enum.Enum):
    ALL = "all"
    ROWS = "rows"
    COLS = "cols"
    DIAG = "diag"
    BACKDIAG = "backdiag"


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class CellVar:
    ref: CellRef


@dataclass(frozen=True)
class Binary:
    op: ArithOp
    left: "ArithExpr"
    right: "ArithExpr"


ArithExpr = Const | CellVar | Binary


@dataclass(frozen=True)
class Scalar:
    value: int


@dataclass(frozen=True)
class IntList:
    values: tuple[int, ...]


@dataclass(frozen=True)
class RangeRhs:
    range: CellRange


RhsSpec = Scalar | IntList | RangeRhs


@dataclass(frozen=True)
class DomainDecl:
    ranges: tuple[RangeItem, ...]
    dom: DomainSpec


@dataclass(frozen=True)
class AllDifferent:
    orientation: Orientation
    range: CellRange


@dataclass(frozen=True)
class Aggregate:
    orientation: Orientation
    op: ArithOp
    range: CellRange
    rel: RelOp
    rhs: RhsSpec


@dataclass(frozen=True)
class PairsOp:
    lhs: CellRange
    op: ArithOp
    mid: CellRange
    rel: RelOp
    rhs: RhsSpec


@dataclass(frozen=True)
class NthElement:
    index: CellRef | int
    items: IntList | RangeRhs
    value: CellRef


@dataclass(frozen=True)
class Minimize:
    var: CellRef


@dataclass(frozen=True)
class Maximize:
    var: CellRef


@dataclass(frozen=True)
class VarRange:
    ranges: tuple[RangeItem, ...]


@dataclass(frozen=True)
class ConstraintRange:
    ranges: tuple[RangeItem, ...]


@dataclass(frozen=True)
class RelConstraint:
    left: ArithExpr
    rel: RelOp
    right: ArithExpr


SsclAst = (
    DomainDecl
    | AllDifferent
    | Aggregate
    | PairsOp
    | NthElement
    | Minimize
    | Maximize
    | VarRange
    | ConstraintRange
    | RelConstraint
)


# ---------------------------------------------------------------------------
# Classified cell content
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntValue:
    value: int


@dataclass(frozen=True)
class DomainLiteral:
    dom: DomainSpec


@dataclass(frozen=True)
class Formula:
    ast: SsclAst
    source: str  # verbatim user text, kept for display and round-trip


CellContent = IntValue | DomainLiteral | Formula


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

# Longest first so "#=<" wins over "#=" and "#<".
_SYMBOLS = (
    "#>=", "#=<", "#\\=",
    "#=", "#<", "#>", ">=", "=<", "<=", "..",
    "(", ")", "[", "]", ",", ":", "+", "-", "*", "=", "<", ">",
)

_REL_TOKENS = frozenset(REL_SPELLINGS)


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "ident", "end", or the symbol text itself
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalnum():
                j += 1
            toks.append(_Tok("ident", text[i:j], i))
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(_Tok(sym, sym, i))
                i += len(sym)
                break
        else:
            raise SsclError(f"unexpected character {ch!r}", i)
    toks.append(_Tok("end", "", n))
    return toks


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_SS_FORMS = {
    "ssdomain": "ssDomain",
    "ssalldifferent": "ssAllDifferent",
    "ssrowsalldifferent": "ssRowsAllDifferent",
    "sscolsalldifferent": "ssColsAllDifferent",
    "ssdiagonalsalldifferent": "ssDiagonalsAllDifferent",
    "ssbackdiagonalsalldifferent": "ssBackDiagonalsAllDifferent",
    "ssrowsaggregate": "ssRowsAggregate",
    "sscolsaggregate": "ssColsAggregate",
    "ssdiagonalaggregate": "ssDiagonalAggregate",
    "ssbackdiagonalaggregate": "ssBackDiagonalAggregate",
    "sspairsop": "ssPairsOp",
    "ssnthelement": "ssNthElement",
    "ssmin": "ssMin",
    "ssmax": "ssMax",
    "ssvarrange": "ssVarRange",
    "ssconstraintrange": "ssConstraintRange",
}

_ALLDIFF_ORIENT = {
    "ssAllDifferent": Orientation.ALL,
    "ssRowsAllDifferent": Orientation.ROWS,
    "ssColsAllDifferent": Orientation.COLS,
    "ssDiagonalsAllDifferent": Orientation.DIAG,
    "ssBackDiagonalsAllDifferent": Orientation.BACKDIAG,
}

_AGGREGATE_ORIENT = {
    "ssRowsAggregate": Orientation.ROWS,
    "ssColsAggregate": Orientation.COLS,
    "ssDiagonalAggregate": Orientation.DIAG,
    "ssBackDiagonalAggregate": Orientation.BACKDIAG,
}


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, kind: str) -> _Tok | None:
        if self.tok.kind == kind:
            return self.advance()
        return None

    def expect(self, kind: str, what: str | None = None) -> _Tok:
        if self.tok.kind != kind:
            want = what or repr(kind)
            raise SsclError(f"expected {want}, found {self.tok.text or 'end of input'!r}", self.tok.pos)
        return self.advance()

    def fail(self, message: str) -> SsclError:
        return SsclError(message, self.tok.pos)

    # -- leaves ------------------------------------------------------------

    def integer(self) -> int:
        neg = False
        if self.tok.kind in ("-", "+"):
            neg = self.advance().kind == "-"
        t = self.expect("int", "an integer")
        v = int(t.text)
        return -v if neg else v

    def cell_ref(self) -> CellRef:
        t = self.expect("ident", "a cell reference")
        try:
            return parse_cell_ref(t.text)
        except RefError as e:
            raise SsclError(str(e), t.pos) from None

    def range_item(self) -> RangeItem:
        tl = self.cell_ref()
        if self.accept(":"):
            pos = self.tok.pos
            br = self.cell_ref()
            try:
                return CellRange(tl, br)
            except RefError as e:
                raise SsclError(str(e), pos) from None
        return tl

    def cell_range(self) -> CellRange:
        item = self.range_item()
        if isinstance(item, CellRef):
            return CellRange(item, item)
        return item

    def range_list(self) -> tuple[RangeItem, ...]:
        if self.accept("["):
            items = [self.range_item()]
            while self.accept(","):
                items.append(self.range_item())
            self.expect("]")
            return tuple(items)
        return (self.range_item(),)

    def int_list(self) -> tuple[int, ...]:
        self.expect("[")
        values = [self.integer()]
        while self.accept(","):
            values.append(self.integer())
        self.expect("]")
        return tuple(values)

    def rel_op(self) -> RelOp:
        if self.tok.kind in _REL_TOKENS:
            return REL_SPELLINGS[self.advance().kind]
        raise self.fail(f"expected a relational operator, found {self.tok.text!r}")

    def aggregate_op(self) -> ArithOp:
        if self.tok.kind == "+":
            self.advance()
            return ArithOp.ADD
        if self.tok.kind == "*":
            self.advance()
            return ArithOp.MUL
        raise self.fail("aggregation operator must be + or *")

    def rhs_spec(self) -> RhsSpec:
        if self.tok.kind == "[":
            return IntList(self.int_list())
        if self.tok.kind in ("int", "-", "+"):
            return Scalar(self.integer())
        item = self.range_item()
        if isinstance(item, CellRef):
            return RangeRhs(CellRange(item, item))
        return RangeRhs(item)

    # -- expressions (precedence: * over +/-, left-associative) -------------

    def expr(self) -> ArithExpr:
        left = self.term()
        while self.tok.kind in ("+", "-"):
            op = ArithOp.ADD if self.advance().kind == "+" else ArithOp.SUB
            left = Binary(op, left, self.term())
        return left

    def term(self) -> ArithExpr:
        left = self.factor()
        while self.tok.kind == "*":
            self.advance()
            left = Binary(ArithOp.MUL, left, self.factor())
        return left

    def factor(self) -> ArithExpr:
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.tok.kind == "-":
            self.advance()
            f = self.factor()
            if isinstance(f, Const):
                return Const(-f.value)
            return Binary(ArithOp.SUB, Const(0), f)
        if self.tok.kind == "int":
            return Const(int(self.advance().text))
        if self.tok.kind == "ident":
            return CellVar(self.cell_ref())
        raise self.fail(f"expected an expression, found {self.tok.text or 'end of input'!r}")

    # -- constraints ---------------------------------------------------------

    def constraint(self) -> SsclAst:
        t = self.tok
        if t.kind == "ident" and self.toks[self.i + 1].kind == "(":
            name = _SS_FORMS.get(t.text.lower())
            if name is None:
                if t.text.lower().startswith("ss"):
                    raise SsclError(f"unknown constraint function {t.text!r}", t.pos)
                raise SsclError(f"unknown function {t.text!r}", t.pos)
            self.advance()
            self.expect("(")
            ast = self.ss_form(name)
            self.expect(")")
            self.expect("end", "end of input")
            return ast
        left = self.expr()
        if self.tok.kind == "end":
            raise self.fail("missing relational operator in constraint expression")
        rel = self.rel_op()
        right = self.expr()
        self.expect("end", "end of input")
        return RelConstraint(left, rel, right)

    def ss_form(self, name: str) -> SsclAst:
        if name == "ssDomain":
            ranges = self.range_list()
            self.expect(",")
            if self.tok.kind == "[":
                dom: DomainSpec = ListDom(self.int_list())
            else:
                first = self.integer()
                if self.accept(","):
                    second = self.integer()
                    if first > second:
                        raise self.fail(f"empty domain {first}..{second}")
                    dom = IntervalDom(first, second)
                else:
                    dom = ListDom((first,))
            return DomainDecl(ranges, dom)

        if name in _ALLDIFF_ORIENT:
            return AllDifferent(_ALLDIFF_ORIENT[name], self.cell_range())

        if name in _AGGREGATE_ORIENT:
            op = self.aggregate_op()
            self.expect(",")
            rng = self.cell_range()
            self.expect(",")
            rel = self.rel_op()
            self.expect(",")
            rhs = self.rhs_spec()
            return Aggregate(_AGGREGATE_ORIENT[name], op, rng, rel, rhs)

        if name == "ssPairsOp":
            lhs = self.cell_range()
            self.expect(",")
            op = self.aggregate_op()
            self.expect(",")
            mid = self.cell_range()
            self.expect(",")
            rel = self.rel_op()
            self.expect(",")
            rhs = self.rhs_spec()
            return PairsOp(lhs, op, mid, rel, rhs)

        if name == "ssNthElement":
            if self.tok.kind in ("int", "-", "+"):
                index: CellRef | int = self.integer()
            else:
                index = self.cell_ref()
            self.expect(",")
            if self.tok.kind == "[":
                items: IntList | RangeRhs = IntList(self.int_list())
            else:
                items = RangeRhs(self.cell_range())
            self.expect(",")
            value = self.cell_ref()
            return NthElement(index, items, value)

        if name == "ssMin":
            return Minimize(self.cell_ref())
        if name == "ssMax":
            return Maximize(self.cell_ref())
        if name == "ssVarRange":
            return VarRange(self.range_list())
        if name == "ssConstraintRange":
            return ConstraintRange(self.range_list())
        raise AssertionError(name)


def parse_constraint(text: str) -> SsclAst:
    """Parse one SSCL constraint. Raises SsclError with a character position."""
    return _Parser(_tokenize(text)).constraint()


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def _match_signed_int(toks: list[_Tok], i: int) -> tuple[int, int] | None:
    """Match [+-]? INT starting at token i; return (value, next index)."""
    neg = False
    if toks[i].kind in ("-", "+"):
        neg = toks[i].kind == "-"
        i += 1
    if toks[i].kind != "int":
        return None
    v = int(toks[i].text)
    return (-v if neg else v, i + 1)


def _try_domain_literal(toks: list[_Tok]) -> DomainSpec | None:
    m = _match_signed_int(toks, 0)
    if m is not None:
        lo, i = m
        if toks[i].kind == "..":
            m2 = _match_signed_int(toks, i + 1)
            if m2 is not None and toks[m2[1]].kind == "end":
                hi = m2[0]
                if lo > hi:
                    raise SsclError(f"empty domain {lo}..{hi}", toks[0].pos)
                return IntervalDom(lo, hi)
        return None
    if toks[0].kind == "[":
        values = []
        i = 1
        while True:
            m = _match_signed_int(toks, i)
            if m is None:
                return None
            values.append(m[0])
            i = m[1]
            if toks[i].kind == ",":
                i += 1
                continue
            if toks[i].kind == "]" and toks[i + 1].kind == "end":
                return ListDom(tuple(values))
            return None
    return None


def classify_input(text: str) -> CellContent:
    """Classify raw cell text: integer value, domain literal, or formula.

    Precedence per the language definition: a bare integer is a value
    (never a singleton domain), "lo..hi" / "[i1,...,ik]" are domain
    literals, everything else must parse as a constraint.
    """
    s = text.strip()
    if not s:
        raise SsclError("empty cell input", 0)
    toks = _tokenize(s)
    m = _match_signed_int(toks, 0)
    if m is not None and toks[m[1]].kind == "end":
        return IntValue(m[0])
    dom = _try_domain_literal(toks)
    if dom is not None:
        return DomainLiteral(dom)
    return Formula(_Parser(toks).constraint(), s)


# ---------------------------------------------------------------------------
# Rendering (canonical text; parse(render(ast)) == ast)
# ---------------------------------------------------------------------------

def render_domain_spec(d: DomainSpec) -> str:
    if isinstance(d, IntervalDom):
        return f"{d.lo}..{d.hi}"
    return "[" + ",".join(str(v) for v in d.values_) + "]"


def _render_rhs(rhs: RhsSpec) -> str:
    if isinstance(rhs, Scalar):
        return str(rhs.value)
    if isinstance(rhs, IntList):
        return "[" + ",".join(str(v) for v in rhs.values) + "]"
    return format_range(rhs.range)


_PREC = {ArithOp.ADD: 1, ArithOp.SUB: 1, ArithOp.MUL: 2}


def _render_expr(e: ArithExpr, min_prec: int = 0) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, CellVar):
        return format_cell_ref(e.ref)
    p = _PREC[e.op]
    left = _render_expr(e.left, p)
    right = _render_expr(e.right, p + 1)  # left-associative
    s = f"{left}{e.op.value}{right}"
    if p < min_prec:
        return f"({s})"
    return s


_ALLDIFF_NAMES = {v: k for k, v in _ALLDIFF_ORIENT.items()}
_AGGREGATE_NAMES = {v: k for k, v in _AGGREGATE_ORIENT.items()}


def render_ast(ast: SsclAst) -> str:
    """Render an AST to canonical SSCL text."""
    if isinstance(ast, DomainDecl):
        rs = format_range_list(ast.ranges)
        if isinstance(ast.dom, IntervalDom):
            return f"ssDomain({rs}, {ast.dom.lo}, {ast.dom.hi})"
        return f"ssDomain({rs}, {render_domain_spec(ast.dom)})"
    if isinstance(ast, AllDifferent):
        return f"{_ALLDIFF_NAMES[ast.orientation]}({format_range(ast.range)})"
    if isinstance(ast, Aggregate):
        name = _AGGREGATE_NAMES[ast.orientation]
        return (
            f"{name}({ast.op.value}, {format_range(ast.range)}, "
            f"{ast.rel.value}, {_render_rhs(ast.rhs)})"
        )
    if isinstance(ast, PairsOp):
        return (
            f"ssPairsOp({format_range(ast.lhs)}, {ast.op.value}, "
            f"{format_range(ast.mid)}, {ast.rel.value}, {_render_rhs(ast.rhs)})"
        )
    if isinstance(ast, NthElement):
        n = ast.index if isinstance(ast.index, int) else format_cell_ref(ast.index)
        if isinstance(ast.items, IntList):
            items = "[" + ",".join(str(v) for v in ast.items.values) + "]"
        else:
            items = format_range(ast.items.range)
        return f"ssNthElement({n}, {items}, {format_cell_ref(ast.value)})"
    if isinstance(ast, Minimize):
        return f"ssMin({format_cell_ref(ast.var)})"
    if isinstance(ast, Maximize):
        return f"ssMax({format_cell_ref(ast.var)})"
    if isinstance(ast, VarRange):
        return f"ssVarRange({format_range_list(ast.ranges)})"
    if isinstance(ast, ConstraintRange):
        return f"ssConstraintRange({format_range_list(ast.ranges)})"
    if isinstance(ast, RelConstraint):
        return f"{_render_expr(ast.left)} {ast.rel.value} {_render_expr(ast.right)}"
    raise TypeError(f"not an SSCL AST: {ast!r}")
