"""Compiler tests: range collection, the transformation rules (golden
expansions from hand-worked examples), reference resolution, error kinds,
and randomized equivalence against direct constraint-semantics evaluation."""

import random

import pytest

from sheetcsp.cells import parse_cell_ref
from sheetcsp.compiler import (
    CompileError,
    apply_solution,
    collect_ranges,
    compile_workbook,
)
from sheetcsp.grid import Workbook
from sheetcsp.ops import RelOp
from sheetcsp.sscl import IntValue
from sheetcsp.solver import Diseq, Element, LinearRel, Mul, solve_iter

import oracles
import wbgen


def wb_of(cells: dict) -> Workbook:
    return Workbook.from_json_dict({"name": "t", "cells": cells})


def refs(cm, *names):
    return [cm.cell_to_var[parse_cell_ref(n)] for n in names]


class TestCollectRanges:
    def test_finds_both(self):
        wb = wb_of({
            "J1": "ssVarRange(A1:H8)",
            "J2": "ssConstraintRange(J4:J8)",
        })
        var_items, cons_items = collect_ranges(wb)
        from sheetcsp.cells import parse_range_list
        assert var_items == parse_range_list("A1:H8")
        assert cons_items == parse_range_list("J4:J8")

    def test_missing_var_range(self):
        wb = wb_of({"J2": "ssConstraintRange(J4:J8)"})
        with pytest.raises(CompileError) as exc:
            collect_ranges(wb)
        assert any(i.kind == "MissingVarRange" for i in exc.value.issues)

    def test_missing_constraint_range(self):
        wb = wb_of({"J1": "ssVarRange(A1:H8)"})
        with pytest.raises(CompileError) as exc:
            collect_ranges(wb)
        assert any(i.kind == "MissingConstraintRange" for i in exc.value.issues)

    def test_duplicate_declaration(self):
        # cells scan row-major, so the K5 declaration is the duplicate
        wb = wb_of({
            "J1": "ssVarRange(A1:H8)",
            "J2": "ssConstraintRange(J4:J8)",
            "K5": "ssConstraintRange(K4:K8)",
        })
        with pytest.raises(CompileError) as exc:
            collect_ranges(wb)
        issue, = exc.value.issues
        assert issue.kind == "DuplicateRangeDecl"
        assert issue.cell == parse_cell_ref("K5")


class TestGoldenExpansions:
    """Compiled stores must match the hand expansions structurally."""

    def test_rows_all_different_a1_c2(self):
        wb = wb_of({
            "H1": "ssDomain(A1:C2, 0, 9)",
            "H2": "ssRowsAllDifferent(A1:C2)",
            "J1": "ssVarRange(A1:C2)",
            "J2": "ssConstraintRange(H1:H2)",
        })
        cm = compile_workbook(wb)
        a1, b1, c1, a2, b2, c2 = refs(cm, "A1", "B1", "C1", "A2", "B2", "C2")
        assert cm.model.constraints == [
            Diseq(a1, b1), Diseq(a1, c1), Diseq(b1, c1),
            Diseq(a2, b2), Diseq(a2, c2), Diseq(b2, c2),
        ]

    def test_diagonals_all_different_a1_d3(self):
        wb = wb_of({
            "H1": "ssDomain(A1:D3, 0, 9)",
            "H2": "ssDiagonalsAllDifferent(A1:D3)",
            "J1": "ssVarRange(A1:D3)",
            "J2": "ssConstraintRange(H1:H2)",
        })
        cm = compile_workbook(wb)
        v = lambda n: cm.cell_to_var[parse_cell_ref(n)]
        expected = [
            Diseq(v("A2"), v("B3")),
            Diseq(v("A1"), v("B2")), Diseq(v("A1"), v("C3")), Diseq(v("B2"), v("C3")),
            Diseq(v("B1"), v("C2")), Diseq(v("B1"), v("D3")), Diseq(v("C2"), v("D3")),
            Diseq(v("C1"), v("D2")),
        ]
        assert cm.model.constraints == expected
        assert len(cm.model.constraints) == 8

    def test_rows_aggregate_with_range_rhs(self):
        wb = wb_of({
            "H1": "ssDomain([A1:C2,D1:D2], 0, 9)",
            "H2": "ssRowsAggregate(+, A1:C2, <, D1:D2)",
            "J1": "ssVarRange([A1:C2,D1:D2])",
            "J2": "ssConstraintRange(H1:H2)",
        })
        cm = compile_workbook(wb)
        a1, b1, c1, d1, a2, b2, c2, d2 = refs(
            cm, "A1", "B1", "C1", "D1", "A2", "B2", "C2", "D2")
        assert cm.model.constraints == [
            LinearRel(((1, a1), (1, b1), (1, c1), (-1, d1)), RelOp.LT, 0),
            LinearRel(((1, a2), (1, b2), (1, c2), (-1, d2)), RelOp.LT, 0),
        ]

    def test_rows_aggregate_scalar_broadcast(self):
        wb = wb_of({
            "H1": "ssDomain(A1:C2, 0, 9)",
            "H2": "ssRowsAggregate(+, A1:C2, <=, 10)",
            "J1": "ssVarRange(A1:C2)",
            "J2": "ssConstraintRange(H1:H2)",
        })
        cm = compile_workbook(wb)
        a1, b1, c1, a2, b2, c2 = refs(cm, "A1", "B1", "C1", "A2", "B2", "C2")
        assert cm.model.constraints == [
            LinearRel(((1, a1), (1, b1), (1, c1)), RelOp.LE, 10),
            LinearRel(((1, a2), (1, b2), (1, c2)), RelOp.LE, 10),
        ]

    def test_diagonal_aggregate_a1_c2(self):
        wb = wb_of({
            "H1": "ssDomain(A1:C2, 0, 9)",
            "H2": "ssDiagonalAggregate(+, A1:C2, >, [2,5,4,6])",
            "J1": "ssVarRange(A1:C2)",
            "J2": "ssConstraintRange(H1:H2)",
        })
        cm = compile_workbook(wb)
        a1, b1, c1, a2, b2, c2 = refs(cm, "A1", "B1", "C1", "A2", "B2", "C2")
        assert cm.model.constraints == [
            LinearRel(((1, a2),), RelOp.GT, 2),
            LinearRel(((1, a1), (1, b2)), RelOp.GT, 5),
            LinearRel(((1, b1), (1, c2)), RelOp.GT, 4),
            LinearRel(((1, c1),), RelOp.GT, 6),
        ]

    def test_pairs_op_multiplication(self):
        wb = wb_of({
            "H1": "ssDomain([A1:B2,C1:D2,E1:F2], 0, 9)",
            "H2": "ssPairsOp(A1:B2, *, C1:D2, =, E1:F2)",
            "J1": "ssVarRange([A1:B2,C1:D2,E1:F2])",
            "J2": "ssConstraintRange(H1:H2)",
        })
        cm = compile_workbook(wb)
        v = lambda n: cm.cell_to_var[parse_cell_ref(n)]
        assert cm.model.constraints == [
            Mul(v("A1"), v("C1"), v("E1")),
            Mul(v("B1"), v("D1"), v("F1")),
            Mul(v("A2"), v("C2"), v("E2")),
            Mul(v("B2"), v("D2"), v("F2")),
        ]


class TestScalarBroadcastEquivalence:
    def test_scalar_equals_repeated_list(self):
        base = {
            "H1": "ssDomain(A1:C2, 0, 4)",
            "J1": "ssVarRange(A1:C2)",
            "J2": "ssConstraintRange(H1:H2)",
        }
        with_scalar = dict(base, H2="ssRowsAggregate(+, A1:C2, #=<, 5)")
        with_list = dict(base, H2="ssRowsAggregate(+, A1:C2, #=<, [5,5])")
        cm_a = compile_workbook(wb_of(with_scalar))
        cm_b = compile_workbook(wb_of(with_list))
        assert cm_a.model.constraints == cm_b.model.constraints
        assert set(solve_iter(cm_a.model)) == set(solve_iter(cm_b.model))


class TestVariableDomains:
    def test_clue_cell_gets_singleton(self):
        wb = wb_of({
            "A1": "5",
            "H1": "ssDomain(A1:B1, 1, 9)",
            "J1": "ssVarRange(A1:B1)",
            "J2": "ssConstraintRange(H1:H1)",
        })
        cm = compile_workbook(wb)
        assert cm.model.domains[cm.cell_to_var[parse_cell_ref("A1")]].values() == [5]
        assert cm.model.domains[cm.cell_to_var[parse_cell_ref("B1")]].size() == 9

    def test_literal_intersects_with_covering_domain(self):
        wb = wb_of({
            "A1": "0..5",
            "H1": "ssDomain(A1:B1, 3, 9)",
            "J1": "ssVarRange(A1:B1)",
            "J2": "ssConstraintRange(H1:H1)",
        })
        cm = compile_workbook(wb)
        assert cm.model.domains[cm.cell_to_var[parse_cell_ref("A1")]].values() == [3, 4, 5]

    def test_empty_intersection_is_unsat_not_error(self):
        wb = wb_of({
            "A1": "0",
            "H1": "ssDomain(A1:B1, 1, 9)",
            "J1": "ssVarRange(A1:B1)",
            "J2": "ssConstraintRange(H1:H1)",
        })
        cm = compile_workbook(wb)  # compiles fine
        assert list(solve_iter(cm.model)) == []

    def test_undomained_variable(self):
        wb = wb_of({
            "H1": "ssDomain(A1:A1, 1, 9)",
            "J1": "ssVarRange(A1:B1)",
            "J2": "ssConstraintRange(H1:H1)",
        })
        with pytest.raises(CompileError) as exc:
            compile_workbook(wb)
        issue, = exc.value.issues
        assert issue.kind == "UndomainedVariable"
        assert issue.cell == parse_cell_ref("B1")

    def test_label_order_is_var_range_expansion(self):
        wb = wb_of({
            "H1": "ssDomain([B2,A1:A2], 0, 1)",
            "J1": "ssVarRange([B2,A1:A2])",
            "J2": "ssConstraintRange(H1:H1)",
        })
        cm = compile_workbook(wb)
        assert cm.var_cells == [parse_cell_ref("B2"), parse_cell_ref("A1"),
                                parse_cell_ref("A2")]
        assert cm.model.label_order == [cm.cell_to_var[c] for c in cm.var_cells]


class TestReferenceResolution:
    def test_outside_int_cell_becomes_constant(self):
        wb = wb_of({
            "D1": "4",
            "A1": "0..9",
            "B1": "0..9",
            "H1": "A1+D1 #= B1",
            "J1": "ssVarRange([A1,B1])",
            "J2": "ssConstraintRange(H1:H1)",
        })
        cm = compile_workbook(wb)
        a1, b1 = refs(cm, "A1", "B1")
        assert cm.model.constraints == [
            LinearRel(((1, a1), (-1, b1)), RelOp.EQ, -4)]

    def test_unknown_reference(self):
        wb = wb_of({
            "A1": "0..9",
            "H1": "A1 #= Z9",
            "J1": "ssVarRange(A1)",
            "J2": "ssConstraintRange(H1:H1)",
        })
        with pytest.raises(CompileError) as exc:
            compile_workbook(wb)
        issue, = exc.value.issues
        assert issue.kind == "UnknownCellReference"
        assert issue.cell == parse_cell_ref("Z9")

    def test_value_in_constraint_range_rejected(self):
        wb = wb_of({
            "A1": "0..9",
            "H1": "A1 #= 3",
            "H2": "7",
            "J1": "ssVarRange(A1)",
            "J2": "ssConstraintRange(H1:H2)",
        })
        with pytest.raises(CompileError) as exc:
            compile_workbook(wb)
        issue, = exc.value.issues
        assert issue.kind == "NonConstraintInConstraintRange"
        assert issue.cell == parse_cell_ref("H2")

    def test_empty_constraint_cells_skipped(self):
        wb = wb_of({
            "A1": "0..2",
            "H1": "A1 #> 0",
            "J1": "ssVarRange(A1)",
            "J2": "ssConstraintRange(H1:H5)",
        })
        cm = compile_workbook(wb)
        assert len(cm.model.constraints) == 1

    def test_multiple_objectives(self):
        wb = wb_of({
            "A1": "0..9", "B1": "0..9",
            "H1": "ssMin(A1)",
            "H2": "ssMax(B1)",
            "J1": "ssVarRange([A1,B1])",
            "J2": "ssConstraintRange(H1:H2)",
        })
        with pytest.raises(CompileError) as exc:
            compile_workbook(wb)
        issue, = exc.value.issues
        assert issue.kind == "MultipleObjectives"

    def test_objective_must_be_variable_cell(self):
        wb = wb_of({
            "A1": "0..9",
            "H1": "ssMin(Z9)",
            "J1": "ssVarRange(A1)",
            "J2": "ssConstraintRange(H1:H1)",
        })
        with pytest.raises(CompileError) as exc:
            compile_workbook(wb)
        assert exc.value.issues[0].kind == "UnknownCellReference"

    def test_length_mismatch(self):
        wb = wb_of({
            "H1": "ssDomain(A1:C2, 0, 4)",
            "H2": "ssRowsAggregate(+, A1:C2, #=, [1,2,3])",
            "J1": "ssVarRange(A1:C2)",
            "J2": "ssConstraintRange(H1:H2)",
        })
        with pytest.raises(CompileError) as exc:
            compile_workbook(wb)
        assert exc.value.issues[0].kind == "LengthMismatch"

    def test_nth_element_lowering(self):
        wb = wb_of({
            "A1": "0..5", "B1": "0..9",
            "H1": "ssNthElement(A1, [3,1,2], B1)",
            "J1": "ssVarRange([A1,B1])",
            "J2": "ssConstraintRange(H1:H1)",
        })
        cm = compile_workbook(wb)
        a1, b1 = refs(cm, "A1", "B1")
        assert cm.model.constraints == [Element(a1, (3, 1, 2), b1)]
        sols = {(s[a1], s[b1]) for s in solve_iter(cm.model)}
        assert sols == {(1, 3), (2, 1), (3, 2)}


class TestConstraintOrderIndependence:
    def test_permuted_constraint_cells_same_solution_set(self):
        texts = [
            "ssDomain(A1:B2, 0, 3)",
            "ssRowsAllDifferent(A1:B2)",
            "ssColsAggregate(+, A1:B2, #=<, 4)",
            "A1+B2 #> 1",
        ]
        r = random.Random(3)
        baseline = None
        for _ in range(6):
            order = list(texts)
            r.shuffle(order)
            cells = {f"H{i+1}": t for i, t in enumerate(order)}
            cells["J1"] = "ssVarRange(A1:B2)"
            cells["J2"] = f"ssConstraintRange(H1:H{len(order)})"
            cm = compile_workbook(wb_of(cells))
            sols = set(solve_iter(cm.model))
            if baseline is None:
                baseline = sols
            assert sols == baseline


class TestApplySolution:
    def test_writes_values_and_snapshots(self):
        wb = wb_of({
            "A1": "5",
            "H1": "ssDomain(A1:B1, 1, 9)",
            "H2": "ssRowsAllDifferent(A1:B1)",
            "J1": "ssVarRange(A1:B1)",
            "J2": "ssConstraintRange(H1:H2)",
        })
        cm = compile_workbook(wb)
        sol = next(iter(solve_iter(cm.model)))
        apply_solution(wb, cm, sol)
        assert wb.get(parse_cell_ref("A1")) == IntValue(5)  # clue preserved
        b1 = wb.get(parse_cell_ref("B1"))
        assert isinstance(b1, IntValue) and b1.value != 5
        assert wb.original is not None
        wb.restore()
        assert wb.get(parse_cell_ref("B1")) is None  # was empty before solving


class TestNegativeDomains:
    def test_negative_values_through_the_pipeline(self):
        wb = wb_of({
            "A1": "-3..3", "B1": "[-2,0,2]",
            "H1": "A1+B1 #= -2",
            "H2": "A1*B1 #>= 0",
            "J1": "ssVarRange([A1,B1])",
            "J2": "ssConstraintRange(H1:H2)",
        })
        cm = compile_workbook(wb)
        got = sorted({(s[0], s[1]) for s in solve_iter(cm.model)})
        brute = sorted({(a, b) for a in range(-3, 4) for b in (-2, 0, 2)
                        if a + b == -2 and a * b >= 0})
        assert got == brute == [(-2, 0), (0, -2)]


class TestOracleEquivalence:
    def test_random_workbooks_match_brute_force(self):
        r = random.Random(1234)
        for _ in range(40):
            g = wbgen.random_workbook(r)
            cm = compile_workbook(g.workbook())
            got = {
                tuple(s[cm.cell_to_var[c]] for c in g.var_cells)
                for s in solve_iter(cm.model)
            }
            want = oracles.brute_force_solutions(
                g.var_cells, g.pools, g.constants, g.constraint_asts())
            assert got == want, g.doc
