"""Batch command line: check, solve, serve.

Exit codes: 0 ok (including unsat), 1 usage or out-of-range index,
2 parse/compile error, 4 search budget exceeded. Timing goes to stderr so
stdout and output files are byte-identical across runs.
"""
from __future__ import annotations

import argparse
import json
import sys

from .cells import format_cell_ref
from .compiler import CompileError, compile_workbook
from .domain import render_domain
from .grid import WorkbookLoadError, dumps_workbook, load_workbook
from .session import (
    BUDGET_EXCEEDED,
    DEFAULT_BUDGET,
    OPTIMAL,
    SolveSession,
    UNSAT,
)
from .solver import BudgetExceeded, propagate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 4


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load(path: str):
    try:
        return load_workbook(path)
    except FileNotFoundError:
        _err(f"error: no such file: {path}")
        return None
    except WorkbookLoadError as e:
        for line in e.errors:
            _err(f"error: {line}")
        return None


def cmd_check(args) -> int:
    try:
        wb = load_workbook(args.workbook)
    except FileNotFoundError:
        _err(f"error: no such file: {args.workbook}")
        return EXIT_INPUT
    except WorkbookLoadError as e:
        for line in e.errors:
            print(line)
        return EXIT_INPUT
    try:
        cm = compile_workbook(wb)
    except CompileError as e:
        for issue in e.issues:
            print(str(issue))
        return EXIT_INPUT
    for note in cm.diagnostics:
        _err(f"warning: {note}")
    print(f"ok: {len(cm.var_cells)} variables, {len(cm.model.constraints)} constraints")
    return EXIT_OK


def _print_propagation(cm) -> int:
    domains = propagate(cm.model)
    if domains is None:
        print("unsatisfiable")
        return EXIT_OK
    for cell in cm.var_cells:
        print(f"{format_cell_ref(cell)}: {render_domain(domains[cm.cell_to_var[cell]])}")
    return EXIT_OK


def cmd_solve(args) -> int:
    wb = _load(args.workbook)
    if wb is None:
        return EXIT_INPUT
    session = SolveSession(wb, budget=args.budget)
    try:
        if args.propagate_only:
            return _print_propagation(session.check())

        if args.count:
            session.solve(limit=None)
        elif args.all:
            session.solve(limit=args.limit)
        else:
            session.solve(limit=args.solution + 1)
    except CompileError as e:
        for issue in e.issues:
            _err(f"error: {issue}")
        return EXIT_INPUT

    report = session.report
    _err(f"solved in {report.elapsed_ms}ms, status {report.status}")
    if report.status == BUDGET_EXCEEDED:
        _err(f"error: search budget of {args.budget} nodes exceeded")
        return EXIT_BUDGET

    if args.count:
        print(session.count())
        return EXIT_OK

    if args.all:
        cm = session.compiled
        try:
            limit = args.limit if args.limit is not None else session.count()
            for i in range(limit):
                try:
                    sol = session.solution(i)
                except IndexError:
                    break
                cells = {
                    format_cell_ref(c): sol[cm.cell_to_var[c]] for c in cm.var_cells
                }
                print(json.dumps({"index": i, "cells": cells}))
        except BudgetExceeded:
            _err(f"error: search budget of {args.budget} nodes exceeded")
            return EXIT_BUDGET
        return EXIT_OK

    print(f"status: {report.status}")
    if report.status == OPTIMAL:
        print(f"objective: {report.objective}")
    if report.status == UNSAT:
        print("solutions: 0")
    elif session.exhausted:
        print(f"solutions: {session.cached_count}")
    else:
        print(f"solutions: >={session.cached_count}")
    if report.status == UNSAT:
        return EXIT_OK

    try:
        solved = session.solution_workbook(args.solution)
    except IndexError as e:
        _err(f"error: {e}")
        return EXIT_USAGE
    except BudgetExceeded:
        _err(f"error: search budget of {args.budget} nodes exceeded")
        return EXIT_BUDGET
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(dumps_workbook(solved))
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import run_server  # deferred: pulls in the HTTP stack

    run_server(host=args.host, port=args.port, static_dir=args.static)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sheetcsp",
        description="Solve constraint workbooks: finite-domain constraints over an A1 grid.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="parse and compile a workbook without solving")
    p_check.add_argument("workbook")
    p_check.set_defaults(func=cmd_check)

    p_solve = sub.add_parser("solve", help="solve a workbook")
    p_solve.add_argument("workbook")
    p_solve.add_argument("--solution", type=int, default=0, metavar="N",
                         help="0-based solution index to apply (default 0)")
    p_solve.add_argument("--count", action="store_true",
                         help="print the exact number of solutions and exit")
    p_solve.add_argument("--all", action="store_true",
                         help="print solutions as JSON lines")
    p_solve.add_argument("--limit", type=int, default=None, metavar="K",
                         help="with --all: print at most K solutions")
    p_solve.add_argument("--budget", type=int, default=DEFAULT_BUDGET, metavar="NODES",
                         help=f"search node budget (default {DEFAULT_BUDGET})")
    p_solve.add_argument("-o", "--output", metavar="OUT.json",
                         help="write the solved workbook to a file")
    p_solve.add_argument("--propagate-only", action="store_true",
                         help="print each variable's domain after propagation, without searching")
    p_solve.set_defaults(func=cmd_solve)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--static", default=None, metavar="DIR",
                         help="also serve static files (the web UI) from DIR")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    if getattr(args, "solution", 0) < 0:
        _err("error: --solution must be >= 0")
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
