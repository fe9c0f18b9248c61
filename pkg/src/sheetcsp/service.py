"""HTTP service over solve sessions (stdlib http.server, JSON bodies).

Endpoints:
  POST /api/workbook                 body = workbook JSON -> {"session": token}
  GET  /api/workbook?session=        current display workbook + role annotations
  PUT  /api/cells/{ref}?session=     body {"input": text} -> new classification
  POST /api/solve?session=           body {"limit"?, "budget"?} -> solve report
  GET  /api/solutions/{i}?session=   workbook JSON with solution i applied
  POST /api/reset?session=           original workbook JSON

Each session serializes its mutations: a request that would overlap an
in-flight solve gets 409. All numbers in bodies are decimal integers.
"""
from __future__ import annotations

import json
import mimetypes
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .cells import RefError, format_range_item, parse_cell_ref
from .compiler import CompileError, cell_roles, compile_workbook
from .grid import (
    CellInputError,
    DomainLiteral,
    Formula,
    IntValue,
    Workbook,
    WorkbookLoadError,
    content_text,
)
from .session import DEFAULT_BUDGET, SolveSession
from .solver import BudgetExceeded


class _Entry:
    def __init__(self, session: SolveSession):
        self.session = session
        self.lock = threading.Lock()


class SheetCspServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, addr, static_dir: str | None = None):
        super().__init__(addr, _Handler)
        self.sessions: dict[str, _Entry] = {}
        self.sessions_lock = threading.Lock()
        self.static_dir = Path(static_dir).resolve() if static_dir else None


def _content_kind(content) -> str:
    if content is None:
        return "empty"
    if isinstance(content, IntValue):
        return "int"
    if isinstance(content, DomainLiteral):
        return "domain"
    if isinstance(content, Formula):
        return "formula"
    return "unknown"


def _issues_json(e: CompileError) -> list[dict]:
    return [
        {
            "cell": issue.cell and format_range_item(issue.cell),
            "kind": issue.kind,
            "message": issue.message,
        }
        for issue in e.issues
    ]


class _Handler(BaseHTTPRequestHandler):
    server: SheetCspServer

    def log_message(self, format, *args):  # keep test output quiet
        pass

    # -- plumbing -------------------------------------------------------------

    def _send_json(self, code: int, payload) -> None:
        body = json.dumps(payload).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _body_json(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            return json.loads(raw)
        except json.JSONDecodeError:
            return None

    def _entry(self, query) -> _Entry | None:
        token = (query.get("session") or [""])[0]
        with self.server.sessions_lock:
            entry = self.server.sessions.get(token)
        if entry is None:
            self._send_json(404, {"error": "unknown session"})
        return entry

    # -- routing ----------------------------------------------------------------

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.end_headers()

    def do_POST(self):
        url = urlparse(self.path)
        query = parse_qs(url.query)
        if url.path == "/api/workbook":
            self._create_session()
        elif url.path == "/api/solve":
            self._solve(query)
        elif url.path == "/api/reset":
            self._reset(query)
        else:
            self._send_json(404, {"error": "not found"})

    def do_PUT(self):
        url = urlparse(self.path)
        query = parse_qs(url.query)
        if url.path.startswith("/api/cells/"):
            self._put_cell(url.path[len("/api/cells/"):], query)
        else:
            self._send_json(404, {"error": "not found"})

    def do_GET(self):
        url = urlparse(self.path)
        query = parse_qs(url.query)
        if url.path == "/api/workbook":
            self._get_workbook(query)
        elif url.path.startswith("/api/solutions/"):
            self._get_solution(url.path[len("/api/solutions/"):], query)
        elif self.server.static_dir is not None:
            self._static(url.path)
        else:
            self._send_json(404, {"error": "not found"})

    # -- handlers ------------------------------------------------------------------

    def _create_session(self):
        data = self._body_json()
        if data is None:
            self._send_json(400, {"error": "malformed JSON body"})
            return
        try:
            wb = Workbook.from_json_dict(data)
        except WorkbookLoadError as e:
            self._send_json(400, {"errors": e.errors})
            return
        token = uuid.uuid4().hex
        with self.server.sessions_lock:
            self.server.sessions[token] = _Entry(SolveSession(wb))
        self._send_json(200, {"session": token})

    def _view_payload(self, session: SolveSession, wb: Workbook) -> dict:
        roles = {}
        var_range = None
        constraint_range = None
        cm = session.compiled
        if cm is None:
            try:
                cm = compile_workbook(session.workbook)
            except Exception:
                cm = None  # annotations are best-effort on unsolved workbooks
        if cm is not None:
            roles = cell_roles(cm)
            var_range = "[" + ",".join(format_range_item(i) for i in cm.var_range) + "]"
            constraint_range = "[" + ",".join(
                format_range_item(i) for i in cm.constraint_range) + "]"
        doc = wb.to_json_dict()
        return {
            "name": doc["name"],
            "cells": doc["cells"],
            "roles": roles,
            "var_range": var_range,
            "constraint_range": constraint_range,
            "report": session.report.to_json_dict() if session.report else None,
            "index": session.index,
        }

    def _get_workbook(self, query):
        entry = self._entry(query)
        if entry is None:
            return
        session = entry.session
        if session.index is not None:
            wb = session.solution_workbook(session.index)
        else:
            wb = session.workbook
        self._send_json(200, self._view_payload(session, wb))

    def _put_cell(self, ref_text: str, query):
        entry = self._entry(query)
        if entry is None:
            return
        if not entry.lock.acquire(blocking=False):
            self._send_json(409, {"error": "session busy"})
            return
        try:
            try:
                ref = parse_cell_ref(ref_text)
            except RefError as e:
                self._send_json(400, {"error": {"cell": ref_text, "message": str(e)}})
                return
            data = self._body_json()
            if data is None or not isinstance(data.get("input", ""), str):
                self._send_json(400, {"error": {"cell": ref_text, "message": "body must be {\"input\": text}"}})
                return
            session = entry.session
            try:
                session.workbook.set_cell(ref, data.get("input", ""))
            except CellInputError as e:
                self._send_json(400, {"error": {"cell": ref_text, "message": str(e.error)}})
                return
            session.reset()  # edits invalidate any solve state
            content = session.workbook.get(ref)
            self._send_json(200, {
                "cell": ref_text.upper(),
                "kind": _content_kind(content),
                "text": content_text(content) if content is not None else "",
            })
        finally:
            entry.lock.release()

    def _solve(self, query):
        entry = self._entry(query)
        if entry is None:
            return
        if not entry.lock.acquire(blocking=False):
            self._send_json(409, {"error": "solve already in flight"})
            return
        try:
            data = self._body_json()
            if data is None:
                self._send_json(400, {"error": "malformed JSON body"})
                return
            session = entry.session
            limit = data.get("limit")
            budget = data.get("budget")
            session.budget = budget if isinstance(budget, int) else DEFAULT_BUDGET
            try:
                report = session.solve(limit=limit if isinstance(limit, int) else None)
            except CompileError as e:
                self._send_json(400, {"errors": _issues_json(e)})
                return
            self._send_json(200, report.to_json_dict())
        finally:
            entry.lock.release()

    def _get_solution(self, index_text: str, query):
        entry = self._entry(query)
        if entry is None:
            return
        try:
            i = int(index_text)
        except ValueError:
            self._send_json(404, {"error": f"bad solution index {index_text!r}"})
            return
        if not entry.lock.acquire(blocking=False):
            self._send_json(409, {"error": "session busy"})
            return
        try:
            session = entry.session
            if session.report is None:
                self._send_json(409, {"error": "workbook not solved yet"})
                return
            try:
                wb = session.solution_workbook(i)
            except IndexError as e:
                self._send_json(404, {"error": str(e)})
                return
            except BudgetExceeded:
                self._send_json(404, {"error": "search budget exceeded while enumerating"})
                return
            payload = self._view_payload(session, wb)
            payload["index"] = i
            payload["count"] = session.cached_count
            payload["exhausted"] = session.exhausted
            self._send_json(200, payload)
        finally:
            entry.lock.release()

    def _reset(self, query):
        entry = self._entry(query)
        if entry is None:
            return
        if not entry.lock.acquire(blocking=False):
            self._send_json(409, {"error": "session busy"})
            return
        try:
            session = entry.session
            session.reset()
            self._send_json(200, self._view_payload(session, session.workbook))
        finally:
            entry.lock.release()

    # -- static files (the web UI build, when configured) -------------------------

    def _static(self, path: str):
        root = self.server.static_dir
        rel = path.lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if root not in target.parents and target != root:
            self._send_json(404, {"error": "not found"})
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)


def run_server(host: str = "127.0.0.1", port: int = 8000,
               static_dir: str | None = None) -> None:
    server = SheetCspServer((host, port), static_dir=static_dir)
    print(f"sheetcsp service on http://{host}:{server.server_address[1]}/", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
