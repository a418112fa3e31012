"""Stateless HTTP JSON facade over the engine, powering the derivation
trainer: parse, list applicable moves, apply a step, validate a derivation,
serve exercises, accept submissions.

Every request carries full state (formula text, path, derivation), so
identical requests always produce identical responses and the server keeps no
sessions.  The exercise store is read-only after startup.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any

from . import semantics
from .derivation import Mode, derivation_from_json, validate_derivation
from .exercises import (
    ENGLISH_CLASS,
    Exercise,
    SPANISH_CLASS,
    load_exercises,
)
from .formula import Formula, PathOutOfRange, atoms, node_count, subformula_at
from .laws import Direction, LawId, PatternMismatch, applicable_laws, apply_law
from .semantics import Classification
from .syntax import ParseError, SyntaxStyle, parse, print_formula

MAX_BODY_BYTES = 64 * 1024
MAX_FORMULA_NODES = 2000


class ApiError(Exception):
    def __init__(self, status: int, payload: dict):
        self.status = status
        self.payload = payload
        super().__init__(payload.get("error", "error"))


def _parse_formula(text: Any, notation: Any = "infix") -> Formula:
    if not isinstance(text, str):
        raise ApiError(400, {"error": "schema", "detail": "missing formula text"})
    try:
        f = parse(text, str(notation or "infix"))
    except ParseError as err:
        raise ApiError(
            400,
            {"error": "parse", "position": err.position, "expected": err.expected, "found": err.found},
        ) from None
    if node_count(f) > MAX_FORMULA_NODES:
        raise ApiError(400, {"error": "limit", "detail": f"formula exceeds {MAX_FORMULA_NODES} nodes"})
    return f


def _parse_path(raw: Any) -> tuple[int, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list) or not all(isinstance(x, int) for x in raw):
        raise ApiError(400, {"error": "schema", "detail": "path must be a list of integers"})
    return tuple(raw)


def _ast_json(f: Formula) -> dict:
    from .formula import And, Atom, Const, Iff, Implies, Not, Or

    if isinstance(f, Const):
        return {"const": f.value}
    if isinstance(f, Atom):
        return {"atom": f.name}
    if isinstance(f, Not):
        return {"op": "not", "child": _ast_json(f.child)}
    op = {And: "and", Or: "or", Implies: "implies", Iff: "iff"}[type(f)]
    return {"op": op, "left": _ast_json(f.left), "right": _ast_json(f.right)}


def _renderings(f: Formula) -> dict:
    return {
        "minimal": print_formula(f),
        "full": print_formula(f, SyntaxStyle.INFIX_FULL),
        "polish": print_formula(f, SyntaxStyle.POLISH),
    }


_CLASS_ANSWERS = {
    "tautology": Classification.TAUTOLOGY,
    "tautologia": Classification.TAUTOLOGY,
    "tautología": Classification.TAUTOLOGY,
    "contingency": Classification.CONTINGENCY,
    "contingencia": Classification.CONTINGENCY,
    "contradiction": Classification.CONTRADICTION,
    "contradicción": Classification.CONTRADICTION,
    "contradiccion": Classification.CONTRADICTION,
}

_VERDICT_ANSWERS = {
    "valid": True,
    "válida": True,
    "valida": True,
    "cl válida": True,
    "cl valida": True,
    "invalid": False,
    "inválida": False,
    "invalida": False,
    "cl inválida": False,
    "cl invalida": False,
}


class TrainerService:
    """Pure request handlers: JSON in, (status, JSON) out."""

    def __init__(self, exercises: list[Exercise] | None = None):
        self.exercises = {e.id: e for e in (exercises or [])}

    # -- engine endpoints ---------------------------------------------------

    def parse(self, body: dict) -> dict:
        f = _parse_formula(body.get("text"), body.get("notation", "infix"))
        return {"ast": _ast_json(f), "atoms": atoms(f), "rendered": _renderings(f)}

    def _moves(self, f: Formula, path: tuple[int, ...]) -> list[dict]:
        moves = []
        for law, direction in applicable_laws(f, path):
            preview = apply_law(f, law, direction, path)
            moves.append(
                {
                    "law": law.value,
                    "direction": direction.value,
                    "preview": print_formula(preview),
                }
            )
        return moves

    def step_options(self, body: dict) -> dict:
        f = _parse_formula(body.get("formula"))
        path = _parse_path(body.get("path"))
        try:
            subformula_at(f, path)
        except PathOutOfRange:
            raise ApiError(400, {"error": "path", "detail": "path does not address a node"}) from None
        return {"moves": self._moves(f, path)}

    def step_apply(self, body: dict) -> dict:
        f = _parse_formula(body.get("formula"))
        path = _parse_path(body.get("path"))
        try:
            law = LawId(str(body.get("law")))
            direction = Direction(str(body.get("direction", "LR")))
        except ValueError:
            raise ApiError(400, {"error": "schema", "detail": "unknown law or direction"}) from None
        try:
            result = apply_law(f, law, direction, path)
        except PathOutOfRange:
            raise ApiError(400, {"error": "path", "detail": "path does not address a node"}) from None
        except PatternMismatch as err:
            raise ApiError(400, {"error": "mismatch", "detail": str(err)}) from None
        goal_reached = False
        raw_goal = body.get("goal")
        if isinstance(raw_goal, str) and raw_goal.strip():
            goal = _parse_formula(raw_goal)
            goal_reached = result == goal
        return {
            "result": _renderings(result),
            "moves": self._moves(result, ()),
            "goalReached": goal_reached,
        }

    def validate(self, body: dict) -> dict:
        raw = body.get("derivation")
        if not isinstance(raw, dict):
            raise ApiError(400, {"error": "schema", "detail": "missing derivation object"})
        try:
            d = derivation_from_json(raw)
        except ValueError as err:
            raise ApiError(400, {"error": "schema", "detail": str(err)}) from None
        mode = Mode.STRICT if body.get("mode") == "strict" else Mode.LENIENT_AC
        report = validate_derivation(d, mode)
        return {
            "overall": report.valid,
            "goal": report.goal_ok,
            "final": print_formula(report.final),
            "perStep": [
                {
                    "index": v.index,
                    "ok": v.ok,
                    "matched": v.matched.value if v.matched else None,
                    "reason": v.reason,
                }
                for v in report.steps
            ],
        }

    # -- exercise endpoints ---------------------------------------------------

    def _exercise_payload(self, e: Exercise) -> dict:
        payload = {
            "id": e.id,
            "kind": e.kind,
            "title": e.title,
            "statement": e.statement,
        }
        if e.nf:
            payload["nf"] = e.nf.value
        if e.order:
            payload["order"] = list(e.order)
        if e.method:
            payload["method"] = e.method.value
        if e.goal:
            payload["goal"] = e.goal
        return payload

    def list_exercises(self) -> dict:
        return {"exercises": [self._exercise_payload(e) for e in self.exercises.values()]}

    def get_exercise(self, exercise_id: str) -> dict:
        e = self.exercises.get(exercise_id)
        if e is None:
            raise ApiError(404, {"error": "unknown", "detail": f"no exercise {exercise_id!r}"})
        return self._exercise_payload(e)

    def submit(self, exercise_id: str, body: dict) -> dict:
        e = self.exercises.get(exercise_id)
        if e is None:
            raise ApiError(404, {"error": "unknown", "detail": f"no exercise {exercise_id!r}"})
        if "derivation" in body:
            return self._submit_derivation(e, body["derivation"])
        if "answer" in body:
            return self._submit_answer(e, body["answer"])
        raise ApiError(400, {"error": "schema", "detail": "submission needs 'derivation' or 'answer'"})

    def _submit_derivation(self, e: Exercise, raw: Any) -> dict:
        if e.kind != "derivation-goal":
            raise ApiError(400, {"error": "schema", "detail": f"exercise {e.id} does not take derivations"})
        if not isinstance(raw, dict):
            raise ApiError(400, {"error": "schema", "detail": "derivation must be an object"})
        try:
            d = derivation_from_json(raw)
        except ValueError as err:
            raise ApiError(400, {"error": "schema", "detail": str(err)}) from None
        start = _parse_formula(e.statement)
        if d.start != start:
            return {"verdict": "invalid", "feedback": "derivation does not start at the exercise formula"}
        report = validate_derivation(d, Mode.LENIENT_AC)
        if not report.valid:
            bad = [v.index + 1 for v in report.steps if not v.ok]
            return {"verdict": "invalid", "feedback": f"steps {bad} do not check"}
        goal = _parse_formula(e.goal or "T")
        if report.final != goal:
            return {
                "verdict": "invalid",
                "feedback": f"derivation ends at {print_formula(report.final)}, goal is {print_formula(goal)}",
            }
        return {"verdict": "valid", "feedback": "∴ derivación válida: goal reached"}

    def _submit_answer(self, e: Exercise, raw: Any) -> dict:
        if e.kind == "classify" or (e.kind == "normal-form" and isinstance(raw, str)):
            truth = semantics.classify(_parse_formula(e.statement))
            answer = _CLASS_ANSWERS.get(str(raw).strip().lower())
            if answer is None:
                raise ApiError(400, {"error": "schema", "detail": f"unknown classification {raw!r}"})
            if answer is truth:
                return {"verdict": "correct", "feedback": f"∴ {SPANISH_CLASS[truth]}"}
            return {
                "verdict": "incorrect",
                "expected": SPANISH_CLASS[truth],
                "feedback": f"la clasificación correcta es {SPANISH_CLASS[truth]} ({ENGLISH_CLASS[truth]})",
            }
        if e.kind == "consequence":
            from .inference import parse_argument

            arg = parse_argument(e.statement)
            holds = semantics.entails(list(arg.premises), arg.conclusion)
            answer = _VERDICT_ANSWERS.get(str(raw).strip().lower())
            if answer is None:
                raise ApiError(400, {"error": "schema", "detail": f"unknown verdict {raw!r}"})
            expected = "CL válida" if holds else "CL inválida"
            if answer is holds:
                return {"verdict": "correct", "feedback": f"∴ {expected}"}
            return {"verdict": "incorrect", "expected": expected, "feedback": f"la respuesta correcta es {expected}"}
        if e.kind == "normal-form" and isinstance(raw, dict):
            f = _parse_formula(e.statement)
            order = e.order or tuple(atoms(f))
            idx = semantics.index_sets(f, order)
            want_min = sorted(int(x) for x in raw.get("minterms", []))
            want_max = sorted(int(x) for x in raw.get("maxterms", []))
            ok = want_min == list(idx.minterms) and want_max == list(idx.maxterms)
            if ok:
                return {"verdict": "correct", "feedback": "índices correctos"}
            return {
                "verdict": "incorrect",
                "expected": {"minterms": list(idx.minterms), "maxterms": list(idx.maxterms)},
                "feedback": "los índices no coinciden",
            }
        raise ApiError(400, {"error": "schema", "detail": "answer shape not understood"})


# ---------------------------------------------------------------------------
# HTTP plumbing


def make_handler(service: TrainerService, allow_origin: str | None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args):  # silence default stderr chatter
            pass

        def _send(self, status: int, payload: dict) -> None:
            data = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(data)))
            if allow_origin:
                self.send_header("Access-Control-Allow-Origin", allow_origin)
            self.end_headers()
            self.wfile.write(data)

        def _body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if length > MAX_BODY_BYTES:
                raise ApiError(413, {"error": "limit", "detail": f"body exceeds {MAX_BODY_BYTES} bytes"})
            raw = self.rfile.read(length) if length else b"{}"
            try:
                body = json.loads(raw.decode("utf-8") or "{}")
            except (UnicodeDecodeError, json.JSONDecodeError) as err:
                raise ApiError(400, {"error": "schema", "detail": f"invalid JSON body: {err}"}) from None
            if not isinstance(body, dict):
                raise ApiError(400, {"error": "schema", "detail": "body must be a JSON object"})
            return body

        def do_OPTIONS(self):
            self.send_response(204)
            if allow_origin:
                self.send_header("Access-Control-Allow-Origin", allow_origin)
                self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self):
            try:
                if self.path == "/api/health":
                    self._send(200, {"status": "ok"})
                elif self.path == "/api/exercises":
                    self._send(200, service.list_exercises())
                elif self.path.startswith("/api/exercises/"):
                    exercise_id = self.path[len("/api/exercises/") :]
                    self._send(200, service.get_exercise(exercise_id))
                else:
                    self._send(404, {"error": "unknown", "detail": self.path})
            except ApiError as err:
                self._send(err.status, err.payload)
            except semantics.TooManyVariables as err:
                self._send(400, {"error": "limit", "detail": str(err)})

        def do_POST(self):
            try:
                body = self._body()
                if self.path == "/api/parse":
                    self._send(200, service.parse(body))
                elif self.path == "/api/step/options":
                    self._send(200, service.step_options(body))
                elif self.path == "/api/step/apply":
                    self._send(200, service.step_apply(body))
                elif self.path == "/api/derivation/validate":
                    self._send(200, service.validate(body))
                elif self.path.startswith("/api/exercises/") and self.path.endswith("/submit"):
                    exercise_id = self.path[len("/api/exercises/") : -len("/submit")]
                    self._send(200, service.submit(exercise_id, body))
                else:
                    self._send(404, {"error": "unknown", "detail": self.path})
            except ApiError as err:
                self._send(err.status, err.payload)
            except semantics.TooManyVariables as err:
                self._send(400, {"error": "limit", "detail": str(err)})

    return Handler


def make_server(host: str, port: int, exercises_dir: str | None = None, allow_origin: str | None = None) -> ThreadingHTTPServer:
    store = load_exercises(exercises_dir) if exercises_dir else []
    service = TrainerService(store)
    handler = make_handler(service, allow_origin)
    return ThreadingHTTPServer((host, port), handler)


def run_server(host: str, port: int, exercises_dir: str | None = None, allow_origin: str | None = None) -> None:
    server = make_server(host, port, exercises_dir, allow_origin)
    address = f"{server.server_address[0]}:{server.server_address[1]}"
    print(f"discreta trainer service listening on http://{address}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
