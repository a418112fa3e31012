"""Exercise files and emitted worked-solution documents.

An exercise file (`*.exercise.json`, format 1) states one problem: classify a
formula, produce a normal form over an order, check a consequence argument by
a given method, or derive a formula to a goal.  Solving renders a document in
the appendix layout — numbered law-annotated lines, "Σm(…)"/"ΠM(…)" lines,
a final "∴ …" answer — plus a machine block holding the structured result.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Any, Sequence

from . import inference, normal_forms, semantics
from .autoderive import AutoGoal, NotConstant, StepLimitExceeded, TermBlowupLimit, auto_derive
from .derivation import (
    Derivation,
    Mode,
    ShapeGoal,
    derivation_from_json,
    derivation_to_json,
    validate_derivation,
)
from .formula import Formula, Literal, atoms
from .inference import Argument, Method, Verdict, VerdictTrace, parse_argument, render_argument
from .laws import SPANISH_NAMES
from .semantics import Classification, TooManyVariables
from .syntax import ParseError, parse_infix, print_formula

FORMAT_VERSION = 1

SPANISH_CLASS = {
    Classification.TAUTOLOGY: "Tautología",
    Classification.CONTINGENCY: "Contingencia",
    Classification.CONTRADICTION: "Contradicción",
}
ENGLISH_CLASS = {
    Classification.TAUTOLOGY: "Tautology",
    Classification.CONTINGENCY: "Contingency",
    Classification.CONTRADICTION: "Contradiction",
}
VERDICT_LINE = {
    Verdict.VALID: "∴ CL válida (valid consequence)",
    Verdict.INVALID: "∴ CL inválida (invalid: countermodel exists)",
    Verdict.INCONCLUSIVE: "Inconcluso (inconclusive: method could not decide)",
}


class ExerciseError(Exception):
    pass


class IoError(ExerciseError):
    pass


class SchemaError(ExerciseError):
    def __init__(self, source: str, reason: str):
        self.source = source
        self.reason = reason
        super().__init__(f"{source}: {reason}")


class DuplicateId(ExerciseError):
    def __init__(self, exercise_id: str, files: Sequence[str]):
        self.exercise_id = exercise_id
        self.files = tuple(files)
        super().__init__(f"duplicate exercise id {exercise_id!r} in {', '.join(files)}")


@dataclass(frozen=True)
class Exercise:
    id: str
    kind: str  # classify | normal-form | consequence | derivation-goal
    statement: str
    title: str = ""
    nf: ShapeGoal | None = None
    order: tuple[str, ...] | None = None
    method: Method | None = None
    goal: str | None = None
    expected: dict | None = None
    source: str = ""

    def formula(self) -> Formula:
        return parse_infix(self.statement)

    def argument(self) -> Argument:
        return parse_argument(self.statement)


_KINDS = ("classify", "normal-form", "consequence", "derivation-goal")


def exercise_from_json(obj: dict, source: str = "<memory>") -> Exercise:
    if not isinstance(obj, dict):
        raise SchemaError(source, "exercise must be a JSON object")
    if obj.get("format", FORMAT_VERSION) != FORMAT_VERSION:
        raise SchemaError(source, f"unsupported format {obj.get('format')!r}")
    exercise_id = obj.get("id")
    if not exercise_id or not isinstance(exercise_id, str):
        raise SchemaError(source, "missing or invalid 'id'")
    kind = obj.get("kind")
    if kind not in _KINDS:
        raise SchemaError(source, f"unknown kind {kind!r}")
    statement = obj.get("statement")
    if not statement or not isinstance(statement, str):
        raise SchemaError(source, "missing 'statement'")

    nf = None
    order = None
    method = None
    goal = None
    try:
        if kind == "consequence":
            parse_argument(statement)
            raw = obj.get("method", "definition")
            try:
                method = Method(raw)
            except ValueError:
                raise SchemaError(source, f"unknown method {raw!r}") from None
        else:
            parse_infix(statement)
        if kind == "normal-form":
            raw = obj.get("nf", "fndp")
            try:
                nf = ShapeGoal(raw)
            except ValueError:
                raise SchemaError(source, f"unknown normal form {raw!r}") from None
            if "order" in obj:
                order = tuple(str(v) for v in obj["order"])
        if kind == "derivation-goal":
            goal = str(obj.get("goal", "T"))
            if goal not in ("T", "F"):
                parse_infix(goal)
    except ParseError as err:
        raise SchemaError(source, f"statement does not parse: {err}") from None

    expected = obj.get("expected")
    if expected is not None and not isinstance(expected, dict):
        raise SchemaError(source, "'expected' must be an object")
    return Exercise(
        id=exercise_id,
        kind=kind,
        statement=statement,
        title=str(obj.get("title", "")),
        nf=nf,
        order=order,
        method=method,
        goal=goal,
        expected=expected,
        source=source,
    )


def load_exercise_file(path: str | FsPath) -> Exercise:
    path = FsPath(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as err:
        raise IoError(str(err)) from None
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as err:
        raise SchemaError(str(path), f"invalid JSON: {err}") from None
    return exercise_from_json(obj, source=str(path))


def load_exercises(path: str | FsPath) -> list[Exercise]:
    path = FsPath(path)
    if not path.exists():
        raise IoError(f"no such file or directory: {path}")
    files = [path] if path.is_file() else sorted(path.glob("*.exercise.json"))
    exercises = []
    seen: dict[str, str] = {}
    for file in files:
        ex = load_exercise_file(file)
        if ex.id in seen:
            raise DuplicateId(ex.id, [seen[ex.id], str(file)])
        seen[ex.id] = str(file)
        exercises.append(ex)
    return exercises


# ---------------------------------------------------------------------------
# rendering


def _fmt(f: Formula, ascii_only: bool = False) -> str:
    return print_formula(f, ascii_only=ascii_only)


def render_derivation_lines(d: Derivation, ascii_only: bool = False) -> list[str]:
    lines = [f"   {_fmt(d.start, ascii_only)}"]
    for step in d.steps:
        name = SPANISH_NAMES[step.law]
        lines.append(f"≡  {_fmt(step.result, ascii_only):<60} {name}")
    return lines


def _literal_json(lit: Literal) -> dict:
    return {"atom": lit.atom, "negated": lit.negated}


def _facts_lines(trace: inference.FactTrace, ascii_only: bool = False) -> list[str]:
    value = {True: "T", False: "F"}
    lines = []
    for f in trace.facts:
        lines.append(f"[{f.index}] {_fmt(f.formula, ascii_only)} ≡ {value[f.value]}    {f.justification}")
    if trace.closing:
        closing = trace.closing
        if trace.closing_formula is not None:
            closing = closing.format(f=_fmt(trace.closing_formula, ascii_only))
        lines.append(closing)
    return lines


def _resolution_lines(trace: inference.ResolutionTrace) -> list[str]:
    lines = []
    marked = set(trace.refutation)
    for step in trace.steps:
        origin = {
            "premise": "premisa",
            "negated-conclusion": "negación de la conclusión",
            "resolvent": f"resolvente de [{step.parents[0]}], [{step.parents[1]}]" if step.parents else "resolvente",
        }[step.origin]
        text = inference._clause_text(frozenset(step.literals))
        star = " *" if step.index in marked else ""
        lines.append(f"[{step.index}] {text}    ({origin}){star}")
    return lines


def trace_to_json(vt: VerdictTrace) -> dict:
    obj: dict[str, Any] = {"method": vt.method.value, "verdict": vt.verdict.value}
    if vt.countermodel is not None:
        obj["countermodel"] = vt.countermodel
    if vt.derivation is not None:
        obj["derivation"] = derivation_to_json(vt.derivation)
    if vt.facts is not None:
        obj["facts"] = [
            {
                "index": f.index,
                "formula": print_formula(f.formula),
                "value": f.value,
                "justification": f.justification,
            }
            for f in vt.facts.facts
        ]
        if vt.facts.contradiction:
            obj["contradiction"] = list(vt.facts.contradiction)
    if vt.resolution is not None:
        obj["resolution"] = {
            "clauses": [
                {
                    "index": s.index,
                    "literals": [_literal_json(l) for l in s.literals],
                    "origin": s.origin,
                    "parents": list(s.parents) if s.parents else None,
                }
                for s in vt.resolution.steps
            ],
            "refutation": vt.resolution.refutation,
        }
    if vt.table is not None:
        obj["table"] = {"order": list(vt.table.order), "note": vt.table.note}
        if vt.table.rows is not None:
            obj["table"]["rows"] = [
                {"assignment": assignment, "value": value} for assignment, value in vt.table.rows
            ]
    return obj


@dataclass
class SolutionDocument:
    exercise_id: str
    kind: str
    lines: list[str] = field(default_factory=list)
    answer: str = ""
    ok: bool = True
    error: str | None = None
    error_kind: str | None = None  # "limit" | "engine"
    machine: dict = field(default_factory=dict)

    def to_text(self) -> str:
        header = f"== {self.exercise_id} =="
        parts = [header, *self.lines]
        if self.answer:
            parts.append(self.answer)
        if self.error:
            parts.append(f"ERROR: {self.error}")
        if not self.ok and not self.error:
            parts.append("(!) el resultado no coincide con lo esperado")
        return "\n".join(parts) + "\n"

    def to_json(self) -> dict:
        return {
            "format": FORMAT_VERSION,
            "exercise": self.exercise_id,
            "kind": self.kind,
            "lines": self.lines,
            "answer": self.answer,
            "ok": self.ok,
            "error": self.error,
            "machine": self.machine,
        }


def _expected_mismatches(expected: dict | None, actual: dict) -> list[str]:
    if not expected:
        return []
    problems = []
    for key, want in expected.items():
        got = actual.get(key)
        if isinstance(want, list) and isinstance(got, (list, tuple)):
            if sorted(want) != sorted(got):
                problems.append(f"{key}: expected {want}, got {list(got)}")
        elif got != want:
            problems.append(f"{key}: expected {want!r}, got {got!r}")
    return problems


def solve(exercise: Exercise, ascii_only: bool = False, cap: int | None = None) -> SolutionDocument:
    doc = SolutionDocument(exercise_id=exercise.id, kind=exercise.kind)
    try:
        if exercise.kind == "classify":
            _solve_classify(exercise, doc, ascii_only, cap)
        elif exercise.kind == "normal-form":
            _solve_normal_form(exercise, doc, ascii_only, cap)
        elif exercise.kind == "consequence":
            _solve_consequence(exercise, doc, ascii_only, cap)
        else:
            _solve_derivation_goal(exercise, doc, ascii_only, cap)
    except (TooManyVariables, TermBlowupLimit, StepLimitExceeded) as err:
        doc.ok = False
        doc.error = str(err)
        doc.error_kind = "limit"
        doc.machine = {"error": str(err)}
    except (NotConstant, ValueError) as err:
        doc.ok = False
        doc.error = str(err)
        doc.error_kind = "engine"
        doc.machine = {"error": str(err)}
    return doc


def _finish(doc: SolutionDocument, expected: dict | None, comparable: dict) -> None:
    problems = _expected_mismatches(expected, comparable)
    if problems:
        doc.ok = False
        doc.lines.extend(f"(!) {p}" for p in problems)


def _solve_classify(e: Exercise, doc: SolutionDocument, ascii_only: bool, cap: int | None) -> None:
    f = e.formula()
    cls = semantics.classify(f, cap=cap)
    doc.lines.append(f"   {_fmt(f, ascii_only)}")
    if len(atoms(f)) <= 6:
        table = semantics.truth_table(f, cap=cap)
        doc.lines.extend(_table_lines(table))
    doc.answer = f"∴ {SPANISH_CLASS[cls]} ({ENGLISH_CLASS[cls]})"
    doc.machine = {"classification": cls.value}
    _finish(doc, e.expected, {"classification": cls.value})


def _table_lines(table: semantics.TruthTable) -> list[str]:
    head = "  ".join(table.order) + "  | f"
    lines = [head, "-" * len(head)]
    for assignment, value in table.rows:
        cells = "  ".join("1" if assignment[v] else "0" for v in table.order)
        lines.append(f"{cells}  | {'1' if value else '0'}")
    return lines


def _solve_normal_form(e: Exercise, doc: SolutionDocument, ascii_only: bool, cap: int | None) -> None:
    f = e.formula()
    order = e.order or tuple(atoms(f))
    kind = e.nf or ShapeGoal.FNDP
    if kind in (ShapeGoal.FNDP, ShapeGoal.FNCP):
        form, d = normal_forms.to_principal(f, kind, order)
        idx = form.indices
        doc.lines.extend(render_derivation_lines(d, ascii_only))
        args = ", ".join(order)
        doc.lines.append(f"f({args}) = Σm({', '.join(map(str, idx.minterms))})")
        doc.lines.append(f"f({args}) = ΠM({', '.join(map(str, idx.maxterms))})")
        cls = semantics.classify(f, cap=cap)
        doc.answer = f"∴ {SPANISH_CLASS[cls]} ({ENGLISH_CLASS[cls]})"
        doc.machine = {
            "nf": kind.value,
            "order": list(order),
            "terms": [[_literal_json(l) for l in t] for t in form.terms],
            "minterms": list(idx.minterms),
            "maxterms": list(idx.maxterms),
            "classification": cls.value,
            "derivation": derivation_to_json(d),
        }
        _finish(
            doc,
            e.expected,
            {
                "minterms": list(idx.minterms),
                "maxterms": list(idx.maxterms),
                "classification": cls.value,
            },
        )
        return

    if kind is ShapeGoal.NNF:
        result, d = normal_forms.to_nnf(f)
        terms_json: list = []
    elif kind is ShapeGoal.DNF:
        dnf, d = normal_forms.to_dnf(f)
        result = d.final
        terms_json = [[_literal_json(l) for l in t] for t in dnf.terms]
    else:
        cnf, d = normal_forms.to_cnf(f)
        result = d.final
        terms_json = [[_literal_json(l) for l in t] for t in cnf.terms]
    doc.lines.extend(render_derivation_lines(d, ascii_only))
    doc.answer = f"{kind.value.upper()}: {_fmt(result, ascii_only)}"
    doc.machine = {
        "nf": kind.value,
        "result": print_formula(result),
        "terms": terms_json,
        "derivation": derivation_to_json(d),
    }
    _finish(doc, e.expected, {"result": print_formula(result)})


def _solve_consequence(e: Exercise, doc: SolutionDocument, ascii_only: bool, cap: int | None) -> None:
    arg = e.argument()
    method = e.method or Method.DEFINITION
    vt = inference.check(arg, method, cap=cap)
    doc.lines.append(f"{render_argument(arg, ascii_only)}    [método: {method.value}]")
    if vt.derivation is not None:
        doc.lines.extend(render_derivation_lines(vt.derivation, ascii_only))
    if vt.facts is not None:
        doc.lines.extend(_facts_lines(vt.facts, ascii_only))
    if vt.resolution is not None:
        doc.lines.extend(_resolution_lines(vt.resolution))
    if vt.table is not None:
        doc.lines.append(vt.table.note)
    if vt.countermodel:
        model = ", ".join(f"{k}={'T' if v else 'F'}" for k, v in sorted(vt.countermodel.items()))
        doc.lines.append(f"contraejemplo: {model}")
    doc.answer = VERDICT_LINE[vt.verdict]
    doc.machine = trace_to_json(vt)
    _finish(doc, e.expected, {"verdict": vt.verdict.value})


def _solve_derivation_goal(e: Exercise, doc: SolutionDocument, ascii_only: bool, cap: int | None) -> None:
    f = e.formula()
    d = auto_derive(f, AutoGoal.TO_CONSTANT, cap=cap)
    doc.lines.extend(render_derivation_lines(d, ascii_only))
    reached = print_formula(d.final)
    doc.answer = f"∴ {_fmt(f, ascii_only)} ≡ {reached}"
    cls = semantics.classify(f, cap=cap)
    doc.lines.append(f"∴ {SPANISH_CLASS[cls]} ({ENGLISH_CLASS[cls]})")
    doc.machine = {
        "derivation": derivation_to_json(d),
        "reaches": reached,
        "classification": cls.value,
    }
    _finish(doc, e.expected, {"reaches": reached, "classification": cls.value})


def verify_solution(doc_json: dict, exercise: Exercise, cap: int | None = None) -> list[str]:
    """Re-check a solution document's machine block against the engines: the
    embedded derivation must validate and index sets must match the oracle.
    Returns a list of problems (empty when everything re-checks)."""
    problems: list[str] = []
    machine = doc_json.get("machine", {})
    if "derivation" in machine:
        d = derivation_from_json(machine["derivation"])
        report = validate_derivation(d, Mode.LENIENT_AC)
        if not report.valid:
            problems.append("embedded derivation does not validate")
    if doc_json.get("kind") == "normal-form" and "minterms" in machine:
        f = exercise.formula()
        order = machine.get("order") or exercise.order
        idx = semantics.index_sets(f, order, cap=cap)
        if list(idx.minterms) != list(machine["minterms"]):
            problems.append("minterms disagree with the truth-table oracle")
        if list(idx.maxterms) != list(machine["maxterms"]):
            problems.append("maxterms disagree with the truth-table oracle")
    if doc_json.get("kind") == "consequence" and "verdict" in machine:
        arg = exercise.argument()
        holds = semantics.entails(list(arg.premises), arg.conclusion, cap=cap)
        verdict = machine["verdict"]
        if verdict == "valid" and not holds:
            problems.append("verdict 'valid' contradicts the entailment oracle")
        if verdict == "invalid" and holds:
            problems.append("verdict 'invalid' contradicts the entailment oracle")
    return problems
