"""Command-line surface.

Exit codes: 0 success/valid; 1 check failed, invalid verdict or mismatch with
an expected answer; 2 parse or usage error; 3 resource limit hit
(TooManyVariables, TermBlowupLimit, StepLimitExceeded).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path as FsPath

from . import exercises, inference, normal_forms, semantics
from .autoderive import NotConstant, StepLimitExceeded, TermBlowupLimit
from .derivation import Mode, ShapeGoal, derivation_from_json, derivation_to_json, validate_derivation
from .exercises import (
    DuplicateId,
    ENGLISH_CLASS,
    IoError,
    SPANISH_CLASS,
    SchemaError,
    SolutionDocument,
    VERDICT_LINE,
    render_derivation_lines,
    solve,
    trace_to_json,
)
from .formula import Formula, atoms
from .inference import Method, Verdict, parse_argument
from .semantics import TooManyVariables
from .syntax import ParseError, SyntaxStyle, parse, print_formula

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3

_LIMIT_ERRORS = (TooManyVariables, TermBlowupLimit, StepLimitExceeded)


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


def _out(text: str) -> None:
    sys.stdout.write(text + "\n")


def _json_out(obj) -> None:
    sys.stdout.write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def _parse_formula(text: str, notation: str = "infix") -> Formula:
    try:
        return parse(text, notation)
    except ParseError as err:
        raise _CliError(EXIT_USAGE, f"parse error: {err}") from None


def _style(name: str) -> SyntaxStyle:
    return {"minimal": SyntaxStyle.INFIX_MINIMAL, "full": SyntaxStyle.INFIX_FULL, "polish": SyntaxStyle.POLISH}[name]


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


def _cmd_parse(args) -> int:
    f = _parse_formula(args.formula, args.notation)
    if args.json:
        _json_out(
            {
                "ast": _ast_json(f),
                "atoms": atoms(f),
                "rendered": {
                    "minimal": print_formula(f),
                    "full": print_formula(f, SyntaxStyle.INFIX_FULL),
                    "polish": print_formula(f, SyntaxStyle.POLISH),
                },
            }
        )
    else:
        _out(print_formula(f, _style(args.style), ascii_only=args.ascii))
    return EXIT_OK


def _cmd_table(args) -> int:
    f = _parse_formula(args.formula)
    table = semantics.truth_table(f)
    if args.json:
        _json_out(
            {
                "order": list(table.order),
                "rows": [
                    {"assignment": assignment, "value": value}
                    for assignment, value in table.rows
                ],
            }
        )
        return EXIT_OK
    header = "  ".join(table.order) + "  | " + (args.formula.strip())
    _out(header)
    _out("-" * len(header))
    for assignment, value in table.rows:
        cells = "  ".join("1" if assignment[v] else "0" for v in table.order)
        _out(f"{cells}  | {'1' if value else '0'}")
    return EXIT_OK


def _cmd_classify(args) -> int:
    f = _parse_formula(args.formula)
    cls = semantics.classify(f)
    if args.json:
        _json_out({"classification": cls.value})
    else:
        _out(f"{SPANISH_CLASS[cls]} ({ENGLISH_CLASS[cls]})")
    return EXIT_OK


def _split_order(raw: str | None) -> tuple[str, ...] | None:
    if raw is None:
        return None
    return tuple(v.strip() for v in raw.split(",") if v.strip())


def _cmd_nf(args) -> int:
    f = _parse_formula(args.formula)
    order = _split_order(args.order)
    kind = ShapeGoal(args.kind)
    if kind in (ShapeGoal.FNDP, ShapeGoal.FNCP):
        form, d = normal_forms.to_principal(f, kind, order or tuple(atoms(f)))
        if args.json:
            _json_out(
                {
                    "nf": kind.value,
                    "order": list(form.order),
                    "result": print_formula(d.final),
                    "minterms": list(form.indices.minterms),
                    "maxterms": list(form.indices.maxterms),
                    "derivation": derivation_to_json(d),
                }
            )
            return EXIT_OK
        for line in render_derivation_lines(d, ascii_only=args.ascii):
            _out(line)
        _out(f"Σm({', '.join(map(str, form.indices.minterms))})")
        _out(f"ΠM({', '.join(map(str, form.indices.maxterms))})")
        return EXIT_OK
    if kind is ShapeGoal.NNF:
        result, d = normal_forms.to_nnf(f)
    elif kind is ShapeGoal.DNF:
        _, d = normal_forms.to_dnf(f)
        result = d.final
    else:
        _, d = normal_forms.to_cnf(f)
        result = d.final
    if args.json:
        _json_out({"nf": kind.value, "result": print_formula(result), "derivation": derivation_to_json(d)})
        return EXIT_OK
    for line in render_derivation_lines(d, ascii_only=args.ascii):
        _out(line)
    _out(f"{kind.value.upper()}: {print_formula(result, ascii_only=args.ascii)}")
    return EXIT_OK


def _cmd_indices(args) -> int:
    f = _parse_formula(args.formula)
    order = _split_order(args.order)
    if not order:
        order = tuple(atoms(f))
    idx = semantics.index_sets(f, order)
    if args.json:
        _json_out({"order": list(order), "minterms": list(idx.minterms), "maxterms": list(idx.maxterms)})
    else:
        _out(f"Σm({','.join(map(str, idx.minterms))}) ΠM({','.join(map(str, idx.maxterms))})")
    return EXIT_OK


def _cmd_check(args) -> int:
    path = FsPath(args.derivation)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except OSError as err:
        raise _CliError(EXIT_USAGE, f"cannot read {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise _CliError(EXIT_USAGE, f"invalid JSON in {path}: {err}") from None
    try:
        d = derivation_from_json(obj)
    except ValueError as err:
        raise _CliError(EXIT_USAGE, str(err)) from None
    mode = Mode.STRICT if args.strict else Mode.LENIENT_AC
    report = validate_derivation(d, mode)
    if args.json:
        _json_out(
            {
                "overall": report.valid,
                "goal": report.goal_ok,
                "final": print_formula(report.final),
                "perStep": [
                    {"index": v.index, "ok": v.ok, "matched": v.matched.value if v.matched else None, "reason": v.reason}
                    for v in report.steps
                ],
            }
        )
    else:
        for v in report.steps:
            status = "ok " if v.ok else "FAIL"
            law = v.matched.value if v.matched else d.steps[v.index].law_text
            _out(f"step {v.index + 1}: {status} {law}" + (f" — {v.reason}" if v.reason else ""))
        if report.goal_ok is not None:
            _out(f"goal: {'reached' if report.goal_ok else 'NOT reached'}")
        _out("válida" if report.valid else "inválida")
    return EXIT_OK if report.valid else EXIT_FAIL


def _cmd_prove(args) -> int:
    try:
        arg = parse_argument(args.argument)
    except ParseError as err:
        raise _CliError(EXIT_USAGE, f"parse error: {err}") from None
    method = Method(args.method)
    vt = inference.check(arg, method)
    if args.json:
        _json_out(trace_to_json(vt))
    else:
        from .exercises import _facts_lines, _resolution_lines

        if vt.derivation is not None:
            for line in render_derivation_lines(vt.derivation, ascii_only=args.ascii):
                _out(line)
        if vt.facts is not None:
            for line in _facts_lines(vt.facts, ascii_only=args.ascii):
                _out(line)
        if vt.resolution is not None:
            for line in _resolution_lines(vt.resolution):
                _out(line)
        if vt.countermodel:
            model = ", ".join(f"{k}={'T' if v else 'F'}" for k, v in sorted(vt.countermodel.items()))
            _out(f"contraejemplo: {model}")
        _out(VERDICT_LINE[vt.verdict])
    if vt.verdict is Verdict.VALID:
        return EXIT_OK
    return EXIT_FAIL


def _cmd_solve(args) -> int:
    try:
        exercise = exercises.load_exercise_file(args.exercise)
    except (IoError, SchemaError, DuplicateId) as err:
        raise _CliError(EXIT_USAGE, str(err)) from None
    doc = solve(exercise, ascii_only=args.ascii)
    _emit_doc(doc, args.json)
    return _doc_code(doc)


def _doc_code(doc: SolutionDocument) -> int:
    if doc.error_kind == "limit":
        return EXIT_LIMIT
    if not doc.ok:
        return EXIT_FAIL
    return EXIT_OK


def _emit_doc(doc: SolutionDocument, as_json: bool) -> None:
    if as_json:
        _json_out(doc.to_json())
    else:
        sys.stdout.write(doc.to_text())


def _cmd_solve_all(args) -> int:
    try:
        items = exercises.load_exercises(args.directory)
    except (IoError, SchemaError, DuplicateId) as err:
        raise _CliError(EXIT_USAGE, str(err)) from None
    worst = EXIT_OK
    out_dir = FsPath(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    for exercise in items:
        doc = solve(exercise, ascii_only=args.ascii)
        if out_dir:
            suffix = ".solution.json" if args.json else ".solution.txt"
            payload = (
                json.dumps(doc.to_json(), ensure_ascii=False, indent=2) + "\n"
                if args.json
                else doc.to_text()
            )
            _atomic_write(out_dir / f"{exercise.id}{suffix}", payload)
            _out(f"{exercise.id}: {'ok' if doc.ok else 'MISMATCH' if not doc.error else 'ERROR'}")
        else:
            _emit_doc(doc, args.json)
        worst = max(worst, _doc_code(doc))
    return worst


def _atomic_write(path: FsPath, payload: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _cmd_serve(args) -> int:
    from .service import run_server

    host, _, port = args.addr.rpartition(":")
    if not host or not port.isdigit():
        raise _CliError(EXIT_USAGE, f"bad --addr {args.addr!r}, expected HOST:PORT")
    run_server(host, int(port), exercises_dir=args.exercises, allow_origin=args.allow_origin)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discreta", description="Propositional-logic workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit the JSON solution format")
        p.add_argument("--ascii", action="store_true", help="use ASCII connectives in text output")

    p = sub.add_parser("parse", help="echo a formula in a chosen notation")
    p.add_argument("formula")
    p.add_argument("--notation", choices=["infix", "polish"], default="infix")
    p.add_argument("--style", choices=["minimal", "full", "polish"], default="minimal")
    common(p)
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("table", help="print the truth table")
    p.add_argument("formula")
    common(p)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("classify", help="tautology / contingency / contradiction")
    p.add_argument("formula")
    common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("nf", help="normal forms with a derivation trace")
    p.add_argument("formula")
    p.add_argument("--kind", choices=["nnf", "dnf", "cnf", "fndp", "fncp"], required=True)
    p.add_argument("--order", help="comma-separated variable order")
    common(p)
    p.set_defaults(func=_cmd_nf)

    p = sub.add_parser("indices", help="Σm/ΠM index sets over a variable order")
    p.add_argument("formula")
    p.add_argument("--order", help="comma-separated variable order")
    common(p)
    p.set_defaults(func=_cmd_indices)

    p = sub.add_parser("check", help="validate a derivation JSON file")
    p.add_argument("derivation")
    p.add_argument("--strict", action="store_true", help="require exact rewrites (no AC leniency)")
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("prove", help="check a consequence argument")
    p.add_argument("argument", help='e.g. "P, P -> Q => Q"')
    p.add_argument("--method", choices=[m.value for m in Method if m is not Method.RULES_PROOF], default="definition")
    common(p)
    p.set_defaults(func=_cmd_prove)

    p = sub.add_parser("solve", help="solve one exercise file")
    p.add_argument("exercise")
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("solve-all", help="solve every exercise in a directory")
    p.add_argument("directory")
    p.add_argument("--out", help="write one solution document per exercise here")
    common(p)
    p.set_defaults(func=_cmd_solve_all)

    p = sub.add_parser("serve", help="run the HTTP stepping service")
    p.add_argument("--addr", default="127.0.0.1:8750")
    p.add_argument("--exercises", help="exercise directory to serve")
    p.add_argument("--allow-origin", help="CORS origin for the trainer UI")
    p.set_defaults(func=_cmd_serve)

    return parser


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _CliError as err:
        sys.stderr.write(err.message + "\n")
        return err.code
    except _LIMIT_ERRORS as err:
        sys.stderr.write(f"resource limit: {err}\n")
        return EXIT_LIMIT
    except NotConstant as err:
        sys.stderr.write(f"{err}\n")
        return EXIT_FAIL
    except ParseError as err:
        sys.stderr.write(f"parse error: {err}\n")
        return EXIT_USAGE
    except (SchemaError, DuplicateId, IoError, ValueError) as err:
        sys.stderr.write(f"{err}\n")
        return EXIT_USAGE


def main() -> None:
    sys.setrecursionlimit(20000)
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
