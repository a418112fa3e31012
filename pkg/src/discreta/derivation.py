"""Checked derivations: sequences of law applications with per-step verdicts.

Validation is two-sided: a step is accepted when the subtree before and the
subtree after the rewrite instantiate the law's two patterns under one shared
substitution, with everything outside the path untouched.  This also covers
expansion steps (e.g. T ⇒ B ∨ ¬B) whose synthesized metavariables a forward
rewrite could not invent.

Strict mode compares trees exactly.  LenientAC additionally absorbs
associativity/commutativity of ∧ and ∨, the way the appendix merges
"Asociativa, Conmutativa" into one printed line.  Every step is also checked
against the truth-table oracle regardless of mode.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Union

from . import semantics
from .formula import (
    And,
    Atom,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Path,
    PathOutOfRange,
    flatten,
    replace_at,
    subformula_at,
)
from .laws import (
    Binding,
    Direction,
    LawId,
    METAVARS,
    match,
    oriented_schemas,
    resolve_law_name,
)
from .syntax import ParseError, parse_infix, print_formula

FORMAT_VERSION = 1

_AC_LAWS = frozenset({LawId.ASSOC_AND, LawId.ASSOC_OR, LawId.COMM_AND, LawId.COMM_OR})
_AC_SPLIT_LIMIT = 10  # max operands when enumerating AC pattern splits


def ac_key(f: Formula):
    """Canonical key equal for formulas that differ only by associativity
    and commutativity of ∧ / ∨."""
    if isinstance(f, Const):
        return ("const", f.value)
    if isinstance(f, Atom):
        return ("atom", f.name)
    if isinstance(f, Not):
        return ("not", ac_key(f.child))
    if isinstance(f, (And, Or)):
        tag = "and" if isinstance(f, And) else "or"
        keys = sorted(ac_key(op) for op in flatten(f, type(f)))
        return (tag, tuple(keys))
    tag = "implies" if isinstance(f, Implies) else "iff"
    return (tag, ac_key(f.left), ac_key(f.right))


def ac_equal(f: Formula, g: Formula) -> bool:
    return ac_key(f) == ac_key(g)


def _fold_group(ops: list[Formula], ctor: type) -> Formula:
    out = ops[0]
    for op in ops[1:]:
        out = ctor(out, op)
    return out


def ac_match(pattern: Formula, f: Formula, binding: Binding | None = None) -> Iterator[Binding]:
    """One-sided matching modulo AC of ∧/∨: yields every consistent binding
    obtained by splitting flattened operand lists between the two pattern
    sides.  Binding consistency is checked modulo AC as well."""
    if binding is None:
        binding = {}
    if isinstance(pattern, Atom) and pattern.name in METAVARS:
        bound = binding.get(pattern.name)
        if bound is None:
            new = dict(binding)
            new[pattern.name] = f
            yield new
        elif ac_equal(bound, f):
            yield binding
        return
    if isinstance(pattern, Const):
        if isinstance(f, Const) and pattern.value == f.value:
            yield binding
        return
    if isinstance(pattern, Atom):
        if isinstance(f, Atom) and pattern.name == f.name:
            yield binding
        return
    if isinstance(pattern, Not):
        if isinstance(f, Not):
            yield from ac_match(pattern.child, f.child, binding)
        return
    if isinstance(pattern, (Implies, Iff)):
        if type(f) is type(pattern):
            for b in ac_match(pattern.left, f.left, binding):
                yield from ac_match(pattern.right, f.right, b)
        return
    # And / Or: enumerate binary splits of the flattened operand list
    if type(f) is not type(pattern):
        return
    ops = flatten(f, type(f))
    k = len(ops)
    if k > _AC_SPLIT_LIMIT:
        return
    ctor = type(f)
    for mask in range(1, (1 << k) - 1):
        left = [ops[i] for i in range(k) if mask & (1 << i)]
        right = [ops[i] for i in range(k) if not mask & (1 << i)]
        lf = _fold_group(left, ctor)
        rf = _fold_group(right, ctor)
        for b in ac_match(pattern.left, lf, binding):
            yield from ac_match(pattern.right, rf, b)


class Mode(enum.Enum):
    STRICT = "strict"
    LENIENT_AC = "lenient-ac"


class ShapeGoal(enum.Enum):
    NNF = "nnf"
    DNF = "dnf"
    CNF = "cnf"
    FNDP = "fndp"
    FNCP = "fncp"


Goal = Union[Formula, ShapeGoal]


@dataclass(frozen=True)
class Step:
    """One printed "≡ ... <law name>" line: a law applied at a position."""

    laws: tuple[LawId, ...]
    direction: Direction
    path: Path
    result: Formula
    law_text: str = ""

    @property
    def law(self) -> LawId:
        return self.laws[0]

    @staticmethod
    def make(law: LawId, direction: Direction, path: Path, result: Formula) -> "Step":
        return Step((law,), direction, tuple(path), result, law.value)


@dataclass
class Derivation:
    start: Formula
    steps: list[Step] = field(default_factory=list)
    goal: Goal | None = None

    @property
    def final(self) -> Formula:
        return self.steps[-1].result if self.steps else self.start


@dataclass
class StepVerdict:
    index: int
    ok: bool
    matched: LawId | None = None
    reason: str | None = None


@dataclass
class ValidationReport:
    mode: Mode
    steps: list[StepVerdict]
    goal_ok: bool | None
    final: Formula

    @property
    def valid(self) -> bool:
        return all(v.ok for v in self.steps) and self.goal_ok is not False


def _two_sided(src: Formula, dst: Formula, sub_src: Formula, sub_dst: Formula) -> bool:
    binding = match(src, sub_src)
    if binding is None:
        return False
    return match(dst, sub_dst, binding) is not None


def _two_sided_ac(src: Formula, dst: Formula, sub_src: Formula, sub_dst: Formula) -> bool:
    for b in ac_match(src, sub_src):
        for _ in ac_match(dst, sub_dst, b):
            return True
    return False


def check_step(prev: Formula, step: Step, mode: Mode) -> StepVerdict:
    verdict = StepVerdict(index=-1, ok=False)
    try:
        sub_src = subformula_at(prev, step.path)
    except PathOutOfRange:
        verdict.reason = "path does not address a node of the previous formula"
        return verdict

    sub_dst: Formula | None
    try:
        sub_dst = subformula_at(step.result, step.path)
    except PathOutOfRange:
        sub_dst = None

    context_exact = sub_dst is not None and replace_at(prev, step.path, sub_dst) == step.result
    context_ac = sub_dst is not None and (
        context_exact or ac_equal(replace_at(prev, step.path, sub_dst), step.result)
    )

    matched: LawId | None = None
    if context_exact:
        for law in step.laws:
            for src, dst in oriented_schemas(law, step.direction):
                if _two_sided(src, dst, sub_src, sub_dst):
                    matched = law
                    break
            if matched:
                break

    if matched is None and mode is Mode.LENIENT_AC:
        if any(law in _AC_LAWS for law in step.laws) and ac_equal(prev, step.result):
            matched = next(law for law in step.laws if law in _AC_LAWS)
        elif context_ac:
            for law in step.laws:
                for src, dst in oriented_schemas(law, step.direction):
                    if _two_sided_ac(src, dst, sub_src, sub_dst):
                        matched = law
                        break
                if matched:
                    break

    if matched is None:
        verdict.reason = "law does not produce this result at this position"
        return verdict

    try:
        if not semantics.equivalent(prev, step.result):
            verdict.reason = "result is not equivalent to the previous formula"
            return verdict
    except semantics.TooManyVariables:
        pass  # law check already succeeded; oracle is a guard, not a gate

    verdict.ok = True
    verdict.matched = matched
    return verdict


def validate_derivation(d: Derivation, mode: Mode = Mode.LENIENT_AC) -> ValidationReport:
    verdicts: list[StepVerdict] = []
    cur = d.start
    for i, step in enumerate(d.steps):
        verdict = check_step(cur, step, mode)
        verdict.index = i
        verdicts.append(verdict)
        cur = step.result
    goal_ok: bool | None = None
    if d.goal is not None:
        if isinstance(d.goal, ShapeGoal):
            from . import normal_forms

            goal_ok = normal_forms.has_shape(cur, d.goal)
        else:
            goal_ok = cur == d.goal
    return ValidationReport(mode=mode, steps=verdicts, goal_ok=goal_ok, final=cur)


# ---------------------------------------------------------------------------
# JSON wire format


class DerivationFormatError(ValueError):
    pass


def derivation_to_json(d: Derivation) -> dict:
    obj: dict = {
        "format": FORMAT_VERSION,
        "start": print_formula(d.start),
        "steps": [
            {
                "law": step.law_text or step.law.value,
                "direction": step.direction.value,
                "path": list(step.path),
                "result": print_formula(step.result),
            }
            for step in d.steps
        ],
    }
    if isinstance(d.goal, ShapeGoal):
        obj["goal"] = {"shape": d.goal.value}
    elif d.goal is not None:
        obj["goal"] = print_formula(d.goal)
    return obj


def derivation_from_json(obj: dict) -> Derivation:
    if not isinstance(obj, dict):
        raise DerivationFormatError("derivation must be a JSON object")
    if obj.get("format", FORMAT_VERSION) != FORMAT_VERSION:
        raise DerivationFormatError(f"unsupported format {obj.get('format')!r}")
    try:
        start = parse_infix(obj["start"])
    except KeyError:
        raise DerivationFormatError("missing 'start' formula") from None
    except ParseError as err:
        raise DerivationFormatError(f"bad start formula: {err}") from None

    goal: Goal | None = None
    raw_goal = obj.get("goal")
    if isinstance(raw_goal, dict):
        try:
            goal = ShapeGoal(raw_goal["shape"])
        except (KeyError, ValueError):
            raise DerivationFormatError(f"bad goal shape: {raw_goal!r}") from None
    elif isinstance(raw_goal, str):
        try:
            goal = parse_infix(raw_goal)
        except ParseError as err:
            raise DerivationFormatError(f"bad goal formula: {err}") from None

    steps: list[Step] = []
    for i, raw in enumerate(obj.get("steps", [])):
        try:
            laws = resolve_law_name(str(raw["law"]))
            direction = Direction(raw.get("direction", "LR"))
            path = tuple(int(x) for x in raw.get("path", []))
            result = parse_infix(raw["result"])
        except KeyError as err:
            raise DerivationFormatError(f"step {i}: missing field {err}") from None
        except (ValueError, ParseError) as err:
            raise DerivationFormatError(f"step {i}: {err}") from None
        steps.append(Step(laws, direction, path, result, str(raw["law"])))
    return Derivation(start=start, steps=steps, goal=goal)
