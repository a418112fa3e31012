"""Logical-consequence checking: by definition (tautology of the associated
implication), by the direct and indirect propagation methods, by a
rules-of-inference proof checker, and by a resolution refutation prover.

The direct method seeds every premise ≡ T and propagates forced truth values
(conjunction splits, substitution of known facts, constant simplification —
the appendix's "Sust n en m" moves); it is deliberately incomplete and
answers Inconclusive rather than guess.  The indirect method additionally
seeds the conclusion ≡ F and succeeds by deriving a contradiction.  When
propagation stalls, one bounded normal-form pass over the conjunction of
known facts may contribute forced literals (the appendix's "Trabajando con
② y ③" algebra).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from . import normal_forms, semantics
from .autoderive import AutoGoal, StepLimitExceeded, TermBlowupLimit, auto_derive
from .derivation import Derivation, Mode, Step, ac_key, check_step
from .formula import (
    And,
    Atom,
    Const,
    FALSE,
    Formula,
    Iff,
    Implies,
    Literal,
    Not,
    Or,
    Path,
    TRUE,
    atoms,
    children,
    fold_and,
    with_children,
)
from .laws import Direction, LawId
from .syntax import ParseError, parse_infix, print_formula

DIRECT_NORMALIZE_BUDGET = 64  # law steps allowed in the stall-breaking pass
FACT_LIMIT = 256


class Method(enum.Enum):
    DEFINITION = "definition"
    DIRECT = "direct"
    INDIRECT = "indirect"
    RULES_PROOF = "rules"
    RESOLUTION = "resolution"


class Verdict(enum.Enum):
    VALID = "valid"
    INVALID = "invalid"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Argument:
    premises: tuple[Formula, ...]
    conclusion: Formula

    def implication(self) -> Formula:
        if not self.premises:
            return self.conclusion
        return Implies(fold_and(list(self.premises)), self.conclusion)

    def all_atoms(self) -> list[str]:
        names = set(atoms(self.conclusion))
        for p in self.premises:
            names.update(atoms(p))
        return sorted(names)


def _check_cap(arg: Argument, cap: int | None) -> None:
    limit = semantics.default_var_cap() if cap is None else cap
    count = len(arg.all_atoms())
    if count > limit:
        raise semantics.TooManyVariables(count, limit)


def parse_argument(text: str) -> Argument:
    """Premises separated by commas, then "⇒" or "=>" before the conclusion."""
    for arrow in ("⇒", "=>"):
        if arrow in text:
            left, _, right = text.partition(arrow)
            break
    else:
        raise ParseError(len(text), "an argument with '⇒' or '=>'", text)
    premises = [parse_infix(part) for part in left.split(",") if part.strip()]
    conclusion = parse_infix(right)
    return Argument(tuple(premises), conclusion)


def render_argument(arg: Argument, ascii_only: bool = False) -> str:
    arrow = "=>" if ascii_only else "⇒"
    parts = ", ".join(print_formula(p, ascii_only=ascii_only) for p in arg.premises)
    return f"{parts} {arrow} {print_formula(arg.conclusion, ascii_only=ascii_only)}".strip()


# ---------------------------------------------------------------------------
# traces


@dataclass
class Fact:
    index: int
    formula: Formula
    value: bool
    justification: str


@dataclass
class FactTrace:
    facts: list[Fact]
    closing: str | None = None  # may contain "{f}" for closing_formula
    closing_formula: Formula | None = None
    contradiction: tuple[int, int] | None = None


@dataclass
class TableSummary:
    order: tuple[str, ...]
    note: str
    rows: tuple[tuple[dict[str, bool], bool], ...] | None = None


@dataclass
class ResolutionStep:
    index: int
    literals: tuple[Literal, ...]
    origin: str  # "premise", "negated-conclusion", "resolvent"
    parents: tuple[int, int] | None = None


@dataclass
class ResolutionTrace:
    steps: list[ResolutionStep]
    refutation: list[int] = field(default_factory=list)  # ids on the path to the empty clause


@dataclass
class VerdictTrace:
    method: Method
    verdict: Verdict
    countermodel: dict[str, bool] | None = None
    derivation: Derivation | None = None
    facts: FactTrace | None = None
    resolution: ResolutionTrace | None = None
    table: TableSummary | None = None


# ---------------------------------------------------------------------------
# definition method


def check_by_definition(arg: Argument, cap: int | None = None, step_limit: int = 512) -> VerdictTrace:
    _check_cap(arg, cap)
    formula = arg.implication()
    cls = semantics.classify(formula, cap=cap)
    if cls is not semantics.Classification.TAUTOLOGY:
        model = semantics.first_countermodel(list(arg.premises), arg.conclusion, cap=cap)
        return VerdictTrace(Method.DEFINITION, Verdict.INVALID, countermodel=model)
    try:
        d = auto_derive(formula, AutoGoal.TO_CONSTANT, step_limit=step_limit)
        return VerdictTrace(Method.DEFINITION, Verdict.VALID, derivation=d)
    except (StepLimitExceeded, TermBlowupLimit):
        order = tuple(arg.all_atoms())
        rows = semantics.truth_table(formula, order).rows if len(order) <= 12 else None
        summary = TableSummary(order, "every row of the truth table is true", rows)
        return VerdictTrace(Method.DEFINITION, Verdict.VALID, table=summary)


# ---------------------------------------------------------------------------
# direct / indirect propagation engine


def _simplify_constants(f: Formula) -> Formula:
    kids = tuple(_simplify_constants(k) for k in children(f))
    f = with_children(f, kids)
    if isinstance(f, Not) and isinstance(f.child, Const):
        return Const(not f.child.value)
    if isinstance(f, And):
        for a, b in ((f.left, f.right), (f.right, f.left)):
            if a == TRUE:
                return b
            if a == FALSE:
                return FALSE
    if isinstance(f, Or):
        for a, b in ((f.left, f.right), (f.right, f.left)):
            if a == FALSE:
                return b
            if a == TRUE:
                return TRUE
    if isinstance(f, Implies):
        if f.left == TRUE:
            return f.right
        if f.left == FALSE or f.right == TRUE:
            return TRUE
        if f.right == FALSE:
            return _simplify_constants(Not(f.left))
    if isinstance(f, Iff):
        if f.left == TRUE:
            return f.right
        if f.right == TRUE:
            return f.left
        if f.left == FALSE:
            return _simplify_constants(Not(f.right))
        if f.right == FALSE:
            return _simplify_constants(Not(f.left))
    return f


def _substitute(f: Formula, key, const: Formula) -> Formula:
    if ac_key(f) == key:
        return const
    kids = tuple(_substitute(k, key, const) for k in children(f))
    return with_children(f, kids)


class _FactEngine:
    def __init__(self) -> None:
        self.facts: list[Fact] = []
        self.by_key: dict = {}
        self.contradiction: tuple[int, int] | None = None

    def value_of(self, f: Formula) -> bool | None:
        idx = self.by_key.get(ac_key(f))
        return None if idx is None else self.facts[idx - 1].value

    def index_of(self, f: Formula) -> int | None:
        return self.by_key.get(ac_key(f))

    def add(self, formula: Formula, value: bool, justification: str) -> Fact | None:
        if self.contradiction or len(self.facts) >= FACT_LIMIT:
            return None
        if isinstance(formula, Const):
            if formula.value == value:
                return None
            fact = self._append(formula, value, justification)
            self.contradiction = (fact.index, fact.index)
            return fact
        key = ac_key(formula)
        known = self.by_key.get(key)
        if known is not None:
            if self.facts[known - 1].value != value:
                fact = self._append(formula, value, justification)
                self.contradiction = (known, fact.index)
                return fact
            return None
        fact = self._append(formula, value, justification)
        self.by_key[key] = fact.index
        return fact

    def _append(self, formula: Formula, value: bool, justification: str) -> Fact:
        fact = Fact(len(self.facts) + 1, formula, value, justification)
        self.facts.append(fact)
        return fact

    # one propagation round; returns True when anything new was derived
    def propagate(self) -> bool:
        progress = False
        i = 0
        while i < len(self.facts) and not self.contradiction:
            fact = self.facts[i]
            i += 1
            f, v, idx = fact.formula, fact.value, fact.index
            new: list[tuple[Formula, bool, str]] = []
            if isinstance(f, And) and v:
                new += [(f.left, True, f"De [{idx}]"), (f.right, True, f"De [{idx}]")]
            elif isinstance(f, Or) and not v:
                new += [(f.left, False, f"De [{idx}]"), (f.right, False, f"De [{idx}]")]
            elif isinstance(f, Not):
                new.append((f.child, not v, f"De [{idx}]"))
            elif isinstance(f, Implies) and not v:
                new += [(f.left, True, f"De [{idx}]"), (f.right, False, f"De [{idx}]")]
            for formula, value, just in new:
                simplified = _simplify_constants(formula)
                if self.add(simplified, value, just):
                    progress = True
                if self.contradiction:
                    return progress
            # substitution of every known fact into this one and vice versa;
            # conjunction facts are skipped as targets (their split parts
            # receive the substitution instead)
            for other in list(self.facts):
                if other.index == idx:
                    continue
                for target, source in ((fact, other), (other, fact)):
                    if target.value and isinstance(target.formula, And):
                        continue
                    derived = _substitute(target.formula, ac_key(source.formula), Const(source.value))
                    if derived == target.formula:
                        continue
                    derived = _simplify_constants(derived)
                    just = f"Sust [{source.index}] en [{target.index}]"
                    if self.add(derived, target.value, just):
                        progress = True
                    if self.contradiction:
                        return progress
        return progress

    def combine(self) -> bool:
        """Stall breaker: bounded DNF of the conjunction of all true facts;
        literals shared by every resulting term are forced."""
        true_facts = [
            f
            for f in self.facts
            if f.value and not isinstance(f.formula, (Const, And))
        ]
        if len(true_facts) < 2:
            return False
        conj = fold_and([f.formula for f in true_facts])
        try:
            dnf, _ = normal_forms.to_dnf(conj, term_cap=64, step_limit=DIRECT_NORMALIZE_BUDGET)
        except (StepLimitExceeded, TermBlowupLimit):
            return False
        indices = ",".join(f"[{f.index}]" for f in true_facts)
        just = f"Combinando {indices}"
        if not dnf.terms:
            first = true_facts[0]
            fact = self.add(FALSE, True, just)
            if fact and not self.contradiction:
                self.contradiction = (first.index, fact.index)
            return True
        common = set(dnf.terms[0])
        for term in dnf.terms[1:]:
            common &= set(term)
        progress = False
        for lit in sorted(common, key=lambda l: (l.atom, l.negated)):
            if self.add(Atom(lit.atom), not lit.negated, just):
                progress = True
        return progress


def _run_propagation(engine: _FactEngine) -> None:
    while not engine.contradiction:
        if engine.propagate():
            continue
        if engine.combine():
            continue
        break


def check_direct(arg: Argument, cap: int | None = None) -> VerdictTrace:
    _check_cap(arg, cap)
    engine = _FactEngine()
    if arg.premises:
        conj = fold_and(list(arg.premises))
        engine.add(conj, True, "Se parte")
    _run_propagation(engine)
    trace = FactTrace(engine.facts, contradiction=engine.contradiction)

    if engine.contradiction:
        trace.closing = "las premisas son contradictorias; la conclusión se sigue vacuamente"
        return VerdictTrace(Method.DIRECT, Verdict.VALID, facts=trace)

    forced = engine.value_of(arg.conclusion)
    shown = arg.conclusion
    if forced is None:
        # substitute everything known into the conclusion ("Demostrando ... sust")
        shown = arg.conclusion
        for fact in engine.facts:
            shown = _substitute(shown, ac_key(fact.formula), Const(fact.value))
        shown = _simplify_constants(shown)
        if shown == TRUE:
            forced = True
        elif shown == FALSE:
            forced = False

    if forced is True:
        trace.closing = "Demostrando {f} ≡ T ∴ CL válida"
        trace.closing_formula = arg.conclusion
        return VerdictTrace(Method.DIRECT, Verdict.VALID, facts=trace)
    if forced is False:
        model = semantics.first_countermodel(list(arg.premises), arg.conclusion, cap=cap)
        if model is not None:
            trace.closing = "la conclusión queda forzada a F"
            return VerdictTrace(Method.DIRECT, Verdict.INVALID, countermodel=model, facts=trace)
    trace.closing = "la saturación se detiene sin forzar la conclusión"
    return VerdictTrace(Method.DIRECT, Verdict.INCONCLUSIVE, facts=trace)


def check_indirect(arg: Argument, cap: int | None = None) -> VerdictTrace:
    _check_cap(arg, cap)
    engine = _FactEngine()
    engine.add(arg.conclusion, False, "Se tiene")
    if arg.premises:
        engine.add(fold_and(list(arg.premises)), True, "Se parte")
    _run_propagation(engine)
    trace = FactTrace(engine.facts, contradiction=engine.contradiction)
    if engine.contradiction:
        i, j = engine.contradiction
        trace.closing = f"contradicción entre [{i}] y [{j}] ∴ CL válida"
        return VerdictTrace(Method.INDIRECT, Verdict.VALID, facts=trace)
    trace.closing = "no se deriva contradicción"
    return VerdictTrace(Method.INDIRECT, Verdict.INCONCLUSIVE, facts=trace)


# ---------------------------------------------------------------------------
# rules-of-inference proof checker


class Rule(enum.Enum):
    MODUS_PONENS = "ModusPonens"
    MODUS_TOLLENS = "ModusTollens"
    HYPOTHETICAL_SYLLOGISM = "HypotheticalSyllogism"
    DISJUNCTIVE_SYLLOGISM = "DisjunctiveSyllogism"
    SIMPLIFICATION = "Simplification"
    CONJUNCTION = "Conjunction"
    ADDITION = "Addition"
    RESOLUTION = "Resolution"


@dataclass(frozen=True)
class Premise:
    pass


@dataclass(frozen=True)
class RuleApp:
    rule: Rule
    cites: tuple[int, ...]


@dataclass(frozen=True)
class EquivApp:
    laws: tuple[LawId, ...]
    cite: int
    path: Path
    direction_hint: str = "LR"


Justification = Premise | RuleApp | EquivApp


@dataclass(frozen=True)
class ProofLine:
    index: int
    formula: Formula
    justification: Justification


@dataclass
class LineVerdict:
    index: int
    ok: bool
    reason: str | None = None


@dataclass
class ProofReport:
    lines: list[LineVerdict]
    valid: bool
    reason: str | None = None


def _rule_matches(rule: Rule, cited: list[Formula], result: Formula) -> bool:
    def orders():
        if len(cited) == 2:
            yield cited[0], cited[1]
            yield cited[1], cited[0]
        elif len(cited) == 1:
            yield cited[0], None

    if rule is Rule.MODUS_PONENS:
        return any(
            isinstance(a, Implies) and a.left == b and result == a.right for a, b in orders()
        )
    if rule is Rule.MODUS_TOLLENS:
        return any(
            isinstance(a, Implies) and b == Not(a.right) and result == Not(a.left)
            for a, b in orders()
        )
    if rule is Rule.HYPOTHETICAL_SYLLOGISM:
        return any(
            isinstance(a, Implies)
            and isinstance(b, Implies)
            and a.right == b.left
            and result == Implies(a.left, b.right)
            for a, b in orders()
        )
    if rule is Rule.DISJUNCTIVE_SYLLOGISM:
        for a, b in orders():
            if isinstance(a, Or):
                if b == Not(a.left) and result == a.right:
                    return True
                if b == Not(a.right) and result == a.left:
                    return True
        return False
    if rule is Rule.SIMPLIFICATION:
        a = cited[0] if len(cited) == 1 else None
        return isinstance(a, And) and result in (a.left, a.right)
    if rule is Rule.CONJUNCTION:
        if len(cited) != 2 or not isinstance(result, And):
            return False
        return (result.left, result.right) in ((cited[0], cited[1]), (cited[1], cited[0]))
    if rule is Rule.ADDITION:
        a = cited[0] if len(cited) == 1 else None
        return a is not None and isinstance(result, Or) and a in (result.left, result.right)
    if rule is Rule.RESOLUTION:
        for a, b in orders():
            if not (isinstance(a, Or) and isinstance(b, Or) and isinstance(result, Or)):
                continue
            complementary = a.left == Not(b.left) or b.left == Not(a.left)
            if complementary and result == Or(a.right, b.right):
                return True
        return False
    return False


def check_rules_proof(arg: Argument, lines: Sequence[ProofLine]) -> ProofReport:
    verdicts: list[LineVerdict] = []
    by_index = {line.index: line for line in lines}
    for line in lines:
        v = LineVerdict(line.index, ok=False)
        just = line.justification
        if isinstance(just, Premise):
            v.ok = line.formula in arg.premises
            if not v.ok:
                v.reason = "not one of the argument's premises"
        elif isinstance(just, RuleApp):
            cited = []
            bad = None
            for c in just.cites:
                if c >= line.index or c not in by_index:
                    bad = f"cited line {c} must precede line {line.index}"
                    break
                cited.append(by_index[c].formula)
            if bad:
                v.reason = bad
            elif _rule_matches(just.rule, cited, line.formula):
                v.ok = True
            else:
                v.reason = f"{just.rule.value} schema mismatch"
        elif isinstance(just, EquivApp):
            if just.cite >= line.index or just.cite not in by_index:
                v.reason = f"cited line {just.cite} must precede line {line.index}"
            else:
                source = by_index[just.cite].formula
                ok = False
                for direction in (Direction.LR, Direction.RL):
                    step = Step(just.laws, direction, just.path, line.formula)
                    if check_step(source, step, Mode.LENIENT_AC).ok:
                        ok = True
                        break
                v.ok = ok
                if not ok:
                    v.reason = "equivalence law does not justify this line"
        verdicts.append(v)
    all_ok = all(v.ok for v in verdicts)
    last_ok = bool(lines) and lines[-1].formula == arg.conclusion
    reason = None
    if not last_ok:
        reason = "last line is not the conclusion"
    return ProofReport(verdicts, valid=all_ok and last_ok, reason=reason if not last_ok else None)


# ---------------------------------------------------------------------------
# resolution prover

Clause = frozenset


def _clause_text(c: Clause) -> str:
    if not c:
        return "□"
    lits = sorted(c, key=lambda l: (l.atom, l.negated))
    return " ∨ ".join(("¬" if l.negated else "") + l.atom for l in lits)


def _is_tautology_clause(c: Clause) -> bool:
    return any(l.complement() in c for l in c)


def clause_set(f: Formula, term_cap: int = 4096) -> list[Clause]:
    """CNF clause set of f, tautologies dropped, duplicates removed."""
    cnf, _ = normal_forms.to_cnf(f, term_cap=term_cap)
    out: list[Clause] = []
    seen = set()
    for term in cnf.terms:
        c = frozenset(term)
        if _is_tautology_clause(c) or c in seen:
            continue
        seen.add(c)
        out.append(c)
    return out


def _dpll(clauses: list[Clause], assignment: dict[str, bool]) -> dict[str, bool] | None:
    clauses = [c for c in clauses]
    # unit propagation
    changed = True
    while changed:
        changed = False
        next_clauses = []
        for c in clauses:
            lits = []
            satisfied = False
            for l in c:
                v = assignment.get(l.atom)
                if v is None:
                    lits.append(l)
                elif v != l.negated:  # literal true
                    satisfied = True
                    break
            if satisfied:
                continue
            if not lits:
                return None
            if len(lits) == 1:
                l = lits[0]
                assignment[l.atom] = not l.negated
                changed = True
            else:
                next_clauses.append(frozenset(lits))
        clauses = next_clauses
    if not clauses:
        return assignment
    atom = sorted({l.atom for c in clauses for l in c})[0]
    for value in (True, False):
        result = _dpll(clauses, dict(assignment, **{atom: value}))
        if result is not None:
            return result
    return None


def prove_resolution(arg: Argument, cap: int | None = None, term_cap: int = 4096) -> VerdictTrace:
    _check_cap(arg, cap)
    trace = ResolutionTrace(steps=[])
    clauses: list[Clause] = []
    ids: dict[Clause, int] = {}

    def register(c: Clause, origin: str, parents=None) -> int:
        idx = len(trace.steps) + 1
        lits = tuple(sorted(c, key=lambda l: (l.atom, l.negated)))
        trace.steps.append(ResolutionStep(idx, lits, origin, parents))
        ids[c] = idx
        clauses.append(c)
        return idx

    empty_id: int | None = None
    for p in arg.premises:
        for c in clause_set(p, term_cap):
            if c not in ids:
                register(c, "premise")
                if not c:
                    empty_id = ids[c]
    for c in clause_set(Not(arg.conclusion), term_cap):
        if c not in ids:
            register(c, "negated-conclusion")
            if not c:
                empty_id = ids[c]

    if empty_id is None:
        processed: list[Clause] = []
        queue = list(clauses)
        seq = {c: i for i, c in enumerate(queue)}
        counter = len(queue)
        known = set(queue)
        while queue and empty_id is None:
            queue.sort(key=lambda c: (len(c), seq[c]))
            given = queue.pop(0)
            if any(other <= given for other in processed if other != given):
                continue  # subsumed
            for other in processed:
                for lit in given:
                    if lit.complement() not in other:
                        continue
                    resolvent = frozenset((given - {lit}) | (other - {lit.complement()}))
                    if _is_tautology_clause(resolvent) or resolvent in known:
                        continue
                    if any(old <= resolvent for old in known):
                        continue
                    register(resolvent, "resolvent", (ids[given], ids[other]))
                    known.add(resolvent)
                    seq[resolvent] = counter
                    counter += 1
                    queue.append(resolvent)
                    if not resolvent:
                        empty_id = ids[resolvent]
                        break
                if empty_id is not None:
                    break
            processed.append(given)

    if empty_id is not None:
        needed = {empty_id}
        stack = [empty_id]
        while stack:
            idx = stack.pop()
            step = trace.steps[idx - 1]
            if step.parents:
                for p in step.parents:
                    if p not in needed:
                        needed.add(p)
                        stack.append(p)
        trace.refutation = sorted(needed)
        return VerdictTrace(Method.RESOLUTION, Verdict.VALID, resolution=trace)

    model = _dpll(clauses, {}) or {}
    model = {name: model.get(name, False) for name in arg.all_atoms()}
    return VerdictTrace(Method.RESOLUTION, Verdict.INVALID, countermodel=model, resolution=trace)


# ---------------------------------------------------------------------------


def check(arg: Argument, method: Method, cap: int | None = None) -> VerdictTrace:
    if method is Method.DEFINITION:
        return check_by_definition(arg, cap=cap)
    if method is Method.DIRECT:
        return check_direct(arg, cap=cap)
    if method is Method.INDIRECT:
        return check_indirect(arg, cap=cap)
    if method is Method.RESOLUTION:
        return prove_resolution(arg, cap=cap)
    raise ValueError(f"no automatic checker for method {method}")
