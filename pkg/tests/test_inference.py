import pytest

from discreta.derivation import Mode, validate_derivation
from discreta.formula import Atom, Not, TRUE
from discreta.inference import (
    Argument,
    EquivApp,
    Method,
    Premise,
    ProofLine,
    Rule,
    RuleApp,
    Verdict,
    check,
    check_by_definition,
    check_direct,
    check_indirect,
    check_rules_proof,
    parse_argument,
    prove_resolution,
    render_argument,
)
from discreta.laws import LawId
from discreta.semantics import TooManyVariables, entails, evaluate
from discreta.syntax import ParseError, parse_infix

from conftest import random_formula

CL1 = "P, P → (Q ∨ R), (Q ∨ R) → S ⇒ S"
CL2 = "P ∨ Q, P → R, Q → R ⇒ R"
CL3 = "P → Q, Q → R, ¬R ⇒ ¬P"


def test_parse_argument():
    arg = parse_argument(CL1)
    assert len(arg.premises) == 3
    assert arg.conclusion == Atom("S")
    arg = parse_argument("P -> Q, P => Q")
    assert arg.conclusion == Atom("Q")
    arg = parse_argument("=> P | ~P")
    assert arg.premises == ()
    with pytest.raises(ParseError):
        parse_argument("P, Q")  # no arrow


def test_render_argument_round_trips():
    arg = parse_argument(CL1)
    again = parse_argument(render_argument(arg))
    assert again == arg


@pytest.mark.parametrize("text", [CL1, CL2, CL3])
@pytest.mark.parametrize("method", [Method.DEFINITION, Method.DIRECT, Method.INDIRECT, Method.RESOLUTION])
def test_worked_arguments_valid_under_all_methods(text, method):
    vt = check(parse_argument(text), method)
    assert vt.verdict is Verdict.VALID


def test_definition_trace_is_replayable():
    vt = check_by_definition(parse_argument(CL1))
    assert vt.derivation is not None
    report = validate_derivation(vt.derivation, Mode.LENIENT_AC)
    assert report.valid and report.goal_ok
    assert vt.derivation.final == TRUE


def test_definition_falls_back_to_truth_table():
    vt = check_by_definition(parse_argument(CL1), step_limit=2)
    assert vt.verdict is Verdict.VALID
    assert vt.table is not None
    assert vt.table.rows is not None and all(value for _, value in vt.table.rows)


def test_definition_invalid_gives_countermodel():
    vt = check_by_definition(parse_argument("P → Q, Q ⇒ P"))
    assert vt.verdict is Verdict.INVALID
    assert vt.countermodel == {"P": False, "Q": True}


def test_direct_traces_mirror_the_worked_style():
    vt = check_direct(parse_argument(CL1))
    just = [f.justification for f in vt.facts.facts]
    assert just[0] == "Se parte"
    assert any(j.startswith("Sust") for j in just)
    values = {(str(f.formula), f.value) for f in vt.facts.facts}
    assert (str(Atom("S")), True) in values


def test_direct_facts_are_entailed(rng):
    """Replayability: every derived fact is a semantic consequence of the
    premises."""
    for text in (CL1, CL2, CL3):
        arg = parse_argument(text)
        vt = check_direct(arg)
        for fact in vt.facts.facts:
            goal = fact.formula if fact.value else Not(fact.formula)
            assert entails(list(arg.premises), goal)


def test_direct_inconclusive_never_guesses():
    vt = check_direct(parse_argument("P ∨ Q ⇒ P"))
    assert vt.verdict is Verdict.INCONCLUSIVE


def test_indirect_contradiction_trace():
    vt = check_indirect(parse_argument(CL1))
    assert vt.verdict is Verdict.VALID
    assert vt.facts.contradiction is not None
    i, j = vt.facts.contradiction
    assert vt.facts.facts[0].justification == "Se tiene"


def test_indirect_facts_follow_from_refutation_assumption(rng):
    for text in (CL1, CL2, CL3):
        arg = parse_argument(text)
        vt = check_indirect(arg)
        assumptions = list(arg.premises) + [Not(arg.conclusion)]
        for fact in vt.facts.facts:
            goal = fact.formula if fact.value else Not(fact.formula)
            assert entails(assumptions, goal)


def test_indirect_inconclusive_on_empty_premises():
    vt = check_indirect(parse_argument("⇒ P"))
    assert vt.verdict is Verdict.INCONCLUSIVE


def test_cap_respected():
    text = ", ".join(f"x{i}" for i in range(25)) + " ⇒ x0"
    with pytest.raises(TooManyVariables):
        check_direct(parse_argument(text))


def test_resolution_examples():
    vt = prove_resolution(parse_argument("P, ¬P ⇒ F"))
    assert vt.verdict is Verdict.VALID
    assert vt.resolution.refutation

    vt = prove_resolution(parse_argument(CL3))
    assert vt.verdict is Verdict.VALID
    empty = [s for s in vt.resolution.steps if not s.literals]
    assert len(empty) == 1

    vt = prove_resolution(parse_argument("P ∨ Q ⇒ P"))
    assert vt.verdict is Verdict.INVALID
    assert vt.countermodel == {"P": False, "Q": True}


def test_resolution_refutation_parents_resolve():
    vt = prove_resolution(parse_argument(CL1))
    steps = {s.index: s for s in vt.resolution.steps}
    for idx in vt.resolution.refutation:
        step = steps[idx]
        if step.parents:
            a = set(steps[step.parents[0]].literals)
            b = set(steps[step.parents[1]].literals)
            pivots = [l for l in a if l.complement() in b]
            assert len(pivots) >= 1
            resolvent = (a - {pivots[0]}) | (b - {pivots[0].complement()})
            assert set(step.literals) == resolvent


def test_resolution_countermodel_falsifies(rng):
    found = 0
    for _ in range(150):
        premises = tuple(random_formula(rng, max_depth=3, atoms=("P", "Q", "R", "S", "U")) for _ in range(rng.randint(0, 3)))
        conclusion = random_formula(rng, max_depth=3, atoms=("P", "Q", "R", "S", "U"))
        arg = Argument(premises, conclusion)
        vt = prove_resolution(arg)
        if vt.verdict is Verdict.INVALID:
            found += 1
            model = vt.countermodel
            assert all(evaluate(p, model) for p in arg.premises)
            assert not evaluate(arg.conclusion, model)
    assert found > 20


def test_methods_sound_and_complete(rng):
    """Definition and resolution match the oracle exactly; direct/indirect
    never contradict it."""
    for _ in range(120):
        premises = tuple(random_formula(rng, max_depth=3, atoms=("P", "Q", "R", "S", "U")) for _ in range(rng.randint(0, 3)))
        conclusion = random_formula(rng, max_depth=3, atoms=("P", "Q", "R", "S", "U"))
        arg = Argument(premises, conclusion)
        truth = entails(list(premises), conclusion)
        assert (check_by_definition(arg).verdict is Verdict.VALID) == truth
        assert (prove_resolution(arg).verdict is Verdict.VALID) == truth
        for checker in (check_direct, check_indirect):
            verdict = checker(arg).verdict
            if verdict is Verdict.VALID:
                assert truth
            elif verdict is Verdict.INVALID:
                assert not truth


# --- rules-of-inference proofs


def _lines(*specs):
    out = []
    for i, (text, just) in enumerate(specs, start=1):
        out.append(ProofLine(i, parse_infix(text), just))
    return out


def test_rules_proof_modus_ponens():
    arg = parse_argument("P → Q, P ⇒ Q")
    lines = _lines(("P → Q", Premise()), ("P", Premise()), ("Q", RuleApp(Rule.MODUS_PONENS, (1, 2))))
    assert check_rules_proof(arg, lines).valid


def test_rules_proof_hypothetical_syllogism():
    arg = parse_argument("P → Q, Q → R ⇒ P → R")
    lines = _lines(
        ("P → Q", Premise()),
        ("Q → R", Premise()),
        ("P → R", RuleApp(Rule.HYPOTHETICAL_SYLLOGISM, (1, 2))),
    )
    assert check_rules_proof(arg, lines).valid


def test_rules_proof_flags_schema_mismatch():
    arg = parse_argument("P → Q, Q ⇒ P")
    lines = _lines(("P → Q", Premise()), ("Q", Premise()), ("P", RuleApp(Rule.MODUS_PONENS, (1, 2))))
    report = check_rules_proof(arg, lines)
    assert [v.ok for v in report.lines] == [True, True, False]
    assert not report.valid


@pytest.mark.parametrize(
    "argument, lines_spec",
    [
        ("P → Q, ¬Q ⇒ ¬P", [("P → Q", Premise()), ("¬Q", Premise()), ("¬P", RuleApp(Rule.MODUS_TOLLENS, (1, 2)))]),
        ("P ∨ Q, ¬P ⇒ Q", [("P ∨ Q", Premise()), ("¬P", Premise()), ("Q", RuleApp(Rule.DISJUNCTIVE_SYLLOGISM, (1, 2)))]),
        ("P ∧ Q ⇒ P", [("P ∧ Q", Premise()), ("P", RuleApp(Rule.SIMPLIFICATION, (1,)))]),
        ("P, Q ⇒ P ∧ Q", [("P", Premise()), ("Q", Premise()), ("P ∧ Q", RuleApp(Rule.CONJUNCTION, (1, 2)))]),
        ("P ⇒ P ∨ Q", [("P", Premise()), ("P ∨ Q", RuleApp(Rule.ADDITION, (1,)))]),
        (
            "P ∨ Q, ¬P ∨ R ⇒ Q ∨ R",
            [("P ∨ Q", Premise()), ("¬P ∨ R", Premise()), ("Q ∨ R", RuleApp(Rule.RESOLUTION, (1, 2)))],
        ),
    ],
)
def test_rules_proof_rule_schemas(argument, lines_spec):
    arg = parse_argument(argument)
    assert check_rules_proof(arg, _lines(*lines_spec)).valid


def test_rules_proof_equivalence_line():
    arg = parse_argument("P → Q, P ⇒ ¬¬Q")
    lines = _lines(
        ("P → Q", Premise()),
        ("P", Premise()),
        ("Q", RuleApp(Rule.MODUS_PONENS, (1, 2))),
        ("¬¬Q", EquivApp((LawId.DOUBLE_NEGATION,), 3, ())),
    )
    assert check_rules_proof(arg, lines).valid


def test_rules_proof_requires_conclusion_last():
    arg = parse_argument("P → Q, P ⇒ Q")
    lines = _lines(("P → Q", Premise()), ("P", Premise()))
    report = check_rules_proof(arg, lines)
    assert not report.valid
    assert report.reason == "last line is not the conclusion"


def test_rules_proof_forward_citation_rejected():
    arg = parse_argument("P → Q, P ⇒ Q")
    lines = _lines(("Q", RuleApp(Rule.MODUS_PONENS, (2, 3))), ("P → Q", Premise()), ("P", Premise()))
    report = check_rules_proof(arg, lines)
    assert not report.lines[0].ok
