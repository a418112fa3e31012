import json

import pytest

from discreta.derivation import (
    Derivation,
    DerivationFormatError,
    Mode,
    ShapeGoal,
    Step,
    derivation_from_json,
    derivation_to_json,
    validate_derivation,
)
from discreta.laws import Direction, LawId
from discreta.syntax import parse_infix

from conftest import TRACES


def _step(law, direction, path, result):
    return Step.make(law, Direction(direction), tuple(path), parse_infix(result))


def test_identity_derivation_valid():
    d = Derivation(start=parse_infix("P ∧ Q"), steps=[], goal=parse_infix("P ∧ Q"))
    report = validate_derivation(d, Mode.STRICT)
    assert report.valid and report.goal_ok


def test_single_step_strict():
    d = Derivation(
        start=parse_infix("P → Q"),
        steps=[_step(LawId.EL1, "LR", [], "¬P ∨ Q")],
    )
    assert validate_derivation(d, Mode.STRICT).valid


def test_wrong_result_rejected():
    d = Derivation(
        start=parse_infix("P → Q"),
        steps=[_step(LawId.EL1, "LR", [], "¬Q ∨ P")],
    )
    report = validate_derivation(d, Mode.LENIENT_AC)
    assert not report.valid
    assert report.steps[0].reason


def test_wrong_law_rejected():
    d = Derivation(
        start=parse_infix("P → Q"),
        steps=[_step(LawId.DOMINATION, "LR", [], "¬P ∨ Q")],
    )
    assert not validate_derivation(d, Mode.LENIENT_AC).valid


def test_ac_shuffle_lenient_only():
    d = Derivation(
        start=parse_infix("(P ∨ Q) ∨ R"),
        steps=[_step(LawId.COMM_OR, "LR", [], "R ∨ (Q ∨ P)")],
    )
    assert validate_derivation(d, Mode.LENIENT_AC).valid
    assert not validate_derivation(d, Mode.STRICT).valid


def test_expansion_step_two_sided():
    # T ⇒ B ∨ ¬B cannot be applied forward (B is synthesized) but validates
    d = Derivation(
        start=parse_infix("A ∧ T"),
        steps=[_step(LawId.NEGATION, "RL", [1], "A ∧ (B ∨ ¬B)")],
    )
    assert validate_derivation(d, Mode.STRICT).valid


def test_lenient_absorbs_commuted_schema():
    # distribution applied "as the appendix writes it": operands pre-shuffled
    d = Derivation(
        start=parse_infix("(P ∧ ¬Q) ∨ Q"),
        steps=[_step(LawId.DIST_OR_OVER_AND, "LR", [], "(P ∨ Q) ∧ (¬Q ∨ Q)")],
    )
    assert validate_derivation(d, Mode.LENIENT_AC).valid


def test_strict_implies_lenient(rng):
    from conftest import random_formula
    from discreta.formula import all_paths
    from discreta.laws import applicable_laws, apply_law

    for _ in range(150):
        f = random_formula(rng, max_depth=4)
        p = rng.choice(list(all_paths(f)))
        moves = applicable_laws(f, p, include_expansions=True)
        if not moves:
            continue
        law, direction = rng.choice(moves)
        d = Derivation(start=f, steps=[Step.make(law, direction, p, apply_law(f, law, direction, p))])
        assert validate_derivation(d, Mode.STRICT).valid
        assert validate_derivation(d, Mode.LENIENT_AC).valid


def test_goal_shape_check():
    d = Derivation(
        start=parse_infix("P → Q"),
        steps=[_step(LawId.EL1, "LR", [], "¬P ∨ Q")],
        goal=ShapeGoal.NNF,
    )
    assert validate_derivation(d).goal_ok
    d_bad = Derivation(start=parse_infix("P → Q"), steps=[], goal=ShapeGoal.NNF)
    assert validate_derivation(d_bad).goal_ok is False


def test_json_round_trip():
    d = Derivation(
        start=parse_infix("P → Q"),
        steps=[_step(LawId.EL1, "LR", [], "¬P ∨ Q")],
        goal=ShapeGoal.NNF,
    )
    obj = derivation_to_json(d)
    back = derivation_from_json(json.loads(json.dumps(obj)))
    assert back.start == d.start
    assert back.goal == d.goal
    assert [s.result for s in back.steps] == [s.result for s in d.steps]
    assert back.steps[0].laws == (LawId.EL1,)


def test_json_alias_laws():
    obj = {
        "format": 1,
        "start": "¬(P ∧ Q)",
        "steps": [
            {"law": "Ley de Morgan", "direction": "LR", "path": [], "result": "¬P ∨ ¬Q"}
        ],
    }
    d = derivation_from_json(obj)
    report = validate_derivation(d, Mode.STRICT)
    assert report.valid
    assert report.steps[0].matched is LawId.DE_MORGAN_AND


@pytest.mark.parametrize(
    "mutation",
    [
        {"start": None},
        {"steps": [{"law": "NoSuchLaw", "result": "P"}]},
        {"steps": [{"law": "EL1", "result": "P ∧"}]},
        {"format": 2},
    ],
)
def test_json_schema_errors(mutation):
    obj = {"format": 1, "start": "P", "steps": []}
    obj.update(mutation)
    if obj["start"] is None:
        del obj["start"]
    with pytest.raises(DerivationFormatError):
        derivation_from_json(obj)


def test_validation_keeps_going_after_failure():
    d = Derivation(
        start=parse_infix("P → Q"),
        steps=[
            _step(LawId.DOMINATION, "LR", [], "¬P ∨ Q"),  # wrong law
            _step(LawId.EL1, "RL", [], "P → Q"),  # still checked from recorded result
        ],
    )
    report = validate_derivation(d, Mode.LENIENT_AC)
    assert [v.ok for v in report.steps] == [False, True]
    assert not report.valid


def test_corpus_traces_exist():
    files = sorted(TRACES.glob("*.derivation.json"))
    assert len(files) >= 15
