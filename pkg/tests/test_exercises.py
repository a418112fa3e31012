import json

import pytest

from discreta.exercises import (
    DuplicateId,
    IoError,
    SchemaError,
    exercise_from_json,
    load_exercise_file,
    load_exercises,
    solve,
    verify_solution,
)

from conftest import CORPUS


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj, ensure_ascii=False), encoding="utf-8")
    return path


GOOD = {
    "format": 1,
    "id": "demo-1",
    "kind": "classify",
    "statement": "P | ~P",
    "expected": {"classification": "tautology"},
}


def test_load_directory(tmp_path):
    for i in range(3):
        _write(tmp_path, f"e{i}.exercise.json", {**GOOD, "id": f"demo-{i}"})
    assert len(load_exercises(tmp_path)) == 3


def test_load_ignores_other_files(tmp_path):
    _write(tmp_path, "a.exercise.json", GOOD)
    (tmp_path / "notes.txt").write_text("ignore me")
    assert len(load_exercises(tmp_path)) == 1


def test_unparsable_statement_names_file(tmp_path):
    path = _write(tmp_path, "bad.exercise.json", {**GOOD, "statement": "P &"})
    with pytest.raises(SchemaError) as err:
        load_exercises(tmp_path)
    assert "bad.exercise.json" in str(err.value)


def test_duplicate_ids_rejected(tmp_path):
    _write(tmp_path, "a.exercise.json", GOOD)
    _write(tmp_path, "b.exercise.json", GOOD)
    with pytest.raises(DuplicateId):
        load_exercises(tmp_path)


def test_missing_path():
    with pytest.raises(IoError):
        load_exercises("/no/such/place")


@pytest.mark.parametrize(
    "mutation, fragment",
    [
        ({"kind": "mystery"}, "kind"),
        ({"id": ""}, "id"),
        ({"format": 9}, "format"),
        ({"method": "osmosis", "kind": "consequence", "statement": "P => P"}, "method"),
        ({"expected": 7}, "expected"),
    ],
)
def test_schema_errors(mutation, fragment):
    obj = {**GOOD, **mutation}
    with pytest.raises(SchemaError) as err:
        exercise_from_json(obj, source="unit")
    assert fragment in str(err.value)


def test_solve_normal_form_document():
    ex = load_exercise_file(CORPUS / "anexo5-ej1.exercise.json")
    doc = solve(ex)
    assert doc.ok
    text = doc.to_text()
    assert "Σm(1, 4, 5, 6, 7)" in text
    assert "ΠM(0, 2, 3)" in text
    assert "∴ Contingencia" in text
    assert doc.machine["minterms"] == [1, 4, 5, 6, 7]
    assert verify_solution(doc.to_json(), ex) == []


def test_solve_consequence_document():
    ex = load_exercise_file(CORPUS / "anexo5-cl3-direct.exercise.json")
    doc = solve(ex)
    assert doc.ok
    assert "∴ CL válida" in doc.to_text()
    assert doc.machine["verdict"] == "valid"
    assert verify_solution(doc.to_json(), ex) == []


def test_solve_classify_contradiction():
    ex = exercise_from_json(
        {
            "format": 1,
            "id": "contradiction-demo",
            "kind": "classify",
            "statement": "((P ∧ Q) → P) → (Q ∨ R) ∧ (¬Q ∧ ¬R)",
            "expected": {"classification": "contradiction"},
        }
    )
    doc = solve(ex)
    assert doc.ok
    assert "∴ Contradicción" in doc.answer


def test_solve_derivation_goal():
    ex = load_exercise_file(CORPUS / "anexo4-ej1.exercise.json")
    doc = solve(ex)
    assert doc.ok
    assert doc.machine["reaches"] == "T"
    assert verify_solution(doc.to_json(), ex) == []


def test_expected_mismatch_flags_document():
    ex = exercise_from_json(
        {
            "format": 1,
            "id": "wrong",
            "kind": "classify",
            "statement": "P",
            "expected": {"classification": "tautology"},
        }
    )
    doc = solve(ex)
    assert not doc.ok
    assert any("(!)" in line for line in doc.lines)


def test_limit_renders_failure_document():
    ex = exercise_from_json(
        {
            "format": 1,
            "id": "too-big",
            "kind": "classify",
            "statement": " & ".join(f"x{i}" for i in range(25)),
        }
    )
    doc = solve(ex)
    assert not doc.ok
    assert doc.error_kind == "limit"
    assert "error" in doc.machine


def test_corpus_solves_clean(corpus_dir):
    for ex in load_exercises(corpus_dir):
        doc = solve(ex)
        assert doc.ok, (ex.id, doc.lines, doc.error)
        assert verify_solution(doc.to_json(), ex) == [], ex.id
