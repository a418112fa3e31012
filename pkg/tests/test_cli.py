import json

import pytest

from discreta.cli import run_cli

from conftest import CORPUS, TRACES


@pytest.fixture
def capout(capsys):
    def run(*argv):
        code = run_cli(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


def test_classify_tautology(capout):
    code, out, _ = capout("classify", "(P ∧ (P -> Q)) -> Q")
    assert code == 0
    assert "Tautología" in out


def test_classify_json(capout):
    code, out, _ = capout("classify", "--json", "A | ~B & C")
    assert code == 0
    assert json.loads(out) == {"classification": "contingency"}


def test_parse_styles(capout):
    code, out, _ = capout("parse", "A | ~B & C")
    assert (code, out.strip()) == (0, "A ∨ ¬B ∧ C")
    code, out, _ = capout("parse", "--style", "polish", "A | ~B & C")
    assert out.strip() == "∨ A ∧ ¬ B C"
    code, out, _ = capout("parse", "--notation", "polish", "→ P Q")
    assert out.strip() == "P → Q"
    code, out, _ = capout("parse", "--json", "P -> Q")
    obj = json.loads(out)
    assert obj["atoms"] == ["P", "Q"]
    assert obj["rendered"]["full"] == "(P → Q)"


def test_table(capout):
    code, out, _ = capout("table", "P & Q")
    assert code == 0
    rows = [line for line in out.splitlines() if "|" in line][1:]
    assert len(rows) == 4
    code, out, _ = capout("table", "--json", "P")
    obj = json.loads(out)
    assert obj["rows"][0]["value"] is False


def test_indices_matches_worked_example(capout):
    code, out, _ = capout("indices", "--order", "p,q,r", "(~p | ~q) & (p | r)")
    assert code == 0
    assert "Σm(1,3,4,5)" in out
    assert "ΠM(0,2,6,7)" in out


def test_nf_fndp(capout):
    code, out, _ = capout("nf", "--kind", "fndp", "--order", "A,B,C", "A | ~B & C")
    assert code == 0
    assert "Σm(1, 4, 5, 6, 7)" in out
    code, out, _ = capout("nf", "--kind", "nnf", "--json", "P -> Q")
    assert json.loads(out)["result"] == "¬P ∨ Q"


def test_prove_methods(capout):
    code, out, _ = capout("prove", "--method", "definition", "P, P -> (Q | R), (Q | R) -> S => S")
    assert code == 0
    assert "∴ CL válida" in out
    code, out, _ = capout("prove", "--method", "direct", "P -> Q, Q -> R, ~R => ~P")
    assert code == 0
    code, out, _ = capout("prove", "--method", "resolution", "--json", "P | Q => P")
    assert code == 1
    obj = json.loads(out)
    assert obj["verdict"] == "invalid"
    assert obj["countermodel"] == {"P": False, "Q": True}


def test_check_valid_and_mutated(capout, tmp_path):
    trace = TRACES / "anexo4-ej1-b.derivation.json"
    code, out, _ = capout("check", str(trace))
    assert code == 0
    assert "válida" in out

    obj = json.loads(trace.read_text(encoding="utf-8"))
    obj["steps"][3]["law"] = "Dominación"
    bad = tmp_path / "bad.derivation.json"
    bad.write_text(json.dumps(obj, ensure_ascii=False), encoding="utf-8")
    code, out, _ = capout("check", str(bad))
    assert code == 1


def test_check_strict_flag(capout):
    # trace b is fully strict; trace a needs AC leniency
    code, _, _ = capout("check", "--strict", str(TRACES / "anexo4-ej1-b.derivation.json"))
    assert code == 0
    code, _, _ = capout("check", "--strict", str(TRACES / "anexo4-ej1-a.derivation.json"))
    assert code == 1
    code, _, _ = capout("check", str(TRACES / "anexo4-ej1-a.derivation.json"))
    assert code == 0


def test_solve_exercise(capout):
    code, out, _ = capout("solve", str(CORPUS / "anexo5-ej2.exercise.json"))
    assert code == 0
    assert "∴ Contradicción" in out


def test_solve_json_round_trip(capout):
    code, out, _ = capout("solve", "--json", str(CORPUS / "anexo5-ej4.exercise.json"))
    assert code == 0
    obj = json.loads(out)
    assert obj["machine"]["maxterms"] == [0, 2, 6, 7]
    assert obj["ok"] is True


def test_solve_all_writes_documents(capout, tmp_path):
    code, out, _ = capout("solve-all", str(CORPUS), "--out", str(tmp_path), "--json")
    assert code == 0
    files = sorted(tmp_path.glob("*.solution.json"))
    assert len(files) == 23
    assert "anexo5-ej1: ok" in out


# --- exit code matrix


def test_exit_codes_matrix(capout, tmp_path):
    # 0: success / valid
    assert capout("classify", "P | ~P")[0] == 0
    assert capout("prove", "P, P -> Q => Q")[0] == 0
    # 1: invalid / check failed / mismatch
    assert capout("prove", "P -> Q, Q => P")[0] == 1
    bad_exercise = tmp_path / "bad-expect.exercise.json"
    bad_exercise.write_text(
        json.dumps(
            {
                "format": 1,
                "id": "x",
                "kind": "classify",
                "statement": "P",
                "expected": {"classification": "tautology"},
            }
        ),
        encoding="utf-8",
    )
    assert capout("solve", str(bad_exercise))[0] == 1
    # 2: parse or usage error
    assert capout("classify", "P &")[0] == 2
    assert capout("prove", "no arrow here")[0] == 2
    assert capout("solve", "/does/not/exist.exercise.json")[0] == 2
    # 3: resource limits
    assert capout("classify", " & ".join(f"x{i}" for i in range(25)))[0] == 3
    assert capout("nf", "--kind", "fndp", "--order", ",".join(f"x{i}" for i in range(15)), "x0 & x1")[0] == 3


def test_ascii_flag(capout):
    code, out, _ = capout("parse", "--ascii", "A ∨ ¬B ∧ C")
    assert (code, out.strip()) == (0, "A | ~B & C")
    code, out, _ = capout("prove", "--ascii", "--method", "direct", "P -> Q, Q -> R, ~R => ~P")
    assert code == 0
    assert "~P" in out and "¬P" not in out.replace("∴ CL válida (valid consequence)", "")


def test_var_cap_env_override(capout, monkeypatch):
    wide = " & ".join(f"x{i}" for i in range(22))
    assert capout("classify", wide)[0] == 3
    monkeypatch.setenv("DISCRETA_VAR_CAP", "23")
    assert capout("classify", wide)[0] == 0
