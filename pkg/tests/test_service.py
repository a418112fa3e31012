import json
import threading
import urllib.error
import urllib.request

import pytest
from jsonschema import validate as schema_validate

from discreta.service import make_server

from conftest import CORPUS, SCHEMAS


@pytest.fixture(scope="module")
def server_url():
    server = make_server("127.0.0.1", 0, exercises_dir=str(CORPUS), allow_origin="http://localhost:5173")
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    yield f"http://{host}:{port}"
    server.shutdown()
    server.server_close()


def _schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text(encoding="utf-8"))


def call(url, path, body=None, method=None):
    data = json.dumps(body).encode("utf-8") if body is not None else None
    req = urllib.request.Request(url + path, data=data, method=method or ("POST" if data else "GET"))
    if data:
        req.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(req, timeout=10) as resp:
            return resp.status, json.loads(resp.read().decode("utf-8")), dict(resp.headers)
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read().decode("utf-8")), dict(err.headers)


def test_health(server_url):
    status, body, _ = call(server_url, "/api/health")
    assert (status, body) == (200, {"status": "ok"})


def test_parse_endpoint(server_url):
    status, body, headers = call(server_url, "/api/parse", {"text": "A | ~B & C"})
    assert status == 200
    assert body["rendered"]["minimal"] == "A ∨ ¬B ∧ C"
    assert body["atoms"] == ["A", "B", "C"]
    schema_validate(body, _schema("api-parse-response"))
    assert headers.get("Access-Control-Allow-Origin") == "http://localhost:5173"


def test_parse_error_position(server_url):
    status, body, _ = call(server_url, "/api/parse", {"text": "P -> "})
    assert status == 400
    assert body["error"] == "parse"
    assert body["position"] == 5
    schema_validate(body, _schema("api-error-response"))


def test_parse_polish_notation(server_url):
    status, body, _ = call(server_url, "/api/parse", {"text": "→ P Q", "notation": "polish"})
    assert status == 200
    assert body["rendered"]["minimal"] == "P → Q"


def test_step_options(server_url):
    status, body, _ = call(server_url, "/api/step/options", {"formula": "¬¬P", "path": []})
    assert status == 200
    moves = {(m["law"], m["direction"]): m["preview"] for m in body["moves"]}
    assert moves[("DoubleNegation", "LR")] == "P"
    schema_validate(body, _schema("api-step-options-response"))

    status, body, _ = call(server_url, "/api/step/options", {"formula": "P → Q", "path": []})
    el1 = [m for m in body["moves"] if m["law"] == "EL1" and m["direction"] == "LR"]
    assert el1 and el1[0]["preview"] == "¬P ∨ Q"


def test_step_options_bad_path(server_url):
    status, body, _ = call(server_url, "/api/step/options", {"formula": "P", "path": [3]})
    assert status == 400
    assert body["error"] == "path"


def test_step_apply(server_url):
    status, body, _ = call(
        server_url,
        "/api/step/apply",
        {"formula": "P → Q", "path": [], "law": "EL1", "direction": "LR", "goal": "T"},
    )
    assert status == 200
    assert body["result"]["minimal"] == "¬P ∨ Q"
    assert body["goalReached"] is False
    schema_validate(body, _schema("api-step-apply-response"))

    status, body, _ = call(
        server_url,
        "/api/step/apply",
        {"formula": "P ∨ T", "path": [], "law": "Domination", "direction": "LR", "goal": "T"},
    )
    assert body["goalReached"] is True


def test_step_apply_mismatch(server_url):
    status, body, _ = call(
        server_url,
        "/api/step/apply",
        {"formula": "P ∧ Q", "path": [], "law": "Domination", "direction": "LR"},
    )
    assert status == 400
    assert body["error"] == "mismatch"


def test_validate_endpoint(server_url):
    derivation = {
        "format": 1,
        "start": "P → Q",
        "goal": {"shape": "nnf"},
        "steps": [{"law": "EL1", "direction": "LR", "path": [], "result": "¬P ∨ Q"}],
    }
    status, body, _ = call(server_url, "/api/derivation/validate", {"derivation": derivation})
    assert status == 200
    assert body["overall"] is True and body["goal"] is True
    schema_validate(body, _schema("api-validate-response"))

    derivation["steps"][0]["law"] = "Dominación"
    status, body, _ = call(server_url, "/api/derivation/validate", {"derivation": derivation})
    assert body["overall"] is False


def test_exercise_listing_and_fetch(server_url):
    status, body, _ = call(server_url, "/api/exercises")
    assert status == 200
    ids = {e["id"] for e in body["exercises"]}
    assert "anexo5-ej1" in ids and "anexo4-ej1" in ids

    status, body, _ = call(server_url, "/api/exercises/anexo4-ej1")
    assert status == 200
    assert body["kind"] == "derivation-goal"
    assert body["goal"] == "T"

    status, body, _ = call(server_url, "/api/exercises/unknown")
    assert status == 404


def test_submit_classification(server_url):
    status, body, _ = call(server_url, "/api/exercises/anexo5-ej1/submit", {"answer": "Tautología"})
    assert status == 200
    assert body["verdict"] == "incorrect"
    assert body["expected"] == "Contingencia"
    schema_validate(body, _schema("api-submit-response"))

    status, body, _ = call(server_url, "/api/exercises/anexo5-ej1/submit", {"answer": "contingency"})
    assert body["verdict"] == "correct"


def test_submit_derivation(server_url, traces_dir):
    trace = json.loads((traces_dir / "anexo4-ej1-a.derivation.json").read_text(encoding="utf-8"))
    status, body, _ = call(server_url, "/api/exercises/anexo4-ej1/submit", {"derivation": trace})
    assert status == 200
    assert body["verdict"] == "valid"
    schema_validate(body, _schema("api-submit-response"))

    trace["steps"] = trace["steps"][:-1]
    status, body, _ = call(server_url, "/api/exercises/anexo4-ej1/submit", {"derivation": trace})
    assert body["verdict"] == "invalid"


def test_submit_index_sets(server_url):
    answer = {"minterms": [1, 4, 5, 6, 7], "maxterms": [0, 2, 3]}
    status, body, _ = call(server_url, "/api/exercises/anexo5-ej1/submit", {"answer": answer})
    assert body["verdict"] == "correct"
    answer = {"minterms": [0], "maxterms": [1, 2, 3, 4, 5, 6, 7]}
    status, body, _ = call(server_url, "/api/exercises/anexo5-ej1/submit", {"answer": answer})
    assert body["verdict"] == "incorrect"
    assert body["expected"]["minterms"] == [1, 4, 5, 6, 7]


def test_statelessness_identical_responses(server_url):
    body = {"formula": "P → Q ∨ R", "path": [1]}
    first = call(server_url, "/api/step/options", body)
    for _ in range(3):
        call(server_url, "/api/parse", {"text": "X | Y"})
        again = call(server_url, "/api/step/options", body)
        assert again == first


def test_apply_responses_oracle_equivalent(server_url, rng):
    from conftest import random_formula
    from discreta.semantics import equivalent
    from discreta.syntax import parse_infix, print_formula

    checked = 0
    for _ in range(40):
        f = random_formula(rng, max_depth=4)
        status, body, _ = call(server_url, "/api/step/options", {"formula": print_formula(f), "path": []})
        if status != 200 or not body["moves"]:
            continue
        move = body["moves"][0]
        status, applied, _ = call(
            server_url,
            "/api/step/apply",
            {"formula": print_formula(f), "path": [], "law": move["law"], "direction": move["direction"]},
        )
        assert status == 200
        assert equivalent(parse_infix(applied["result"]["minimal"]), f)
        checked += 1
    assert checked > 10


def test_body_size_limit(server_url):
    status, body, _ = call(server_url, "/api/parse", {"text": "P" * (70 * 1024)})
    assert status == 413
    assert body["error"] == "limit"


def test_formula_node_limit(server_url):
    wide = " & ".join(["P"] * 2100)
    status, body, _ = call(server_url, "/api/parse", {"text": wide})
    assert status == 400
    assert body["error"] == "limit"


def test_options_preflight(server_url):
    req = urllib.request.Request(server_url + "/api/parse", method="OPTIONS")
    with urllib.request.urlopen(req, timeout=10) as resp:
        assert resp.status == 204
        assert resp.headers["Access-Control-Allow-Origin"] == "http://localhost:5173"
        assert "POST" in resp.headers["Access-Control-Allow-Methods"]
