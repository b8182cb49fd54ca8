from fastapi.testclient import TestClient

from helpers import DATA
from prag.service import app

client = TestClient(app)
LEXICON = (DATA / "fragment.lex").read_text()


def test_health():
    assert client.get("/health").json() == {"status": "ok"}


def test_run():
    r = client.post("/run", json={"discourse": "a man walks . he whistles .", "lexicon": LEXICON, "trace": True})
    assert r.status_code == 200
    body = r.json()
    assert body["formula"] == "exists x1. ((man(x1) & walks(x1)) & whistles(x1))"
    assert body["context"] == ["x1 gender=m introduced-in:S1 level:top"]
    assert body["trace"] == ["introduce {gender=m} -> x1", "select {gender=m} -> x1"]
    assert body["output"] == (DATA.parent / "golden" / "anaphora.out").read_text()


def test_run_errors_carry_exit_codes():
    cases = [
        ("every farmer owns a donkey . it brays .", "trapped", "UnresolvedAnaphora", 3),
        ("the kof isbald .", "off", "PresuppositionFailure", 4),
        ("man a walks .", "trapped", "ParseError", 2),
    ]
    for text, policy, kind, code in cases:
        r = client.post("/run", json={"discourse": text, "lexicon": LEXICON, "accommodation": policy})
        assert r.status_code == 400
        assert r.json()["kind"] == kind and r.json()["exit_code"] == code


def test_run_rejects_unknown_policy():
    r = client.post("/run", json={"discourse": "john walks .", "lexicon": LEXICON, "accommodation": "sometimes"})
    assert r.status_code == 422


def test_eval():
    model = (DATA / "one.model").read_text()
    assert client.post("/eval", json={"model": model, "formula": "exists x. man(x)"}).json() == {"value": True}
    r = client.post("/eval", json={"model": model, "formula": "man(y)"})
    assert r.status_code == 400 and r.json()["exit_code"] == 2


def test_session_lifecycle():
    sid = client.post("/sessions", json={"lexicon": LEXICON}).json()["id"]
    r = client.post(f"/sessions/{sid}/step", json={"line": "a man walks ."})
    assert r.json()["ok"] and r.json()["sentences"] == 1
    r = client.post(f"/sessions/{sid}/step", json={"line": "it brays ."})
    assert not r.json()["ok"] and r.json()["sentences"] == 1
    info = client.get(f"/sessions/{sid}").json()
    assert info["context"] == ["x1 gender=m introduced-in:S1 level:top"]
    assert client.delete(f"/sessions/{sid}").status_code == 200
    assert client.get(f"/sessions/{sid}").status_code == 404


def test_quit_closes_session():
    sid = client.post("/sessions", json={"lexicon": LEXICON}).json()["id"]
    client.post(f"/sessions/{sid}/step", json={"line": ":quit"})
    assert client.get(f"/sessions/{sid}").status_code == 404


def test_bad_session_lexicon():
    r = client.post("/sessions", json={"lexicon": "man\tXX\tman\t-"})
    assert r.status_code == 400 and r.json()["kind"] == "LexiconError"
