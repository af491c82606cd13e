import pytest
from fastapi.testclient import TestClient

from sleec.server import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    r = client.get("/api/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_parse_endpoint(client, corpus_source):
    r = client.post("/api/parse", json={"text": corpus_source})
    assert r.status_code == 200
    data = r.json()
    assert data["diagnostics"] == []
    assert len(data["symbols"]["events"]) == 8
    assert {"name": "roomTemperature", "type": "numeric"} in data["symbols"]["measures"]


def test_parse_reports_diagnostics(client, verbatim_source):
    r = client.post("/api/parse", json={"text": verbatim_source})
    assert r.status_code == 200
    codes = {d["code"] for d in r.json()["diagnostics"]}
    assert codes == {"SLEEC-E001"}


def test_complete_after_when(client, corpus_source, corpus):
    offset = corpus_source.index("when ") + len("when ")
    r = client.post("/api/complete", json={"text": corpus_source, "offset": offset})
    assert r.status_code == 200
    items = r.json()["items"]
    assert {i["label"] for i in items} == set(corpus.table.events)
    assert all(i["kind"] == "event" for i in items)


def test_check_insufficient_c1(client, corpus_source):
    r = client.post(
        "/api/check",
        json={"text": corpus_source, "property": "insufficient", "target": "c1"},
    )
    assert r.status_code == 200
    verdicts = r.json()["verdicts"]
    assert len(verdicts) == 1
    v = verdicts[0]
    assert v["status"] == "IssueFound"
    diag = v["diagnosis"]
    assert {x["rule"] for x in diag["filtered"]["related_rules"]} == {"r1", "r3"}
    assert diag["raw"]["counts"] == diag["filtered"]["counts"]


def test_check_unresolvable_target_is_422(client, corpus_source):
    r = client.post("/api/check", json={"text": corpus_source, "target": "zz"})
    assert r.status_code == 422


def test_malformed_json_is_400(client):
    r = client.post(
        "/api/parse", content=b"{oops", headers={"content-type": "application/json"}
    )
    assert r.status_code == 400
    r2 = client.post("/api/parse", json={"nope": 1})
    assert r2.status_code == 400


def test_erroneous_document_checks_to_empty_verdicts(client, verbatim_source):
    r = client.post("/api/check", json={"text": verbatim_source})
    assert r.status_code == 200
    data = r.json()
    assert data["verdicts"] == []
    assert data["diagnostics"]


def test_statelessness(client, corpus_source):
    """Identical requests produce identical responses, whatever ran before."""
    req = {"text": corpus_source, "property": "situational", "target": "r1"}
    first = client.post("/api/check", json=req).json()
    client.post("/api/parse", json={"text": "def_start def_end"})
    client.post("/api/check", json={"text": corpus_source, "property": "redundant", "target": "r2"})
    second = client.post("/api/check", json=req).json()
    first.pop("timing"), second.pop("timing")
    assert first == second


def test_budget_override(client, corpus_source):
    r = client.post(
        "/api/check",
        json={
            "text": corpus_source,
            "property": "situational",
            "target": "r1",
            "budget": 40,
        },
    )
    assert r.status_code == 200
    assert r.json()["verdicts"][0]["budget_exhausted"] is True
