from fastapi.testclient import TestClient

from api_service import app

client = TestClient(app)


def test_root():
    response = client.get("/")
    assert response.status_code == 200
    assert "running" in response.json()["message"]


def test_health():
    body = client.get("/health").json()
    assert body["status"] == "healthy"
    assert body["suites"] == ["atm-buggy", "atm-fixed", "arq"]


def test_suites():
    suites = {s["name"]: s for s in client.get("/suites").json()["suites"]}
    assert set(suites) == {"atm-buggy", "atm-fixed", "arq"}
    assert suites["arq"]["oracle_variants"] == ["range", "unbounded"]
    assert suites["atm-buggy"]["properties"][1] == {
        "name": "eventually-ready",
        "bound": 10,
        "max_tests": 100,
        "description": "ten steps from Ready pass through Ready again",
    }


def test_run_passing_property():
    response = client.post("/run", json={"suite": "atm-fixed", "prop": "ready-insert", "seed": 5})
    assert response.status_code == 200
    (report,) = response.json()
    assert report["verdict"] == "passed"
    assert report["tests"] == 100
    assert report["seed"] == 5
    assert report["counterexample"] is None


def test_run_falsified_property():
    response = client.post("/run", json={"suite": "atm-buggy", "prop": "eventually-ready", "tests": 1000})
    (report,) = response.json()
    assert report["verdict"] == "falsified"
    assert report["counterexample"].startswith("Starting @ Ready:")


def test_run_unknown_suite_is_bad_request():
    response = client.post("/run", json={"suite": "nope"})
    assert response.status_code == 400
    assert "unknown suite" in response.json()["detail"]


def test_run_validates_test_count():
    response = client.post("/run", json={"suite": "arq", "tests": 0})
    assert response.status_code == 422


def test_oracle():
    response = client.post("/oracle", json={"suite": "arq", "prop": "send-three-ok", "depth": 8})
    assert response.status_code == 200
    reports = response.json()
    assert [r["visit_probability"] for r in reports] == ["0", "0"]
    assert [r["counterexample_probability"] for r in reports] == ["1", "1"]


def test_oracle_unknown_property_is_bad_request():
    response = client.post("/oracle", json={"suite": "arq", "prop": "nope"})
    assert response.status_code == 400
