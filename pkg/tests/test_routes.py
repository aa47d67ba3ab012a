import pytest
from fastapi.testclient import TestClient

from skewlab.main import app

from tests.conftest import TRUNCPOLY_CONFIG, ZMOD_CONFIG


@pytest.fixture
def client():
    with TestClient(app) as test_client:
        yield test_client


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy", "service": "skewlab"}


def test_eval_endpoint(client):
    response = client.post("/api/eval/", json={"config": TRUNCPOLY_CONFIG, "expression": "y*x"})
    assert response.status_code == 200
    assert response.json() == {"expression": "y*x", "result": "x^2 + x*y + O(j^3)"}


def test_eval_errors_are_bad_requests(client):
    response = client.post("/api/eval/", json={"config": ZMOD_CONFIG, "expression": "inv(2)"})
    assert response.status_code == 400
    response = client.post("/api/eval/", json={"config": "[base]\n", "expression": "1"})
    assert response.status_code == 400


def test_suite_names(client):
    response = client.get("/api/suites")
    assert response.status_code == 200
    assert "neumann" in response.json()


def test_run_and_store_suite(client):
    response = client.post("/api/suites/run",
                           json={"config": ZMOD_CONFIG, "suite": "limits", "seed": 9, "store": True})
    assert response.status_code == 200
    report = response.json()
    assert report["suite"] == "limits"
    assert report["seed"] == 9
    assert [record["case"] for record in report["records"]] == ["constant", "drift", "geometric", "non-cauchy"]

    runs = client.get("/api/runs", params={"suite": "limits"}).json()
    assert runs
    stored = client.get(f"/api/runs/{runs[0]['id']}").json()
    assert stored["seed"] == 9
    assert stored["passed"] == 4
    assert len(stored["cases"]) == 4


def test_unknown_suite_and_run(client):
    response = client.post("/api/suites/run", json={"config": ZMOD_CONFIG, "suite": "nope"})
    assert response.status_code == 404
    assert client.get("/api/runs/999999").status_code == 404
