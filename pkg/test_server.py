import pytest
from fastapi.testclient import TestClient

from server import app

SMALL = {"n": 4, "plus_edges": [[1, 2], [3, 4], [1, 3]]}


@pytest.fixture
def client():
    return TestClient(app)


def test_root_and_health(client):
    root = client.get("/")
    assert root.status_code == 200
    assert "paths" in root.json()["commands"]

    health = client.get("/health")
    assert health.status_code == 200
    assert health.json()["status"] == "healthy"
    assert health.json()["workflow"] == "langgraph"


def test_bounds(client):
    response = client.post("/bounds", json={"n": 100, "d": 0.5, "delta": 2, "m": 100})
    assert response.status_code == 200
    body = response.json()
    assert body["theorem0"]["value"] == pytest.approx(48.623, abs=1e-3)
    assert body["constants"]["delta"] == 2

    assert client.post("/bounds", json={"n": 3, "d": 0.5, "m": 1}).status_code == 400


def test_run_paths(client):
    response = client.post("/run/paths", json={"instance": SMALL, "persist": False})
    assert response.status_code == 200
    record = response.json()
    assert record["outputs"]["paths"] == [[2, 1, 3, 4]]
    assert record["outputs"]["certificate_pass"] is True


def test_run_embed_with_pattern(client):
    pattern = {"n": 4, "edges": [[1, 2], [2, 3], [3, 4]]}
    response = client.post("/run/embed", json={"instance": SMALL, "pattern": pattern, "persist": False})
    assert response.status_code == 200
    assert response.json()["outputs"]["m_plus"] == 3


def test_run_errors(client):
    assert client.post("/run/colour", json={"instance": SMALL}).status_code == 404
    mismatch = {"instance": SMALL, "pattern": {"n": 6, "edges": [[1, 2]]}, "persist": False}
    assert client.post("/run/embed", json=mismatch).status_code == 400
    bad = {"instance": {"n": 4, "plus_edges": [[2, 2]]}}
    assert client.post("/run/paths", json=bad).status_code == 422


def test_metrics_after_a_run(client):
    client.post("/run/paths", json={"instance": SMALL, "persist": False})
    stats = client.get("/metrics").json()
    assert stats["total_runs"] >= 1
