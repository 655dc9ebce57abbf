"""HTTP service endpoints exercised through the ASGI test client."""

import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from ctclab import __version__, qmath
from ctclab.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "version": __version__}


def test_schema_endpoint(client):
    response = client.get("/schema")
    assert response.status_code == 200
    body = response.json()
    assert body["format_version"] == 1
    assert set(body) >= {"config", "report", "matrix", "pure_state"}


def test_validate_endpoint(client):
    good = client.post("/validate", json={"scenario": "theorem1",
                                          "trials": 50, "seed": 42})
    assert good.status_code == 200
    assert good.json() == {"valid": True, "findings": []}

    bad = client.post("/validate", json={"scenario": "theorem1", "trials": 0})
    assert bad.status_code == 200
    body = bad.json()
    assert not body["valid"]
    assert body["findings"][0]["field"] == "trials"

    broken = client.post("/validate", content=b"{not json",
                         headers={"content-type": "application/json"})
    assert broken.status_code == 400


def test_run_endpoint(client):
    response = client.post("/run", json={
        "scenario": "fixed-point", "unitary": "swap",
        "cr_state": "maximally-mixed", "trials": 1,
    })
    assert response.status_code == 200
    report = response.json()
    assert report["format_version"] == 1
    assert report["tool_version"] == __version__
    spectrum = report["records"][0]["fixed_spectrum"]
    assert np.max(np.abs(np.array(spectrum) - 0.5)) < 1e-10
    assert report["summary"]["max_residual"] <= 1e-10


def test_run_rejects_invalid_config(client):
    response = client.post("/run", json={"scenario": "fixed-point",
                                         "trials": 0})
    assert response.status_code == 422


def test_run_is_deterministic(client):
    body = {"scenario": "theorem1", "trials": 4, "seed": 42}
    first = client.post("/run", json=body).json()
    second = client.post("/run", json=body).json()
    first["summary"].pop("wall_time_ms")
    second["summary"].pop("wall_time_ms")
    assert first == second


def test_run_does_not_write_output_path(client, tmp_path):
    target = tmp_path / "report.json"
    response = client.post("/run", json={
        "scenario": "fixed-point", "trials": 1,
        "output_path": str(target),
    })
    assert response.status_code == 200
    assert response.json()["config"]["output_path"] == str(target)
    assert not target.exists()


def test_run_maps_payload_errors_to_400(client, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(qmath.matrix_to_json(np.ones((4, 4)))))
    response = client.post("/run", json={"scenario": "fixed-point",
                                         "unitary": f"file:{bad}"})
    assert response.status_code == 400
    assert "payload error" in response.json()["detail"]

    missing = tmp_path / "missing.json"
    response = client.post("/run", json={"scenario": "fixed-point",
                                         "unitary": f"file:{missing}"})
    assert response.status_code == 400
    assert "file access failed" in response.json()["detail"]
