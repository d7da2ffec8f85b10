import numpy as np
import pytest
from fastapi.testclient import TestClient

import routes.schmidt
from api.index import app as deployed_app
from main import app
from utils.errors import NumericalFailure
from utils.linalg import maximally_entangled_projector, maximally_entangled_state


@pytest.fixture
def client():
    return TestClient(app)


def test_vecnorm(client):
    response = client.post("/schmidt/vecnorm", json={"state": maximally_entangled_state(2).model_dump(), "k": 1})
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "Ok"
    assert body["result"]["norm"] == pytest.approx(np.sqrt(0.5))


def test_decompose(client):
    response = client.post("/schmidt/decompose", json={"state": maximally_entangled_state(3).model_dump()})
    assert response.status_code == 200
    assert response.json()["result"]["rank"] == 3


def test_opnorm_bounds(client):
    payload = {"operator": maximally_entangled_projector(2).model_dump(), "k": 1}
    result = client.post("/opnorm/bounds", json=payload).json()["result"]
    assert result["lower"] == pytest.approx(0.5, abs=1e-10)
    assert result["upper"] == pytest.approx(0.5, abs=1e-10)


def test_certify(client, werner_scaled):
    payload = {"operator": werner_scaled(3, 0.6).model_dump(), "k": 2, "restarts": 4}
    response = client.post("/kpos/certify", json=payload)
    assert response.status_code == 200
    result = response.json()["result"]
    assert result["status"] == "NotKBlockPositive"
    assert result["witness"]["kind"] == "vector"


def test_werner_threshold(client):
    result = client.get("/werner/threshold", params={"n": 3, "alpha": 0.4, "k": 2}).json()["result"]
    assert result["k_block_positive"] == {"2": True}
    assert result["ppt"] is False
    assert client.get("/werner/threshold", params={"n": 3, "alpha": 2.0}).status_code == 400


def test_werner_limit(client):
    response = client.get("/werner/limit", params={"n": 4, "rmax": 3, "restarts": 2})
    assert response.status_code == 200
    rows = response.json()["result"]
    assert [row["r"] for row in rows] == [1, 2, 3]
    assert rows[0]["bound_ineq2"] == 0.375
    assert rows[2]["heuristic"] is None
    assert client.get("/werner/limit", params={"n": 4, "rmax": 65}).status_code == 422


def test_bad_requests(client):
    state = maximally_entangled_state(2).model_dump()
    assert client.post("/schmidt/vecnorm", json={"state": state, "k": 5}).status_code == 400
    assert client.post("/schmidt/vecnorm", json={"state": state}).status_code == 422
    broken = {**state, "data": state["data"][:3]}
    assert client.post("/schmidt/vecnorm", json={"state": broken, "k": 1}).status_code == 422
    big = {"n": 17, "m": 17, "kind": "vector", "data": [[1.0, 0.0]] + [[0.0, 0.0]] * 288}
    response = client.post("/schmidt/vecnorm", json={"state": big, "k": 1})
    assert response.status_code == 400
    assert "size cap" in response.json()["detail"]


def test_numerical_failure_maps_to_500(client, monkeypatch):
    def fail(*args, **kwargs):
        raise NumericalFailure("SVD did not converge")

    monkeypatch.setattr(routes.schmidt, "schmidt_decompose", fail)
    response = client.post("/schmidt/decompose", json={"state": maximally_entangled_state(2).model_dump()})
    assert response.status_code == 500


def test_deployment_root_and_health():
    client = TestClient(deployed_app)
    root = client.get("/").json()
    assert root["version"] == "1.0.0"
    assert "POST /kpos/certify" in root["endpoints"]
    assert client.get("/health").json()["status"] == "healthy"
