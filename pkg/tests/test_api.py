"""HTTP routes exercised through the FastAPI test client."""

from __future__ import annotations

import inspect
import math

import pytest
from fastapi.testclient import TestClient

from compactlab.api import routes
from compactlab.app import create_app


@pytest.fixture
def client() -> TestClient:
    return TestClient(create_app())


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_version_reports_package_version(client, monkeypatch):
    monkeypatch.setenv("GIT_COMMIT", "abc123")
    body = client.get("/api/version").json()
    assert body["git-commit"] == "abc123"
    assert body["version"]


def test_analyze_kdv_alias(client):
    response = client.post("/analyze", json={"equation": "KdV"})
    assert response.status_code == 200
    body = response.json()
    assert body["relation"] == "±V*L^2 ± 6*A*L^2 ± 1 = 0"
    assert body["width"] == "L = 1/sqrt(|±V ± 6*A|)"
    assert "branch" not in body
    assert "ledger" not in body


def test_analyze_with_branch(client):
    body = client.post("/analyze", json={"equation": "KdV", "branch": "++-"}).json()
    assert body["branch"] == "++-"
    assert body["branch_width"] == "L = 1/sqrt(V + 6*A)"
    assert body["branch_relation"] == "V*L^2 + 6*A*L^2 - 1 = 0"


def test_analyze_can_add_the_ledger(client):
    body = client.post("/analyze", json={"equation": "K22", "paper_compat": True}).json()
    assert isinstance(body["ledger"], list)


def test_analyze_degenerate_equation(client):
    body = client.post("/analyze", json={"equation": "u_t = 0"}).json()
    assert body["width"] == "V*A/L = 0 (any L)"
    assert body["report"]["degenerate"] is True


def test_unparseable_equation_is_a_bad_request(client):
    response = client.post("/analyze", json={"equation": "u_t + * u = 0"})
    assert response.status_code == 400
    assert "offset 6" in response.json()["detail"]


def test_wrong_branch_length_is_unprocessable(client):
    response = client.post("/analyze", json={"equation": "KdV", "branch": "+-"})
    assert response.status_code == 422


def test_solve_width_kdv(client):
    response = client.post(
        "/solve-width", json={"equation": "KdV", "A": 1.0, "V": 2.0, "branch": "++-"}
    )
    assert response.status_code == 200
    body = response.json()
    assert body["roots"] == pytest.approx([1 / math.sqrt(8)], rel=1e-12)
    assert body["method"] == "closed_form"
    assert body["closed_form"] == "L = 1/sqrt(V + 6*A)"


def test_solve_width_needs_bound_parameters(client):
    response = client.post("/solve-width", json={"equation": "K212", "A": 1.0, "V": 1.0})
    assert response.status_code == 422
    assert "unbound parameter" in response.json()["detail"]


def test_exact_profile_kdv(client):
    response = client.post(
        "/exact/profile", json={"family": "kdv-soliton", "A": 2.0, "range": [0.0, 1.0], "points": 3}
    )
    assert response.status_code == 200
    body = response.json()
    assert body["x"] == [0.0, 0.5, 1.0]
    assert body["u"][0] == pytest.approx(2.0)
    assert body["wave"]["V"] == pytest.approx(4.0)
    assert "lambda" not in body["wave"]


def test_exact_profile_accepts_lambda_alias(client):
    body = client.post(
        "/exact/profile", json={"family": "k22-kak", "V": 0.3, "lambda": 5.0}
    ).json()
    assert body["wave"]["lambda"] == 5.0
    assert len(body["x"]) == 201
    assert max(body["u"]) == pytest.approx(0.4)


def test_exact_profile_missing_parameters(client):
    response = client.post("/exact/profile", json={"family": "k22-kak", "V": 0.3})
    assert response.status_code == 422
    assert "flat" in response.json()["detail"]


def test_exact_profile_rejects_unknown_family(client):
    assert client.post("/exact/profile", json={"family": "burgers"}).status_code == 422


def test_two_scale_endpoint(client):
    body = client.post("/frame/two-scale", json={"j": 1, "k": 2}).json()
    assert body["defect"] < 1e-12
    assert body["shift"] == 1


@pytest.mark.parametrize(
    "handler",
    [routes.analyze, routes.solve_width_endpoint, routes.exact_profile, routes.frame_two_scale],
)
def test_solver_routes_do_not_block_the_event_loop(handler):
    assert not inspect.iscoroutinefunction(handler)
