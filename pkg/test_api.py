"""
Tests for the HTTP API
"""
import pytest
from fastapi.testclient import TestClient

from main import app


@pytest.fixture
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_trace(client):
    response = client.get("/api/trace", params={"poly": "x^2+x+1"})
    assert response.status_code == 200
    payload = response.json()
    assert payload["odd_terms"] == ["0x7", "0x1"]
    assert payload["m"] == 2


def test_trace_accepts_hex(client):
    response = client.get("/api/trace", params={"poly": "0x80000003"})
    assert response.json()["odd_degrees"] == [31, 29, 24, 24, 16, 16, 16, 16, 0]


@pytest.mark.parametrize("poly,fragment", [("0", "zero polynomial"), ("x^2+y", "y")])
def test_trace_domain_errors(client, poly, fragment):
    response = client.get("/api/trace", params={"poly": poly})
    assert response.status_code == 400
    assert fragment in response.json()["detail"]


def test_count(client):
    assert client.get("/api/count", params={"degree": 6}).json() == {"degree": 6, "stratum": "odd", "count": 16}
    quadrants = client.get("/api/count", params={"degree": 5, "stratum": "quadrants"}).json()
    assert quadrants["counts"] == {"p0=0": 16, "p0=1": 16, "p1=0": 16, "p1=1": 16}


def test_count_errors(client):
    assert client.get("/api/count", params={"degree": 4, "stratum": "even"}).status_code == 400
    assert client.get("/api/count", params={"degree": 0, "stratum": "p0=0"}).status_code == 400
    assert client.get("/api/count", params={"degree": -1}).status_code == 422


def test_families(client):
    payload = client.get("/api/families/T", params={"n": 31}).json()
    assert payload["polynomial"] == "x^31+x+1"
    assert payload["hex"] == "0x80000003"
    assert payload["odd_degrees"] == [31, 29, 24, 24, 16, 16, 16, 16, 0]
    assert client.get("/api/families/P1").json()["odd_degrees"][0] == 14


def test_families_errors(client):
    assert client.get("/api/families/S", params={"n": 3}).status_code == 400
    assert client.get("/api/families/Q", params={"n": 3}).status_code == 422


def test_conjugation(client):
    payload = client.get("/api/conjugation", params={"poly": "x^8+x^3+1"}).json()
    assert payload["seed_degrees"] == [8, 7, 5, 5, 4, 3, 0]
    assert payload["reciprocal_degrees"] == [8, 6, 6, 0]
    assert payload["bar_equal"] is True
    assert payload["reciprocal_equal"] is False
