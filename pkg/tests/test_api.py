import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_root_and_health(client):
    assert client.get("/").json()["status"] == "ok"
    assert client.get("/health").json()["status"] == "healthy"


def test_catalog_listing(client):
    body = client.get("/groups/catalog").json()
    assert body["count"] == len(body["entries"])
    assert any(e["name"] == "sym4" and e["expected"] is True for e in body["entries"])


def test_analyze_and_fetch_report(client):
    response = client.post("/groups/analyze", json={"spec": "symmetric 3", "construct_rep": True})
    assert response.status_code == 200
    report = response.json()
    assert report["criterion"]["verdict"] is True
    assert report["agreement"] is True
    assert report["representation"]["degree"] == 2
    fetched = client.get(f"/groups/reports/{report['report_id']}")
    assert fetched.status_code == 200
    assert fetched.json()["group"]["order"] == 6
    listed = client.get("/groups/reports").json()
    assert report["report_id"] in [r["id"] for r in listed["reports"]]


def test_analyze_with_autos(client):
    response = client.post(
        "/groups/analyze",
        json={"spec": "elemabelian 2 2", "autos": "g0->g1, g1->g0 | g0->g0, g1->g0 g1"},
    )
    body = response.json()
    assert body["criterion"]["verdict"] is False
    assert body["g_variant"]["verdict"] is True


def test_input_errors_are_400(client):
    response = client.post("/groups/analyze", json={"spec": "dihedral 7"})
    assert response.status_code == 400
    body = response.json()
    assert body["status"] == "error"
    assert body["code"] == "INVALID_INPUT"
    assert body["details"]["stage"] == "parse"


def test_missing_report_is_404(client):
    response = client.get("/groups/reports/does-not-exist")
    assert response.status_code == 404
    assert response.json()["code"] == "REPORT_NOT_FOUND"


def test_batch_endpoint(client):
    response = client.post("/groups/batch", json={"names": ["cyclic6", "klein4", "sym3"]})
    body = response.json()
    assert body["exit_code"] == 0
    assert body["summary"]["total"] == 3
    assert set(body["report_ids"]) == {"cyclic6", "klein4", "sym3"}
    stored = client.get(f"/groups/summaries/{body['summary_id']}")
    assert stored.status_code == 200
    assert stored.json()["exit_code"] == 0
    assert stored.json()["summary"] == body["summary"]


def test_batch_endpoint_rejects_bad_catalog(client):
    response = client.post("/groups/batch", json={"catalog": "a := cyclic 2\na := cyclic 3\n"})
    assert response.status_code == 400


def test_delete_report(client):
    report_id = client.post("/groups/analyze", json={"spec": "cyclic 5"}).json()["report_id"]
    response = client.delete(f"/groups/reports/{report_id}")
    assert response.status_code == 200
    assert response.json()["status"] == "deleted"
    assert client.get(f"/groups/reports/{report_id}").status_code == 404
    assert client.delete(f"/groups/reports/{report_id}").status_code == 404


def test_missing_summary_is_404(client):
    response = client.get("/groups/summaries/does-not-exist")
    assert response.status_code == 404
    assert response.json()["code"] == "REPORT_NOT_FOUND"
