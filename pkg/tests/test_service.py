"""HTTP API behavior: status codes, concurrency control, persistence."""

import json

import pytest
from fastapi.testclient import TestClient

from pollaudit.service import create_app
from pollaudit.session import import_trail

SMALL_RULE = {"kind": "bayes", "gamma": 0.1,
              "prior": {"N": 101, "family": "uniform", "params": {}}}
SMALL_SESSION = {"N": 101, "rule": SMALL_RULE, "schedule": [10, 25, 60],
                 "winner_name": "Alice", "loser_name": "Bob"}


@pytest.fixture
def client():
    return TestClient(create_app())


class TestHealth:
    def test_healthz(self, client):
        r = client.get("/v1/healthz")
        assert r.status_code == 200
        assert r.json()["status"] == "ok"


class TestTables:
    def test_build_small_table(self, client):
        r = client.post("/v1/tables", json={"rule": SMALL_RULE, "schedule": [10, 25, 60]})
        assert r.status_code == 200
        body = r.json()
        assert [row["n"] for row in body["rows"]] == [10, 25, 60]
        assert all(row["k_plus"] > row["n"] // 2 for row in body["rows"])

    @pytest.mark.slow
    def test_reference_first_round_threshold(self, client):
        rule = {"kind": "bayes", "gamma": 0.1,
                "prior": {"N": 100_000, "family": "beta", "params": {"a": 0.5, "b": 0.5}}}
        r = client.post("/v1/tables", json={"rule": rule, "schedule": [200]})
        assert r.status_code == 200
        assert r.json()["rows"][0]["k_plus"] == 110

    def test_bad_rule_is_400(self, client):
        r = client.post("/v1/tables", json={"rule": {"kind": "nope"}, "schedule": [10]})
        assert r.status_code == 400
        assert r.json()["code"] == "bad_rule"

    def test_malformed_body_is_400(self, client):
        r = client.post("/v1/tables", json={"schedule": "ten"})
        assert r.status_code == 400
        assert r.json()["code"] == "validation_error"


class TestSessions:
    def test_create_and_fetch(self, client):
        r = client.post("/v1/sessions", json=SMALL_SESSION)
        assert r.status_code == 201
        body = r.json()
        assert body["status"] == "active"
        assert body["revision"] == 0
        sid = body["session_id"]
        got = client.get(f"/v1/sessions/{sid}")
        assert got.status_code == 200
        assert got.json()["session_id"] == sid

    def test_unknown_session_404(self, client):
        assert client.get("/v1/sessions/nope").status_code == 404
        assert client.post("/v1/sessions/nope/rounds",
                           json={"n": 10, "k": 5, "revision": 0}).status_code == 404

    def test_round_verdicts(self, client):
        body = client.post("/v1/sessions", json=SMALL_SESSION).json()
        sid = body["session_id"]
        kp = body["table"]["rows"][0]["k_plus"]
        r = client.post(f"/v1/sessions/{sid}/rounds",
                        json={"n": 10, "k": kp - 1, "revision": 0})
        assert r.status_code == 200
        assert r.json()["verdict"] == "continue"
        r = client.post(f"/v1/sessions/{sid}/rounds",
                        json={"n": 25, "k": body["table"]["rows"][1]["k_plus"], "revision": 1})
        assert r.json()["verdict"] == "confirmed_winner"
        assert r.json()["session"]["status"] == "confirmed_winner"

    def test_stale_revision_409(self, client):
        body = client.post("/v1/sessions", json=SMALL_SESSION).json()
        sid = body["session_id"]
        client.post(f"/v1/sessions/{sid}/rounds", json={"n": 10, "k": 6, "revision": 0})
        r = client.post(f"/v1/sessions/{sid}/rounds", json={"n": 25, "k": 14, "revision": 0})
        assert r.status_code == 409
        assert "current is 1" in r.json()["message"]

    def test_invariant_violation_422(self, client):
        sid = client.post("/v1/sessions", json=SMALL_SESSION).json()["session_id"]
        r = client.post(f"/v1/sessions/{sid}/rounds", json={"n": 11, "k": 5, "revision": 0})
        assert r.status_code == 422
        assert r.json()["code"] == "invariant_violation"

    def test_bad_session_body_400(self, client):
        r = client.post("/v1/sessions", json={**SMALL_SESSION, "schedule": [10, 999]})
        assert r.status_code == 400


class TestTrail:
    def test_trail_replays_through_library(self, client):
        body = client.post("/v1/sessions", json=SMALL_SESSION).json()
        sid = body["session_id"]
        kp = body["table"]["rows"][0]["k_plus"]
        client.post(f"/v1/sessions/{sid}/rounds", json={"n": 10, "k": kp, "revision": 0})
        r = client.get(f"/v1/sessions/{sid}/trail")
        assert r.status_code == 200
        replayed = import_trail(r.content)
        assert replayed.session_id == sid
        assert replayed.status.value == "confirmed_winner"


class TestPersistence:
    def test_restart_replays_log(self, tmp_path):
        app = create_app(str(tmp_path))
        with TestClient(app) as client:
            body = client.post("/v1/sessions", json=SMALL_SESSION).json()
            sid = body["session_id"]
            client.post(f"/v1/sessions/{sid}/rounds", json={"n": 10, "k": 6, "revision": 0})

        reborn = create_app(str(tmp_path))
        with TestClient(reborn) as client:
            got = client.get(f"/v1/sessions/{sid}")
            assert got.status_code == 200
            view = got.json()
            assert view["revision"] == 1
            assert view["rounds"] == [
                {"n": 10, "k": 6,
                 "timestamp": view["rounds"][0]["timestamp"], "verdict": "continue"}]
            nxt = client.post(f"/v1/sessions/{sid}/rounds",
                              json={"n": 25, "k": 14, "revision": 1})
            assert nxt.status_code == 200

    def test_log_is_append_only_jsonl(self, tmp_path):
        app = create_app(str(tmp_path))
        with TestClient(app) as client:
            body = client.post("/v1/sessions", json=SMALL_SESSION).json()
            client.post(f"/v1/sessions/{body['session_id']}/rounds",
                        json={"n": 10, "k": 6, "revision": 0})
        lines = (tmp_path / "sessions.jsonl").read_text().splitlines()
        assert len(lines) == 2
        assert json.loads(lines[0])["event"] == "created"
        assert json.loads(lines[1])["event"] == "round"
