"""HTTP endpoints: success paths and error mapping."""

import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from starlette.testclient import TestClient

from freenil.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestHealth:
    def test_ok(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok"}


class TestRanks:
    def test_tsv(self, client):
        resp = client.post(
            "/ranks", json={"g": 0, "n": 4, "kmax": 3, "format": "tsv"}
        )
        assert resp.status_code == 200
        lines = resp.json()["content"].splitlines()
        assert lines[0].split("\t")[0] == "k"
        assert len(lines) == 4

    def test_json_format(self, client):
        resp = client.post(
            "/ranks", json={"g": 1, "n": 1, "kmax": 4, "format": "json"}
        )
        assert resp.status_code == 200
        assert '"rows"' in resp.json()["content"]

    def test_validation(self, client):
        resp = client.post("/ranks", json={"g": 0, "n": 4, "kmax": 1})
        assert resp.status_code == 422
        resp = client.post("/ranks", json={"g": -1, "n": 4, "kmax": 3})
        assert resp.status_code == 422
        resp = client.post(
            "/ranks", json={"g": 0, "n": 4, "kmax": 3, "format": "xml"}
        )
        assert resp.status_code == 422


class TestExpand:
    def test_commutator(self, client):
        resp = client.post(
            "/expand",
            json={"g": 0, "n": 3, "word": "x1^-1 x2^-1 x1 x2", "trunc": 2},
        )
        assert resp.status_code == 200
        assert resp.json()["content"] == "1 + X1X2 - X2X1\n"

    def test_empty_word(self, client):
        resp = client.post(
            "/expand", json={"g": 0, "n": 3, "word": "", "trunc": 3}
        )
        assert resp.json()["content"] == "1\n"

    def test_parse_error_with_caret(self, client):
        resp = client.post(
            "/expand", json={"g": 0, "n": 3, "word": "x3", "trunc": 2}
        )
        assert resp.status_code == 400
        assert "^" in resp.json()["detail"]


class TestCompose:
    M1 = {"g": 0, "n": 3, "level": 2, "mu": ["x2", ""]}
    M2 = {"g": 0, "n": 3, "level": 2, "mu": ["", "x1"]}

    def test_pair(self, client):
        resp = client.post("/compose", json={"models": [self.M1, self.M2]})
        assert resp.status_code == 200
        data = resp.json()
        assert data["model"]["mu"] == ["x2", "x1"]
        assert data["framing"] == [0, 0]

    def test_single_model_passthrough(self, client):
        resp = client.post("/compose", json={"models": [self.M1]})
        assert resp.json()["model"]["mu"] == ["x2", ""]

    def test_level_mismatch(self, client):
        other = dict(self.M2, level=3)
        resp = client.post("/compose", json={"models": [self.M1, other]})
        assert resp.status_code == 400

    def test_gate_rejection_is_409(self, client):
        bad = {"g": 0, "n": 3, "level": 3, "mu": ["x2", ""]}
        resp = client.post("/compose", json={"models": [bad]})
        assert resp.status_code == 409

    def test_malformed_word_is_400(self, client):
        bad = {"g": 0, "n": 3, "level": 2, "mu": ["m1", ""]}
        resp = client.post("/compose", json={"models": [bad]})
        assert resp.status_code == 400

    def test_empty_list_is_422(self, client):
        resp = client.post("/compose", json={"models": []})
        assert resp.status_code == 422


class TestVerify:
    def test_pass_suite(self, client):
        resp = client.post(
            "/verify", json={"suite": "witt", "rmax": 3, "kmax": 5}
        )
        assert resp.status_code == 200
        data = resp.json()
        assert data["ok"] is True
        assert data["report"].rstrip().endswith("cases)")
        assert data["failures"] == []

    def test_unknown_suite(self, client):
        resp = client.post("/verify", json={"suite": "bogus"})
        assert resp.status_code == 400

    def test_deterministic_report(self, client):
        payload = {"suite": "autstar-h", "trials": 10, "seed": 0}
        a = client.post("/verify", json=payload).json()
        b = client.post("/verify", json=payload).json()
        assert a["report"] == b["report"]

    def test_seed_changes_cases_not_format(self, client):
        a = client.post(
            "/verify", json={"suite": "split-f", "trials": 5, "seed": 0}
        ).json()
        b = client.post(
            "/verify", json={"suite": "split-f", "trials": 5, "seed": 1}
        ).json()
        assert a["ok"] and b["ok"]
        assert len(a["report"].splitlines()) == len(b["report"].splitlines())
