import numpy as np
import pytest
from fastapi.testclient import TestClient

from nmfbench.harness import run_experiment
from nmfbench.service.app import create_app
from nmfbench.service.schemas import ExperimentRequest


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def experiment_payload(**overrides):
    payload = {
        "dataset": {"kind": "synthetic", "n_subjects": 4, "per_subject": 5,
                    "height": 6, "width": 5, "noise_scale": 0.05, "seed": 0},
        "noise": {"kind": "salt_pepper", "fraction": 0.3, "salt_ratio": 0.5, "seed": 0},
        "solvers": ["l2", "l21"],
        "ks": [2, 3],
        "trials": 2,
        "max_iters": 20,
    }
    payload.update(overrides)
    return payload


class TestHealth:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json()["status"] == "ok"


class TestFactorize:
    def test_l2_shapes_and_nonnegativity(self, client):
        X = np.random.default_rng(0).random((6, 5)).tolist()
        resp = client.post("/factorize", json={"matrix": X, "k": 2, "solver": "l2",
                                               "max_iters": 30})
        assert resp.status_code == 200
        body = resp.json()
        W = np.array(body["basis"])
        H = np.array(body["coefficients"])
        assert W.shape == (6, 2) and H.shape == (2, 5)
        assert W.min() >= 0.0 and H.min() >= 0.0
        assert body["noise_estimate"] is None
        assert body["iterations_run"] == 30
        assert len(body["objective_history"]) == 31

    def test_l1_returns_noise_estimate(self, client):
        X = np.random.default_rng(1).random((5, 4)).tolist()
        resp = client.post("/factorize", json={"matrix": X, "k": 2, "solver": "l1",
                                               "lam": 0.1, "max_iters": 20})
        assert resp.status_code == 200
        E = np.array(resp.json()["noise_estimate"])
        assert E.shape == (5, 4)
        assert (np.array(X) - E).min() >= 0.0

    def test_objective_history_non_increasing(self, client):
        X = np.random.default_rng(2).random((8, 6)).tolist()
        resp = client.post("/factorize", json={"matrix": X, "k": 3, "solver": "l21",
                                               "max_iters": 40})
        h = resp.json()["objective_history"]
        assert all(b <= a + 1e-9 * h[0] for a, b in zip(h, h[1:]))

    def test_rank_too_large_is_400(self, client):
        resp = client.post("/factorize", json={"matrix": [[1.0, 2.0]], "k": 2})
        assert resp.status_code == 400

    def test_negative_entries_is_400(self, client):
        resp = client.post("/factorize", json={"matrix": [[1.0, -2.0]], "k": 1})
        assert resp.status_code == 400


class TestExperiments:
    def test_counts(self, client):
        resp = client.post("/experiments", json=experiment_payload())
        assert resp.status_code == 200
        body = resp.json()
        assert len(body["records"]) == 2 * 2 * 2
        assert len(body["summaries"]) == 2 * 2 * 3

    def test_matches_direct_run(self, client):
        payload = experiment_payload()
        resp = client.post("/experiments", json=payload)
        assert resp.status_code == 200
        direct = run_experiment(ExperimentRequest.model_validate(payload).to_config())
        got = resp.json()["records"]
        assert len(got) == len(direct.records)
        for record_json, record in zip(got, direct.records):
            assert record_json["solver"] == record.solver
            assert record_json["k"] == record.k
            assert record_json["rmse_clean"] == record.rmse_clean
            assert record_json["acc"] == record.acc
            assert record_json["nmi"] == record.nmi
            assert record_json["input_digest"] == record.input_digest

    def test_zero_k_rejected_as_validation_error(self, client):
        resp = client.post("/experiments", json=experiment_payload(ks=[0]))
        assert resp.status_code == 422

    def test_unknown_solver_rejected(self, client):
        resp = client.post("/experiments", json=experiment_payload(solvers=["l3"]))
        assert resp.status_code == 422

    def test_missing_dataset_directory_is_400(self, client):
        payload = experiment_payload(dataset={"kind": "directory",
                                              "path": "/nonexistent/dir", "reduce": 1})
        resp = client.post("/experiments", json=payload)
        assert resp.status_code == 400
