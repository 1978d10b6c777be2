import math

import pytest
from fastapi.testclient import TestClient

from indsum.service.app import app
from indsum.service import runners
from indsum.service import schemas as sc

client = TestClient(app)


class TestHealth:
    def test_health(self):
        r = client.get("/health")
        assert r.status_code == 200
        assert r.json()["status"] == "ok"


class TestStatsEndpoint:
    def test_ginibre_row(self):
        r = client.post("/stats", json={"model": {"model": "ginibre"}, "times": [1.0]})
        assert r.status_code == 200
        body = r.json()
        assert body["schema_version"] == "1"
        row = body["rows"][0]
        assert row["closed_form_variance"] == pytest.approx(0.5237776118026086, rel=1e-10)
        assert row["variance"] == pytest.approx(row["closed_form_variance"], abs=1e-8)

    def test_karlin_constants(self):
        r = client.post(
            "/stats",
            json={
                "model": {"model": "karlin", "variant": "powerlaw", "alpha": 0.5, "j": 1},
                "constants": True,
            },
        )
        assert r.status_code == 200
        cs = r.json()["constants"]
        assert cs["var_constant"] == pytest.approx(
            math.sqrt(math.pi) * (math.sqrt(2.0) - 1.0), rel=1e-12
        )
        assert cs["normalization"] == "loglog"

    def test_rho_spec_text_form(self):
        r = client.post(
            "/stats",
            json={"model": {"model": "karlin", "rho_spec": "powerlaw alpha=0.3"}, "times": [10.0]},
        )
        assert r.status_code == 200

    def test_config_error_is_422(self):
        r = client.post("/stats", json={"model": {"model": "karlin"}, "times": [1.0]})
        assert r.status_code == 422

    def test_numerical_error_is_409(self):
        r = client.post(
            "/stats",
            json={
                "model": {"model": "karlin", "variant": "powerlaw", "alpha": 0.5},
                "times": [1e6],
                "accuracy": {"abs_tol": 1e-18, "max_terms": 100},
            },
        )
        assert r.status_code == 409
        assert r.json()["error"] == "numerical"


class TestValidateEndpoint:
    def test_clt_report_fields(self):
        r = client.post(
            "/validate",
            json={
                "suite": "clt",
                "model": {"model": "ginibre"},
                "t": 2000.0,
                "n_samples": 20000,
                "seed": 7,
            },
        )
        assert r.status_code == 200
        body = r.json()
        assert body["all_passed"] is True
        rep = body["reports"][0]
        assert set(rep) == {
            "statistic",
            "model",
            "t",
            "n_samples",
            "estimate",
            "target",
            "stderr",
            "tolerance",
            "verdict",
        }

    def test_expmoment_multiple_thetas(self):
        req = sc.ValidateRequest(
            suite="expmoment",
            model=sc.ModelSpec(model="ginibre"),
            t=50_000.0,
            n_samples=100_000,
            seed=3,
            thetas=[0.0, 0.5],
        )
        resp = runners.run_validate(req)
        assert len(resp.reports) == 2
        assert resp.reports[0].estimate == 1.0


class TestLilTraceEndpoint:
    def test_sidecar_constants(self):
        r = client.post(
            "/lil-trace",
            json={"model": {"model": "ginibre"}, "gamma": 0.1, "n_max": 10, "seed": 2},
        )
        assert r.status_code == 200
        body = r.json()
        assert body["lil_constant"] == pytest.approx(math.pi**-0.25, rel=1e-12)
        assert body["normalized_constant"] == 1.0
        assert body["regime"] == "log"
        cols = set(body["rows"][0])
        assert cols == {"n", "tau_n", "value", "running_max"}

    def test_karlin_upper_bound_flag(self):
        r = client.post(
            "/lil-trace",
            json={
                "model": {"model": "karlin", "variant": "borderline", "log_exponent": 2.0, "j": 1},
                "gamma": 0.3,
                "n_max": 3,
                "seed": 2,
                "eps": 0.5,
            },
        )
        assert r.status_code == 200
        body = r.json()
        assert body["lil_constant"] == pytest.approx(math.sqrt(2.0), rel=1e-12)
        assert any("upper bound" in f for f in body["lil_constant_flags"])

    def test_dehaan_constant(self):
        r = client.post(
            "/lil-trace",
            json={
                "model": {"model": "karlin", "variant": "dehaan-poly", "beta": 2.0, "j": 1},
                "gamma": 0.1,
                "n_max": 6,
                "seed": 5,
            },
        )
        body = r.json()
        assert body["lil_constant"] == pytest.approx(1.0, rel=1e-12)  # sqrt(2/beta)
        assert body["regime"] == "log"
