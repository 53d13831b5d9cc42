import json
import math

import numpy as np
import pytest

qg2l = pytest.importorskip("qg2l")


def test_version():
    assert qg2l.__version__ == "0.1.0"


def test_inversion_round_trip():
    lat = qg2l.Lattice(L=2 * math.pi, K=6)
    n = 2 * lat.K + 1
    rng = np.random.default_rng(7)
    q1 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q2 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    # hermitian + zero mean so the fields are real
    q1 = 0.5 * (q1 + np.conj(q1[::-1, ::-1]))
    q2 = 0.5 * (q2 + np.conj(q2[::-1, ::-1]))
    q1[lat.K, lat.K] = 0
    q2[lat.K, lat.K] = 0
    psi1, psi2 = qg2l.invert_pv(q1, q2, lat)
    r1, r2 = qg2l.pv_from_streamfunction(psi1, psi2, lat)
    assert np.max(np.abs(r1 - q1)) < 1e-12 * max(1.0, np.max(np.abs(q1)))
    assert np.max(np.abs(r2 - q2)) < 1e-12 * max(1.0, np.max(np.abs(q2)))


def test_growth_rate_positive_at_recipe():
    L = 2 * math.pi * (8 / 3) ** 0.25
    sigma = qg2l.growth_rate(1, 0, beta=0.1, kappa_T=1e-6, kappa_M=1e-6, nu=1e-6, L=L)
    assert sigma > 0.1

    scan = qg2l.instability_scan(beta=0.1, kappa_T=1e-6, kappa_M=1e-6, nu=1e-6, L=L, K=4)
    assert scan["sigma_star"] == pytest.approx(sigma, rel=1e-12)
    assert abs(scan["k_star"][0]) == 1 and scan["k_star"][1] == 0


def test_ledger_and_background():
    led = qg2l.constants_ledger(beta=0.0, kappa_T=1.0, kappa_M=1.0, nu=1.0, L=1.0)
    assert led["computable"]
    assert led["M"] == 33
    assert led["d"] >= 1

    bg = qg2l.build_background(L=1.0, m=3.0, nu=1.0)
    assert bg["M"] == 33
    assert bg["h1_sq"] == pytest.approx(2 * 33, rel=1e-14)


def test_short_run():
    cfg = {
        "model": {"beta": 0.1, "kappa_T": 0.01, "kappa_M": 0.01, "nu": 1e-4, "m": 3, "L": 6.847},
        "lattice": {"K": 8},
        "stepper": {"dt": 0.02, "t_end": 1.0, "diagnostics_interval": 0.2, "seed": 3},
    }
    out = qg2l.run(json.dumps(cfg))
    assert not out["blowup"]
    assert out["t"][-1] == pytest.approx(1.0, abs=1e-9)
    assert np.all(np.isfinite(out["W"]))
    assert out["q1"].shape == (17, 17)
