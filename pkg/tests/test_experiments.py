import numpy as np
import pytest

from algset.experiments import loglog_slope, rep_seed, run_study, simulate, worker_count
from algset.moments import NoiseModel
from algset.synth import circle


def test_rep_seeds_differ_across_base_seeds():
    a = {tuple(rep_seed(0, r)) for r in range(20)}
    b = {tuple(rep_seed(1, r)) for r in range(20)}
    assert not a & b
    x0 = simulate(circle(), 50, NoiseModel.from_sigma(0.4), rep_seed(0, 1))[1]
    x1 = simulate(circle(), 50, NoiseModel.from_sigma(0.4), rep_seed(1, 0))[1]
    assert not np.array_equal(x0, x1)


def test_loglog_slope():
    ns = np.array([100, 200, 400, 800])
    out = loglog_slope(ns, 3.0 * ns ** -0.5)
    assert out["value"] == pytest.approx(-0.5)
    assert out["stderr"] == pytest.approx(0.0, abs=1e-12)


def test_rate_study_fields():
    r = run_study("rate", "circle", 0.4, [200, 400], 2, seed=1, workers=1)
    assert len(r["rows"]) == 4
    assert {"distance", "lambda1", "lambda2", "k_hat"} <= set(r["rows"][0])
    assert r["slope"]["of"] == "mean_distance"


def test_dichotomy_study():
    r = run_study("dichotomy", "circle", 0.4, [500, 8000], 4, seed=0, workers=1)
    small, large = r["summary"]
    assert large["median_abs_lambda1"] < small["median_abs_lambda1"]
    assert abs(large["median_lambda2"] / small["median_lambda2"] - 1) < 0.25
    assert large["median_naive_lambda1"] > 0.1


def test_tube_study():
    r = run_study("tube-rate", "cross", 0.4, [300], 1, seed=0, workers=1)
    assert r["summary"][0]["median_hausdorff"] > 0


def test_parallel_matches_serial():
    a = run_study("rate", "cross", 0.4, [200, 300], 2, seed=5, workers=1)
    b = run_study("rate", "cross", 0.4, [200, 300], 2, seed=5, workers=2)
    assert a == b


def test_worker_cap(monkeypatch):
    monkeypatch.setenv("ALGSET_THREADS", "1")
    assert worker_count() == 1


def test_rejects_unknown_study():
    with pytest.raises(ValueError):
        run_study("nope", "circle", 0.4, [100], 1)
