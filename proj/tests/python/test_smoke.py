import math

import numpy as np
import pytest

import eav


def test_estimate_on_pareto_sample():
    xs = eav.sample("pareto:2", 10000, seed=1)
    out = eav.estimate(xs)
    assert abs(out["gamma_hat"] - 0.5) < 0.1
    assert out["k_hat"] in eav.grid("geometric:1.1", 10000)
    assert out["k_hat"] >= out["k0"]
    assert out["n"] == out["n_positive"] == 10000
    assert "trace" not in out
    traced = eav.estimate(xs, mode="exact", trace=True)
    assert all(not row["stop"] for row in traced["trace"] if row["k"] <= traced["k_hat"])
    assert eav.estimate(xs) == out


def test_estimate_accepts_lists_and_drops_non_positive():
    xs = list(eav.sample("frechet:1:0", 2000, seed=3)) + [-1.0, 0.0]
    out = eav.estimate(xs)
    assert out["n"] == 2002
    assert out["n_positive"] == 2000


def test_errors_map_to_python_exceptions():
    with pytest.raises(eav.NoAdmissibleCandidate):
        eav.estimate([3.0, 2.0, 1.0])
    with pytest.raises(ValueError):
        eav.estimate(eav.sample("pareto:2", 100), delta=1.5)
    with pytest.raises(ValueError):
        eav.sample("cauchy:1", 10)
    with pytest.raises(ValueError):
        eav.adaptive_error_bound(1.0, 1.0 / 6.0)


def test_hill_matches_direct_sum():
    xs = np.sort(eav.sample("pareto:2", 500, seed=4))[::-1]
    for k in (1, 10, 499):
        direct = np.mean(np.log(xs[:k] / xs[k]))
        assert eav.hill(xs, k) == pytest.approx(direct, rel=1e-12)
    sweep = eav.hill_sweep(xs, "explicit:1,10,499")
    assert [k for k, _ in sweep] == [1, 10, 499]


def test_quantiles():
    q = eav.exact_quantile(1, 0.9)
    assert q == pytest.approx(math.asinh(math.e * 0.55 / 2.0), rel=1e-9)
    assert eav.abs_gamma_cdf(50, eav.exact_quantile(50, 0.1)) >= 0.95
    assert abs(eav.mc_quantile(1, 0.9, draws=200000, seed=7) - q) < 0.01
    assert eav.exact_quantile(100, 0.2) <= eav.v_tilde(100, 0.1)
    assert eav.r_bound(3.0, 1.0 / math.e) == pytest.approx(2.0)


def test_sampling_is_seeded():
    a = eav.sample("stable:1.5", 1000, seed=5)
    b = eav.sample("stable:1.5", 1000, seed=5)
    assert isinstance(a, np.ndarray)
    assert np.array_equal(a, b)
    assert np.all(eav.sample("frechet:1:10", 5) >= 10.0)
    assert eav.true_gamma("stable:1.5") == pytest.approx(2.0 / 3.0)


def test_simulate_small():
    out = eav.simulate("pareto:2", n=1000, reps=8, jobs=2)
    assert out["N"] == 8
    assert len(out["k_hat"]) == 8
    assert out["k_min"] <= out["k_mean"] <= out["k_max"]
    d = np.array(out["gamma_hat"]) / 0.5 - 1.0
    assert out["mse"] == pytest.approx(np.mean(d**2), rel=1e-12)
    assert eav.simulate("pareto:2", n=1000, reps=8, jobs=1) == out


def test_rmse_curve_and_bounds():
    curve = eav.rmse_curve("pareto:2", n=1000, reps=20)
    assert curve[0][0] == 1
    assert all(r > 0 for _, r in curve)
    b = eav.bounds()
    assert b["grid_nominal_size"] == 96
    assert b["C2"] > 0
    assert eav.adaptive_error_bound(2.0, 0.0) == 0.0
