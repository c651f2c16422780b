"""Characteristic-function estimator tests."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdsq import (CfCurve, PhaseNoise, StateModel, analytic_cf, cf_scan,
                  empirical_cf, sample_quadratures, significance)
from pdsq.cf import default_grid

from conftest import CATALOG_PARAMS


def _dataset(noise, n=100_000, seed=7, theta=0.0):
    return sample_quadratures(StateModel(CATALOG_PARAMS, noise), theta, n, seed)


class TestEmpiricalCf:
    def test_origin_is_exact(self):
        value, sigma = empirical_cf(np.array([0.3, -0.2, 1.0]), 0.0)
        assert value == 1.0 + 0.0j
        assert sigma == 0.0

    def test_matches_analytic_within_five_sigma(self):
        noise = PhaseNoise.gaussian(22.2, "deg")
        ds = _dataset(noise)
        truth = analytic_cf(StateModel(CATALOG_PARAMS, noise), 2.0)
        value, sigma = empirical_cf(ds, 2.0)
        assert sigma > 0.0
        assert abs(value - truth) < 5.0 * sigma

    def test_squeezed_state_exceeds_one(self):
        ds = _dataset(PhaseNoise.delta())
        value, sigma = empirical_cf(ds, 2.0)
        assert (abs(value) - 1.0) / sigma > 10.0

    def test_single_sample_sigma_zero_magnitude(self):
        # |mean phasor| = 1 for one sample: variance estimate clamps to 0
        value, sigma = empirical_cf(np.array([0.7]), 1.0)
        assert abs(value) == pytest.approx(math.exp(0.5), rel=1e-12)
        assert sigma == 0.0

    def test_rejects_large_or_bad_beta(self):
        x = np.zeros(4)
        with pytest.raises(ValueError, match="overflows"):
            empirical_cf(x, 27.0)
        with pytest.raises(ValueError, match="finite"):
            empirical_cf(x, math.nan)

    def test_rejects_empty_samples(self):
        with pytest.raises(ValueError, match="nonempty"):
            empirical_cf(np.zeros(0), 1.0)

    @given(beta=st.floats(0.01, 8.0), seed=st.integers(0, 2**16))
    @settings(max_examples=25, deadline=None)
    def test_hermitian_symmetry(self, beta, seed):
        x = np.random.default_rng(seed).normal(size=257)
        plus, s_plus = empirical_cf(x, beta)
        minus, s_minus = empirical_cf(x, -beta)
        assert minus == plus.conjugate()
        assert s_minus == s_plus


class TestCfScan:
    def test_default_grid(self):
        grid = default_grid()
        assert grid.size == 200
        assert grid[0] == 0.0
        assert grid[-1] == 4.0
        curve = cf_scan(np.array([0.1, -0.4, 0.9]))
        assert np.array_equal(curve.betas, grid)

    def test_workers_do_not_change_values(self):
        ds = _dataset(PhaseNoise.uniform(), n=20_000)
        grid = np.linspace(0.0, 3.0, 11)
        a = cf_scan(ds, grid, workers=1)
        b = cf_scan(ds, grid, workers=4)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.sigmas, b.sigmas)

    def test_records_sample_count(self):
        curve = cf_scan(np.ones(321), np.array([0.0, 1.0]))
        assert curve.n == 321

    def test_grid_validation(self):
        x = np.zeros(8)
        with pytest.raises(ValueError, match="nonempty"):
            cf_scan(x, np.zeros(0))
        with pytest.raises(ValueError, match="increasing"):
            cf_scan(x, np.array([0.0, 1.0, 1.0]))
        with pytest.raises(ValueError, match="nonnegative"):
            cf_scan(x, np.array([-1.0, 1.0]))
        with pytest.raises(ValueError, match="finite"):
            cf_scan(x, np.array([0.0, np.inf]))

    def test_curve_arrays_read_only(self):
        curve = cf_scan(np.ones(16), np.array([0.0, 0.5]))
        with pytest.raises(ValueError):
            curve.values[0] = 0.0


class TestSignificance:
    def test_detects_squeezed_delta(self):
        curve = cf_scan(_dataset(PhaseNoise.delta()), np.linspace(0.0, 3.0, 31))
        rep = significance(curve, threshold=10.0)
        assert rep.detected
        assert rep.s_star > 10.0
        assert 0.0 < rep.beta_star <= 3.0

    def test_vacuum_like_data_not_detected(self):
        x = np.random.default_rng(0).normal(size=50_000)
        rep = significance(cf_scan(x, np.linspace(0.0, 2.0, 21)), threshold=10.0)
        assert not rep.detected

    def test_origin_only_curve_has_no_evidence(self):
        curve = cf_scan(np.ones(10), np.array([0.0]))
        rep = significance(curve)
        assert rep.s_star == -math.inf
        assert not rep.detected

    def test_threshold_validation(self):
        curve = cf_scan(np.ones(10), np.array([0.0, 1.0]))
        with pytest.raises(ValueError, match="positive"):
            significance(curve, threshold=0.0)
        with pytest.raises(TypeError, match="CfCurve"):
            significance(np.zeros(3))

    def test_threshold_is_inclusive(self):
        curve = cf_scan(_dataset(PhaseNoise.delta(), n=20_000), np.array([0.0, 2.0]))
        rep = significance(curve, threshold=10.0)
        exact = significance(curve, threshold=rep.s_star)
        assert exact.detected


class TestCurveSerialization:
    def test_csv_round_trip(self, tmp_path):
        curve = cf_scan(_dataset(PhaseNoise.delta(), n=5000), np.linspace(0.0, 2.0, 5))
        path = tmp_path / "curve.csv"
        curve.write_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "beta,re,im,abs,sigma"
        assert len(lines) == 6
        beta, re, im, ab, sg = (float(v) for v in lines[-1].split(","))
        assert beta == 2.0
        assert ab == pytest.approx(math.hypot(re, im), rel=1e-15)
        assert sg >= 0.0

    def test_json_round_trip(self, tmp_path):
        curve = cf_scan(np.ones(64), np.array([0.0, 1.0]))
        path = tmp_path / "curve.json"
        curve.write_json(path)
        payload = json.loads(path.read_text())
        assert payload["n"] == 64
        assert len(payload["points"]) == 2
        assert payload["points"][0]["abs"] == 1.0

    def test_curve_validation(self):
        with pytest.raises(ValueError, match="match"):
            CfCurve(betas=np.array([0.0, 1.0]), values=np.array([1.0 + 0j]),
                    sigmas=np.array([0.0]), n=10)
        with pytest.raises(ValueError, match="nonnegative"):
            CfCurve(betas=np.array([1.0]), values=np.array([1.0 + 0j]),
                    sigmas=np.array([-0.1]), n=10)
