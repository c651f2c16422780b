"""Witness construction tests: cone order, heavy interval, certified bound."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm

from pdsq import (AnalysisError, PhaseNoise, SqueezingParams, StateModel,
                  analytic_cf, quadrature_variance)
from pdsq.witness import (BoundVerification, TabulatedDensity,
                          WitnessCertificate, certify, cone_order,
                          heavy_interval, interval_mass, verify_bound)

from conftest import CATALOG_PARAMS, catalog_models


class TestConeOrder:
    def test_catalog_state(self):
        assert cone_order(CATALOG_PARAMS) == 5

    def test_weakly_squeezed_state(self):
        assert cone_order(SqueezingParams(0.99, 1.02)) == 3

    def test_vacuum_rejected(self):
        with pytest.raises(AnalysisError, match="not squeezed"):
            cone_order(SqueezingParams(1.0, 1.0))

    def test_thermal_like_rejected(self):
        with pytest.raises(AnalysisError, match="not squeezed"):
            cone_order(SqueezingParams(1.5, 2.0))

    def test_cone_fits_strictly(self):
        for vx in (0.1, 0.36, 0.7, 0.95):
            params = SqueezingParams(vx, 1.1 / vx)
            n = cone_order(params)
            half = math.pi / (2.0 * n)
            assert quadrature_variance(params, half) < 1.0
            # minimality: one step coarser pokes out of the cone
            if n > 1:
                assert quadrature_variance(params, math.pi / (2.0 * (n - 1))) >= 1.0


class TestIntervalMass:
    def test_delta_inside_and_outside(self):
        noise = PhaseNoise.delta()
        assert interval_mass(noise, 0.0, 0.3) == 1.0
        assert interval_mass(noise, 1.0, 0.3) == 0.0
        # periodicity: a center one half-turn away still contains the mass
        assert interval_mass(noise, math.pi, 0.3) == 1.0

    def test_uniform_is_proportional(self):
        noise = PhaseNoise.uniform()
        assert interval_mass(noise, 0.7, math.pi / 10) == pytest.approx(0.2, rel=1e-14)
        assert interval_mass(noise, -1.0, math.pi / 4) == pytest.approx(0.5, rel=1e-14)

    def test_gaussian_matches_direct_cdf(self):
        noise = PhaseNoise.gaussian(22.2, "deg")
        s = noise.sigma
        center, hw = 0.2, 0.3
        direct = sum(
            norm.cdf(center + hw + k * math.pi, scale=s)
            - norm.cdf(center - hw + k * math.pi, scale=s)
            for k in range(-6, 7)
        )
        assert interval_mass(noise, center, hw) == pytest.approx(direct, rel=1e-12)

    def test_full_period_saturates(self):
        for noise in (PhaseNoise.delta(), PhaseNoise.uniform(),
                      PhaseNoise.gaussian(12.6, "deg")):
            assert interval_mass(noise, 0.3, math.pi / 2) == pytest.approx(1.0, rel=1e-12)

    def test_monotone_in_halfwidth(self):
        # shrinking the domain never increases the integral
        noise = PhaseNoise.gaussian(6.3, "deg")
        widths = np.linspace(0.0, math.pi / 2, 25)
        masses = [interval_mass(noise, 0.1, w) for w in widths]
        assert all(a <= b + 1e-15 for a, b in zip(masses, masses[1:]))

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError, match="nonnegative"):
            interval_mass(PhaseNoise.delta(), 0.0, -0.1)
        with pytest.raises(TypeError, match="PhaseNoise"):
            interval_mass("flat", 0.0, 0.1)


class TestTabulatedDensity:
    def test_normalizes_on_construction(self):
        d = TabulatedDensity(np.array([3.0, 1.0]))
        assert d.interval_mass(0.0, math.pi / 2) == pytest.approx(1.0, rel=1e-14)

    def test_uniform_table_matches_uniform_noise(self):
        d = TabulatedDensity(np.ones(11))
        assert d.interval_mass(0.4, math.pi / 10) == pytest.approx(0.2, rel=1e-12)

    def test_wrapping_interval(self):
        # mass concentrated in the first bin; interval wraps the period edge
        d = TabulatedDensity(np.array([1.0, 0.0, 0.0, 0.0]))
        hit = d.interval_mass(-3.0 * math.pi / 8, math.pi / 8)
        assert hit == pytest.approx(1.0, rel=1e-12)
        wrapped = d.interval_mass(math.pi / 2 - 1e-9, math.pi / 8)
        assert wrapped == pytest.approx(0.5, rel=1e-6)

    def test_rejects_bad_heights(self):
        with pytest.raises(ValueError, match="nonnegative"):
            TabulatedDensity(np.array([1.0, -1.0]))
        with pytest.raises(ValueError, match="positive total"):
            TabulatedDensity(np.zeros(3))


class TestHeavyInterval:
    def test_delta_centers_on_the_mass(self):
        phi0, mass = heavy_interval(PhaseNoise.delta(), 5)
        assert phi0 == 0.0
        assert mass == 1.0

    def test_uniform_mass_is_exactly_one_over_n(self):
        for n in (1, 2, 5, 9):
            _, mass = heavy_interval(PhaseNoise.uniform(), n)
            assert mass == pytest.approx(1.0 / n, rel=1e-14)

    def test_gaussian_centers_at_mode(self):
        phi0, mass = heavy_interval(PhaseNoise.gaussian(22.2, "deg"), 5)
        assert abs(phi0) < 1e-6
        assert mass > 0.2

    def test_offcenter_tabulated_density(self):
        # spike in one bin far from zero: scan must chase it
        heights = np.zeros(20)
        heights[15] = 1.0
        d = TabulatedDensity(heights)
        phi0, mass = heavy_interval(d, 8)
        spike_lo = -math.pi / 2 + 15 * math.pi / 20
        spike_hi = spike_lo + math.pi / 20
        assert mass > 0.6
        assert spike_lo - math.pi / 16 < phi0 < spike_hi + math.pi / 16

    def test_pigeonhole_on_randomized_densities(self, rng):
        # Eq.-style universal guarantee: some interval always has mass >= 1/n
        for _ in range(100):
            bins = int(rng.integers(1, 40))
            d = TabulatedDensity(rng.random(bins) ** 3)
            for n in range(1, 11):
                _, mass = heavy_interval(d, n)
                assert mass >= 1.0 / n - 1e-9

    def test_validation(self):
        with pytest.raises(ValueError, match="at least 1"):
            heavy_interval(PhaseNoise.delta(), 0)
        with pytest.raises(TypeError, match="integer"):
            heavy_interval(PhaseNoise.delta(), 2.5)


class TestCertify:
    def test_catalog_certificates(self):
        for label, model in catalog_models():
            cert = certify(model)
            assert cert.n == 5
            assert cert.eps == pytest.approx(0.17018180616237077, rel=1e-12)
            assert cert.mass >= 0.2 - 1e-12
            assert abs(cert.phi0) < 1e-6

    def test_delta_mass_is_unity(self):
        cert = certify(StateModel(CATALOG_PARAMS, PhaseNoise.delta()))
        assert cert.mass == 1.0
        assert cert.phi0 == 0.0

    def test_eps_is_worst_case_over_cone(self):
        cert = certify(StateModel(CATALOG_PARAMS, PhaseNoise.delta()))
        half = math.pi / (2.0 * cert.n)
        for phi in np.linspace(0.0, half, 50):
            assert cert.eps <= 1.0 - quadrature_variance(CATALOG_PARAMS, phi) + 1e-15

    def test_higher_order_trades_mass_for_margin(self):
        model = StateModel(CATALOG_PARAMS, PhaseNoise.uniform())
        base = certify(model)
        finer = certify(model, order=base.n + 1)
        assert finer.eps > base.eps
        assert finer.mass < base.mass

    def test_order_below_cone_rejected(self):
        model = StateModel(CATALOG_PARAMS, PhaseNoise.delta())
        with pytest.raises(ValueError, match="cone order"):
            certify(model, order=4)

    def test_unsqueezed_model_rejected(self):
        model = StateModel(SqueezingParams(1.0, 2.0), PhaseNoise.delta())
        with pytest.raises(AnalysisError, match="not squeezed"):
            certify(model)

    def test_certificate_invariants_enforced(self):
        with pytest.raises(ValueError, match="eps"):
            WitnessCertificate(n=5, phi0=0.0, eps=0.0, mass=0.5)
        with pytest.raises(ValueError, match="1/n"):
            WitnessCertificate(n=5, phi0=0.0, eps=0.1, mass=0.1)
        with pytest.raises(ValueError, match="exceed"):
            WitnessCertificate(n=5, phi0=0.0, eps=0.1, mass=1.5)


class TestVerifyBound:
    def test_delta_example_values(self):
        model = StateModel(CATALOG_PARAMS, PhaseNoise.delta())
        cert = certify(model)
        ver = verify_bound(model, cert, np.array([0.0, 2.0]))
        assert ver.values[1] == pytest.approx(math.exp(1.28), rel=1e-9)
        assert ver.mass_bounds[1] == pytest.approx(math.exp(0.3404), rel=1e-3)
        # delta noise has mass 1: at beta=0 the bound touches Phi(0) exactly
        assert ver.min_margin() == 0.0
        assert ver.margins[1] > 0.0

    def test_uniform_example_value(self):
        model = StateModel(CATALOG_PARAMS, PhaseNoise.uniform())
        cert = certify(model)
        ver = verify_bound(model, cert, np.array([3.0]))
        assert ver.order_bounds[0] == pytest.approx(0.430, abs=5e-4)
        assert ver.values[0] > ver.mass_bounds[0] > ver.order_bounds[0]

    def test_origin_bound_is_mass(self):
        model = StateModel(CATALOG_PARAMS, PhaseNoise.gaussian(12.6, "deg"))
        cert = certify(model)
        ver = verify_bound(model, cert, np.array([0.0]))
        assert ver.values[0] == 1.0
        assert ver.mass_bounds[0] == cert.mass <= 1.0

    def test_all_catalog_states_satisfy_bound(self):
        betas = np.array([0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        for label, model in catalog_models():
            cert = certify(model)
            ver = verify_bound(model, cert, betas)
            assert ver.min_margin() > -1e-9
            # the certified growth is unbounded and the CF tracks it upward
            assert np.all(np.diff(ver.values[1:]) > 0.0)
            assert np.all(np.diff(ver.mass_bounds) > 0.0)

    def test_mismatched_certificate_rejected(self):
        model = StateModel(CATALOG_PARAMS, PhaseNoise.delta())
        other = StateModel(SqueezingParams(0.5, 2.1), PhaseNoise.delta())
        cert = certify(model)
        with pytest.raises(ValueError, match="does not match"):
            verify_bound(other, cert, np.array([1.0]))

    def test_beta_validation(self):
        model = StateModel(CATALOG_PARAMS, PhaseNoise.delta())
        cert = certify(model)
        with pytest.raises(ValueError, match="nonnegative"):
            verify_bound(model, cert, np.array([-1.0]))
        with pytest.raises(ValueError, match="nonempty"):
            verify_bound(model, cert, np.zeros(0))

    def test_record_serializes(self):
        model = StateModel(CATALOG_PARAMS, PhaseNoise.uniform())
        cert = certify(model)
        ver = verify_bound(model, cert, np.array([1.0, 2.0]))
        d = ver.to_dict()
        assert d["certificate"]["n"] == 5
        assert len(d["points"]) == 2
        assert d["points"][1]["margin"] > 0.0


class TestDomainRestriction:
    def test_cone_restricted_quadrature_never_exceeds_full(self):
        # the proof's key inequality on a nonnegative integrand
        model = StateModel(CATALOG_PARAMS, PhaseNoise.gaussian(22.2, "deg"))
        sigma = model.noise.sigma
        beta = 2.5

        def integrand(phi):
            v = quadrature_variance(model.params, phi)
            dens = sum(norm.pdf(phi + k * math.pi, scale=sigma) for k in range(-5, 6))
            return math.exp(0.5 * beta * beta * (1.0 - v)) * dens

        half = math.pi / 10.0
        restricted = quad(integrand, -half, half, limit=200)[0]
        full = quad(integrand, -math.pi / 2, math.pi / 2, limit=200)[0]
        assert restricted <= full
        assert full == pytest.approx(analytic_cf(model, beta).real, rel=1e-6)
        # and inside the cone the integrand is at least its edge value bound
        eps = 1.0 - quadrature_variance(model.params, half)
        mass = interval_mass(model.noise, 0.0, half)
        assert restricted >= math.exp(0.5 * eps * beta * beta) * mass - 1e-9
