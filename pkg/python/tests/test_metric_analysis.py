"""Tests for hyperbolic, internal and distortion measurements."""

import numpy as np
import pytest

from loewnerlab.core_model import DomainSpec, Driving, HullCurve
from loewnerlab.curves import vertical_ray
from loewnerlab.exceptions import InvalidArgumentError, InvalidCurveError
from loewnerlab.forward_solver import ForwardSolver
from loewnerlab.metric_analysis import MetricAnalysis, h_geodesic_points, rho_h


@pytest.fixture(scope="module")
def metric():
    return MetricAnalysis()


@pytest.fixture(scope="module")
def slit_spec():
    return DomainSpec(HullCurve(np.array([0.0, 1j])))


class TestHyperbolic:
    def test_rho_closed_form(self):
        assert rho_h(1j, np.e * 1j) == pytest.approx(1.0)
        assert rho_h(1j, 1 + 1j) == pytest.approx(np.arccosh(1.5))
        assert rho_h(2 + 3j, 2 + 3j) == 0.0

    def test_pullback_on_slit(self, metric, zero_evolution):
        # g_1(z) = √(z² + 4) for the slit [0, 2i]
        z0, z1 = 1 + 1j, 2 + 3j
        w0, w1 = np.sqrt(z0 ** 2 + 4), np.sqrt(z1 ** 2 + 4)
        expected = rho_h(w0, w1)
        assert metric.hyperbolic_distance(zero_evolution, 1.0, z0, z1) == pytest.approx(expected)

    def test_dist_to_geodesic_in_half_plane(self, metric, rng):
        z = rng.uniform(-3, 3, 1000) + 1j * rng.uniform(0.01, 3, 1000)
        d = metric.dist_to_geodesic(None, 0.0, z)
        np.testing.assert_allclose(d, np.arcsinh(np.abs(z.real) / z.imag), rtol=1e-9, atol=1e-12)

    def test_geodesic_points_are_evenly_spaced(self):
        pts = h_geodesic_points(1j, 2 + 1j, 9)
        steps = rho_h(pts[:-1], pts[1:])
        np.testing.assert_allclose(steps, steps[0], rtol=1e-8)
        assert steps.sum() == pytest.approx(float(rho_h(1j, 2 + 1j)), rel=1e-8)


def test_delta_omega(metric, slit_spec):
    assert metric.delta_omega(slit_spec, 0.5 + 0.5j) == pytest.approx(0.5)
    assert metric.delta_omega(slit_spec, 3j) == pytest.approx(2.0)
    np.testing.assert_allclose(metric.delta_omega(DomainSpec(None), np.array([1j, 2 + 3j])),
                               [1.0, 3.0])
    with pytest.raises(InvalidArgumentError):
        metric.delta_omega(slit_spec, 1 - 1j)


class TestInternalDistance:
    def test_half_plane_is_euclidean(self, metric):
        d = metric.internal_distance(DomainSpec(None), 0.5 + 0.5j, -0.5 + 0.5j)
        assert d == pytest.approx(1.0)

    def test_around_the_slit_tip(self, metric, slit_spec):
        d = metric.internal_distance(slit_spec, -0.1 + 0.5j, 0.1 + 0.5j, resolution=5e-3)
        assert 0.50 <= d <= 0.55

    def test_points_in_the_hull(self, metric, slit_spec):
        with pytest.raises(InvalidArgumentError):
            metric.internal_distance(slit_spec, 0.5j, 1 + 1j)

    def test_internal_diameter(self, metric, slit_spec):
        assert metric.internal_diameter(slit_spec, [1 + 1j]) == 0.0
        S = [-0.1 + 0.5j, 0.1 + 0.5j, 0.1 + 0.2j]
        assert metric.internal_diameter(slit_spec, S, 5e-3) >= 0.5


class TestJohn:
    def test_vertical_ray_in_half_plane(self, metric):
        verdict = metric.john_verify(DomainSpec(None), vertical_ray(0.3 + 0.01j, 10.0), 1.0)
        assert verdict.L_min == 1.0
        assert verdict.passed

    def test_scale_invariance(self, metric, slit_spec):
        alpha = vertical_ray(0.5 + 0.1j, 3.0, 100)
        small = metric.john_verify(slit_spec, alpha, 10.0)
        big = metric.john_verify(DomainSpec(HullCurve(np.array([0.0, 2j]))), 2.0 * alpha, 10.0)
        assert big.L_min == pytest.approx(small.L_min, rel=1e-9)
        assert small.L_min > 1.0

    def test_curve_crossing_the_hull(self, metric, slit_spec):
        with pytest.raises(InvalidCurveError):
            metric.john_verify(slit_spec, np.array([-0.5 + 0.5j, 0.5 + 0.5j]), 10.0)

    def test_johncone_on_vertical_ray(self, metric):
        alpha = vertical_ray(0.01j, 5.0, 50)
        assert metric.johncone_check(None, 0.0, alpha, 0.5, 0.0)
        assert not metric.johncone_check(None, 0.0, alpha, 2.0, 0.0)
        with pytest.raises(InvalidArgumentError):
            metric.johncone_check(None, 0.0, alpha, 0.0, 0.0)


class TestHolder:
    def test_identity_map(self, metric):
        est = metric.holder_exponent(None, 0.0, per_height_samples=101)
        assert est.beta_hat == pytest.approx(1.0)
        assert est.c1_hat == pytest.approx(1.0, rel=1e-6)
        assert not est.flagged
        assert list(est.table.columns) == ["height", "max_derivative"]

    def test_needs_two_heights(self, metric):
        with pytest.raises(InvalidArgumentError):
            metric.holder_exponent(None, 0.0, heights=[0.1])

    @pytest.mark.slow
    @pytest.mark.parametrize("h", [0.5, 1.0, 2.0])
    def test_vertical_slit_exponent(self, metric, h):
        e = ForwardSolver().solve_forward(Driving.constant(0.0, h ** 2 / 4.0, 1001))
        est = metric.holder_exponent(e, e.T)
        assert 0.45 <= est.beta_hat <= 0.55


class TestDistortion:
    @pytest.fixture(scope="class")
    def report(self, zero_evolution):
        return MetricAnalysis().distortion_suite(zero_evolution, 1.0, samples=200, seed=1)

    def test_columns(self, report):
        assert list(report.columns) == ["check", "passed", "margin", "params"]

    @pytest.mark.parametrize("check", ["displacement", "far_field_derivative",
                                       "mu_total_mass", "hcap_le_4rad2",
                                       "hull_in_support_ball", "support_in_rad_ball"])
    def test_checks_pass_on_slit(self, report, check):
        row = report.set_index("check").loc[check]
        assert row["passed"], row["params"]

    def test_mu_mass_is_hcap(self, metric, zero_evolution):
        support = metric.measure_support(zero_evolution, 1.0)
        assert support[0] == pytest.approx(-2.0, abs=1e-2)
        assert support[1] == pytest.approx(2.0, abs=1e-2)
        assert metric.mu_mass(zero_evolution, 1.0, support) == pytest.approx(2.0, rel=1e-2)

    def test_needs_nonempty_hull(self, metric, zero_evolution):
        with pytest.raises(InvalidArgumentError):
            metric.distortion_suite(zero_evolution, 0.0)


class TestGrowth:
    def test_growth_check_on_slit(self, metric, unit_slit_evolution):
        result = metric.hyp_growth_check(unit_slit_evolution, 0.25, samples=40, seed=3)
        assert result["n_samples"] > 0
        assert np.isfinite(result["fitted_C"])

    def test_hypext_on_slit(self, metric, unit_slit_evolution):
        result = metric.hypext_check(unit_slit_evolution, 0.25, None, 0.3 + 0.5j)
        assert result["n_samples"] == 64
        assert np.isfinite(result["worst"])


class TestQuasiHyperbolic:
    def test_half_plane_metrics_agree(self, metric):
        table = metric.compare_quasi_hyperbolic(None, 0.0, [(1j, np.e * 1j), (1j, 1 + 1j)],
                                                resolution=2.0 ** -5)
        assert list(table.columns) == ["z0", "z1", "rho", "k", "ratio"]
        assert (table["ratio"] >= 1.0 - 1e-6).all()
        assert (table["ratio"] <= 1.1).all()

    def test_half_plane_random_pairs(self, metric, rng):
        # k_H = ρ_H and every graph estimate bounds it from above
        z = rng.uniform(-1.0, 1.0, (100, 2)) + 1j * rng.uniform(0.2, 2.0, (100, 2))
        table = metric.compare_quasi_hyperbolic(None, 0.0, list(map(tuple, z)),
                                                resolution=2.0 ** -4)
        assert len(table) == 100
        assert (table["ratio"] >= 1.0 - 1e-9).all()
        assert table["ratio"].median() <= 1.1
        assert (table["ratio"] <= 1.2).all()

    def test_slit_domain_sandwich(self, metric, zero_evolution):
        pairs = [(1 + 1j, -1 + 1j), (0.5 + 3j, 2 + 0.5j)]
        table = metric.compare_quasi_hyperbolic(zero_evolution, 1.0, pairs, resolution=2.0 ** -5)
        assert (table["ratio"] >= 0.5).all()
        assert (table["ratio"] <= 2.2).all()

    @pytest.mark.slow
    def test_slit_domain_sandwich_random_pairs(self, metric, zero_evolution, rng):
        x = rng.choice([-1.0, 1.0], (100, 2)) * rng.uniform(0.1, 2.0, (100, 2))
        z = x + 1j * rng.uniform(0.1, 3.0, (100, 2))
        table = metric.compare_quasi_hyperbolic(zero_evolution, 1.0, list(map(tuple, z)),
                                                resolution=2.0 ** -5)
        assert (table["ratio"] >= 0.5).all()
        assert (table["ratio"] <= 2.2).all()
