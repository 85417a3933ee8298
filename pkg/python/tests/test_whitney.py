"""Tests for standard and adaptive Whitney decompositions."""

import numpy as np
import pandas as pd
import pytest

from loewnerlab.core_model import DomainSpec, HullCurve
from loewnerlab.curves import half_disk, l_slit, vertical_slit
from loewnerlab.exceptions import InvalidArgumentError, ResolutionError
from loewnerlab.metric_analysis import rho_h
from loewnerlab.whitney import WhitneyGeometry, whitney_area


@pytest.fixture(scope="module")
def geometry():
    return WhitneyGeometry()


class TestStandardSquares:
    def test_area_of_unit_slit(self):
        # two squares per level j <= 0
        expected = 8.0 / 3.0 * (1.0 - 4.0 ** -21)
        assert whitney_area(HullCurve(np.array([0.0, 1j])), -20) == pytest.approx(expected)

    def test_empty_hull(self, geometry):
        assert geometry.whitney_area(None) == 0.0
        assert len(geometry.standard_squares_meeting(None)) == 0

    def test_area_scales_quadratically(self, geometry):
        K = l_slit(1.0, 0.5, 40)
        area = geometry.whitney_area(K, -12)
        assert geometry.whitney_area(K.scaled(2.0), -11) == pytest.approx(4.0 * area, rel=1e-12)

    def test_frame_uses_integer_indices(self, geometry):
        frame = geometry.standard_squares_meeting(vertical_slit(1.0, 2), -3).to_frame()
        assert list(frame.columns) == ["j", "k_or_cx", "cy", "side"]
        assert pd.api.types.is_integer_dtype(frame["k_or_cx"])
        assert sorted(frame.loc[frame["j"] == 0, "k_or_cx"]) == [-1, 0]

    def test_report_includes_tail(self, geometry):
        report = geometry.whitney_area_report(vertical_slit(1.0, 2), -10)
        assert report["j_min"] == -10
        assert report["tail"] == pytest.approx(2.0 * 4.0 ** -10 / 3.0)
        assert report["n_squares"] == 22

    def test_filled_hull_counts_interior(self, geometry):
        outline = geometry.whitney_area(half_disk(1.0, 256), -6)
        slit = geometry.whitney_area(vertical_slit(1.0, 2), -6)
        assert outline > slit + 1.0


class TestHcapEstimate:
    def test_slit_interval(self, geometry):
        est = geometry.hcap_estimate(vertical_slit(1.0, 2))
        assert est["low"] <= 0.5 <= est["high"]

    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_half_disk_interval(self, geometry, r):
        est = geometry.hcap_estimate(half_disk(r, 512))
        assert est["low"] <= r ** 2 <= est["high"]

    def test_calibration_constants(self, geometry):
        constants = geometry.calibration_constants()
        assert constants["c_lo"] > 0
        assert constants["c_hi"] >= 2.0 * 16.0 / 3.0


class TestAdaptiveWhitney:
    def test_half_plane_squares_satisfy_whitney_bounds(self, geometry):
        w = geometry.adaptive_whitney(DomainSpec(None), -6)
        diam = np.sqrt(2.0) * w.side
        assert np.all(w.y0 >= 0.5 * diam - 1e-12)
        assert np.all(w.y0 <= 4.0 * diam + 1e-12)
        assert w.levels.min() >= -6
        assert w.kind == "adaptive"

    def test_slit_domain_squares_avoid_hull(self, geometry):
        spec = DomainSpec(HullCurve(np.array([0.0, 1j])))
        w = geometry.adaptive_whitney(spec, -6)
        assert np.all(spec.delta(w.centers) >= 0.5 * w.side)
        assert not pd.api.types.is_integer_dtype(w.to_frame()["k_or_cx"])

    def test_jmin_above_root(self, geometry):
        with pytest.raises(InvalidArgumentError):
            geometry.adaptive_whitney(DomainSpec(None), 3)

    def test_chain_distance(self, geometry):
        w = geometry.adaptive_whitney(DomainSpec(None), -6)
        assert geometry.chain_distance(w, 0.25 + 0.75j, 0.3 + 0.7j) == 1
        assert geometry.chain_distance(w, 0.25 + 0.75j, -0.75 + 0.75j) == 3
        near = geometry.chain_distance(w, 0.25 + 0.75j, 0.25 + 0.02j)
        assert near > 3
        with pytest.raises(ResolutionError):
            geometry.chain_distance(w, 0.25 + 0.75j, 10.0 + 0.5j)


def test_quasi_hyperbolic_distance_on_vertical_line(geometry):
    # k_H(i, e·i) = ∫ dy/y = 1 along the imaginary axis
    k = geometry.quasi_hyperbolic_distance(DomainSpec(None), 1j, np.e * 1j, 2.0 ** -4)
    assert 1.0 - 1e-9 <= k <= 1.1
    k = geometry.quasi_hyperbolic_distance(DomainSpec(None), 1j, np.exp(-2.0) * 1j, 2.0 ** -5)
    assert 2.0 - 1e-9 <= k <= 2.2


class TestQuasiHyperbolicGraph:
    @pytest.fixture(scope="class")
    def graph(self):
        return WhitneyGeometry().quasi_hyperbolic_graph(DomainSpec(None), 2.0 ** -4,
                                                        [-1.0 + 0.25j, 1.0 + 2.0j])

    @staticmethod
    def points(rng, n):
        return rng.uniform(-1.0, 1.0, n) + 1j * rng.uniform(0.25, 2.0, n)

    def test_edge_weight_is_length_over_min_delta(self, graph):
        cost = graph.segment_cost(np.array([0.1j]), np.array([1j]))
        assert cost[0] == pytest.approx(0.9 / 0.1)
        # finer pieces approach ∫ dy/y = log 10 from above
        fine = graph.segment_cost(np.array([0.1j]), np.array([1j]), graph.REFINE_PIECES)[0]
        assert np.log(10.0) <= fine <= 1.1 * np.log(10.0)

    def test_estimates_bound_k_from_above(self, graph, rng):
        z0, z1 = self.points(rng, 30), self.points(rng, 30)
        for a, b in zip(z0, z1):
            exact = float(rho_h(a, b))
            raw = graph.distance(a, b, refine=False)
            refined = graph.distance(a, b)
            assert raw >= exact * (1.0 - 1e-12)
            assert exact * (1.0 - 1e-9) <= refined <= raw

    def test_triangle_inequality(self, graph, rng):
        a, b, c = self.points(rng, 20), self.points(rng, 20), self.points(rng, 20)
        for x, y, z in zip(a, b, c):
            assert graph.distance(x, z) <= 1.05 * (graph.distance(x, y) + graph.distance(y, z))

    def test_graph_distance_is_symmetric(self, graph):
        assert graph.distance(0.5j, 1 + 1j, refine=False) == pytest.approx(
            graph.distance(1 + 1j, 0.5j, refine=False))


@pytest.mark.slow
def test_calibration_reproduces_shipped_constants(geometry, tmp_path):
    path = tmp_path / "calibration.json"
    result = geometry.calibrate_hcap_constants(str(path), zipper_vertices=100)
    ratios = pd.DataFrame(result["ratios"])
    slits = ratios[ratios["family"] == "vertical-slit"]
    np.testing.assert_allclose(slits["ratio"], 16.0 / 3.0, rtol=1e-6)
    assert result["c_hi"] >= 32.0 / 3.0
    assert (ratios["hcap"] >= ratios["area"] / result["c_hi"]).all()
    assert path.exists()
