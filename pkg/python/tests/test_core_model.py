"""Tests for grids, drivings, hull curves, slit maps, map chains and domains."""

import numpy as np
import pytest

from loewnerlab.core_model import (
    CapacityGrid,
    DomainSpec,
    Driving,
    ElementarySlitMap,
    HullCurve,
    MapChain,
    alpha_for_increment,
    lip_half_norm,
    modulus_of_continuity,
    resample_driving,
    tilted_parameters_for_tip,
    tilted_tip,
    tilted_tip_image,
)
from loewnerlab.exceptions import (
    DomainError,
    InvalidArgumentError,
    InvalidCurveError,
    InvalidGridError,
    LoewnerLabError,
    NotASimpleSlitError,
)


class TestCapacityGrid:
    def test_uniform(self):
        grid = CapacityGrid.uniform(1.0, 5)
        np.testing.assert_allclose(grid.t_values, [0.0, 0.25, 0.5, 0.75, 1.0])
        assert grid.T == 1.0
        assert grid.n == 5
        assert grid.max_spacing == pytest.approx(0.25)

    @pytest.mark.parametrize("times", [[0.0, 0.5, 0.5], [0.1, 0.2], [0.0, 1.0, 0.5]])
    def test_invalid_times(self, times):
        with pytest.raises(InvalidGridError):
            CapacityGrid(np.array(times))

    def test_index_of(self):
        grid = CapacityGrid.uniform(1.0, 5)
        assert grid.index_of(0.5) == 2
        assert grid.index_at_or_before(0.6) == 2
        with pytest.raises(InvalidArgumentError):
            grid.index_of(0.6)

    def test_tail_starts_at_zero(self):
        tail = CapacityGrid.uniform(1.0, 5).tail(2)
        np.testing.assert_allclose(tail.t_values, [0.0, 0.25, 0.5])

    def test_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            CapacityGrid(np.array([0.0, 0.0]))
        assert issubclass(InvalidGridError, LoewnerLabError)


class TestDriving:
    @pytest.mark.parametrize("kind,params,expected", [
        ("constant", {"c": 0.3}, lambda t: np.full_like(t, 0.3)),
        ("linear", {"slope": 2.0, "c": 1.0}, lambda t: 1.0 + 2.0 * t),
        ("sqrt", {"c": 3.0}, lambda t: 3.0 * np.sqrt(t)),
    ])
    def test_from_kind(self, kind, params, expected):
        d = Driving.from_kind(kind, 2.0, 11, params)
        np.testing.assert_allclose(d.values, expected(d.grid.t_values))
        assert d.kind == kind

    def test_samples_with_times(self):
        d = Driving.from_kind("samples", 1.0, 3, {"t": [0.0, 0.1, 1.0]}, [0.0, 1.0, 2.0])
        np.testing.assert_allclose(d.grid.t_values, [0.0, 0.1, 1.0])
        assert d.value_at(0.55) == pytest.approx(1.5)

    def test_samples_need_values(self):
        with pytest.raises(InvalidArgumentError):
            Driving.from_kind("samples", 1.0, 3)

    def test_unknown_kind(self):
        with pytest.raises(InvalidArgumentError):
            Driving.from_kind("levy", 1.0, 3)

    def test_brownian_with_zero_kappa_is_zero(self):
        d = Driving.from_kind("brownian", 1.0, 100, {"kappa": 0.0, "seed": 3})
        assert d.sup_norm() == 0.0

    def test_values_match_grid(self):
        with pytest.raises(InvalidArgumentError):
            Driving(CapacityGrid.uniform(1.0, 3), np.zeros(4))

    def test_shift_restrict_scale(self):
        d = Driving.linear(1.0, 1.0, 5)
        shifted = d.shifted(0.5)
        np.testing.assert_allclose(shifted.values, [0.5, 0.75, 1.0])
        np.testing.assert_allclose(d.restricted(0.5).values, [0.0, 0.25, 0.5])
        scaled = d.scaled(2.0)
        assert scaled.T == pytest.approx(4.0)
        assert scaled.values[-1] == pytest.approx(2.0)

    def test_resample_is_idempotent(self):
        d = Driving.sqrt(1.0, 1.0, 37)
        once = resample_driving(d, 20)
        twice = resample_driving(once, 20)
        np.testing.assert_array_equal(once.values, twice.values)
        assert once.values[-1] == d.values[-1]


class TestRegularity:
    def test_lip_half_norm_of_sqrt(self):
        assert lip_half_norm(Driving.sqrt(-1.5, 1.0, 400)) == pytest.approx(1.5, rel=1e-9)

    def test_lip_half_norm_needs_window_on_large_grids(self):
        d = Driving.constant(0.0, 1.0, 20_001)
        with pytest.raises(InvalidArgumentError):
            lip_half_norm(d)
        assert lip_half_norm(d, window=1e-3) == 0.0

    def test_modulus_of_continuity_of_linear(self):
        d = Driving.linear(2.0, 1.0, 1025)
        table = modulus_of_continuity(d, [1.0 / 8, 1.0 / 64])
        np.testing.assert_allclose(table["omega"], [0.25, 2.0 / 64], rtol=1e-9)
        assert list(table.columns) == ["delta", "omega"]

    def test_modulus_below_resolution(self):
        with pytest.raises(InvalidArgumentError):
            modulus_of_continuity(Driving.linear(1.0, 1.0, 11), [1e-3])


class TestHullCurve:
    def test_base_must_be_real(self):
        with pytest.raises(InvalidCurveError):
            HullCurve(np.array([1j, 2j]))

    def test_simple_rejects_real_vertex(self):
        with pytest.raises(NotASimpleSlitError):
            HullCurve(np.array([0.0, 1j, 1.0]))
        HullCurve(np.array([0.0, 1j, 1.0]), simple=False)

    def test_rad_and_diameter(self):
        K = HullCurve(np.array([0.0, 0.5j, 1j]))
        r, x = K.rad()
        assert r == pytest.approx(1.0)
        assert x == pytest.approx(0.0)
        assert K.diameter() == pytest.approx(1.0)

    def test_self_intersection(self):
        loop = HullCurve(np.array([0.0, 2j, 1 + 2j, 1 + 1j, -1 + 1j]), simple=False)
        assert loop.is_self_intersecting(1e-3)
        assert not HullCurve(np.array([0.0, 1j, 1 + 2j])).is_self_intersecting(1e-3)


class TestSlitMaps:
    def test_vertical_closed_form(self):
        step = ElementarySlitMap("vertical", 0.0, 1.0)
        assert complex(step.forward(3j)[0]) == pytest.approx(1j * np.sqrt(5.0), abs=1e-12)
        assert complex(step.inverse(1j * np.sqrt(5.0))[0]) == pytest.approx(3j, abs=1e-12)
        assert step.tip() == pytest.approx(2j)
        assert step.hcap == 2.0

    def test_exact_increment_angle(self):
        dt = 0.01
        for dlam in (-0.3, 0.0, 0.05, 1.2):
            alpha = float(alpha_for_increment(np.array(dlam), np.array(dt)))
            assert tilted_tip_image(dt, alpha) == pytest.approx(dlam, abs=1e-12)

    def test_tip_parameters_roundtrip(self):
        dt, alpha = 0.04, 0.3
        dt2, alpha2 = tilted_parameters_for_tip(tilted_tip(dt, alpha))
        assert dt2 == pytest.approx(dt, rel=1e-10)
        assert alpha2 == pytest.approx(alpha, rel=1e-10)

    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.7])
    def test_forward_inverse_roundtrip(self, alpha):
        step = ElementarySlitMap("vertical" if alpha == 0.5 else "tilted", 0.3, 0.05, alpha)
        z = np.array([1.0 + 2.0j, -1.0 + 0.5j, 0.3 + 3.0j])
        np.testing.assert_allclose(step.inverse(step.forward(z)), z, atol=1e-9)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.8])
    def test_hydrodynamic_normalization(self, alpha):
        dt = 0.1
        step = ElementarySlitMap("vertical" if alpha == 0.5 else "tilted", 0.0, dt, alpha)
        z = 1e3 * np.exp(1j * np.array([0.3, 1.5, 2.8]))
        g = step.forward(z)
        # g(z) = z + 2dt/z + O(1/z²)
        np.testing.assert_allclose(g - z, 2.0 * dt / z, atol=1e-6)

    def test_invalid_step(self):
        with pytest.raises(InvalidArgumentError):
            ElementarySlitMap("vertical", 0.0, 1.0, 0.3)
        with pytest.raises(InvalidArgumentError):
            ElementarySlitMap("tilted", 0.0, -1.0, 0.3)


class TestMapChain:
    def _chain(self):
        return MapChain.from_steps([ElementarySlitMap("vertical", 0.0, 0.5),
                                    ElementarySlitMap("vertical", 0.0, 0.5)])

    def test_composition_of_vertical_slits(self):
        chain = self._chain()
        assert chain.total_capacity() == pytest.approx(2.0)
        w = chain.apply_forward(3j, 2)
        assert complex(w[0]) == pytest.approx(1j * np.sqrt(5.0), abs=1e-12)
        z = chain.apply_inverse(w, 2)
        assert complex(z[0]) == pytest.approx(3j, abs=1e-12)

    def test_swallowed_points(self):
        chain = self._chain()
        with pytest.raises(DomainError) as info:
            chain.apply_forward(1j, 2)
        assert info.value.step in (0, 1)
        assert np.isnan(chain.apply_forward(np.array([1j, 3j]), 2, on_swallow="nan")[0])

    def test_head_and_tail(self):
        chain = self._chain()
        assert len(chain.head(1)) == 1
        assert len(chain.tail(1)) == 1
        assert chain.kinds == ["vertical", "vertical"]


class TestDomainSpec:
    def test_half_plane(self):
        spec = DomainSpec(None)
        assert spec.is_half_plane
        np.testing.assert_allclose(spec.delta([2j, 1 + 0.5j]), [2.0, 0.5])
        assert spec.bbox == (-1.0, 1.0, 0.0, 1.0)

    def test_slit_domain(self):
        spec = DomainSpec(HullCurve(np.array([0.0, 1j])))
        assert spec.delta(0.5 + 0.5j)[0] == pytest.approx(0.5)
        assert not spec.contains(0.5j)[0]
        assert spec.contains(2j)[0]
        leaves = spec.segment_leaves(np.array([-0.5 + 0.5j, -0.5 + 2j]),
                                     np.array([0.5 + 0.5j, 0.5 + 2j]))
        np.testing.assert_array_equal(leaves, [True, False])

    def test_filled_hull(self):
        theta = np.linspace(np.pi, 0.0, 64)
        points = np.exp(1j * theta)
        points.imag[[0, -1]] = 0.0
        spec = DomainSpec(HullCurve(points, simple=False, filled=True))
        assert spec.delta(0.5j)[0] == 0.0
        assert spec.delta(2j)[0] == pytest.approx(1.0, abs=1e-3)

    def test_points_below_axis(self):
        with pytest.raises(InvalidArgumentError):
            DomainSpec(None).delta(-1j)

    def test_grid_blocks_hull(self):
        spec = DomainSpec(HullCurve(np.array([0.0, 1j])), (-1.0, 1.0, 0.0, 2.0))
        x0, y0, nx, ny, centers, blocked = spec.grid(0.1)
        assert (nx, ny) == (20, 20)
        assert blocked[5, 9] or blocked[5, 10]
        assert not blocked[15, 10]
