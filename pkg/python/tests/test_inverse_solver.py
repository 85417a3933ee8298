"""Tests for the zipper, capacity parameterization and transition profiles."""

import numpy as np
import pandas as pd
import pytest

from loewnerlab.core_model import Driving, HullCurve
from loewnerlab.curves import vertical_slit
from loewnerlab.exceptions import InvalidArgumentError, NotASimpleSlitError
from loewnerlab.inverse_solver import (
    ZipperSolver,
    extract_driving,
    lambda_diameter_margins,
    weak_lip_check,
)


@pytest.fixture(scope="module")
def vertical_zipper():
    return ZipperSolver().extract_driving(vertical_slit(2.0, 401), "vertical")


class TestExtractDriving:
    @pytest.mark.parametrize("kind", ["vertical", "tilted"])
    def test_vertical_segment(self, kind):
        z = extract_driving(vertical_slit(2.0, 201), kind)
        assert z.T == pytest.approx(1.0, rel=1e-9)
        assert np.abs(z.driving.values).max() < 1e-9

    def test_tilted_segment_is_self_similar(self, tilted_segment_zipper):
        z = tilted_segment_zipper
        # a ray at angle π/3 is driven by √2·√t
        assert z.driving.values[-1] / np.sqrt(z.T) == pytest.approx(np.sqrt(2.0), rel=2e-2)
        assert z.T == pytest.approx(0.5 ** (1.0 / 3.0), rel=1e-2)

    def test_capacity_times_are_increasing(self, tilted_segment_zipper):
        times = tilted_segment_zipper.capacity_times
        assert times[0] == 0.0
        assert np.all(np.diff(times) > 0)
        assert tilted_segment_zipper.fitted_chain.total_capacity() == pytest.approx(times[-1])

    def test_rejects_non_simple_curves(self):
        loop = HullCurve(np.array([0.0, 2j, 1 + 2j, 1 + 1j, -1 + 1j]), simple=False)
        with pytest.raises(NotASimpleSlitError):
            ZipperSolver().extract_driving(loop)

    def test_unknown_step_kind(self):
        with pytest.raises(InvalidArgumentError):
            ZipperSolver().extract_driving(vertical_slit(1.0, 10), "curved")

    def test_to_evolution(self, vertical_zipper):
        e = vertical_zipper.to_evolution()
        assert e.hcap(e.T) == pytest.approx(2.0 * vertical_zipper.T)
        np.testing.assert_array_equal(e.trace, vertical_zipper.curve.points)


def test_capacity_parameterize(vertical_zipper):
    curve = ZipperSolver().capacity_parameterize(vertical_zipper.curve, 4, vertical_zipper)
    # t = y²/4 with T = 1
    np.testing.assert_allclose(curve.points.imag, np.sqrt(np.arange(5.0)), atol=1e-4)
    with pytest.raises(InvalidArgumentError):
        ZipperSolver().capacity_parameterize(vertical_zipper.curve, 0)


class TestTransitionProfile:
    def test_vertical_slit_profile(self, vertical_zipper):
        delta = 0.1
        profile = ZipperSolver().transition_diameter_profile(vertical_zipper, delta)
        assert list(profile.columns) == ["s", "diam", "lambda_jump"]
        assert profile.attrs["omega2"] == pytest.approx(2.0 * np.sqrt(delta), rel=2e-2)
        assert profile["lambda_jump"].max() < 1e-9
        assert (profile["s"] + delta <= vertical_zipper.T + 1e-12).all()

    def test_delta_below_spacing(self, vertical_zipper):
        with pytest.raises(InvalidArgumentError):
            ZipperSolver().transition_diameter_profile(vertical_zipper, 1e-6)

    def test_margins(self, vertical_zipper):
        profile = ZipperSolver().transition_diameter_profile(vertical_zipper, 0.1)
        ok, margin = lambda_diameter_margins(profile, vertical_zipper.fitted_chain.grid.max_spacing)
        assert ok
        assert margin > 0

    def test_margins_detect_violation(self):
        profile = pd.DataFrame({"s": [0.0], "diam": [0.1], "lambda_jump": [1.0]})
        ok, margin = lambda_diameter_margins(profile, 1e-4)
        assert not ok
        assert margin == pytest.approx(-0.5)
        assert lambda_diameter_margins(profile.iloc[:0], 1e-4) == (True, np.inf)


class TestWeakLip:
    def test_constant_passes(self):
        result = weak_lip_check(Driving.constant(0.0, 0.5, 100), 1.0)
        assert result["passed"]
        assert result["worst_ratio"] == 0.0

    def test_sqrt_worst_pair(self):
        result = weak_lip_check(Driving.sqrt(1.0, 0.5, 101), 2.0)
        assert result["worst_ratio"] == pytest.approx(1.0 / np.sqrt(np.log(2.0)), rel=1e-9)
        assert result["worst_pair"] == pytest.approx((0.0, 0.5))
        assert result["passed"]
        assert not weak_lip_check(Driving.sqrt(1.0, 0.5, 101), 1.0)["passed"]

    @pytest.mark.parametrize("d,c", [
        (Driving.constant(0.0, 1.0, 3), 1.0),
        (Driving.constant(0.0, 0.5, 100), 0.0),
    ])
    def test_invalid_arguments(self, d, c):
        with pytest.raises(InvalidArgumentError):
            weak_lip_check(d, c)
