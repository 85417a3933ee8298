"""Tests for the forward Loewner solver and LoewnerEvolution."""

import numpy as np
import pytest

from loewnerlab.core_model import Driving, HullCurve
from loewnerlab.exceptions import InvalidArgumentError, MissingTraceError
from loewnerlab.forward_solver import ForwardSolver, hcap_of_evolution, solve_forward
from loewnerlab.inverse_solver import ZipperSolver


class TestClosedForm:
    """λ ≡ 0 generates the vertical slit [0, 2i√T]."""

    @pytest.fixture(scope="class")
    def evolution(self):
        return ForwardSolver().solve_forward(Driving.constant(0.0, 1.0, 4001), "vertical")

    def test_tip(self, evolution):
        assert abs(evolution.trace[-1] - 2j) <= 5e-3

    def test_eval_g(self, evolution):
        assert abs(complex(evolution.eval_g(1.0, 3j)[0]) - 1j * np.sqrt(5.0)) <= 2e-3

    def test_eval_f(self, evolution):
        assert abs(complex(evolution.eval_f(1.0, 1j * np.sqrt(5.0))[0]) - 3j) <= 2e-3

    def test_hydrodynamic_expansion(self, evolution):
        assert abs(complex(evolution.eval_g(1.0, 100j)[0]) - 1j * np.sqrt(9996.0)) <= 1e-6

    def test_hcap(self, evolution):
        assert evolution.hcap(0.5) == pytest.approx(1.0)
        assert hcap_of_evolution(evolution, 1.0) == pytest.approx(2.0)


def test_trace_starts_at_driving(zero_evolution):
    assert zero_evolution.trace[0] == 0.0
    assert np.all(zero_evolution.trace[1:].imag > 0)


def test_f_inverts_g(zero_evolution):
    z = np.array([1.0 + 1.0j, -0.5 + 3.0j, 0.2 + 2.5j])
    w = zero_evolution.eval_g(0.5, z)
    np.testing.assert_allclose(zero_evolution.eval_f(0.5, w), z, atol=1e-10)


def test_flow_property():
    d = Driving.sqrt(1.0, 1.0, 201)
    e = ForwardSolver().solve_forward(d, "vertical")
    s, t = e.grid.t_values[80], e.grid.t_values[160]
    z = np.array([0.5 + 2.0j, -1.0 + 1.5j])
    shifted = e.shifted(s)
    direct = e.eval_g(t, z)
    composed = shifted.eval_g(t - s, e.eval_g(s, z))
    np.testing.assert_allclose(composed, direct, atol=1e-10)


def test_restrict_keeps_prefix(zero_evolution):
    t = float(zero_evolution.grid.t_values[100])
    r = zero_evolution.restrict(t)
    assert r.T == pytest.approx(t)
    np.testing.assert_array_equal(r.trace, zero_evolution.trace[:101])
    with pytest.raises(InvalidArgumentError):
        zero_evolution.restrict(0.0)


def test_domain_at_zero_is_half_plane(zero_evolution):
    assert zero_evolution.domain_at(0.0).is_half_plane
    assert not zero_evolution.domain_at(1.0).is_half_plane


def test_transition_hull_of_vertical_slit(zero_evolution):
    s, t = 0.25, 0.5
    K = zero_evolution.transition_hull(s, t)
    # g_s(K_t \ K_s) is the slit [0, 2i√(t − s)]
    assert K.diameter() == pytest.approx(2.0 * np.sqrt(t - s), rel=2e-2)


def test_missing_trace():
    e = solve_forward(Driving.constant(0.0, 1.0, 11), trace=False)
    assert e.trace is None
    with pytest.raises(MissingTraceError):
        e.hull_at(1.0)


def test_unknown_step_kind():
    with pytest.raises(InvalidArgumentError):
        ForwardSolver().solve_forward(Driving.constant(0.0, 1.0, 11), "curved")


def test_sqrt_driving_traces_a_ray():
    e = ForwardSolver().solve_forward(Driving.sqrt(1.0, 1.0, 401), "tilted")
    angles = np.angle(e.trace[40:])
    assert np.ptp(angles) < 0.1


def test_tilted_resolve_rebuilds_fitted_chain(tilted_segment_zipper):
    z = tilted_segment_zipper
    e = ForwardSolver().solve_forward(z.driving, "tilted", trace=False)
    np.testing.assert_allclose(e.chain.anchors, z.fitted_chain.anchors, atol=1e-10)
    np.testing.assert_allclose(e.chain.alphas, z.fitted_chain.alphas, atol=1e-8)


@pytest.mark.slow
def test_zipper_roundtrip_convergence():
    """Extracting the driving of a forward trace of 3√t converges at order >= 1/2."""

    def error(n):
        d = Driving.sqrt(3.0, 1.0, n + 1)
        e = ForwardSolver().solve_forward(d, "vertical")
        z = ZipperSolver().extract_driving(HullCurve(e.trace.copy()))
        exact = 3.0 * np.sqrt(z.driving.grid.t_values)
        return float(np.abs(z.driving.values - exact).max())

    coarse = error(1000)
    assert coarse <= 5e-2 * (1.0 + 3.0)
    assert error(4000) <= 0.75 * coarse
