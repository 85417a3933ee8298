"""Tests for scenarios, reports and the experiment harness."""

from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from loewnerlab.curves import vertical_slit
from loewnerlab.exceptions import InvalidArgumentError
from loewnerlab.harness import (
    Report,
    Scenario,
    TheoremHarness,
    _row,
    brownian_driving,
    held_out_margin,
)
from loewnerlab.utils.io_utils import read_report


@pytest.fixture(scope="module")
def harness():
    return TheoremHarness()


class TestBrownianDriving:
    def test_zero_kappa(self):
        assert brownian_driving(0.0, 1.0, 100, seed=1).sup_norm() == 0.0

    def test_variance(self):
        finals = np.array([brownian_driving(1.0, 1.0, 64, seed=k).values[-1]
                           for k in range(4000)])
        assert finals.var() == pytest.approx(1.0, rel=0.1)

    def test_seed_is_reproducible(self):
        a = brownian_driving(2.0, 0.5, 50, seed=7)
        b = brownian_driving(2.0, 0.5, 50, seed=7)
        np.testing.assert_array_equal(a.values, b.values)
        assert a.params == {"kappa": 2.0, "seed": 7}

    @pytest.mark.parametrize("kappa,n", [(1.0, 1), (-1.0, 10)])
    def test_invalid(self, kappa, n):
        with pytest.raises(InvalidArgumentError):
            brownian_driving(kappa, 1.0, n)


class TestScenario:
    def test_from_dict_names_the_scenario(self):
        s = Scenario.from_dict({"suite": "slit", "family": "segment", "angle": 0.5})
        assert s.name == "slit_segment_angle=0.5"
        assert s.params == {"angle": 0.5}
        assert s.resolution == 400

    def test_explicit_fields(self):
        s = Scenario.from_dict({"suite": "johnprop", "driving": "constant", "c": 0.0,
                                "T": 0.25, "name": "zero", "resolution": 51})
        d = s.build_driving()
        assert s.name == "zero"
        assert d.T == pytest.approx(0.25)
        assert d.grid.n == 51
        with pytest.raises(InvalidArgumentError):
            s.build_curve()

    def test_unknown_suite(self):
        with pytest.raises(InvalidArgumentError):
            Scenario.from_dict({"suite": "levy"})


class TestReport:
    def test_recorded_rows_do_not_fail_the_report(self):
        rows = [_row("a", True, 1.0), _row("b", False, -1.0, asserted=False)]
        report = Report.from_rows("x", "slit", rows)
        assert report.passed
        assert report.asserted.tolist() == [True, False]
        assert report.to_frame()["scenario"].unique().tolist() == ["x"]

    def test_asserted_failure(self):
        report = Report.from_rows("x", "slit", [_row("a", False, -1.0)])
        assert not report.passed

    def test_empty_report_passes(self):
        assert Report("x", "slit").passed


class TestSlit:
    def test_vertical_segment_has_zero_constant(self, harness):
        report = harness.run_theorem_slit("segment", 100, angle=0.5)
        assert report.name == "slit_segment_angle=0.5"
        assert report.constants["C_hat"] == pytest.approx(0.0, abs=1e-6)
        assert report.passed
        checks = report.rows["check"].tolist()
        assert checks == ["C_hat_stable", "lambda_diameter", "holder_precondition"]

    def test_tilted_segment_constant(self, harness):
        report = harness.run_theorem_slit("segment", 200, angle=1.0 / 3.0)
        # λ = √2·√t, so ω(δ)/√(δ log 1/δ) = √2/√(log 1/δ)
        assert 0.0 < report.constants["C_hat"] < np.sqrt(2.0)
        table = pd.DataFrame(report.constants["omega"])
        assert (table["delta"] >= 0).all()


def test_held_out_margin():
    assert held_out_margin([1.0, 2.0, 0.5, 3.0]) == (1.0, -2.0)
    assert held_out_margin([3.0, 1.0]) == (3.0, 2.0)
    assert held_out_margin([0.7]) == (0.7, np.inf)
    assert held_out_margin([]) == (0.0, np.inf)


class TestConditions:
    def test_johnprop_on_vertical_slit(self, harness, zero_evolution):
        report = harness.check_johnprop_conditions(zero_evolution)
        assert report.passed
        assert report.constants["C0_hat"] <= 4.0
        assert report.constants["L_hat"] == pytest.approx(1.0, abs=1e-6)
        assert report.constants["lip_norm"] == 0.0

    def test_default_pairs(self, harness, zero_evolution):
        pairs = harness.default_pairs(zero_evolution)
        assert any(s == 0.0 and t == pytest.approx(0.125) for s, t in pairs)
        assert all(s < t for s, t in pairs)

    def test_hugging_curve_is_flagged(self, harness):
        scenario = Scenario.from_dict({"suite": "johnprop", "family": "hugging"},
                                      resolution=120)
        report = harness.run_scenario(scenario)
        assert not report.passed

    def test_nonslit_on_vertical_slit(self, harness, zero_evolution):
        pairs = [(0.0, 0.125), (0.25, 0.5), (0.25, 1.0)]
        report = harness.check_nonslit_conditions(zero_evolution, pairs, beta=0.5)
        assert report.rows["check"].tolist() == [
            "condition_base_diameter", "condition_log_diameter", "condition_john",
            "condition_hyperbolic", "conclusion"]
        assert report.passed
        assert report.constants["C_hat"] == 0.0
        assert len(report.constants["pairs"]) == 3
        # λ ≡ 0: the fitted and held-out ratios are all zero
        conclusion = report.rows.set_index("check").loc["conclusion"]
        assert conclusion["margin"] == 0.0
        assert conclusion["params"]["held_out"] == 1

    def test_needs_trace(self, harness, zero_evolution):
        bare = replace(zero_evolution, trace=None)
        with pytest.raises(InvalidArgumentError):
            harness.check_johnprop_conditions(bare)


class TestExperiments:
    def test_scenario_errors_become_rows(self, harness):
        scenario = Scenario.from_dict({"suite": "subinv", "family": "segment", "angle": 1.5})
        report = harness.run_scenario(scenario)
        assert report.rows["check"].tolist() == ["scenario_error"]
        assert not report.passed
        assert report.name == scenario.name

    @pytest.mark.slow
    def test_subinvariance_on_vertical_segment(self, harness):
        report = harness.run_subinvariance_experiment(vertical_slit(1.0, 201), (0.0, 0.5))
        assert report.passed
        assert "beta_T" in report.constants
        assert any(c.startswith("restriction_s=") for c in report.rows["check"])
        assert sum(c.startswith("transition_s=") for c in report.rows["check"]) == 2

    def test_brownian_report(self, harness):
        report = harness.run_brownian(kappa=1.0, T=0.25, n=256, n_seeds=10,
                                      variance_seeds=2000)
        assert report.rows["check"].tolist() == ["variance", "weak_lip_pass_rate"]
        assert report.rows.iloc[0]["passed"]
        assert 0.0 <= report.constants["pass_rate"] <= 1.0

    @pytest.mark.parametrize("T,target", [(None, 8.0 * 0.25), (0.5, 8.0 * 0.5)])
    def test_brownian_scenario_parameters(self, harness, T, target):
        payload = {"suite": "brownian", "kappa": 8.0, "n": 64, "n_seeds": 2,
                   "variance_seeds": 200, "seed": 3}
        if T is not None:
            payload["T"] = T
        scenario = Scenario.from_dict(payload)
        report = harness.run_scenario(scenario)
        variance = report.rows.set_index("check").loc["variance", "params"]
        assert variance["target"] == pytest.approx(target)
        assert report.name == scenario.name

    def test_brownian_scenario_rejects_unknown_parameters(self, harness):
        report = harness.run_scenario(Scenario.from_dict({"suite": "brownian", "angle": 0.5}))
        assert report.rows["check"].tolist() == ["scenario_error"]

    @pytest.mark.slow
    def test_weak_lip_pass_rate(self, harness):
        assert harness.run_brownian().passed

    def test_lip_regime_scan(self, harness):
        table = harness.run_lip_regime_scan([0.5], n=400)
        assert list(table.columns) == ["c", "lip_norm", "simple"]
        row = table.iloc[0]
        assert row["simple"]
        assert 0.9 * 0.5 <= row["lip_norm"] <= 0.5 * (1 + 1e-9)

    def test_configured_scenarios(self, harness):
        assert len(harness.scenarios("slit")) == 3
        assert {s.suite for s in harness.scenarios()} == {
            "slit", "johnprop", "nonslit", "subinv", "brownian"}

    def test_write_reports(self, harness, tmp_path):
        reports = [Report.from_rows("b", "slit", [_row("a", True, 1.0)], {"C_hat": 0.5}),
                   Report.from_rows("a", "brownian", [_row("v", False, -np.inf)])]
        summary = harness.write_reports(reports, str(tmp_path))
        assert summary["passed"].tolist() == [True, False]
        assert (tmp_path / "summary.csv").exists()
        back = read_report(str(tmp_path / "a.json"))
        assert back["check"].tolist() == ["v"]
        assert np.isnan(back["margin"].iloc[0])
