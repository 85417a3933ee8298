"""Tests for the file formats in loewnerlab.utils.io_utils."""

import json

import numpy as np
import pandas as pd
import pytest

from loewnerlab import metric_analysis
from loewnerlab.core_model import CapacityGrid, Driving
from loewnerlab.curves import l_slit
from loewnerlab.exceptions import InvalidArgumentError
from loewnerlab.utils import io_utils


def test_open_path_creates_parent_directories(tmp_path):
    target = tmp_path / "a" / "b" / "out.txt"
    with io_utils.open_path(str(target), "w") as fh:
        fh.write("ok")
    assert target.read_text() == "ok"
    assert io_utils.is_s3("s3://bucket/key") and not io_utils.is_s3(str(target))


class TestDrivingJson:
    def test_generated_driving_is_rebuilt_from_params(self, tmp_path):
        path = str(tmp_path / "d.json")
        io_utils.write_driving(Driving.sqrt(2.0, 0.5, 11), path)
        payload = json.loads((tmp_path / "d.json").read_text())
        assert payload["type"] == "sqrt" and payload["n"] == 11
        assert "t" not in payload["params"]
        finer = io_utils.read_driving(path, n=21)
        assert finer.grid.n == 21
        assert finer.values[-1] == pytest.approx(2.0 * np.sqrt(0.5))

    def test_nonuniform_grid_is_recorded(self):
        grid = CapacityGrid(np.array([0.0, 0.1, 0.5, 1.0]))
        payload = io_utils.driving_to_dict(Driving(grid, np.array([0.0, 1.0, 0.0, -1.0])))
        assert payload["params"]["t"] == [0.0, 0.1, 0.5, 1.0]

    def test_samples_need_values(self):
        with pytest.raises(InvalidArgumentError):
            io_utils.driving_from_dict({"type": "samples", "T": 1.0})

    def test_samples_keep_their_values(self):
        d = io_utils.driving_from_dict({"type": "samples", "T": 2.0, "values": [0, 1, 3]})
        np.testing.assert_allclose(d.values, [0.0, 1.0, 3.0])
        np.testing.assert_allclose(d.grid.t_values, [0.0, 1.0, 2.0])


def test_curve_csv(tmp_path):
    path = str(tmp_path / "curve.csv")
    curve = l_slit(1.0, 0.5, 20)
    io_utils.write_curve(curve, path)
    back = io_utils.read_curve(path)
    np.testing.assert_allclose(back.points, curve.points)
    pd.DataFrame({"x": [0.0]}).to_csv(path, index=False)
    with pytest.raises(InvalidArgumentError):
        io_utils.read_curve(path)


def test_chain_json_restores_the_maps(tmp_path, zero_evolution):
    path = str(tmp_path / "chain.json")
    io_utils.write_chain(zero_evolution, path)
    e = io_utils.read_chain(path)
    assert e.step_kind == zero_evolution.step_kind
    np.testing.assert_allclose(e.trace, zero_evolution.trace)
    z = np.array([1 + 1j, -0.5 + 3j])
    np.testing.assert_allclose(e.eval_g(e.T, z), zero_evolution.eval_g(e.T, z), rtol=1e-12)


def test_modulus_problem_json(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps({"hull": [[0, 0], [0, 1]], "E": [[-1, 0.5], [-1, 1]],
                                "F": [[1, 0.5]], "bbox": [-2, 2, 0, 3], "grid_n": 96}))
    problem = io_utils.read_modulus_problem(str(path))
    assert problem.grid_n == 96
    assert problem.bbox == (-2, 2, 0, 3)
    assert problem.E.size == 2 and problem.F[0] == 1 + 0.5j
    assert not problem.domain.is_half_plane
    assert io_utils.read_modulus_problem(str(path), grid_n=128).grid_n == 128


def test_report_json(tmp_path):
    path = str(tmp_path / "report.json")
    frame = pd.DataFrame([
        {"check": "a", "passed": np.bool_(True), "margin": np.float64(0.5), "params": {"x": 1}},
        {"check": "b", "passed": False, "margin": np.inf, "params": {}},
    ])
    io_utils.write_report(frame, path)
    back = io_utils.read_report(path)
    assert back["check"].tolist() == ["a", "b"]
    assert back["margin"].iloc[0] == 0.5
    assert np.isnan(back["margin"].iloc[1])
    assert back["params"].iloc[0] == {"x": 1}


def test_report_columns_are_shared(tmp_path):
    assert io_utils.REPORT_COLUMNS is metric_analysis.REPORT_COLUMNS
    path = str(tmp_path / "distortion.json")
    frame = pd.DataFrame([{"check": "c", "passed": True, "margin": 1.0, "params": {}}],
                         columns=metric_analysis.REPORT_COLUMNS)
    io_utils.write_report(frame, path)
    assert list(io_utils.read_report(path).columns) == metric_analysis.REPORT_COLUMNS
