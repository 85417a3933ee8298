"""Tests for the ``loewner`` command line."""

import json

import numpy as np
import pandas as pd
import pytest

from loewnerlab.cli import main
from loewnerlab.curves import segment_curve
from loewnerlab.utils import io_utils


@pytest.fixture
def driving_path(tmp_path):
    path = tmp_path / "driving.json"
    path.write_text(json.dumps({"type": "constant", "T": 1.0, "n": 101, "params": {"c": 0.0}}))
    return str(path)


def test_forward_writes_trace_and_chain(tmp_path, driving_path):
    out, chain = str(tmp_path / "trace.csv"), str(tmp_path / "chain.json")
    assert main(["forward", "--driving", driving_path, "--steps", "50", "--trace",
                 "--out", out, "--chain", chain]) == 0
    trace = pd.read_csv(out)
    assert list(trace.columns) == ["t", "re", "im"]
    assert len(trace) == 51
    assert trace["im"].iloc[-1] == pytest.approx(2.0, rel=1e-3)
    assert io_utils.read_chain(chain).grid.n == 51


def test_zip_writes_driving_and_profile(tmp_path, capsys):
    curve = str(tmp_path / "curve.csv")
    io_utils.write_curve(segment_curve(1.0, 0.5, 101), curve)
    out = str(tmp_path / "driving.json")
    assert main(["zip", "--curve", curve, "--out", out, "--profile", "0.05"]) == 0
    d = io_utils.read_driving(out)
    assert d.T == pytest.approx(0.25)
    assert np.abs(d.values).max() < 1e-9
    assert (tmp_path / "driving_profile.csv").exists()
    assert "omega2" in capsys.readouterr().out


def test_whitney_writes_squares(tmp_path):
    hull = str(tmp_path / "hull.csv")
    io_utils.write_curve(segment_curve(1.0, 0.5, 2), hull)
    out = str(tmp_path / "squares.csv")
    assert main(["whitney", "--hull", hull, "--jmin", "-4", "--out", out]) == 0
    squares = pd.read_csv(out)
    assert set(squares["j"]) == set(range(-4, 1))


def test_modulus_command(tmp_path):
    theta = np.linspace(0.0, np.pi, 100)
    problem = tmp_path / "problem.json"
    problem.write_text(json.dumps({
        "hull": None,
        "E": np.column_stack([np.cos(theta), np.sin(theta)]).tolist(),
        "F": (np.e * np.column_stack([np.cos(theta), np.sin(theta)])).tolist(),
    }))
    out = tmp_path / "result.json"
    assert main(["modulus", "--problem", str(problem), "--grid", "96", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["value"] == pytest.approx(np.pi, rel=0.2)


def test_invalid_input_exits_with_two(tmp_path, capsys):
    bad = tmp_path / "driving.json"
    bad.write_text(json.dumps({"type": "samples", "T": 1.0}))
    assert main(["forward", "--driving", str(bad), "--out", str(tmp_path / "t.csv")]) == 2
    assert "loewner forward" in capsys.readouterr().err


def test_unknown_command_is_rejected():
    with pytest.raises(SystemExit):
        main(["unzip"])
