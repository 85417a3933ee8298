"""Smoke tests for LoewnerVisualization."""

import matplotlib

matplotlib.use("Agg")

import pandas as pd  # noqa: E402
import pytest  # noqa: E402

from loewnerlab.curves import vertical_slit  # noqa: E402
from loewnerlab.visualization import LoewnerVisualization  # noqa: E402
from loewnerlab.whitney import WhitneyGeometry  # noqa: E402


@pytest.fixture
def viz():
    return LoewnerVisualization(viewport=(2.0, 3.0))


def test_trace_plot_is_written(viz, zero_evolution, tmp_path):
    path = tmp_path / "plots" / "trace.svg"
    viz.plot_trace(zero_evolution, save_path=str(path))
    assert path.stat().st_size > 0


def test_trace_plot_keeps_viewport(viz, zero_evolution):
    ax = viz.plot_trace(zero_evolution, return_ax=True)
    assert ax.get_xlim() == (-2.0, 2.0)
    assert ax.get_ylim() == (0.0, 3.0)


def test_whitney_squares(viz, tmp_path):
    hull = vertical_slit(1.0, 2)
    squares = WhitneyGeometry().standard_squares_meeting(hull, -4)
    ax = viz.plot_whitney_squares(squares, hull, return_ax=True)
    assert len(ax.collections[0].get_paths()) == len(squares)


def test_modulus_of_continuity(viz, tmp_path):
    table = pd.DataFrame({"delta": [0.01, 0.1], "omega": [0.1, 0.3]})
    path = tmp_path / "omega.svg"
    viz.plot_modulus_of_continuity(table, C_hat=1.0, save_path=str(path))
    assert path.exists()


def test_interactive_trace(viz, zero_evolution, tmp_path):
    pytest.importorskip("plotly")
    path = tmp_path / "trace.html"
    fig = viz.plot_trace_interactive(zero_evolution, save_path=str(path))
    assert len(fig.data) == 1
    assert "<html" in path.read_text()
