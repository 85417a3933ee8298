#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Visualization Module for Loewner Chains and Harness Reports

This module provides the LoewnerVisualization class for drawing traces,
Whitney decompositions, moduli of continuity and modulus densities. All
matplotlib plots of the upper half-plane use a fixed viewport [−X, X]×[0, Y]
so that figures of one run line up; they are written as SVG by default.

Key features:
- Traces and hulls, optionally colored by capacity time
- Whitney squares colored by level
- ω(δ) against the √(δ log 1/δ) envelope on log-log axes
- Heat maps of discrete extremal densities
- Optional interactive plotly trace figures

Upstream dependencies:
- ForwardSolver / ZipperSolver for traces
- WhitneyGeometry for square complexes
- ModulusEstimator for densities
- TheoremHarness for ω(δ) tables

Downstream applications:
- ``--svg`` outputs of the ``loewner`` command line
- Figures for notes and slides

Version: 0.1.0
"""

import warnings
from typing import Optional, Tuple, Union

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import seaborn as sns
from matplotlib.collections import PatchCollection
from matplotlib.patches import Rectangle

from .core_model import HullCurve
from .forward_solver import LoewnerEvolution
from .utils.io_utils import save_figure
from .utils.logging_utils import VerboseMixin

try:
    import plotly.graph_objects as go

    HAS_PLOTLY = True
except ImportError:
    HAS_PLOTLY = False

Viewport = Tuple[float, float]


class LoewnerVisualization(VerboseMixin):
    """
    Plots of half-plane geometry.

    Attributes:
        viewport (Tuple[float, float]): (X, Y) of the window [−X, X]×[0, Y].
        verbose (bool): Whether to print progress messages.

    Examples:
        >>> viz = LoewnerVisualization(viewport=(2.0, 3.0))
        >>> viz.plot_trace(evolution, save_path="trace.svg")
    """

    def __init__(self, viewport: Viewport = (2.0, 2.5), style: str = "whitegrid",
                 verbose: bool = False):
        self.viewport = (float(viewport[0]), float(viewport[1]))
        self.style = style
        self.verbose = verbose

    def _axes(self, ax: Optional[plt.Axes], figsize: Tuple[float, float],
              viewport: Optional[Viewport] = None) -> plt.Axes:
        sns.set_style(self.style)
        if ax is None:
            _, ax = plt.subplots(figsize=figsize)
        X, Y = viewport or self.viewport
        ax.set_xlim(-X, X)
        ax.set_ylim(0.0, Y)
        ax.set_aspect("equal")
        ax.axhline(0.0, color="black", linewidth=0.8)
        return ax

    def _finish(self, ax: plt.Axes, save_path: Optional[str], return_ax: bool):
        fig = ax.figure
        fig.tight_layout()
        if save_path:
            save_figure(fig, save_path, bbox_inches="tight")
            self.log(f"Saved figure to {save_path}")
        if return_ax:
            return ax
        plt.close(fig)
        return None

    def plot_trace(self,
                   trace: Union[LoewnerEvolution, HullCurve, np.ndarray],
                   times: Optional[np.ndarray] = None,
                   title: Optional[str] = None,
                   figsize: Tuple[float, float] = (8, 5),
                   cmap: str = "viridis",
                   viewport: Optional[Viewport] = None,
                   save_path: Optional[str] = None,
                   return_ax: bool = False,
                   ax: Optional[plt.Axes] = None,
                   **kwargs) -> Optional[plt.Axes]:
        """
        Draw a trace or hull polyline in the fixed viewport.

        Parameters:
            trace: A LoewnerEvolution (its trace, colored by capacity time), a
                HullCurve or complex vertices.
            times (Optional[np.ndarray]): Capacity times per vertex for coloring.
            title (Optional[str]): Plot title.
            figsize (Tuple[float, float]): Figure size.
            cmap (str): Colormap for capacity time.
            viewport (Optional[Tuple[float, float]]): Overrides the instance viewport.
            save_path (Optional[str]): Local path or s3:// URI.
            return_ax (bool): If True, return the axis object.
            ax (Optional[plt.Axes]): Existing axis to plot on.
            **kwargs: Passed to ``ax.plot``.

        Returns:
            Optional[plt.Axes]: The axis when return_ax is True.
        """
        if isinstance(trace, LoewnerEvolution):
            times = trace.grid.t_values if times is None else times
            points = trace._require_trace()
        elif isinstance(trace, HullCurve):
            points = trace.points
        else:
            points = np.asarray(trace, dtype=complex)

        ax = self._axes(ax, figsize, viewport)
        ax.plot(points.real, points.imag, color=kwargs.pop("color", "tab:blue"),
                linewidth=kwargs.pop("linewidth", 1.2), **kwargs)
        if times is not None and len(times) == points.size:
            sc = ax.scatter(points.real, points.imag, c=times, cmap=cmap, s=4, zorder=3)
            plt.colorbar(sc, ax=ax, label="capacity time", shrink=0.8)
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
        ax.set_title(title or f"Trace ({points.size} points)")
        return self._finish(ax, save_path, return_ax)

    def plot_whitney_squares(self,
                             squares: Union["WhitneyComplex", pd.DataFrame],  # noqa: F821
                             hull: Optional[HullCurve] = None,
                             title: Optional[str] = None,
                             figsize: Tuple[float, float] = (8, 5),
                             cmap: str = "mako",
                             viewport: Optional[Viewport] = None,
                             save_path: Optional[str] = None,
                             return_ax: bool = False,
                             ax: Optional[plt.Axes] = None) -> Optional[plt.Axes]:
        """
        Draw Whitney squares colored by level, with the hull on top.

        ``squares`` may be a WhitneyComplex or its frame (j, k_or_cx, cy, side).
        """
        frame = squares if isinstance(squares, pd.DataFrame) else squares.to_frame()
        side = frame["side"].to_numpy(dtype=float)
        # standard squares carry the integer k, adaptive ones the center
        if pd.api.types.is_integer_dtype(frame["k_or_cx"]):
            left = frame["k_or_cx"].to_numpy() * side
        else:
            left = frame["k_or_cx"].to_numpy(dtype=float) - 0.5 * side
        bottom = frame["cy"].to_numpy(dtype=float) - 0.5 * side

        ax = self._axes(ax, figsize, viewport)
        levels = frame["j"].to_numpy()
        palette = sns.color_palette(cmap, as_cmap=True)
        span = max(int(levels.max() - levels.min()), 1) if levels.size else 1
        patches = [Rectangle((x, y), s, s) for x, y, s in zip(left, bottom, side)]
        collection = PatchCollection(patches, facecolor=[palette((j - levels.min()) / span)
                                                         for j in levels],
                                     edgecolor="white", linewidth=0.3, alpha=0.8)
        ax.add_collection(collection)
        if hull is not None:
            ax.plot(hull.points.real, hull.points.imag, color="tab:red", linewidth=1.5)
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
        ax.set_title(title or f"Whitney squares ({len(frame)})")
        return self._finish(ax, save_path, return_ax)

    def plot_modulus_of_continuity(self,
                                   table: pd.DataFrame,
                                   C_hat: Optional[float] = None,
                                   title: Optional[str] = None,
                                   figsize: Tuple[float, float] = (7, 5),
                                   save_path: Optional[str] = None,
                                   return_ax: bool = False,
                                   ax: Optional[plt.Axes] = None) -> Optional[plt.Axes]:
        """
        ω(δ) on log-log axes with the envelope Ĉ·√(δ log 1/δ).

        Parameters:
            table (pd.DataFrame): Columns 'delta' and 'omega'.
            C_hat (Optional[float]): Fitted constant; the envelope is drawn when given.
        """
        sns.set_style(self.style)
        if ax is None:
            _, ax = plt.subplots(figsize=figsize)
        delta = table["delta"].to_numpy(dtype=float)
        omega = table["omega"].to_numpy(dtype=float)
        positive = omega > 0
        if positive.any():
            ax.loglog(delta[positive], omega[positive], "o-", label="ω(δ)")
        else:
            ax.set_xscale("log")
            ax.plot(delta, omega, "o-", label="ω(δ)")
        if C_hat:
            envelope = C_hat * np.sqrt(delta * np.log(1.0 / delta))
            ax.plot(delta, envelope, "--", color="gray", label=f"{C_hat:.3g}·√(δ log 1/δ)")
        ax.set_xlabel("δ")
        ax.set_ylabel("ω(δ)")
        ax.legend()
        ax.set_title(title or "Modulus of continuity")
        return self._finish(ax, save_path, return_ax)

    def plot_modulus_density(self,
                             result: "ModulusResult",  # noqa: F821
                             hull: Optional[HullCurve] = None,
                             title: Optional[str] = None,
                             figsize: Tuple[float, float] = (8, 5),
                             cmap: str = "rocket",
                             save_path: Optional[str] = None,
                             return_ax: bool = False,
                             ax: Optional[plt.Axes] = None) -> Optional[plt.Axes]:
        """Heat map of the extremal density |∇u| on the grid window."""
        sns.set_style(self.style)
        if ax is None:
            _, ax = plt.subplots(figsize=figsize)
        x0, _, y0, _ = result.window
        ny, nx = result.density.shape
        extent = (x0, x0 + nx * result.h, y0, y0 + ny * result.h)
        image = ax.imshow(np.ma.masked_invalid(result.density), origin="lower", extent=extent,
                          cmap=sns.color_palette(cmap, as_cmap=True), aspect="equal")
        plt.colorbar(image, ax=ax, label="density", shrink=0.8)
        if hull is not None:
            ax.plot(hull.points.real, hull.points.imag, color="white", linewidth=1.2)
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
        ax.set_title(title or f"Extremal density (mod = {result.value:.4g})")
        return self._finish(ax, save_path, return_ax)

    def plot_trace_interactive(self, e: LoewnerEvolution, title: Optional[str] = None,
                               save_path: Optional[str] = None):
        """
        Plotly figure of a trace with capacity time on hover.

        Returns:
            Optional[go.Figure]: None when plotly is not installed.
        """
        if not HAS_PLOTLY:
            warnings.warn("plotly not installed; interactive trace figures are unavailable")
            return None
        points = e._require_trace()
        fig = go.Figure(go.Scatter(x=points.real, y=points.imag, mode="lines+markers",
                                   marker={"size": 3, "color": e.grid.t_values,
                                           "colorscale": "Viridis", "showscale": True},
                                   text=[f"t={t:.4g}" for t in e.grid.t_values]))
        X, Y = self.viewport
        fig.update_layout(title=title or "Trace", xaxis={"range": [-X, X]},
                          yaxis={"range": [0.0, Y], "scaleanchor": "x"})
        if save_path:
            from .utils.io_utils import open_path

            with open_path(save_path, "w") as fh:
                fh.write(fig.to_html())
            self.log(f"Saved figure to {save_path}")
        return fig
