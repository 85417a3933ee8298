#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
ZipperSolver: Driving Functions from Simple Slits

This module runs the zipper direction of the Loewner correspondence: a simple
polyline slit is unzipped one vertex at a time by elementary slit maps, which
yields the capacity parameterization of the curve and its driving function.

Key features:
- Tilted (default) and vertical zipper steps
- Capacity reparameterization of a curve
- Transition-hull diameter profiles on the fitted chain
- Weak-Lip(1/2) test of a driving against c·√(h log(1/h))

Upstream dependencies:
- core_model for HullCurve, MapChain and the slit-map kernels

Downstream applications:
- ForwardSolver round trips (ZipperResult.to_evolution)
- TheoremHarness slit and sub-invariance scenarios

Version: 0.1.0
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd

from .config import DEFAULT_CONFIG
from .core_model import (
    CapacityGrid,
    ChainTolerances,
    Driving,
    HullCurve,
    MapChain,
    slit_forward,
    tilted_parameters_for_tip,
    tilted_tip_image,
)
from .exceptions import DegenerateStepError, InvalidArgumentError, NotASimpleSlitError
from .forward_solver import LoewnerEvolution
from .utils.geometry import point_set_diameter
from .utils.logging_utils import VerboseMixin


@dataclass(frozen=True)
class ZipperResult:
    """
    Output of the zipper.

    Attributes:
        driving (Driving): Driving on the accumulated capacity grid.
        capacity_times (np.ndarray): t_k assigned to vertex k (t_0 = 0).
        fitted_chain (MapChain): One fitted slit map per vertex after the base.
        curve (HullCurve): The input curve.
        step_kind (str): 'tilted' or 'vertical'.
    """

    driving: Driving
    capacity_times: np.ndarray
    fitted_chain: MapChain
    curve: HullCurve
    step_kind: str = "tilted"

    @property
    def T(self) -> float:
        return float(self.capacity_times[-1])

    def to_evolution(self) -> LoewnerEvolution:
        """The fitted chain as an evolution whose trace is the input curve."""
        return LoewnerEvolution(self.fitted_chain, self.driving, self.curve.points.copy(),
                                self.step_kind)


class ZipperSolver(VerboseMixin):
    """
    Zipper extraction of driving functions and related curve operations.

    Attributes:
        step_kind (str): Default step kind for extraction.
        tolerances (ChainTolerances): Thresholds of the fitted chains.
        verbose (bool): Whether to print progress messages.

    Examples:
        >>> from loewnerlab.curves import segment_curve
        >>> z = ZipperSolver().extract_driving(segment_curve(2.0, 0.5, 50))
        >>> round(z.T, 6)
        1.0
    """

    def __init__(self, config: Optional[Dict] = None, verbose: bool = False):
        cfg = (config or DEFAULT_CONFIG)["inverse"]
        self.step_kind = cfg.get("step_kind", "tilted")
        self.tolerances = ChainTolerances.from_config(config or DEFAULT_CONFIG)
        self.verbose = verbose

    def extract_driving(self, curve: HullCurve, step_kind: Optional[str] = None) -> ZipperResult:
        """
        Unzip a simple slit vertex by vertex.

        In the current coordinates the next vertex w is made the tip of an
        elementary slit from the current driving value (tilted) or from
        Re(w) (vertical); the remaining vertices are pushed through its
        g-side map.

        Args:
            curve (HullCurve): Simple polyline, first point real.
            step_kind (Optional[str]): 'tilted' or 'vertical'.

        Returns:
            ZipperResult: Driving, capacity times and fitted chain.

        Raises:
            NotASimpleSlitError: If a vertex reaches the real axis.
            DegenerateStepError: If a fitted capacity is not positive.
        """
        step_kind = step_kind or self.step_kind
        if step_kind not in ("tilted", "vertical"):
            raise InvalidArgumentError(f"Unsupported step kind: {step_kind}")
        if not curve.simple:
            raise NotASimpleSlitError("the zipper only accepts curves flagged as simple")
        points = curve.points
        m = points.size - 1
        self.log(f"Unzipping {m} vertices with {step_kind} steps")

        w = points[1:].copy()
        lam = curve.base
        values = np.empty(m + 1)
        values[0] = lam
        anchors, dts, alphas = np.empty(m), np.empty(m), np.empty(m)
        for k in range(m):
            u = w[k] - lam
            if not u.imag > self.tolerances.boundary:
                raise NotASimpleSlitError(
                    f"vertex {k + 1} is not in the upper half-plane after unzipping")
            if step_kind == "tilted":
                dt, alpha = tilted_parameters_for_tip(u)
                anchor = lam
                lam = anchor + tilted_tip_image(dt, alpha)
            else:
                anchor = float(w[k].real)
                dt, alpha = 0.25 * float(w[k].imag) ** 2, 0.5
                lam = anchor
            if not (np.isfinite(dt) and dt > 0):
                raise DegenerateStepError(f"step {k} has capacity increment {dt}")
            anchors[k], dts[k], alphas[k] = anchor, dt, alpha
            values[k + 1] = lam
            if k + 1 < m:
                rest = anchor + slit_forward(w[k + 1:] - anchor, dt, alpha, self.tolerances)
                if np.any(~np.isfinite(rest)) or np.any(rest.imag <= self.tolerances.boundary):
                    raise NotASimpleSlitError(
                        f"a vertex after {k + 1} was swallowed; the curve is not a simple slit")
                w[k + 1:] = rest
            if self.verbose and k % max(1, m // 10) == 0:
                self.log(f"step {k}: t = {dts[:k + 1].sum():.6g}, λ = {lam:.6g}")

        times = np.concatenate([[0.0], np.cumsum(dts)])
        grid = CapacityGrid(times)
        driving = Driving(grid, values, "samples", {})
        chain = MapChain(grid, anchors, alphas, self.tolerances)
        return ZipperResult(driving, grid.t_values, chain, curve, step_kind)

    def capacity_parameterize(self, curve: HullCurve, n: int,
                              zipper: Optional[ZipperResult] = None) -> HullCurve:
        """
        Resample a curve so vertex k sits at capacity time kT/n.

        Args:
            curve (HullCurve): Simple slit.
            n (int): Number of capacity intervals.
            zipper (Optional[ZipperResult]): Reuse an existing extraction.

        Returns:
            HullCurve: n + 1 vertices, the base first.
        """
        if n < 1:
            raise InvalidArgumentError(f"n must be positive, got {n}")
        zipper = zipper or self.extract_driving(curve)
        times = zipper.capacity_times
        targets = np.linspace(0.0, times[-1], n + 1)
        index = np.interp(targets, times, np.arange(times.size, dtype=float))
        lo = np.minimum(np.floor(index).astype(int), times.size - 2)
        frac = index - lo
        p = curve.points
        resampled = p[lo] + frac * (p[lo + 1] - p[lo])
        resampled[0] = p[0]
        resampled[-1] = p[-1]
        return HullCurve(resampled, curve.simple, curve.filled)

    def transition_diameter_profile(self, zipper: ZipperResult, delta: float) -> pd.DataFrame:
        """
        diam(K_{s, s+δ}) for every capacity time s with s + δ <= T.

        The transition hull at s is the image under the fitted g_s of the
        vertices with capacity times in (s, s+δ], together with λ_s; the
        window end is interpolated between the bracketing vertices.

        Args:
            zipper (ZipperResult): Fitted chain and curve.
            delta (float): Window length, at least the largest grid spacing.

        Returns:
            pd.DataFrame: Columns 's', 'diam', 'lambda_jump'. The empirical
            ω₂(δ) (max diam) is stored in ``df.attrs['omega2']``.

        Raises:
            InvalidArgumentError: If δ is below the grid spacing.
        """
        grid = zipper.fitted_chain.grid
        times = grid.t_values
        if delta < grid.max_spacing * (1 - 1e-12):
            raise InvalidArgumentError(
                f"delta {delta:.3e} is below the largest capacity spacing {grid.max_spacing:.3e}")
        chain = zipper.fitted_chain
        lam = zipper.driving.values
        w = zipper.curve.points.copy()
        T = times[-1]
        rows = []
        for k in range(times.size - 1):
            s = times[k]
            if s + delta > T * (1 + 1e-12):
                break
            end = s + delta
            j_end = int(np.searchsorted(times, end * (1 + 1e-12), side="right") - 1)
            window = [complex(lam[k], 0.0)]
            window.extend(w[k + 1:j_end + 1])
            if j_end + 1 < times.size and times[j_end] < end:
                frac = (end - times[j_end]) / (times[j_end + 1] - times[j_end])
                left = w[j_end] if j_end > k else complex(lam[k], 0.0)
                window.append(left + frac * (w[j_end + 1] - left))
            rows.append({
                "s": s,
                "diam": point_set_diameter(np.asarray(window)),
                "lambda_jump": abs(float(zipper.driving.value_at(end)) - lam[k]),
            })
            step = chain[k]
            if k + 2 < w.size:
                w[k + 2:] = step.lam + slit_forward(w[k + 2:] - step.lam, step.dt, step.alpha,
                                                      chain.tol)
            # the tip of step k lands on the next driving value
            w[k + 1] = complex(lam[k + 1], 0.0)
        profile = pd.DataFrame(rows, columns=["s", "diam", "lambda_jump"])
        profile.attrs["omega2"] = float(profile["diam"].max()) if len(profile) else 0.0
        profile.attrs["delta"] = float(delta)
        self.log(f"ω₂({delta:.4g}) = {profile.attrs['omega2']:.6g} over {len(profile)} windows")
        return profile


def weak_lip_check(d: Driving, c: float) -> Dict[str, object]:
    """
    Test |λ_s − λ_t| <= c·√(h log(1/h)), h = |s − t|, on all pairs with h <= 1/2.

    Args:
        d (Driving): Driving with grid spacing at most 1/4.
        c (float): Positive constant.

    Returns:
        Dict[str, object]: 'passed', 'worst_pair' (s, t) and 'worst_ratio'
        = max |λ_s − λ_t| / √(h log(1/h)).

    Examples:
        >>> weak_lip_check(Driving.constant(0.0, 0.5, 100), 1.0)["passed"]
        True
    """
    if not c > 0:
        raise InvalidArgumentError(f"c must be positive, got {c}")
    t, v = d.grid.t_values, d.values
    if d.grid.n < 2:
        raise InvalidArgumentError("the weak-Lip test needs at least 2 samples")
    if d.grid.max_spacing > 0.25:
        raise InvalidArgumentError("grid spacing must be at most 1/4")
    best, pair = 0.0, (float(t[0]), float(t[1]))
    for lag in range(1, t.size):
        h = t[lag:] - t[:-lag]
        ok = h <= 0.5
        if not np.any(ok):
            break
        ratio = np.abs(v[lag:] - v[:-lag]) / np.sqrt(h * np.log(1.0 / h))
        ratio = np.where(ok, ratio, 0.0)
        i = int(np.argmax(ratio))
        if ratio[i] > best:
            best, pair = float(ratio[i]), (float(t[i]), float(t[i + lag]))
    return {"passed": bool(best <= c), "worst_pair": pair, "worst_ratio": best}


def extract_driving(curve: HullCurve, step_kind: str = "tilted") -> ZipperResult:
    """Functional shortcut for ``ZipperSolver().extract_driving``."""
    return ZipperSolver().extract_driving(curve, step_kind)


def capacity_parameterize(curve: HullCurve, n: int) -> HullCurve:
    return ZipperSolver().capacity_parameterize(curve, n)


def transition_diameter_profile(zipper: ZipperResult, delta: float) -> pd.DataFrame:
    return ZipperSolver().transition_diameter_profile(zipper, delta)


def lambda_diameter_margins(profile: pd.DataFrame, dt_max: float) -> Tuple[bool, float]:
    """
    Check |λ_s − λ_{s+δ}| <= 4·diam(K_{s,s+δ}) + 10√Δt over a profile.

    Returns:
        Tuple[bool, float]: (all hold, smallest margin).
    """
    if len(profile) == 0:
        return True, np.inf
    margin = 4.0 * profile["diam"] + 10.0 * np.sqrt(dt_max) - profile["lambda_jump"]
    return bool((margin >= 0).all()), float(margin.min())
