#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
ForwardSolver: Loewner Evolutions from Driving Functions

This module turns a sampled driving function into a discrete Loewner chain by
composing closed-form slit maps, one per capacity-grid interval, and exposes
the conformal maps g_t and f_t, the trace and the transition hulls of the
resulting evolution.

Key features:
- Vertical steps with the driving frozen at the left endpoint
- Tilted steps whose slit tip lands exactly on the next driving value
- Vectorized backward sweep computing the whole trace in O(N²)
- Transition hulls g_s(K_t \\ K_s) and transition evolutions from time s
- Restriction to [0, t] and the domain H \\ K_t as a DomainSpec

Upstream dependencies:
- core_model for grids, drivings, slit maps and map chains

Downstream applications:
- MetricAnalysis pulls distances back through eval_g / eval_f
- ZipperSolver results convert to evolutions for round trips
- TheoremHarness runs the forward side of every scenario

Version: 0.1.0
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .config import DEFAULT_CONFIG
from .core_model import (
    ArrayLike,
    CapacityGrid,
    ChainTolerances,
    DomainSpec,
    Driving,
    HullCurve,
    MapChain,
    alpha_for_increment,
)
from .exceptions import InvalidArgumentError, InvalidGridError, MissingTraceError
from .utils.geometry import resample_polyline
from .utils.logging_utils import VerboseMixin

STEP_KINDS = ("vertical", "tilted")
ALPHA_CLIP = 1e-9


@dataclass(frozen=True)
class LoewnerEvolution:
    """
    A solved discrete Loewner chain.

    Attributes:
        chain (MapChain): Slit maps on the driving's grid.
        driving (Driving): The driving function.
        trace (Optional[np.ndarray]): γ(t_i) for every grid time, or None.
        step_kind (str): 'vertical' or 'tilted'.
        tip_offset (float): ε_i / √Δt_{i−1} used for the trace tips.
    """

    chain: MapChain
    driving: Driving
    trace: Optional[np.ndarray] = None
    step_kind: str = "vertical"
    tip_offset: float = 0.1

    def __post_init__(self):
        if self.chain.grid.n != self.driving.grid.n or not np.array_equal(
                self.chain.grid.t_values, self.driving.grid.t_values):
            raise InvalidArgumentError("chain and driving must share the capacity grid")
        if self.trace is not None:
            trace = np.asarray(self.trace, dtype=complex).copy()
            if trace.size != self.grid.n:
                raise InvalidArgumentError("trace needs one point per grid time")
            trace[0] = complex(self.driving.values[0], 0.0)
            trace.setflags(write=False)
            object.__setattr__(self, "trace", trace)

    @property
    def grid(self) -> CapacityGrid:
        return self.chain.grid

    @property
    def T(self) -> float:
        return self.grid.T

    def _require_trace(self) -> np.ndarray:
        if self.trace is None:
            raise MissingTraceError("the evolution was solved without trace extraction")
        return self.trace

    def eval_g(self, t: float, z: ArrayLike, on_swallow: str = "raise") -> np.ndarray:
        """
        g_t(z) for z ∈ H \\ K_t.

        Args:
            t (float): Grid time.
            z (ArrayLike): Points in the domain at time t.
            on_swallow (str): 'raise' (DomainError) or 'nan'.

        Returns:
            np.ndarray: Images in the closed upper half-plane.
        """
        i = self.grid.index_of(t)
        return self.chain.apply_forward(z, i, on_swallow=on_swallow)

    def eval_f(self, t: float, w: ArrayLike, boundary: str = "raise") -> np.ndarray:
        """
        f_t(w) = g_t^{-1}(w) for w in the closed upper half-plane.

        ``boundary='extend'`` evaluates real points on branch cuts by the
        boundary values of the inverse steps.
        """
        i = self.grid.index_of(t)
        return self.chain.apply_inverse(w, i, boundary=boundary)

    def hcap(self, t: float) -> float:
        """hcap(K_t) = 2t, exact by construction."""
        return 2.0 * float(self.grid.t_values[self.grid.index_of(t)])

    def trace_until(self, t: float) -> np.ndarray:
        """γ(t_0), ..., γ(t) as a complex array."""
        return self._require_trace()[: self.grid.index_of(t) + 1]

    def hull_at(self, t: float) -> HullCurve:
        """The trace up to time t as a (possibly non-simple) HullCurve."""
        points = self.trace_until(t)
        keep = np.concatenate([[True], np.diff(points) != 0])
        return HullCurve(points[keep], simple=False)

    def domain_at(self, t: float, check_connected: bool = False) -> DomainSpec:
        """The domain H \\ K_t with K_t represented by the trace polyline."""
        if self.grid.index_of(t) == 0:
            return DomainSpec(None)
        return DomainSpec(self.hull_at(t), check_connected=check_connected)

    def transition_points(self, s: float, t: float) -> np.ndarray:
        """
        g_s(γ(u)) for grid times u ∈ [s, t], starting with λ_s.

        Computed as f_{s,u} of the regularized tip points so no point is
        pushed through the slits it sits on.
        """
        self._require_trace()
        i, j = self.grid.index_of(s), self.grid.index_of(t)
        if j <= i:
            raise InvalidArgumentError(f"transition hull needs s < t, got s={s}, t={t}")
        tips = tip_points(self.driving, self.tip_offset)[i + 1:j + 1]
        w = tips.copy()
        for k in range(j - 1, i - 1, -1):
            # tips with index > k still see step k
            m = k - i
            w[m:] = self.chain.apply_inverse(w[m:], 1, boundary="extend", start=k)
        return np.concatenate([[complex(self.driving.values[i], 0.0)], w])

    def transition_hull(self, s: float, t: float, samples: Optional[int] = None) -> HullCurve:
        """
        K_{s,t} = g_s(K_t \\ K_s) as a polyline.

        Args:
            s (float): Start grid time.
            t (float): End grid time, s < t.
            samples (Optional[int]): Resample the polyline to this many points.

        Returns:
            HullCurve: Transition hull; its diameter estimates diam(K_{s,t}).

        Raises:
            MissingTraceError: If the evolution has no trace.
        """
        points = self.transition_points(s, t)
        if samples is not None and samples >= 2:
            points = resample_polyline(points, samples)
        keep = np.concatenate([[True], np.diff(points) != 0])
        points = points[keep]
        points.imag = np.maximum(points.imag, 0.0)
        return HullCurve(points, simple=False)

    def restrict(self, t: float) -> "LoewnerEvolution":
        """The evolution on [0, t]."""
        i = self.grid.index_of(t)
        if i == 0:
            raise InvalidArgumentError("cannot restrict an evolution to time 0")
        trace = None if self.trace is None else self.trace[: i + 1]
        return LoewnerEvolution(self.chain.head(i), self.driving.restricted(t), trace,
                                self.step_kind, self.tip_offset)

    def shifted(self, s: float) -> "LoewnerEvolution":
        """
        Transition evolution u ↦ K_{s, s+u} driven by λ(s + ·).

        Its g_u equals g_{s+u} ∘ g_s^{-1} and its trace is g_s ∘ γ(s + ·).
        """
        i = self.grid.index_of(s)
        if i >= self.grid.n - 1:
            raise InvalidArgumentError("shift time must be before the final time")
        trace = None if self.trace is None else self.transition_points(s, self.T)
        return LoewnerEvolution(self.chain.tail(i), self.driving.shifted(s), trace,
                                self.step_kind, self.tip_offset)


def tip_points(d: Driving, tip_offset: float) -> np.ndarray:
    """λ_i + iε_i with ε_i = tip_offset·√Δt_{i−1} (ε_0 = 0)."""
    eps = np.concatenate([[0.0], tip_offset * np.sqrt(d.grid.dt)])
    return d.values + 1j * eps


class ForwardSolver(VerboseMixin):
    """
    Composition-of-slit-maps solver for the chordal Loewner equation.

    Attributes:
        step_kind (str): Default step kind.
        tip_offset (float): Default regularization of the trace tips.
        tolerances (ChainTolerances): Thresholds of the built chains.
        verbose (bool): Whether to print progress messages.

    Examples:
        >>> solver = ForwardSolver()
        >>> e = solver.solve_forward(Driving.constant(0.0, 1.0, 4000))
        >>> abs(e.trace[-1] - 2j) < 5e-3
        True
    """

    def __init__(self, config: Optional[Dict] = None, verbose: bool = False):
        cfg = (config or DEFAULT_CONFIG)["forward"]
        self.step_kind = cfg.get("step_kind", "vertical")
        self.tip_offset = float(cfg.get("tip_offset", 0.1))
        self.tolerances = ChainTolerances.from_config(config or DEFAULT_CONFIG)
        self.verbose = verbose

    def build_chain(self, d: Driving, step_kind: Optional[str] = None) -> MapChain:
        """
        One slit map per grid interval.

        Vertical steps freeze λ at the left endpoint. Tilted steps take the
        angle for which the slit tip is sent exactly to λ(t_{i+1}).
        """
        step_kind = step_kind or self.step_kind
        if step_kind not in STEP_KINDS:
            raise InvalidArgumentError(f"Unsupported step kind: {step_kind}")
        dt = d.grid.dt
        if dt.size == 0:
            return MapChain(d.grid, np.zeros(0), np.zeros(0), self.tolerances)
        if np.any(dt <= 0):
            raise InvalidGridError("capacity increments must be positive")
        anchors = d.values[:-1]
        if step_kind == "vertical":
            alphas = np.full(dt.size, 0.5)
        else:
            alphas = alpha_for_increment(np.diff(d.values), dt)
            alphas = np.clip(alphas, ALPHA_CLIP, 1.0 - ALPHA_CLIP)
        return MapChain(d.grid, anchors, alphas, self.tolerances)

    def compute_trace(self, chain: MapChain, d: Driving,
                      tip_offset: Optional[float] = None) -> np.ndarray:
        """
        γ(t_i) = f_{t_i}(λ_i + iε_i) for every grid time by a backward sweep.

        At step k all tips with index > k are pulled through the inverse of
        step k, so the cost is quadratic in the number of steps.
        """
        tip_offset = self.tip_offset if tip_offset is None else float(tip_offset)
        w = tip_points(d, tip_offset)
        n_steps = len(chain)
        for k in range(n_steps - 1, -1, -1):
            w[k + 1:] = chain.apply_inverse(w[k + 1:], 1, boundary="extend", start=k)
            if self.verbose and k % max(1, n_steps // 10) == 0:
                self.log(f"trace sweep at step {k}/{n_steps}")
        w[0] = complex(d.values[0], 0.0)
        return w

    def solve_forward(self, d: Driving, step_kind: Optional[str] = None, trace: bool = True,
                      tip_offset: Optional[float] = None) -> LoewnerEvolution:
        """
        Solve the Loewner equation for a sampled driving function.

        Args:
            d (Driving): Driving function.
            step_kind (Optional[str]): 'vertical' or 'tilted'.
            trace (bool): Whether to compute the trace.
            tip_offset (Optional[float]): ε_i / √Δt for the trace tips.

        Returns:
            LoewnerEvolution: Chain, driving and optional trace.

        Raises:
            InvalidGridError: If a capacity increment is not positive.
        """
        step_kind = step_kind or self.step_kind
        self.log(f"Building {d.grid.n - 1} {step_kind} steps up to T={d.T:.4g}")
        chain = self.build_chain(d, step_kind)
        points = None
        offset = self.tip_offset if tip_offset is None else float(tip_offset)
        if trace:
            points = self.compute_trace(chain, d, offset)
            self.log(f"Trace endpoint γ(T) = {points[-1]:.6g}")
        return LoewnerEvolution(chain, d, points, step_kind, offset)


def solve_forward(d: Driving, step_kind: str = "vertical", trace: bool = True,
                  tip_offset: float = 0.1) -> LoewnerEvolution:
    """Functional shortcut for ``ForwardSolver().solve_forward``."""
    return ForwardSolver().solve_forward(d, step_kind, trace, tip_offset)


def eval_g(e: LoewnerEvolution, t: float, z: ArrayLike) -> np.ndarray:
    return e.eval_g(t, z)


def eval_f(e: LoewnerEvolution, t: float, w: ArrayLike, boundary: str = "raise") -> np.ndarray:
    return e.eval_f(t, w, boundary)


def transition_hull(e: LoewnerEvolution, s: float, t: float,
                    samples: Optional[int] = None) -> HullCurve:
    return e.transition_hull(s, t, samples)


def hcap_of_evolution(e: LoewnerEvolution, t: float) -> float:
    return e.hcap(t)
