#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Core Model: Grids, Drivings, Hulls and Slit-Map Chains

This module holds the immutable data types every other loewnerlab module
works with, together with the closed-form elementary slit maps and the
driving-function operations.

Key features:
- CapacityGrid / Driving containers with uniform and non-uniform grids
- HullCurve polylines with diameter, radius and simplicity helpers
- ElementarySlitMap kernels (vertical and tilted steps, both directions)
- MapChain composition of slit maps with swallowing / branch-cut detection
- DomainSpec for H \\ K with exact boundary distance and connectivity check
- Driving operations: resampling, Lip(1/2) semi-norm, modulus of continuity

Upstream dependencies:
- numpy / scipy for vectorized kernels, scipy.ndimage for connectivity

Downstream applications:
- ForwardSolver and ZipperSolver build MapChains
- WhitneyGeometry, MetricAnalysis and ModulusEstimator consume DomainSpecs
- TheoremHarness consumes Drivings and their moduli of continuity

Version: 0.1.0
"""

import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from matplotlib.path import Path
from scipy import ndimage
from scipy.optimize import minimize_scalar

from .exceptions import (
    BoundaryEvaluationError,
    DomainError,
    InvalidArgumentError,
    InvalidCurveError,
    InvalidDomainError,
    InvalidGridError,
    NotASimpleSlitError,
)
from .utils.geometry import (
    point_segment_distance,
    point_set_diameter,
    polyline_segments,
    rasterize_polyline,
    segments_intersect,
)

ArrayLike = Union[complex, float, Sequence, np.ndarray]

BOUNDARY_TOL = 1e-12
PAIRWISE_LIMIT = 20_000


@dataclass(frozen=True)
class ChainTolerances:
    """
    Thresholds used when composing slit maps.

    Attributes:
        swallow (float): Distance to the anchor on ℝ at which a point is swallowed.
        clamp (float): Relative depth below ℝ clamped back to the axis.
        boundary (float): |Im w| below this counts as lying on ℝ.
        newton_max_iter (int): Newton iterations of the tilted g-side step.
        newton_tol (float): Residual and step tolerance of that Newton solve.
        newton_max_halvings (int): Step halvings per damped Newton update.
    """

    swallow: float = 1e-12
    clamp: float = 1e-12
    boundary: float = BOUNDARY_TOL
    newton_max_iter: int = 60
    newton_tol: float = 1e-14
    newton_max_halvings: int = 30

    @classmethod
    def from_config(cls, config: Optional[Dict] = None) -> "ChainTolerances":
        """Read the ``tolerances`` and ``newton`` blocks of a config dictionary."""
        config = config or {}
        tol = config.get("tolerances", {})
        newton = config.get("newton", {})
        default = cls()
        return cls(float(tol.get("swallow", default.swallow)),
                   float(tol.get("clamp", default.clamp)),
                   float(tol.get("boundary", default.boundary)),
                   int(newton.get("max_iter", default.newton_max_iter)),
                   float(newton.get("tol", default.newton_tol)),
                   int(newton.get("max_halvings", default.newton_max_halvings)))


DEFAULT_TOLERANCES = ChainTolerances()


# --------------------------------------------------------------------------
# Grids and drivings
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CapacityGrid:
    """
    Strictly increasing capacity times t_0 = 0 < t_1 < ... < t_n = T.

    hcap(K_{t_i}) = 2 t_i on every chain built over the grid.

    Examples:
        >>> grid = CapacityGrid.uniform(1.0, 5)
        >>> grid.t_values
        array([0.  , 0.25, 0.5 , 0.75, 1.  ])
    """

    t_values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t_values, dtype=float).copy()
        if t.ndim != 1 or t.size < 1:
            raise InvalidGridError("a capacity grid needs at least one time")
        if not np.all(np.isfinite(t)):
            raise InvalidGridError("capacity times must be finite")
        if t[0] != 0.0:
            raise InvalidGridError(f"capacity grid must start at 0, got {t[0]}")
        if np.any(np.diff(t) <= 0):
            raise InvalidGridError("capacity times must be strictly increasing")
        t.setflags(write=False)
        object.__setattr__(self, "t_values", t)

    @classmethod
    def uniform(cls, T: float, n: int) -> "CapacityGrid":
        """Uniform n-point grid over [0, T]."""
        if n < 2:
            raise InvalidArgumentError(f"uniform grid needs n >= 2, got {n}")
        if not T > 0:
            raise InvalidGridError(f"final time must be positive, got {T}")
        t = np.linspace(0.0, T, n)
        return cls(t)

    @property
    def T(self) -> float:
        return float(self.t_values[-1])

    @property
    def n(self) -> int:
        return int(self.t_values.size)

    @property
    def dt(self) -> np.ndarray:
        return np.diff(self.t_values)

    @property
    def max_spacing(self) -> float:
        return float(self.dt.max()) if self.n > 1 else 0.0

    @property
    def min_spacing(self) -> float:
        return float(self.dt.min()) if self.n > 1 else 0.0

    def index_of(self, t: float, tol: float = 1e-12) -> int:
        """
        Index i with t_i = t.

        Raises:
            InvalidArgumentError: If t is not a grid time.
        """
        scale = max(1.0, self.T)
        i = int(np.searchsorted(self.t_values, t))
        for j in (i - 1, i):
            if 0 <= j < self.n and abs(self.t_values[j] - t) <= tol * scale:
                return j
        raise InvalidArgumentError(f"time {t} is not on the capacity grid")

    def index_at_or_before(self, t: float) -> int:
        """Largest index i with t_i <= t (with a relative tolerance)."""
        scale = max(1.0, self.T)
        return int(np.searchsorted(self.t_values, t + 1e-12 * scale, side="right") - 1)

    def tail(self, start: int) -> "CapacityGrid":
        """Grid of the times t_start, ..., t_n shifted to start at 0."""
        return CapacityGrid(self.t_values[start:] - self.t_values[start])


@dataclass(frozen=True)
class Driving:
    """
    Driving function sampled on a capacity grid.

    Between samples the driving is the linear interpolant.

    Attributes:
        grid (CapacityGrid): Sample times.
        values (np.ndarray): λ(t_i).
        kind (str): Origin tag used by the JSON format.
        params (dict): Generator parameters used by the JSON format.
    """

    grid: CapacityGrid
    values: np.ndarray
    kind: str = "samples"
    params: Dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).copy()
        if v.shape != self.grid.t_values.shape:
            raise InvalidArgumentError(
                f"driving has {v.size} values for {self.grid.n} grid times")
        if not np.all(np.isfinite(v)):
            raise InvalidArgumentError("driving values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    # Constructors -----------------------------------------------------------
    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], T: float, n: int,
                      kind: str = "samples", params: Optional[Dict] = None) -> "Driving":
        """Sample fn on the uniform n-point grid over [0, T]."""
        grid = CapacityGrid.uniform(T, n)
        values = np.broadcast_to(np.asarray(fn(grid.t_values), dtype=float), grid.t_values.shape)
        return cls(grid, values, kind, dict(params or {}))

    @classmethod
    def constant(cls, c: float, T: float, n: int) -> "Driving":
        return cls.from_function(lambda t: np.full_like(t, c), T, n, "constant", {"c": c})

    @classmethod
    def linear(cls, slope: float, T: float, n: int, c: float = 0.0) -> "Driving":
        return cls.from_function(lambda t: c + slope * t, T, n, "linear",
                                 {"slope": slope, "c": c})

    @classmethod
    def sqrt(cls, c: float, T: float, n: int) -> "Driving":
        """λ(t) = c√t, whose trace is a ray from 0."""
        return cls.from_function(lambda t: c * np.sqrt(t), T, n, "sqrt", {"c": c})

    @classmethod
    def from_kind(cls, kind: str, T: float, n: int, params: Optional[Dict] = None,
                  values: Optional[Sequence[float]] = None) -> "Driving":
        """
        Materialize a driving from its JSON description.

        Args:
            kind (str): One of 'constant', 'linear', 'sqrt', 'samples', 'brownian'.
            T (float): Final capacity time.
            n (int): Number of samples.
            params (Optional[Dict]): Generator parameters.
            values (Optional[Sequence[float]]): Samples for kind 'samples'.

        Returns:
            Driving: The sampled driving.
        """
        params = dict(params or {})
        if kind == "constant":
            return cls.constant(float(params.get("c", 0.0)), T, n)
        if kind == "linear":
            return cls.linear(float(params.get("slope", 1.0)), T, n, float(params.get("c", 0.0)))
        if kind == "sqrt":
            return cls.sqrt(float(params.get("c", 1.0)), T, n)
        if kind == "brownian":
            from .harness import brownian_driving

            return brownian_driving(float(params.get("kappa", 1.0)), T, n,
                                    int(params.get("seed", 0)))
        if kind == "samples":
            if values is None:
                raise InvalidArgumentError("driving of type 'samples' needs values")
            values = np.asarray(values, dtype=float)
            if "t" in params:
                grid = CapacityGrid(np.asarray(params["t"], dtype=float))
            else:
                grid = CapacityGrid.uniform(T, values.size)
            return cls(grid, values, "samples", params)
        raise InvalidArgumentError(f"Unsupported driving type: {kind}")

    # Accessors ----------------------------------------------------------------
    @property
    def T(self) -> float:
        return self.grid.T

    def value_at(self, t: ArrayLike) -> np.ndarray:
        """Linear interpolation of the samples."""
        return np.interp(t, self.grid.t_values, self.values)

    def shifted(self, s: float) -> "Driving":
        """Driving u ↦ λ(s + u) on the grid times from s on."""
        i = self.grid.index_of(s)
        return Driving(self.grid.tail(i), self.values[i:], "samples", {})

    def restricted(self, t: float) -> "Driving":
        """Driving on [0, t]."""
        i = self.grid.index_of(t)
        return Driving(CapacityGrid(self.grid.t_values[:i + 1]), self.values[:i + 1],
                       self.kind, dict(self.params))

    def scaled(self, r: float) -> "Driving":
        """Loewner scaling: t ↦ r²t, λ ↦ rλ."""
        return Driving(CapacityGrid(self.grid.t_values * r ** 2), self.values * r,
                       "samples", {})

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


def resample_driving(d: Driving, n: int) -> Driving:
    """
    Resample a driving on the uniform n-point grid over [0, T].

    Values are linearly interpolated and the endpoints are preserved exactly.
    Resampling twice with the same n returns the same samples.

    Args:
        d (Driving): Driving to resample.
        n (int): Number of samples, at least 2.

    Returns:
        Driving: Resampled driving.

    Raises:
        InvalidArgumentError: If n < 2.

    Examples:
        >>> d = Driving(CapacityGrid(np.array([0.0, 1.0])), np.array([0.0, 1.0]))
        >>> resample_driving(d, 3).values
        array([0. , 0.5, 1. ])
    """
    if n < 2:
        raise InvalidArgumentError(f"resampling needs n >= 2, got {n}")
    grid = CapacityGrid.uniform(d.T, n)
    if grid.n == d.grid.n and np.array_equal(grid.t_values, d.grid.t_values):
        return Driving(grid, d.values, d.kind, dict(d.params))
    values = np.interp(grid.t_values, d.grid.t_values, d.values)
    values[0], values[-1] = d.values[0], d.values[-1]
    return Driving(grid, values, "samples", {})


def lip_half_norm(d: Driving, window: Optional[float] = None) -> float:
    """
    Discrete Lip(1/2) semi-norm max |λ_s − λ_t| / √|s − t| over grid pairs.

    Grids above 2·10⁴ points require ``window`` and then only pairs with
    |s − t| <= window are scanned.

    Args:
        d (Driving): Driving with at least 2 samples.
        window (Optional[float]): Maximal pair separation to scan.

    Returns:
        float: The semi-norm.
    """
    t, v = d.grid.t_values, d.values
    n = t.size
    if n < 2:
        raise InvalidArgumentError("the Lip(1/2) semi-norm needs at least 2 samples")
    if n > PAIRWISE_LIMIT and window is None:
        raise InvalidArgumentError(
            f"grids above {PAIRWISE_LIMIT} points need a window for the pair scan")
    best = 0.0
    for i in range(n - 1):
        stop = n if window is None else int(np.searchsorted(t, t[i] + window, side="right"))
        if stop <= i + 1:
            continue
        ratio = np.abs(v[i + 1:stop] - v[i]) / np.sqrt(t[i + 1:stop] - t[i])
        best = max(best, float(ratio.max()))
    return best


class _SparseTable:
    """Range max/min queries in O(1) after O(n log n) preprocessing."""

    def __init__(self, values: np.ndarray):
        n = values.size
        levels = max(1, int(np.floor(np.log2(n))) + 1)
        self.max_table = np.full((levels, n), -np.inf)
        self.min_table = np.full((levels, n), np.inf)
        self.max_table[0] = values
        self.min_table[0] = values
        for k in range(1, levels):
            half = 1 << (k - 1)
            width = n - (1 << k) + 1
            if width <= 0:
                break
            self.max_table[k, :width] = np.maximum(self.max_table[k - 1, :width],
                                                   self.max_table[k - 1, half:half + width])
            self.min_table[k, :width] = np.minimum(self.min_table[k - 1, :width],
                                                   self.min_table[k - 1, half:half + width])

    def spread(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """max − min over the inclusive index ranges [lo, hi]."""
        length = hi - lo + 1
        k = np.floor(np.log2(length)).astype(int)
        right = hi - (1 << k) + 1
        top = np.maximum(self.max_table[k, lo], self.max_table[k, right])
        bottom = np.minimum(self.min_table[k, lo], self.min_table[k, right])
        return top - bottom


def modulus_of_continuity(d: Driving, deltas: Sequence[float]) -> pd.DataFrame:
    """
    Empirical modulus of continuity ω(δ) = max_{|s−t| ≤ δ} |λ_s − λ_t|.

    Args:
        d (Driving): Driving function.
        deltas (Sequence[float]): Window sizes, each at least the smallest
            grid spacing.

    Returns:
        pd.DataFrame: Columns 'delta' and 'omega', one row per δ.

    Raises:
        InvalidArgumentError: If a δ is below the grid resolution.
    """
    t, v = d.grid.t_values, d.values
    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    resolution = d.grid.min_spacing
    if np.any(deltas < resolution * (1 - 1e-12)):
        raise InvalidArgumentError(
            f"delta below grid resolution {resolution:.3e}: {deltas.min():.3e}")
    table = _SparseTable(v)
    lo = np.arange(t.size)
    omegas = []
    for delta in deltas:
        hi = np.searchsorted(t, t + delta * (1 + 1e-12), side="right") - 1
        omegas.append(float(table.spread(lo, hi).max()))
    return pd.DataFrame({"delta": deltas, "omega": omegas})


# --------------------------------------------------------------------------
# Hull curves
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HullCurve:
    """
    Polyline in the closed upper half-plane generating a hull.

    Attributes:
        points (np.ndarray): Complex vertices, points[0] real (the base).
        simple (bool): Claimed simplicity; when true all later vertices lie in H.
        filled (bool): Treat the polyline as the outline of a filled region.
    """

    points: np.ndarray
    simple: bool = True
    filled: bool = False

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.points, dtype=complex)).copy()
        if p.size == 0:
            raise InvalidCurveError("a hull curve needs at least one point")
        if not np.all(np.isfinite(p)):
            raise InvalidCurveError("hull points must be finite")
        if abs(p[0].imag) > BOUNDARY_TOL:
            raise InvalidCurveError(f"the first point must be real, got {p[0]}")
        p[0] = complex(p[0].real, 0.0)
        if np.any(p.imag < -BOUNDARY_TOL):
            raise InvalidCurveError("hull points must lie in the closed upper half-plane")
        if p.size > 1 and np.any(np.diff(p) == 0):
            raise InvalidCurveError("consecutive hull points must be distinct")
        if self.simple and p.size > 1 and np.any(p[1:].imag <= 0):
            k = int(np.argmax(p[1:].imag <= 0)) + 1
            raise NotASimpleSlitError(f"vertex {k} = {p[k]} is not in the upper half-plane")
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    @property
    def base(self) -> float:
        return float(self.points[0].real)

    def __len__(self) -> int:
        return int(self.points.size)

    def segments(self) -> Tuple[np.ndarray, np.ndarray]:
        """Segment endpoints, including the closing edge for filled outlines."""
        p = self.points
        if self.filled and p.size > 2:
            p = np.append(p, p[0])
        return polyline_segments(p)

    def diameter(self) -> float:
        return point_set_diameter(self.points)

    def rad(self) -> Tuple[float, float]:
        """
        Smallest r with K ⊂ B(x, r) for some real x.

        Returns:
            Tuple[float, float]: (r, x).
        """
        p = self.points
        lo, hi = float(p.real.min()), float(p.real.max())
        if hi - lo < 1e-15:
            return float(np.abs(p - lo).max()), lo
        res = minimize_scalar(lambda x: float(np.abs(p - x).max()), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-12 * max(1.0, hi - lo)})
        return float(res.fun), float(res.x)

    def translated(self, x0: float) -> "HullCurve":
        return HullCurve(self.points + x0, self.simple, self.filled)

    def scaled(self, r: float) -> "HullCurve":
        return HullCurve(self.points * r, self.simple, self.filled)

    def bounds(self) -> Tuple[float, float, float, float]:
        p = self.points
        return float(p.real.min()), float(p.real.max()), 0.0, float(p.imag.max())

    def is_self_intersecting(self, tol: float = 1e-3, max_points: int = 2000) -> bool:
        """
        Numeric simplicity test: do non-adjacent segments come within tol?

        Long polylines are thinned to ``max_points`` vertices first.
        """
        p = self.points
        if p.size > max_points:
            p = p[np.unique(np.linspace(0, p.size - 1, max_points).astype(int))]
        a, b = p[:-1], p[1:]
        m = a.size
        if m < 3:
            return False
        for i in range(m - 2):
            j = np.arange(i + 2, m)
            hit = segments_intersect(a[i], b[i], a[j], b[j], tol=tol)
            if np.any(hit):
                return True
        return False


# --------------------------------------------------------------------------
# Elementary slit maps
# --------------------------------------------------------------------------

def _closed_upper(u: np.ndarray) -> np.ndarray:
    """Same points with imaginary parts forced to be >= +0.0."""
    out = np.empty(u.shape, dtype=complex)
    out.real = u.real
    out.imag = np.where(u.imag > 0, u.imag, 0.0)
    return out


def tilted_roots(dt: float, alpha: float) -> Tuple[float, float]:
    """
    Preimages x_l < 0 < x_r of the slit base for the tilted power map.

    The inverse step is f(u) = (u − x_l)^{1−α} (u − x_r)^α; it maps H onto H
    minus a segment from 0 at angle απ with hcap 2·dt.
    """
    c = 2.0 * np.sqrt(dt)
    return -c * np.sqrt(alpha / (1.0 - alpha)), c * np.sqrt((1.0 - alpha) / alpha)


def tilted_tip_image(dt: float, alpha: float) -> float:
    """Real point the slit tip is sent to by the forward step (relative to λ)."""
    return 2.0 * np.sqrt(dt) * (1.0 - 2.0 * alpha) / np.sqrt(alpha * (1.0 - alpha))


def tilted_tip(dt: float, alpha: float) -> complex:
    """Tip of the slit relative to λ."""
    length = 2.0 * np.sqrt(dt) * alpha ** (alpha - 0.5) * (1.0 - alpha) ** (0.5 - alpha)
    return length * np.exp(1j * np.pi * alpha)


def tilted_parameters_for_tip(w: complex) -> Tuple[float, float]:
    """
    Closed-form (dt, α) of the slit from 0 whose tip is w ∈ H.

    α = arg(w)/π and the slit length |w| fixes dt.
    """
    alpha = float(np.angle(w)) / np.pi
    length = abs(w)
    dt = 0.25 * length ** 2 * alpha ** (1.0 - 2.0 * alpha) * (1.0 - alpha) ** (2.0 * alpha - 1.0)
    return dt, alpha


def alpha_for_increment(dlam: np.ndarray, dt: np.ndarray) -> np.ndarray:
    """Angle parameter whose tip image equals the driving increment dlam."""
    r = dlam / (2.0 * np.sqrt(dt))
    return 0.5 * (1.0 - r / np.sqrt(4.0 + r ** 2))


def _vertical_forward(u: np.ndarray, dt: float) -> np.ndarray:
    # branch cut of sqrt(1 + 4dt/u²) sits exactly on the slit
    with np.errstate(divide="ignore", invalid="ignore"):
        return u * np.sqrt(1.0 + 4.0 * dt / u ** 2)


def _vertical_inverse(u: np.ndarray, dt: float) -> np.ndarray:
    c = 2.0 * np.sqrt(dt)
    u = _closed_upper(u)
    return np.sqrt(u + c) * np.sqrt(u - c)


def _tilted_log(z: np.ndarray, xl: float, xr: float, alpha: float) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return (1.0 - alpha) * np.log(z - xl) + alpha * np.log(z - xr)


def _tilted_inverse(u: np.ndarray, dt: float, alpha: float) -> np.ndarray:
    xl, xr = tilted_roots(dt, alpha)
    u = _closed_upper(u)
    with np.errstate(over="ignore", invalid="ignore"):
        return np.exp(_tilted_log(u, xl, xr, alpha))


def _tilted_forward(u: np.ndarray, dt: float, alpha: float,
                    tol: ChainTolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Solve f(z) = u for z ∈ H by damped Newton on log f."""
    xl, xr = tilted_roots(dt, alpha)
    u = _closed_upper(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        target = np.log(u)
    # vertical-step image as starting guess, both agree to O(1/u) far out
    z = _closed_upper(_vertical_forward(u, dt))
    residual = _tilted_log(z, xl, xr, alpha) - target
    active = np.isfinite(residual) & (np.abs(residual) > tol.newton_tol)
    for _ in range(tol.newton_max_iter):
        if not np.any(active):
            break
        idx = np.flatnonzero(active)
        zi = z[idx]
        ri = residual[idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            deriv = (1.0 - alpha) / (zi - xl) + alpha / (zi - xr)
            step = ri / deriv
        norm = np.abs(ri)
        scale = np.ones(idx.size)
        new_z = _closed_upper(zi - step)
        new_r = _tilted_log(new_z, xl, xr, alpha) - target[idx]
        worse = ~(np.abs(new_r) < norm)
        for _ in range(tol.newton_max_halvings):
            if not np.any(worse):
                break
            scale[worse] *= 0.5
            trial = _closed_upper(zi[worse] - scale[worse] * step[worse])
            trial_r = _tilted_log(trial, xl, xr, alpha) - target[idx][worse]
            new_z[worse] = trial
            new_r[worse] = trial_r
            worse_idx = np.flatnonzero(worse)
            better = np.abs(trial_r) < norm[worse]
            worse[worse_idx[better]] = False
        z[idx] = new_z
        residual[idx] = new_r
        moved = np.abs(scale * step)
        done = ((np.abs(new_r) <= tol.newton_tol)
                | (moved <= tol.newton_tol * (1.0 + np.abs(new_z))))
        active[idx[done]] = False
    if np.any(active & (np.abs(residual) > 1e-8)):
        warnings.warn(f"tilted-step inversion did not converge on {int(active.sum())} points")
    return z


@dataclass(frozen=True)
class ElementarySlitMap:
    """
    One step of a MapChain.

    ``forward`` is the g-side map sending H minus the slit onto H with
    g(z) = z + 2·dt/z + O(1/z²); ``inverse`` grows the slit back.

    Attributes:
        kind (str): 'vertical' or 'tilted'.
        lam (float): Real anchor (driving value at the slit base).
        dt (float): Capacity increment, hcap of the slit is 2·dt.
        alpha (float): Slit angle over π, 1/2 for vertical steps.
    """

    kind: str
    lam: float
    dt: float
    alpha: float = 0.5

    def __post_init__(self):
        if self.kind not in ("vertical", "tilted"):
            raise InvalidArgumentError(f"Unsupported step kind: {self.kind}")
        if not self.dt > 0:
            raise InvalidArgumentError(f"step capacity must be positive, got {self.dt}")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidArgumentError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.kind == "vertical" and self.alpha != 0.5:
            raise InvalidArgumentError("vertical steps have alpha = 1/2")

    @property
    def hcap(self) -> float:
        return 2.0 * self.dt

    def tip(self) -> complex:
        return self.lam + tilted_tip(self.dt, self.alpha)

    def tip_image(self) -> float:
        return self.lam + tilted_tip_image(self.dt, self.alpha)

    def forward(self, w: ArrayLike) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        return self.lam + slit_forward(w - self.lam, self.dt, self.alpha)

    def inverse(self, w: ArrayLike) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        return self.lam + slit_inverse(w - self.lam, self.dt, self.alpha)


def slit_forward(u: np.ndarray, dt: float, alpha: float,
                 tol: ChainTolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """g-side step relative to the anchor, H \\ slit -> H."""
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    if alpha == 0.5:
        return _vertical_forward(u, dt)
    return _tilted_forward(u, dt, alpha, tol)


def slit_inverse(u: np.ndarray, dt: float, alpha: float) -> np.ndarray:
    """f-side step relative to the anchor, H -> H \\ slit."""
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    if alpha == 0.5:
        return _vertical_inverse(u, dt)
    return _tilted_inverse(u, dt, alpha)


# --------------------------------------------------------------------------
# Map chains
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MapChain:
    """
    Ordered slit maps, one per grid interval.

    Step i maps out the capacity 2·(t_{i+1} − t_i); the composition of the
    first i steps is g_{t_i}. Parameters are stored as arrays.

    Attributes:
        grid (CapacityGrid): Capacity times.
        anchors (np.ndarray): λ of each step.
        alphas (np.ndarray): Angle parameters (1/2 for vertical steps).
        tol (ChainTolerances): Swallow, clamp and Newton thresholds.
    """

    grid: CapacityGrid
    anchors: np.ndarray
    alphas: np.ndarray
    tol: ChainTolerances = field(default=DEFAULT_TOLERANCES, compare=False)

    def __post_init__(self):
        anchors = np.asarray(self.anchors, dtype=float).copy()
        alphas = np.asarray(self.alphas, dtype=float).copy()
        if anchors.size != self.grid.n - 1 or alphas.size != self.grid.n - 1:
            raise InvalidArgumentError("a map chain needs one step per grid interval")
        if np.any((alphas <= 0) | (alphas >= 1)):
            raise InvalidArgumentError("step angles must lie in (0, 1)")
        anchors.setflags(write=False)
        alphas.setflags(write=False)
        object.__setattr__(self, "anchors", anchors)
        object.__setattr__(self, "alphas", alphas)

    @classmethod
    def from_steps(cls, steps: Sequence[ElementarySlitMap]) -> "MapChain":
        dts = np.array([s.dt for s in steps], dtype=float)
        grid = CapacityGrid(np.concatenate([[0.0], np.cumsum(dts)]))
        return cls(grid, np.array([s.lam for s in steps]), np.array([s.alpha for s in steps]))

    @property
    def dts(self) -> np.ndarray:
        return self.grid.dt

    @property
    def kinds(self) -> List[str]:
        return ["vertical" if a == 0.5 else "tilted" for a in self.alphas]

    @property
    def steps(self) -> List[ElementarySlitMap]:
        return [self[i] for i in range(len(self))]

    def __len__(self) -> int:
        return int(self.anchors.size)

    def __getitem__(self, i: int) -> ElementarySlitMap:
        a = float(self.alphas[i])
        return ElementarySlitMap("vertical" if a == 0.5 else "tilted",
                                 float(self.anchors[i]), float(self.dts[i]), a)

    def total_capacity(self, n_steps: Optional[int] = None) -> float:
        """2 · (sum of the first n_steps capacity increments)."""
        n_steps = len(self) if n_steps is None else n_steps
        return 2.0 * float(self.grid.t_values[n_steps])

    def tail(self, start: int) -> "MapChain":
        """Steps start, start+1, ... on the shifted grid."""
        return MapChain(self.grid.tail(start), self.anchors[start:], self.alphas[start:],
                        self.tol)

    def head(self, stop: int) -> "MapChain":
        """The first ``stop`` steps."""
        return MapChain(CapacityGrid(self.grid.t_values[:stop + 1]),
                        self.anchors[:stop], self.alphas[:stop], self.tol)

    def apply_forward(self, z: ArrayLike, n_steps: int, on_swallow: str = "raise",
                      start: int = 0) -> np.ndarray:
        """
        Compose steps start, ..., start + n_steps − 1 (g-side) on z.

        Args:
            z (ArrayLike): Points in H \\ K (real points allowed).
            n_steps (int): Number of steps to apply.
            on_swallow (str): 'raise' or 'nan' for swallowed points.
            start (int): First step index.

        Returns:
            np.ndarray: Images with Im >= 0.

        Raises:
            DomainError: If a point comes within tol.swallow of the driving value
                on ℝ, or lands on a slit, with ``on_swallow='raise'``.
        """
        w = np.array(np.atleast_1d(np.asarray(z, dtype=complex)), copy=True)
        for k in range(start, start + n_steps):
            lam, dt, alpha = float(self.anchors[k]), float(self.dts[k]), float(self.alphas[k])
            u = w - lam
            was_inside = u.imag > self.tol.boundary
            swallowed = (np.abs(u) <= self.tol.swallow)
            out = slit_forward(u, dt, alpha, self.tol)
            bad = ~np.isfinite(out)
            out = np.where(bad, 0.0, out)
            if np.any(out.imag < -self.tol.clamp * (1.0 + np.abs(out))):
                raise DomainError(f"branch violation at step {k}", step=k)
            out = _closed_upper(out)
            swallowed |= bad | (was_inside & (out.imag <= self.tol.boundary))
            if np.any(swallowed):
                if on_swallow == "raise":
                    j = int(np.argmax(swallowed))
                    raise DomainError(f"point {complex(z if np.ndim(z) == 0 else np.ravel(z)[j])} "
                                      f"swallowed at step {k}", step=k)
                out = np.where(swallowed, np.nan + 0j, out)
            w = lam + out
        return w

    def apply_inverse(self, w: ArrayLike, n_steps: int, boundary: str = "raise",
                      start: int = 0) -> np.ndarray:
        """
        Compose inverse steps start + n_steps − 1, ..., start (f-side) on w.

        Args:
            w (ArrayLike): Points in the closed upper half-plane.
            n_steps (int): Number of steps to apply.
            boundary (str): 'raise' rejects real points inside a slit base;
                'extend' returns the boundary values of the maps there.
            start (int): First step index.

        Returns:
            np.ndarray: Images in the closed upper half-plane.

        Raises:
            BoundaryEvaluationError: For real inputs on a branch cut when
                ``boundary='raise'``.
        """
        z = np.array(np.atleast_1d(np.asarray(w, dtype=complex)), copy=True)
        for k in range(start + n_steps - 1, start - 1, -1):
            lam, dt, alpha = float(self.anchors[k]), float(self.dts[k]), float(self.alphas[k])
            u = z - lam
            if boundary == "raise":
                xl, xr = tilted_roots(dt, alpha)
                on_cut = (np.abs(u.imag) <= self.tol.boundary) & (u.real > xl) & (u.real < xr)
                if np.any(on_cut):
                    raise BoundaryEvaluationError(f"evaluation on the branch cut of step {k}",
                                                  step=k)
            z = lam + slit_inverse(u, dt, alpha)
        return z


# --------------------------------------------------------------------------
# Domains
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DomainSpec:
    """
    The domain Ω = H \\ K for a polyline hull K (or Ω = H when hull is None).

    Attributes:
        hull (Optional[HullCurve]): Hull boundary; None for the half-plane.
        bbox (Optional[Tuple[float, float, float, float]]): (xmin, xmax, ymin,
            ymax) rectangle containing K; derived from the hull when omitted.
        check_connected (bool): Verify connectivity of H \\ K at construction.
        resolution (int): Grid size of the connectivity check.
    """

    hull: Optional[HullCurve] = None
    bbox: Optional[Tuple[float, float, float, float]] = None
    check_connected: bool = True
    resolution: int = 256

    def __post_init__(self):
        if self.bbox is None:
            if self.hull is None:
                box = (-1.0, 1.0, 0.0, 1.0)
            else:
                x0, x1, _, y1 = self.hull.bounds()
                pad = 0.5 * max(x1 - x0, y1, 1e-3)
                box = (x0 - pad, x1 + pad, 0.0, y1 + pad)
            object.__setattr__(self, "bbox", tuple(float(b) for b in box))
        else:
            object.__setattr__(self, "bbox", tuple(float(b) for b in self.bbox))
        if self.hull is not None and self.check_connected:
            self._check_connectivity()

    @property
    def is_half_plane(self) -> bool:
        return self.hull is None

    def segments(self) -> Tuple[np.ndarray, np.ndarray]:
        if self.hull is None:
            empty = np.zeros(0, dtype=complex)
            return empty, empty
        return self.hull.segments()

    def polygon(self) -> Optional[Path]:
        if self.hull is None or not self.hull.filled:
            return None
        p = self.hull.points
        return Path(np.column_stack([p.real, p.imag]))

    def inside_filled(self, z: ArrayLike) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        poly = self.polygon()
        if poly is None:
            return np.zeros(z.shape, dtype=bool)
        return poly.contains_points(np.column_stack([z.real, z.imag]))

    def delta(self, z: ArrayLike) -> np.ndarray:
        """
        δ_Ω(z) = dist(z, ∂Ω) with ∂Ω = K ∪ ℝ.

        Raises:
            InvalidArgumentError: For points below the real axis.
        """
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if np.any(z.imag < -BOUNDARY_TOL):
            raise InvalidArgumentError("points must lie in the closed upper half-plane")
        a, b = self.segments()
        d = np.minimum(np.maximum(z.imag, 0.0), point_segment_distance(z, a, b))
        return np.where(self.inside_filled(z), 0.0, d)

    def contains(self, z: ArrayLike) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        ok = z.imag > 0
        if np.any(ok):
            ok[ok] = self.delta(z[ok]) > 0
        return ok

    def segment_leaves(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        """Whether each segment [p_i, q_i] touches ∂Ω."""
        p = np.atleast_1d(np.asarray(p, dtype=complex))
        q = np.atleast_1d(np.asarray(q, dtype=complex))
        hits = (p.imag <= 0) | (q.imag <= 0)
        a, b = self.segments()
        if a.size:
            for start in range(0, p.size, 512):
                sl = slice(start, start + 512)
                hits[sl] |= np.any(segments_intersect(p[sl, None], q[sl, None],
                                                      a[None, :], b[None, :]), axis=1)
        return hits

    def grid(self, h: float, window: Optional[Tuple[float, float, float, float]] = None):
        """
        Cell grid of spacing h over ``window`` (default bbox).

        Returns:
            Tuple: (x0, y0, nx, ny, centers, blocked) where ``blocked`` marks
            cells meeting K, inside a filled hull, or with centers off H.
        """
        x0, x1, y0, y1 = window if window is not None else self.bbox
        nx = max(1, int(np.ceil((x1 - x0) / h)))
        ny = max(1, int(np.ceil((y1 - y0) / h)))
        cx = x0 + (np.arange(nx) + 0.5) * h
        cy = y0 + (np.arange(ny) + 0.5) * h
        centers = cx[None, :] + 1j * cy[:, None]
        blocked = centers.imag <= 0
        if self.hull is not None:
            blocked |= rasterize_polyline(self.hull.points, x0, y0, h, nx, ny,
                                          closed=self.hull.filled)
            if self.hull.filled:
                blocked |= self.inside_filled(centers.ravel()).reshape(centers.shape)
        return x0, y0, nx, ny, centers, blocked

    def _check_connectivity(self) -> None:
        x0, x1, y0, y1 = self.bbox
        span = max(x1 - x0, y1 - y0)
        h = span / self.resolution
        window = (x0 - 4 * h, x1 + 4 * h, 0.0, y1 + 4 * h)
        _, _, nx, ny, _, blocked = self.grid(h, window)
        labels, count = ndimage.label(~blocked)
        if count <= 1:
            return
        outer = set(np.unique(np.concatenate([labels[-1, :], labels[:, 0], labels[:, -1]])))
        outer.discard(0)
        enclosed = set(range(1, count + 1)) - outer
        if enclosed:
            raise InvalidDomainError(
                f"H minus the hull has {len(enclosed)} bounded component(s) at resolution "
                f"{self.resolution}")
