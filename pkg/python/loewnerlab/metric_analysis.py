#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
MetricAnalysis: Hyperbolic, Internal and Boundary Metrics of Hull Complements

This module provides the MetricAnalysis class for measuring the geometry of
domains Ω_t = H \\ K_t produced by a Loewner chain. Hyperbolic quantities are
computed by pulling points back to H through g_t, where the half-plane
formulas are exact; Euclidean quantities (boundary distance, internal
distance, John constants) are computed on the polyline hull.

Key features:
- Boundary distance δ_Ω and grid-based internal distance / diameter
- Hyperbolic distance and distance to the geodesic through ∞ by pullback
- John-curve constants and the John-cone inequality
- Hölder exponent of the hydrodynamic map from |f'| growth at small heights
- Hyperbolic growth and extension inequalities along pulled-back geodesics
- Distortion suite for the hydrodynamic map (support, displacement,
  far-field derivative, near-distance constant, total mass)

Upstream dependencies:
- core_model (DomainSpec, MapChain) and forward_solver (LoewnerEvolution)
- scipy.ndimage for grid connectivity, scipy.integrate for the mass integral
- statsmodels for the log-log Hölder fit

Downstream applications:
- TheoremHarness condition checks
- ModulusEstimator geodesic-distance comparisons

Version: 0.1.0
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import statsmodels.api as sm
from scipy import ndimage
from scipy.integrate import simpson

from .config import DEFAULT_CONFIG
from .core_model import ArrayLike, DomainSpec, MapChain
from .exceptions import (
    DisconnectedError,
    DomainError,
    InvalidArgumentError,
    InvalidCurveError,
    MissingTraceError,
)
from .forward_solver import LoewnerEvolution
from .utils.geometry import point_segment_distance, point_set_diameter
from .utils.logging_utils import VerboseMixin

Evolution = Optional[Union[LoewnerEvolution, MapChain]]

# flagged Hölder fits report this exponent
BETA_FLOOR = 1e-6
REPORT_COLUMNS = ["check", "passed", "margin", "params"]


@dataclass(frozen=True)
class HolderEstimate:
    """
    Fitted Hölder exponent and constant of a hydrodynamic map.

    Attributes:
        beta_hat (float): Exponent in (0, 1].
        c1_hat (float): Constant in |f'(z)| <= C_1 Im(z)^{β−1}.
        fit_residual (float): Residual standard error of the log-log fit.
        sample_count (int): Number of derivative evaluations.
        flagged (bool): True when the derivative overflowed or the fitted
            exponent left (0, 1] before clipping.
        table (pd.DataFrame): Heights and the maxima M(y).
    """

    beta_hat: float
    c1_hat: float
    fit_residual: float
    sample_count: int
    flagged: bool = False
    table: pd.DataFrame = field(default_factory=pd.DataFrame, compare=False, repr=False)


@dataclass(frozen=True)
class JohnVerdict:
    """
    Smallest John constant of a curve and its worst vertex.

    Attributes:
        L_min (float): max over vertices of diam(α[x, tip]) / δ_Ω(x), at least 1.
        witness_x (complex): Vertex attaining L_min.
        passed (bool): L_min <= the tested L.
    """

    L_min: float
    witness_x: complex
    passed: bool


def rho_h(w0: ArrayLike, w1: ArrayLike) -> np.ndarray:
    """ρ_H(w0, w1) = arccosh(1 + |w0 − w1|² / (2 Im w0 Im w1)), vectorized."""
    w0 = np.asarray(w0, dtype=complex)
    w1 = np.asarray(w1, dtype=complex)
    # 2·arcsinh form keeps precision for nearby points
    ratio = np.abs(w0 - w1) / (2.0 * np.sqrt(w0.imag * w1.imag))
    return 2.0 * np.arcsinh(ratio)


def h_geodesic_points(w0: complex, w1: complex, m: int) -> np.ndarray:
    """
    m points on the H-geodesic from w0 to w1, equally spaced in hyperbolic length.

    The geodesic is a vertical line when Re w0 = Re w1 and otherwise a circle
    centered on ℝ.
    """
    w0, w1 = complex(w0), complex(w1)
    s = np.linspace(0.0, 1.0, max(m, 2))
    if abs(w0.real - w1.real) <= 1e-14 * max(1.0, abs(w0), abs(w1)):
        y = w0.imag * (w1.imag / w0.imag) ** s
        return w0.real + 1j * y
    c = (abs(w1) ** 2 - abs(w0) ** 2) / (2.0 * (w1.real - w0.real))
    radius = abs(w0 - c)
    th0 = np.angle(w0 - c)
    th1 = np.angle(w1 - c)
    # log tan(θ/2) is an arclength parameter on the circle
    u0, u1 = np.log(np.tan(0.5 * th0)), np.log(np.tan(0.5 * th1))
    theta = 2.0 * np.arctan(np.exp(u0 + s * (u1 - u0)))
    points = c + radius * np.exp(1j * theta)
    points[0], points[-1] = w0, w1
    return points


def _row(check: str, passed: bool, margin: float, **params) -> Dict:
    return {"check": check, "passed": bool(passed), "margin": float(margin), "params": params}


class _LensSearch:
    """
    Binary search of dist_Ω on one cell grid shared by many point pairs.

    A radius d is feasible when the cells of a and b lie in one 4-connected
    component of the free cells inside B(a, d) ∩ B(b, d).
    """

    def __init__(self, spec: DomainSpec, points: np.ndarray, h: float):
        x0, x1, _, y1 = spec.bbox
        pad = 4.0 * h
        window = (min(x0, float(points.real.min())) - pad, max(x1, float(points.real.max())) + pad,
                  0.0, max(y1, float(points.imag.max())) + pad)
        self.h = h
        self.x0, self.y0, self.nx, self.ny, self.centers, blocked = spec.grid(h, window)
        self.free = ~blocked
        self.d_max = float(np.hypot(window[1] - window[0], window[3] - window[2]))

    def cell(self, z: complex) -> Tuple[int, int]:
        col = int(np.clip((z.real - self.x0) // self.h, 0, self.nx - 1))
        row = int(np.clip((z.imag - self.y0) // self.h, 0, self.ny - 1))
        return row, col

    def feasible(self, a: complex, b: complex, d: float) -> bool:
        slack = d + self.h / np.sqrt(2.0)
        mask = (self.free & (np.abs(self.centers - a) <= slack)
                & (np.abs(self.centers - b) <= slack))
        ca, cb = self.cell(a), self.cell(b)
        mask[ca] = mask[cb] = True
        labels, _ = ndimage.label(mask)
        return labels[ca] == labels[cb]

    def distance(self, a: complex, b: complex) -> float:
        lo = abs(a - b)
        if lo == 0.0 or self.feasible(a, b, lo):
            return lo
        hi = max(self.d_max, lo)
        if not self.feasible(a, b, hi):
            raise DisconnectedError(f"{a} and {b} are not connected in the domain")
        while hi - lo > self.h:
            mid = 0.5 * (lo + hi)
            if self.feasible(a, b, mid):
                hi = mid
            else:
                lo = mid
        return hi


class MetricAnalysis(VerboseMixin):
    """
    Metric measurements on hull complements.

    Methods taking ``(e, t)`` accept a LoewnerEvolution, a MapChain (no
    Euclidean domain beyond t = 0) or None for the half-plane itself.

    Attributes:
        samples (int): Default number of random samples.
        heights (List[float]): Default Hölder sample heights.
        per_height_samples (int): Default number of x samples per height.
        internal_resolution (float): Default internal-distance grid spacing.
        qh_resolution (float): Default finest square side of quasi-hyperbolic graphs.
        seed (int): Base seed of all random sampling.
        verbose (bool): Whether to print progress messages.

    Examples:
        >>> ma = MetricAnalysis()
        >>> round(ma.hyperbolic_distance(None, 0.0, 1j, np.e * 1j), 12)
        1.0
    """

    def __init__(self, config: Optional[Dict] = None, verbose: bool = False):
        config = config or DEFAULT_CONFIG
        cfg = config["metric"]
        self.samples = int(cfg.get("samples", 1000))
        self.heights = list(cfg.get("heights", DEFAULT_CONFIG["metric"]["heights"]))
        self.per_height_samples = int(cfg.get("per_height_samples", 2001))
        self.internal_resolution = float(cfg.get("internal_resolution", 1e-2))
        self.qh_resolution = float(cfg.get("qh_resolution", 1e-2))
        self.seed = int(config.get("seed", 42))
        self.verbose = verbose

    # ------------------------------------------------------------------
    # Pullback helpers
    # ------------------------------------------------------------------
    @staticmethod
    def _pullback(e: Evolution, t: float, z: ArrayLike, on_swallow: str = "raise") -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if e is None:
            if on_swallow == "raise" and np.any(z.imag <= 0):
                raise DomainError("points must lie in the upper half-plane")
            return np.where(z.imag > 0, z, np.nan)
        if isinstance(e, MapChain):
            return e.apply_forward(z, e.grid.index_of(t), on_swallow=on_swallow)
        return e.eval_g(t, z, on_swallow=on_swallow)

    @staticmethod
    def _push(e: Evolution, t: float, w: ArrayLike, boundary: str = "raise") -> np.ndarray:
        w = np.atleast_1d(np.asarray(w, dtype=complex))
        if e is None:
            return w
        if isinstance(e, MapChain):
            return e.apply_inverse(w, e.grid.index_of(t), boundary=boundary)
        return e.eval_f(t, w, boundary)

    @staticmethod
    def _domain(e: Evolution, t: float) -> DomainSpec:
        if e is None:
            return DomainSpec(None)
        if isinstance(e, MapChain):
            if e.grid.index_of(t) == 0:
                return DomainSpec(None)
            raise MissingTraceError("a bare map chain has no hull polyline")
        return e.domain_at(t)

    @staticmethod
    def _driving_value(e: Evolution, t: float) -> float:
        if isinstance(e, LoewnerEvolution):
            return float(e.driving.values[e.grid.index_of(t)])
        if isinstance(e, MapChain) and len(e):
            i = e.grid.index_of(t)
            return float(e.anchors[min(i, len(e) - 1)])
        return 0.0

    def _rng(self, seed: Optional[int]) -> np.random.Generator:
        return np.random.default_rng(self.seed if seed is None else seed)

    # ------------------------------------------------------------------
    # Euclidean quantities
    # ------------------------------------------------------------------
    def delta_omega(self, spec: DomainSpec, z: ArrayLike) -> Union[float, np.ndarray]:
        """
        δ_Ω(z), the distance to ℝ ∪ K.

        Raises:
            InvalidArgumentError: For points below the real axis.
        """
        d = spec.delta(z)
        return float(d[0]) if np.ndim(z) == 0 else d

    def internal_distance(self, spec: DomainSpec, a: complex, b: complex,
                          resolution: Optional[float] = None) -> float:
        """
        dist_Ω(a, b): the least diameter of a connected set in Ω joining a and b.

        Binary search over d; d is feasible when a and b connect inside
        Ω ∩ B(a, d) ∩ B(b, d) on a grid of the given spacing.

        Args:
            spec (DomainSpec): The domain.
            a (complex): First point of Ω.
            b (complex): Second point of Ω.
            resolution (Optional[float]): Grid spacing.

        Returns:
            float: Smallest feasible d within the resolution, at least |a − b|.

        Raises:
            DisconnectedError: If a and b do not connect at the coarsest d.
        """
        h = resolution or self.internal_resolution
        a, b = complex(a), complex(b)
        if not np.all(spec.contains([a, b])):
            raise InvalidArgumentError("both points must lie in the domain")
        return _LensSearch(spec, np.array([a, b]), h).distance(a, b)

    def internal_diameter(self, spec: DomainSpec, S: Sequence[complex],
                          resolution: Optional[float] = None) -> float:
        """max of internal_distance over all pairs of S (0 for a singleton)."""
        h = resolution or self.internal_resolution
        S = np.atleast_1d(np.asarray(S, dtype=complex))
        if S.size < 2:
            return 0.0
        if not np.all(spec.contains(S)):
            raise InvalidArgumentError("all points must lie in the domain")
        search = _LensSearch(spec, S, h)
        best = 0.0
        for i in range(S.size):
            for j in range(i + 1, S.size):
                best = max(best, search.distance(S[i], S[j]))
        self.log(f"internal diameter of {S.size} points: {best:.4g}")
        return best

    # ------------------------------------------------------------------
    # Hyperbolic quantities
    # ------------------------------------------------------------------
    def hyperbolic_distance(self, e: Evolution, t: float, z0: ArrayLike, z1: ArrayLike
                            ) -> Union[float, np.ndarray]:
        """
        ρ_{Ω_t}(z0, z1) through the pullback w = g_t(z).

        Raises:
            DomainError: If a point is swallowed by K_t.
        """
        w = self._pullback(e, t, np.concatenate([np.atleast_1d(z0), np.atleast_1d(z1)]))
        n0 = np.atleast_1d(z0).size
        rho = rho_h(w[:n0], w[n0:])
        return float(rho[0]) if rho.size == 1 else rho

    def dist_to_geodesic(self, e: Evolution, t: float, z: ArrayLike, anchor: float = 0.0
                         ) -> Union[float, np.ndarray]:
        """
        Hyperbolic distance from z to the geodesic of Ω_t that g_t maps to the
        vertical line Re w = anchor.

        With u = g_t(z) − anchor and t0 the angle between u and ℝ, the
        distance is log(cos(t0/2) / sin(t0/2)); 0 on the line.
        """
        u = self._pullback(e, t, z) - anchor
        t0 = np.arctan2(u.imag, np.abs(u.real))
        d = np.log(np.cos(0.5 * t0) / np.sin(0.5 * t0))
        d = np.maximum(d, 0.0)
        return float(d[0]) if np.ndim(z) == 0 else d

    # ------------------------------------------------------------------
    # John curves
    # ------------------------------------------------------------------
    def john_verify(self, spec: DomainSpec, alpha: ArrayLike, L: float) -> JohnVerdict:
        """
        Smallest L with diam(α[x, tip]) <= L·δ_Ω(x) on every vertex x.

        Args:
            spec (DomainSpec): The domain.
            alpha (ArrayLike): Polyline, tip first.
            L (float): Constant to test.

        Returns:
            JohnVerdict: L_min (clamped to >= 1), its witness and the verdict.

        Raises:
            InvalidCurveError: If the polyline leaves Ω.
        """
        alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
        if np.any(alpha.imag <= 0):
            raise InvalidCurveError("the curve leaves the upper half-plane")
        delta = spec.delta(alpha)
        if np.any(delta <= 0) or (alpha.size > 1 and np.any(
                spec.segment_leaves(alpha[:-1], alpha[1:]))):
            raise InvalidCurveError("the curve meets the boundary of the domain")
        tail_diam = np.zeros(alpha.size)
        for k in range(1, alpha.size):
            tail_diam[k] = max(tail_diam[k - 1], float(np.abs(alpha[k] - alpha[:k]).max()))
        ratio = tail_diam / delta
        k = int(np.argmax(ratio))
        L_min = max(1.0, float(ratio[k]))
        return JohnVerdict(L_min, complex(alpha[k]), bool(L_min <= L * (1 + 1e-12)))

    def johncone_margins(self, e: Evolution, t: float, alpha: ArrayLike, beta: float,
                         C: float) -> np.ndarray:
        """(1/β) log(δ(x)/δ(tip)) + C − ρ(x, tip) at every vertex x of alpha."""
        if not beta > 0:
            raise InvalidArgumentError(f"beta must be positive, got {beta}")
        alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
        spec = self._domain(e, t)
        delta = spec.delta(alpha)
        w = self._pullback(e, t, alpha)
        rho = rho_h(w, w[0])
        return np.log(delta / delta[0]) / beta + C - rho

    def johncone_check(self, e: Evolution, t: float, alpha: ArrayLike, beta: float,
                       C: float) -> bool:
        """ρ_Ω(x, z) <= (1/β) log(δ_Ω(x)/δ_Ω(z)) + C on every vertex, z the tip."""
        return bool(np.all(self.johncone_margins(e, t, alpha, beta, C) >= -1e-9))

    # ------------------------------------------------------------------
    # Hölder exponent
    # ------------------------------------------------------------------
    def _support_window(self, e: Evolution, t: float) -> Tuple[float, float]:
        lam = self._driving_value(e, t)
        if e is None or not isinstance(e, LoewnerEvolution) or e.grid.index_of(t) == 0:
            return lam - 1.0, lam + 1.0
        r, x = e.hull_at(t).rad()
        return x - 3.0 * r, x + 3.0 * r

    def _abs_derivative(self, e: Evolution, t: float, z: np.ndarray) -> np.ndarray:
        h = z.imag / 100.0
        with np.errstate(over="ignore", invalid="ignore"):
            values = self._push(e, t, np.concatenate([z + h, z - h]))
            return np.abs(values[:z.size] - values[z.size:]) / (2.0 * h)

    def holder_exponent(self, e: Evolution, t: float, heights: Optional[Sequence[float]] = None,
                        per_height_samples: Optional[int] = None) -> HolderEstimate:
        """
        Fit log M(y) = (β − 1) log y + log C_1 with M(y) = max_x |f_t'(x + iy)|.

        |f'| is taken by centered differences of eval_f with step y/100 on a
        uniform x grid over the support window, then refined around the five
        largest values of each height.

        Args:
            e (Evolution): The chain.
            t (float): Grid time.
            heights (Optional[Sequence[float]]): Heights in (0, 1].
            per_height_samples (Optional[int]): x samples per height.

        Returns:
            HolderEstimate: β̂ in (0, 1], Ĉ₁, residual and sample count.
        """
        heights = np.asarray(heights if heights is not None else self.heights, dtype=float)
        n_x = int(per_height_samples or self.per_height_samples)
        if heights.size < 2 or np.any((heights <= 0) | (heights > 1)):
            raise InvalidArgumentError("need at least two heights in (0, 1]")
        lo, hi = self._support_window(e, t)
        x = np.linspace(lo, hi, n_x)
        dx = x[1] - x[0]
        z = (x[None, :] + 1j * heights[:, None]).ravel()
        deriv = self._abs_derivative(e, t, z).reshape(heights.size, n_x)
        count = 2 * z.size

        top = np.argsort(np.where(np.isfinite(deriv), deriv, np.inf), axis=1)[:, -5:]
        offsets = np.linspace(-dx, dx, 41)
        local = (x[top][:, :, None] + offsets[None, None, :]) + 1j * heights[:, None, None]
        local_deriv = self._abs_derivative(e, t, local.ravel()).reshape(local.shape)
        count += 2 * local.size
        M = np.maximum(np.nanmax(np.where(np.isfinite(deriv), deriv, np.nan), axis=1),
                       np.nanmax(np.where(np.isfinite(local_deriv), local_deriv, np.nan),
                                 axis=(1, 2)))
        overflow = bool(np.any(~np.isfinite(deriv)) or np.any(~np.isfinite(local_deriv)))

        ok = np.isfinite(M) & (M > 0)
        table = pd.DataFrame({"height": heights, "max_derivative": M})
        if ok.sum() < 2:
            return HolderEstimate(BETA_FLOOR, np.inf, np.inf, count, True, table)
        X = sm.add_constant(np.log(heights[ok]))
        fit = sm.OLS(np.log(M[ok]), X).fit()
        intercept, slope = float(fit.params[0]), float(fit.params[1])
        residual = float(np.sqrt(fit.mse_resid)) if fit.df_resid > 0 else 0.0
        beta = 1.0 + slope
        flagged = overflow or not beta > 0
        beta = float(np.clip(beta, BETA_FLOOR, 1.0))
        self.log(f"Hölder fit at t={t:.4g}: β̂={beta:.4f}, Ĉ₁={np.exp(intercept):.4g}, "
                 f"residual={residual:.3g}")
        return HolderEstimate(beta, float(np.exp(intercept)), residual, count, flagged, table)

    # ------------------------------------------------------------------
    # Growth along geodesics
    # ------------------------------------------------------------------
    def _growth_setup(self, e: LoewnerEvolution, t: float, beta: float):
        if not isinstance(e, LoewnerEvolution):
            raise InvalidArgumentError("growth checks need a LoewnerEvolution with trace")
        if not beta > 0:
            raise InvalidArgumentError(f"beta must be positive, got {beta}")
        if e.grid.index_of(t) == 0:
            raise InvalidArgumentError("growth checks need a nonempty hull (t > 0)")
        K = e.hull_at(t)
        D = K.diameter()
        return K, D, max(D ** beta, D), e.domain_at(t)

    def default_base_point(self, e: LoewnerEvolution, t: float) -> complex:
        """z0 = f_t(λ_t + 104·diam(K_t)·i)."""
        D = e.hull_at(t).diameter()
        w0 = self._driving_value(e, t) + 104.0 * D * 1j
        return complex(self._push(e, t, w0)[0])

    def hyp_growth_check(self, e: LoewnerEvolution, t: float, z0: Optional[complex] = None,
                         beta: float = 0.5, C: float = 0.0, samples: Optional[int] = None,
                         seed: Optional[int] = None, points_per_geodesic: int = 16
                         ) -> Dict[str, float]:
        """
        Check ρ(z0, z) <= (1/β) log(max{D^β, D}/δ(z)) + C along geodesics.

        Endpoints are random points within 100·diam(K) of K; every geodesic
        from z0 is the image under f_t of the H-geodesic between the pullbacks.

        Returns:
            Dict[str, float]: 'passed', 'worst' (smallest margin), 'fitted_C'
            (smallest C that passes) and 'n_samples'.
        """
        K, D, M, spec = self._growth_setup(e, t, beta)
        n = int(samples or min(self.samples, 200))
        rng = self._rng(seed)
        z0 = self.default_base_point(e, t) if z0 is None else complex(z0)
        w0 = complex(self._pullback(e, t, z0)[0])

        p = K.points[rng.integers(0, K.points.size, 4 * n)]
        r = 100.0 * D * rng.random(4 * n) ** 2
        z = p + r * np.exp(2j * np.pi * rng.random(4 * n))
        z = z[z.imag > 0]
        z = z[spec.delta(z) > 1e-6 * D][:n]
        w1 = self._pullback(e, t, z, on_swallow="nan")
        w1 = w1[np.isfinite(w1)]

        ws = np.concatenate([h_geodesic_points(w0, w, points_per_geodesic) for w in w1])
        zs = self._push(e, t, ws)
        delta = spec.delta(zs)
        keep = delta > 0
        lhs = rho_h(w0, ws[keep])
        growth = np.log(M / delta[keep]) / beta
        margins = growth + C - lhs
        fitted = float((lhs - growth).max()) if lhs.size else -np.inf
        worst = float(margins.min()) if margins.size else np.inf
        self.log(f"growth check: {lhs.size} samples, worst margin {worst:.4g}")
        return {"passed": bool(worst >= -1e-9), "worst": worst, "fitted_C": fitted,
                "n_samples": int(lhs.size)}

    def hypext_check(self, e: LoewnerEvolution, t: float, z0: Optional[complex],
                     z1: complex, beta: float = 0.5, C: float = 0.0,
                     samples: int = 64) -> Dict[str, float]:
        """
        Check ρ(z0, x) <= (1/β) log(max{D^β, D}/length(ℓ[x, z1])) + C on the
        geodesic ℓ from z0 to z1, the tail length measured along the
        discretized image polyline.

        Returns:
            Dict[str, float]: 'passed', 'worst', 'fitted_C' and 'n_samples'.
        """
        _, _, M, _ = self._growth_setup(e, t, beta)
        z0 = self.default_base_point(e, t) if z0 is None else complex(z0)
        w = self._pullback(e, t, [z0, z1])
        ws = h_geodesic_points(w[0], w[1], samples)
        line = self._push(e, t, ws)
        line[0], line[-1] = z0, z1
        seg = np.abs(np.diff(line))
        tail = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
        lhs = rho_h(ws[0], ws)
        with np.errstate(divide="ignore"):
            growth = np.log(M / tail) / beta
        inner = tail > 0
        margins = np.where(inner, growth + C - lhs, np.inf)
        fitted = float((lhs[inner] - growth[inner]).max()) if inner.any() else -np.inf
        worst = float(margins.min())
        return {"passed": bool(worst >= -1e-9), "worst": worst, "fitted_C": fitted,
                "n_samples": int(line.size)}

    # ------------------------------------------------------------------
    # Distortion suite
    # ------------------------------------------------------------------
    def measure_support(self, e: LoewnerEvolution, t: float, n: int = 4097,
                        threshold: float = 1e-6) -> Tuple[float, float]:
        """Real interval where Im f_t(u) > threshold, sampled on the support window."""
        lo, hi = self._support_window(e, t)
        u = np.linspace(lo, hi, n)
        im = self._push(e, t, u.astype(complex), boundary="extend").imag
        inside = np.flatnonzero(im > threshold)
        if inside.size == 0:
            lam = self._driving_value(e, t)
            return lam, lam
        du = u[1] - u[0]
        return float(u[inside[0]] - du), float(u[inside[-1]] + du)

    def mu_mass(self, e: LoewnerEvolution, t: float, support: Tuple[float, float],
                rtol: float = 1e-5, max_level: int = 17) -> float:
        """
        μ_K(ℝ) = (1/π) ∫ Im f_t(u) du by Simpson's rule, doubling the number
        of nodes until two successive values agree to rtol.
        """
        a, b = support
        pad = 0.05 * max(b - a, 1e-12)
        a, b = a - pad, b + pad
        previous = None
        for level in range(10, max_level + 1):
            u = np.linspace(a, b, 2 ** level + 1)
            value = simpson(self._push(e, t, u.astype(complex), boundary="extend").imag,
                            x=u) / np.pi
            if previous is not None and abs(value - previous) <= rtol * max(abs(value), 1e-12):
                return float(value)
            previous = value
        return float(previous)

    def distortion_suite(self, e: LoewnerEvolution, t: float, samples: Optional[int] = None,
                         seed: Optional[int] = None) -> pd.DataFrame:
        """
        Distortion inequalities of the hydrodynamic map f_t on random samples.

        Rows (check names): hull_in_support_ball, support_in_rad_ball,
        support_hull_distance, hcap_le_support, hcap_le_4rad2, displacement,
        far_field_derivative, near_distance_constant, holder_diameter_constant,
        mu_total_mass.

        Args:
            e (LoewnerEvolution): Chain with trace.
            t (float): Grid time, t > 0.
            samples (Optional[int]): Random points per sampled check.
            seed (Optional[int]): RNG seed.

        Returns:
            pd.DataFrame: Columns check, passed, margin, params.
        """
        if not isinstance(e, LoewnerEvolution) or e.grid.index_of(t) == 0:
            raise InvalidArgumentError("the distortion suite needs a nonempty hull with trace")
        n = int(samples or self.samples)
        rng = self._rng(seed)
        K = e.hull_at(t)
        pts = K.points
        r, xc = K.rad()
        D = K.diameter()
        hcap = e.hcap(t)
        a, b = self.measure_support(e, t)
        s_mid, s_half = 0.5 * (a + b), 0.5 * (b - a)
        rows: List[Dict] = []

        reach = float(np.abs(pts - s_mid).max())
        rows.append(_row("hull_in_support_ball", reach <= 2.0 * s_half, 2.0 * s_half - reach,
                         support=[a, b]))
        spread = max(abs(a - xc), abs(b - xc))
        rows.append(_row("support_in_rad_ball", spread <= 2.0 * r, 2.0 * r - spread,
                         rad=r, center=xc, support=[a, b]))
        ends = np.array([a, b])
        far = float(np.abs(pts[:, None] - ends[None, :]).max())
        rows.append(_row("support_hull_distance", far <= 4.0 * r, 4.0 * r - far, rad=r))
        rows.append(_row("hcap_le_support", hcap <= s_half ** 2 * (1 + 1e-2),
                         s_half ** 2 - hcap, hcap=hcap))
        rows.append(_row("hcap_le_4rad2", hcap <= 4.0 * r ** 2, 4.0 * r ** 2 - hcap, hcap=hcap))

        w = (xc + 10.0 * r * (2.0 * rng.random(n) - 1.0)) + 1j * (
            10.0 * r * rng.random(n) ** 2 + 1e-6 * r)
        moved = float(np.abs(self._push(e, t, w) - w).max())
        rows.append(_row("displacement", moved <= 3.0 * r, 3.0 * r - moved, sup=moved, rad=r))

        radius = D * (7.0 + 23.0 * rng.random(n))
        wf = xc + radius * np.exp(1j * np.pi * rng.uniform(0.02, 0.98, n))
        zf = self._push(e, t, wf)
        keep = point_segment_distance(zf, *K.segments()) >= 7.0 * D
        dev = 0.0
        if keep.any():
            h = 1e-4 * D
            slope = (self._push(e, t, wf[keep] + h) - self._push(e, t, wf[keep] - h)) / (2.0 * h)
            dev = float(np.abs(slope - 1.0).max())
        rows.append(_row("far_field_derivative", dev <= 0.5, 0.5 - dev, n=int(keep.sum())))

        wn = (xc + 3.0 * r * (2.0 * rng.random(n) - 1.0)) + 1j * (10.0 * D * rng.random(n) + 1e-4 * D)
        deriv = self._abs_derivative(e, t, wn)
        ok = np.isfinite(deriv) & (deriv > 0)
        near = float((wn.imag[ok] / (D * deriv[ok])).max()) if ok.any() else np.inf
        rows.append(_row("near_distance_constant", np.isfinite(near), np.inf, constant=near))

        holder_c = D / np.sqrt(hcap * (1.0 + max(np.log(1.0 / D), 0.0)))
        rows.append(_row("holder_diameter_constant", np.isfinite(holder_c), np.inf,
                         constant=float(holder_c)))

        mass = self.mu_mass(e, t, (a, b))
        tol = 1e-2 * hcap
        rows.append(_row("mu_total_mass", abs(mass - hcap) <= tol, tol - abs(mass - hcap),
                         mass=mass, hcap=hcap))
        report = pd.DataFrame(rows, columns=REPORT_COLUMNS)
        self.log(f"distortion suite at t={t:.4g}: {int(report['passed'].sum())}/{len(report)} "
                 "checks passed")
        return report

    # ------------------------------------------------------------------
    # Metric comparisons
    # ------------------------------------------------------------------
    def compare_quasi_hyperbolic(self, e: LoewnerEvolution, t: float,
                                 pairs: Sequence[Tuple[complex, complex]],
                                 resolution: Optional[float] = None) -> pd.DataFrame:
        """
        ρ_Ω (pullback) against the graph estimate of k_Ω on point pairs.

        Args:
            e (LoewnerEvolution): Evolution, or None for the half-plane.
            t (float): Time of the domain.
            pairs (Sequence[Tuple[complex, complex]]): Point pairs in the domain.
            resolution (float, optional): Finest square side of the graph.
                Defaults to the configured qh_resolution.

        Returns:
            pd.DataFrame: Columns z0, z1, rho, k and ratio k/ρ.
        """
        from .whitney import WhitneyGeometry

        spec = self._domain(e, t)
        pts = np.array([p for pair in pairs for p in pair], dtype=complex)
        graph = WhitneyGeometry().quasi_hyperbolic_graph(spec, resolution or self.qh_resolution,
                                                          list(pts))
        rows = []
        for z0, z1 in pairs:
            rho = self.hyperbolic_distance(e, t, z0, z1)
            k = graph.distance(z0, z1)
            rows.append({"z0": complex(z0), "z1": complex(z1), "rho": rho, "k": k,
                         "ratio": k / rho if rho > 0 else np.nan})
        return pd.DataFrame(rows)
