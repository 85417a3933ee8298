#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
ModulusEstimator: Discrete Modulus of Connecting Curve Families

This module provides the ModulusEstimator class, which computes mod₂ of the
family of curves joining two continua E and F in a domain Ω = H \\ K as the
effective conductance of a unit-conductance grid graph: the discrete
harmonic potential with data 0 on E and 1 on F has energy equal to the
modulus.

Key features:
- Grid conductance modulus with a conjugate-gradient solve
- Density grid |∇u| for plots
- Ball-to-geodesic bound: distance to a geodesic through ∞ against π/mod + 3
- Annulus-crossing lower bound log(2)/(2π)

Upstream dependencies:
- core_model.DomainSpec for the cell mask, utils.geometry for rasterization
- scipy.sparse / scipy.sparse.linalg for the Laplacian and its solve

Downstream applications:
- TheoremHarness modulus checks
- LoewnerVisualization density heat maps

Version: 0.1.0
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import ndimage, sparse
from scipy.sparse.linalg import cg

from .config import DEFAULT_CONFIG
from .core_model import DomainSpec
from .exceptions import InvalidArgumentError, ResolutionError
from .metric_analysis import MetricAnalysis
from .utils.geometry import rasterize_polyline
from .utils.logging_utils import VerboseMixin

MIN_GRID = 64
CROSSING_BOUND = np.log(2.0) / (2.0 * np.pi)
CROSSING_SLACK = 0.2
BALL_SLACK = 0.1


@dataclass(frozen=True)
class ModulusProblem:
    """
    Curves joining E to F inside a domain.

    Attributes:
        domain (DomainSpec): The domain Ω.
        E (np.ndarray): First continuum as a polyline (potential 0).
        F (np.ndarray): Second continuum as a polyline (potential 1).
        grid_n (int): Number of cells along the longer window side.
        bbox (Optional[Tuple[float, float, float, float]]): Computation window;
            by default the domain box enlarged to hold E and F with a 10% pad.
    """

    domain: DomainSpec
    E: np.ndarray
    F: np.ndarray
    grid_n: int = 256
    bbox: Optional[Tuple[float, float, float, float]] = None

    def __post_init__(self):
        object.__setattr__(self, "E", np.atleast_1d(np.asarray(self.E, dtype=complex)))
        object.__setattr__(self, "F", np.atleast_1d(np.asarray(self.F, dtype=complex)))
        if self.E.size == 0 or self.F.size == 0:
            raise InvalidArgumentError("E and F need at least one point each")

    def window(self) -> Tuple[float, float, float, float]:
        if self.bbox is not None:
            return tuple(float(b) for b in self.bbox)
        pts = np.concatenate([self.E, self.F])
        x0, x1, _, y1 = self.domain.bbox
        lo, hi, top = float(pts.real.min()), float(pts.real.max()), float(pts.imag.max())
        pad = 0.1 * max(hi - lo, top, 1e-12)
        return (min(x0, lo - pad), max(x1, hi + pad), 0.0, max(y1, top + pad))

    def scaled(self, r: float, x0: float = 0.0) -> "ModulusProblem":
        """Image of the problem under z ↦ r z + x0."""
        hull = None if self.domain.hull is None else self.domain.hull.scaled(r).translated(x0)
        box = self.window()
        box = (r * box[0] + x0, r * box[1] + x0, r * box[2], r * box[3])
        return ModulusProblem(DomainSpec(hull, box, check_connected=False),
                              r * self.E + x0, r * self.F + x0, self.grid_n, box)


@dataclass(frozen=True)
class ModulusResult:
    """
    Attributes:
        value (float): Discrete modulus (inf when E and F share a cell).
        density (np.ndarray): |∇u| per cell, NaN outside the live cells.
        potential (np.ndarray): u per cell, NaN outside the live cells.
        grid_n (int): Grid size used.
        h (float): Cell side.
        n_unknowns (int): Free potential values solved for.
        residual (float): Relative residual of the linear solve.
        window (Tuple[float, float, float, float]): Grid window.
    """

    value: float
    density: np.ndarray = field(repr=False)
    potential: np.ndarray = field(repr=False)
    grid_n: int
    h: float
    n_unknowns: int
    residual: float
    window: Tuple[float, float, float, float]


def _solve_cg(A, b: np.ndarray, tol: float, maxiter: int) -> Tuple[np.ndarray, int]:
    try:
        return cg(A, b, rtol=tol, atol=0.0, maxiter=maxiter)
    except TypeError:
        # scipy < 1.12 names the relative tolerance ``tol``
        return cg(A, b, tol=tol, atol=0.0, maxiter=maxiter)


class ModulusEstimator(VerboseMixin):
    """
    Discrete modulus estimation and the modulus bounds built on it.

    Attributes:
        grid_n (int): Default grid size.
        cg_tol (float): Relative residual target of the CG solve.
        cg_maxiter (int): Iteration cap of the CG solve.
        verbose (bool): Whether to print progress messages.

    Examples:
        >>> theta = np.linspace(0, np.pi, 400)
        >>> p = ModulusProblem(DomainSpec(None), np.exp(1j * theta),
        ...                    np.e * np.exp(1j * theta), grid_n=256)
        >>> abs(ModulusEstimator().discrete_modulus(p).value - np.pi) < 0.2
        True
    """

    def __init__(self, config: Optional[Dict] = None, verbose: bool = False):
        self.config = config or DEFAULT_CONFIG
        cfg = self.config["modulus"]
        self.grid_n = int(cfg.get("grid_n", 256))
        self.cg_tol = float(cfg.get("cg_tol", 1e-10))
        self.cg_maxiter = int(cfg.get("cg_maxiter", 20000))
        self.verbose = verbose

    def discrete_modulus(self, p: ModulusProblem) -> ModulusResult:
        """
        Effective conductance between E and F on the 4-neighbour cell graph.

        Cells meeting K or off H are removed; E and F cells carry potential
        0 and 1; the energy Σ (u_i − u_j)² over live edges is the modulus.

        Args:
            p (ModulusProblem): The problem.

        Returns:
            ModulusResult: Value, density and solve diagnostics.

        Raises:
            InvalidArgumentError: If grid_n < 64.
            ResolutionError: If E or F occupies no free cell.
        """
        if p.grid_n < MIN_GRID:
            raise InvalidArgumentError(f"grid_n must be at least {MIN_GRID}, got {p.grid_n}")
        window = p.window()
        h = max(window[1] - window[0], window[3] - window[2]) / p.grid_n
        x0, y0, nx, ny, _, blocked = p.domain.grid(h, window)
        E = rasterize_polyline(p.E, x0, y0, h, nx, ny) & ~blocked
        F = rasterize_polyline(p.F, x0, y0, h, nx, ny) & ~blocked
        if not E.any() or not F.any():
            raise ResolutionError("E or F is not resolved by the grid")
        nan_grid = np.full((ny, nx), np.nan)
        if (E & F).any():
            self.log("E and F share a cell; the modulus diverges")
            return ModulusResult(np.inf, nan_grid, nan_grid, p.grid_n, h, 0, 0.0, window)

        labels, _ = ndimage.label(~blocked)
        shared = np.intersect1d(np.unique(labels[E]), np.unique(labels[F]))
        live = np.isin(labels, shared[shared > 0])
        if not live.any():
            return ModulusResult(0.0, nan_grid, nan_grid, p.grid_n, h, 0, 0.0, window)

        idx = np.arange(ny * nx).reshape(ny, nx)
        horiz = live[:, :-1] & live[:, 1:]
        vert = live[:-1, :] & live[1:, :]
        a = np.concatenate([idx[:, :-1][horiz], idx[:-1, :][vert]])
        b = np.concatenate([idx[:, 1:][horiz], idx[1:, :][vert]])

        fixed = (E | F).ravel()
        values = F.ravel().astype(float)
        unknown = live.ravel() & ~fixed
        slot = np.full(ny * nx, -1)
        slot[unknown] = np.arange(int(unknown.sum()))
        m = int(unknown.sum())

        u = np.where(fixed, values, 0.0)
        residual = 0.0
        if m:
            ua, ub = unknown[a], unknown[b]
            both = ua & ub
            rows = np.concatenate([slot[a[both]], slot[b[both]], slot[a[ua]], slot[b[ub]]])
            cols = np.concatenate([slot[b[both]], slot[a[both]], slot[a[ua]], slot[b[ub]]])
            data = np.concatenate([-np.ones(2 * both.sum()), np.ones(ua.sum() + ub.sum())])
            L = sparse.coo_matrix((data, (rows, cols)), shape=(m, m)).tocsr()
            rhs = np.zeros(m)
            np.add.at(rhs, slot[a[ua & ~ub]], values[b[ua & ~ub]])
            np.add.at(rhs, slot[b[ub & ~ua]], values[a[ub & ~ua]])
            self.log(f"solving for {m} potentials on a {nx}x{ny} grid (h={h:.4g})")
            x, info = _solve_cg(L, rhs, self.cg_tol, self.cg_maxiter)
            if info != 0:
                self.log(f"CG stopped with info={info}")
            residual = float(np.linalg.norm(L @ x - rhs) / max(np.linalg.norm(rhs), 1e-300))
            u[unknown] = x

        value = float(np.sum((u[a] - u[b]) ** 2))
        potential = np.where(live.ravel(), u, np.nan).reshape(ny, nx)
        gy, gx = np.gradient(np.where(live, potential, 0.0), h)
        density = np.where(live, np.hypot(gx, gy), np.nan)
        self.log(f"modulus {value:.6g} (residual {residual:.2e})")
        return ModulusResult(value, density, potential, p.grid_n, h, m, residual, window)

    def whitneyball_bound_check(self, e, t: float, z: complex, ell_anchor: float = 0.0,
                                grid_n: Optional[int] = None, n_circle: int = 128,
                                window_factor: float = 3.0) -> Dict:
        """
        Compare the distance from z to the geodesic ℓ (preimage of the vertical
        line at ``ell_anchor``) with π/mod₂(Γ) + 3, Γ the curves joining
        B(z, δ(z)/2) to ℓ.

        The modulus is computed in H after pulling the ball boundary back by
        g_t; ℓ becomes a vertical segment truncated at the window top. The
        window spans window_factor·R on each side of ℓ and up, R being the
        distance from the pulled-back center to ℓ plus its height.

        Truncation only removes curves, so the computed modulus is a lower
        bound for the modulus in H and π/mod₂ + 3 an upper bound for the
        right side: the check errs toward passing. Widening the window
        shrinks that gap.

        Returns:
            Dict: 'lhs', 'rhs', 'modulus', 'window' and 'passed'
            (lhs <= 1.1·rhs).
        """
        metric = MetricAnalysis(self.config)
        z = complex(z)
        lhs = float(metric.dist_to_geodesic(e, t, z, ell_anchor))
        if lhs == 0.0:
            return {"lhs": 0.0, "rhs": np.inf, "modulus": np.inf, "window": None, "passed": True}
        delta = float(metric._domain(e, t).delta(z)[0])
        circle = z + 0.5 * delta * np.exp(1j * np.linspace(0.0, 2.0 * np.pi, n_circle))
        ball = metric._pullback(e, t, circle)
        center = complex(metric._pullback(e, t, z)[0])
        R = abs(center.real - ell_anchor) + center.imag
        if not window_factor > 1.0:
            raise InvalidArgumentError(f"window_factor must exceed 1, got {window_factor}")
        window = (ell_anchor - window_factor * R, ell_anchor + window_factor * R, 0.0,
                  window_factor * R)
        line = ell_anchor + 1j * np.linspace(0.0, window[3], 64)
        problem = ModulusProblem(DomainSpec(None, window), ball, line,
                                 int(grid_n or self.grid_n), window)
        mod = self.discrete_modulus(problem).value
        rhs = np.pi / mod + 3.0 if mod > 0 else np.inf
        return {"lhs": lhs, "rhs": float(rhs), "modulus": mod, "window": window,
                "passed": bool(lhs <= (1.0 + BALL_SLACK) * rhs)}

    def annulus_crossing_bound(self, spec: DomainSpec, z: complex, R: float,
                               grid_n: Optional[int] = None, E: Optional[np.ndarray] = None,
                               F: Optional[np.ndarray] = None) -> Dict:
        """
        Modulus of curves crossing A(z, R, 2R) against log(2)/(2π).

        By default E and F are the arcs of |w − z| = R and |w − z| = 2R in H;
        callers may pass their own continua.

        Returns:
            Dict: 'mod_value', 'bound', 'weak_bound' (1/25) and 'passed'
            (mod >= 0.8·bound).
        """
        if not R > 0:
            raise InvalidArgumentError(f"R must be positive, got {R}")
        z = complex(z)
        theta = np.linspace(0.0, 2.0 * np.pi, 512)

        def arc(radius: float) -> np.ndarray:
            pts = z + radius * np.exp(1j * theta)
            return pts[pts.imag >= 0]

        E = arc(R) if E is None else np.asarray(E, dtype=complex)
        F = arc(2.0 * R) if F is None else np.asarray(F, dtype=complex)
        x0, x1, _, y1 = spec.bbox
        window = (min(x0, z.real - 2.5 * R), max(x1, z.real + 2.5 * R), 0.0,
                  max(y1, z.imag + 2.5 * R))
        problem = ModulusProblem(spec, E, F, int(grid_n or self.grid_n), window)
        value = self.discrete_modulus(problem).value
        return {"mod_value": value, "bound": float(CROSSING_BOUND), "weak_bound": 1.0 / 25.0,
                "passed": bool(value >= (1.0 - CROSSING_SLACK) * CROSSING_BOUND)}


def discrete_modulus(p: ModulusProblem) -> ModulusResult:
    """Functional shortcut for ``ModulusEstimator().discrete_modulus``."""
    return ModulusEstimator().discrete_modulus(p)
