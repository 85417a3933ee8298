#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
WhitneyGeometry: Dyadic Squares, Whitney Areas and Quasi-Hyperbolic Distance

This module provides the WhitneyGeometry class for the dyadic-square side of
the laboratory. Standard squares Q_{j,k} = [k2^j, (k+1)2^j] x [2^j, 2^{j+1}]
meeting a hull give its Whitney area, which is comparable to the half-plane
capacity; adaptive quadtree decompositions of H \\ K give chain counts and a
graph approximation of the quasi-hyperbolic metric.

Key features:
- Enumeration of closed standard squares meeting a polyline or filled hull
- Whitney area with the geometric tail below the level cutoff
- hcap intervals from calibrated constants shipped as package data
- Adaptive Whitney decompositions with closed-touching adjacency
- Chain distance by breadth-first search on the square graph
- Quasi-hyperbolic distance by Dijkstra on a square-point graph with a
  local refinement pass

Upstream dependencies:
- core_model (HullCurve, DomainSpec), utils.geometry for exact distances
- scipy.sparse.csgraph for graph searches

Downstream applications:
- MetricAnalysis comparisons of k_Ω with the hyperbolic metric
- TheoremHarness capacity checks
- LoewnerVisualization square plots

Version: 0.1.0
"""

import json
import os
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from matplotlib.path import Path
from scipy import sparse
from scipy.sparse.csgraph import connected_components, dijkstra, shortest_path

from .config import DEFAULT_CONFIG
from .core_model import DomainSpec, HullCurve
from .exceptions import InvalidArgumentError, InvalidDomainError, ResolutionError
from .utils.geometry import box_segment_distance
from .utils.logging_utils import VerboseMixin

CALIBRATION_FILE = os.path.join(os.path.dirname(__file__), "data", "hcap_calibration.json")
ADJACENCY_BLOCK = 512
ADJACENCY_TOL = 1e-12
# csgraph drops explicit zeros
MIN_WEIGHT = 1e-300


@dataclass(frozen=True)
class WhitneySquare:
    """
    A closed dyadic square [x0, x0 + 2^j] x [y0, y0 + 2^j].

    Standard squares have y0 = 2^j and x0 = k·2^j.
    """

    level: int
    x0: float
    y0: float

    @property
    def side(self) -> float:
        return 2.0 ** self.level

    @property
    def diam(self) -> float:
        return np.sqrt(2.0) * self.side

    @property
    def center(self) -> complex:
        return complex(self.x0 + 0.5 * self.side, self.y0 + 0.5 * self.side)

    @property
    def index(self) -> int:
        return int(round(self.x0 / self.side))

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        s = self.side
        return (self.x0 - tol <= z.real <= self.x0 + s + tol
                and self.y0 - tol <= z.imag <= self.y0 + s + tol)


@dataclass
class WhitneyComplex:
    """
    A set of dyadic squares with closed-touching adjacency.

    Squares are stored column-wise (levels, left edges, bottom edges); the
    adjacency graph is built on first use.

    Attributes:
        levels (np.ndarray): j per square.
        x0 (np.ndarray): Left edges.
        y0 (np.ndarray): Bottom edges.
        domain (Optional[DomainSpec]): The decomposed domain (adaptive) or
            the hull domain (standard); None for H.
        j_min (int): Level cutoff.
        j_max (int): Largest level present.
        kind (str): 'standard' or 'adaptive'.
        tail (float): Area bound of the squares below j_min (standard only).
    """

    levels: np.ndarray
    x0: np.ndarray
    y0: np.ndarray
    domain: Optional[DomainSpec] = None
    j_min: int = 0
    j_max: int = 0
    kind: str = "standard"
    tail: float = 0.0
    _graph: Optional[sparse.csr_matrix] = field(default=None, repr=False)

    def __post_init__(self):
        self.levels = np.asarray(self.levels, dtype=int)
        self.x0 = np.asarray(self.x0, dtype=float)
        self.y0 = np.asarray(self.y0, dtype=float)

    def __len__(self) -> int:
        return int(self.levels.size)

    @property
    def side(self) -> np.ndarray:
        return np.ldexp(1.0, self.levels)

    @property
    def centers(self) -> np.ndarray:
        s = self.side
        return (self.x0 + 0.5 * s) + 1j * (self.y0 + 0.5 * s)

    @property
    def squares(self) -> List[WhitneySquare]:
        return [WhitneySquare(int(j), float(x), float(y))
                for j, x, y in zip(self.levels, self.x0, self.y0)]

    def area(self) -> float:
        """Σ 4^j over the squares (no tail)."""
        return float(np.sum(np.ldexp(1.0, 2 * self.levels)))

    def level_counts(self) -> pd.Series:
        return pd.Series(self.levels).value_counts().sort_index()

    def locate(self, z: complex) -> int:
        """
        Index of a (closed) square containing z, the smallest one on ties.

        Raises:
            ResolutionError: If no square contains z.
        """
        s = self.side
        tol = ADJACENCY_TOL * np.maximum(1.0, s)
        hit = ((self.x0 - tol <= z.real) & (z.real <= self.x0 + s + tol)
               & (self.y0 - tol <= z.imag) & (z.imag <= self.y0 + s + tol))
        if not np.any(hit):
            raise ResolutionError(f"no square of the complex contains {z}")
        candidates = np.flatnonzero(hit)
        return int(candidates[np.argmin(self.levels[candidates])])

    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric boolean adjacency of closed-touching squares (corners count)."""
        if self._graph is not None:
            return self._graph
        n = len(self)
        s = self.side
        x1, y1 = self.x0 + s, self.y0 + s
        tol = ADJACENCY_TOL * np.maximum(1.0, s)
        rows, cols = [], []
        for start in range(0, n, ADJACENCY_BLOCK):
            sl = slice(start, start + ADJACENCY_BLOCK)
            touch = ((self.x0[sl, None] <= x1[None, :] + tol[None, :])
                     & (self.x0[None, :] <= x1[sl, None] + tol[sl, None])
                     & (self.y0[sl, None] <= y1[None, :] + tol[None, :])
                     & (self.y0[None, :] <= y1[sl, None] + tol[sl, None]))
            r, c = np.nonzero(touch)
            r = r + start
            keep = r != c
            rows.append(r[keep])
            cols.append(c[keep])
        r = np.concatenate(rows) if rows else np.zeros(0, dtype=int)
        c = np.concatenate(cols) if cols else np.zeros(0, dtype=int)
        graph = sparse.csr_matrix((np.ones(r.size, dtype=bool), (r, c)), shape=(n, n))
        self._graph = ((graph + graph.T) > 0).tocsr()
        return self._graph

    def adjacency_pairs(self) -> np.ndarray:
        """(i, j) index pairs with i < j."""
        coo = sparse.triu(self.adjacency(), k=1).tocoo()
        return np.column_stack([coo.row, coo.col])

    def to_frame(self) -> pd.DataFrame:
        """Table with columns j, k_or_cx, cy, side (k for standard squares)."""
        s = self.side
        if self.kind == "standard":
            k_or_cx = np.round(self.x0 / s).astype(int)
        else:
            k_or_cx = self.x0 + 0.5 * s
        return pd.DataFrame({"j": self.levels, "k_or_cx": k_or_cx,
                             "cy": self.y0 + 0.5 * s, "side": s})


def _band_x_ranges(a: np.ndarray, b: np.ndarray, lo: float, hi: float
                   ) -> Tuple[np.ndarray, np.ndarray]:
    """x-extent of each segment clipped to the band lo <= y <= hi (NaN when empty)."""
    dy = b.imag - a.imag
    flat = dy == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        s_lo = np.where(flat, 0.0, (lo - a.imag) / np.where(flat, 1.0, dy))
        s_hi = np.where(flat, 1.0, (hi - a.imag) / np.where(flat, 1.0, dy))
    s0 = np.clip(np.minimum(s_lo, s_hi), 0.0, 1.0)
    s1 = np.clip(np.maximum(s_lo, s_hi), 0.0, 1.0)
    empty = np.where(flat, (a.imag < lo) | (a.imag > hi), np.maximum(s_lo, s_hi) < 0)
    empty |= ~flat & (np.minimum(s_lo, s_hi) > 1)
    xa = a.real + s0 * (b.real - a.real)
    xb = a.real + s1 * (b.real - a.real)
    x_min = np.where(empty, np.nan, np.minimum(xa, xb))
    x_max = np.where(empty, np.nan, np.maximum(xa, xb))
    return x_min, x_max


class WhitneyGeometry(VerboseMixin):
    """
    Whitney decompositions and the quantities estimated from them.

    Attributes:
        jmin_offset (int): Default standard cutoff below floor(log2 diam K).
        adaptive_jmin (int): Default adaptive cutoff relative to the root level.
        verbose (bool): Whether to print progress messages.

    Examples:
        >>> from loewnerlab.curves import vertical_slit
        >>> wg = WhitneyGeometry()
        >>> round(wg.whitney_area(vertical_slit(1.0, 2), -20), 6)
        2.666667
    """

    def __init__(self, config: Optional[Dict] = None, verbose: bool = False,
                 calibration_path: Optional[str] = None):
        cfg = (config or DEFAULT_CONFIG)["whitney"]
        self.jmin_offset = int(cfg.get("jmin_offset", 24))
        self.adaptive_jmin = int(cfg.get("adaptive_jmin", -7))
        self.calibration_path = calibration_path or CALIBRATION_FILE
        self.verbose = verbose
        self._constants: Optional[Dict] = None

    # ------------------------------------------------------------------
    # Standard squares and capacity
    # ------------------------------------------------------------------
    def default_jmin(self, K: HullCurve) -> int:
        diam = max(K.diameter(), 1e-300)
        j = int(np.floor(np.log2(diam))) - self.jmin_offset
        if K.filled:
            # filled hulls have ~width/2^j squares per level
            j = max(j, int(np.floor(np.log2(diam))) - 12)
        return j

    def standard_squares_meeting(self, K: Optional[HullCurve], j_min: Optional[int] = None
                                 ) -> WhitneyComplex:
        """
        All closed standard squares Q_{j,k}, j >= j_min, meeting K.

        For filled hulls the squares inside the outline are included.

        Args:
            K (Optional[HullCurve]): Polyline or filled outline; None for K = ∅.
            j_min (Optional[int]): Level cutoff.

        Returns:
            WhitneyComplex: Standard squares, with the area tail below j_min.
        """
        if K is None or len(K) < 2 or float(K.points.imag.max()) <= 0:
            return WhitneyComplex(np.zeros(0), np.zeros(0), np.zeros(0), None,
                                  0 if j_min is None else j_min, 0, "standard", 0.0)
        j_min = self.default_jmin(K) if j_min is None else int(j_min)
        a, b = K.segments()
        polygon = None
        if K.filled:
            polygon = Path(np.column_stack([K.points.real, K.points.imag]))
        y_top = float(K.points.imag.max())
        j_max = int(np.floor(np.log2(y_top)))
        levels, xs, ys = [], [], []
        for j in range(j_min, j_max + 1):
            s = 2.0 ** j
            x_min, x_max = _band_x_ranges(a, b, s, 2.0 * s)
            ok = ~np.isnan(x_min)
            if not np.any(ok):
                continue
            k_lo = np.ceil(x_min[ok] / s - 1.0).astype(np.int64)
            k_hi = np.floor(x_max[ok] / s).astype(np.int64)
            counts = k_hi - k_lo + 1
            ks = np.repeat(k_lo, counts) + (np.arange(counts.sum())
                                           - np.repeat(np.cumsum(counts) - counts, counts))
            if polygon is not None:
                k_inner = np.arange(int(k_lo.min()), int(k_hi.max()) + 1)
                centers = np.column_stack([(k_inner + 0.5) * s, np.full(k_inner.size, 1.5 * s)])
                ks = np.concatenate([ks, k_inner[polygon.contains_points(centers)]])
            ks = np.unique(ks)
            levels.append(np.full(ks.size, j))
            xs.append(ks * s)
            ys.append(np.full(ks.size, s))
        levels = np.concatenate(levels) if levels else np.zeros(0, dtype=int)
        xs = np.concatenate(xs) if xs else np.zeros(0)
        ys = np.concatenate(ys) if ys else np.zeros(0)
        tail = self._area_tail(K, j_min)
        self.log(f"{levels.size} standard squares on levels [{j_min}, {j_max}], tail {tail:.3e}")
        return WhitneyComplex(levels, xs, ys, None, j_min, j_max, "standard", tail)

    @staticmethod
    def _area_tail(K: HullCurve, j_min: int) -> float:
        """Bound on Σ_{j<j_min} 4^j·#(squares at level j) near the real axis."""
        p = K.points
        low = p[p.imag <= 2.0 ** (j_min + 1)]
        width = float(low.real.max() - low.real.min()) if low.size else 0.0
        return width * 2.0 ** j_min + 2.0 * 4.0 ** j_min / 3.0

    def whitney_area(self, K: Optional[HullCurve], j_min: Optional[int] = None) -> float:
        """Area_W(K) = Σ 4^j over the standard squares meeting K (tail excluded)."""
        return self.standard_squares_meeting(K, j_min).area()

    def whitney_area_report(self, K: Optional[HullCurve], j_min: Optional[int] = None
                            ) -> Dict[str, float]:
        complex_ = self.standard_squares_meeting(K, j_min)
        return {"area": complex_.area(), "tail": complex_.tail, "j_min": complex_.j_min,
                "n_squares": len(complex_)}

    def calibration_constants(self) -> Dict:
        """The shipped (c_lo, c_hi) pair and its provenance."""
        if self._constants is None:
            with open(self.calibration_path, "r") as fh:
                self._constants = json.load(fh)
        return self._constants

    def hcap_estimate(self, K: Optional[HullCurve]) -> Dict[str, float]:
        """
        Interval [Area_W/c_hi, c_lo·Area_W] for hcap(K).

        The tail bound is added to the area so the interval stays conservative.

        Returns:
            Dict[str, float]: 'low', 'high' and the 'area' used.
        """
        report = self.whitney_area_report(K)
        constants = self.calibration_constants()
        area = report["area"] + report["tail"] if report["n_squares"] else 0.0
        return {"low": area / constants["c_hi"], "high": constants["c_lo"] * area,
                "area": area}

    def calibrate_hcap_constants(self, out_path: Optional[str] = None,
                                 zipper_vertices: int = 400) -> Dict:
        """
        Recompute (c_lo, c_hi) from the calibration family.

        Vertical slits and half-disks use their closed-form capacities; the
        L-shaped slits use 2T from the zipper.

        Args:
            out_path (Optional[str]): Write the constants as JSON here.
            zipper_vertices (int): Resolution of the L-slit reference.

        Returns:
            Dict: c_lo, c_hi, the ratio table and a provenance string.
        """
        from .curves import half_disk, l_slit, vertical_slit
        from .inverse_solver import ZipperSolver

        rows = []
        for h in (0.25, 0.5, 1.0, 2.0, 4.0):
            rows.append(("vertical-slit", h, vertical_slit(h, 64), 0.5 * h ** 2))
        for r in (0.5, 1.0, 2.0):
            rows.append(("half-disk", r, half_disk(r, 512), r ** 2))
        zipper = ZipperSolver()
        for arm in (0.5, 1.0):
            curve = l_slit(1.0, arm, zipper_vertices)
            rows.append(("l-slit", arm, curve, 2.0 * zipper.extract_driving(curve).T))
        table = []
        for family, param, K, hcap in rows:
            report = self.whitney_area_report(K)
            table.append({"family": family, "param": param, "hcap": hcap,
                          "area": report["area"] + report["tail"],
                          "ratio": (report["area"] + report["tail"]) / hcap})
        table = pd.DataFrame(table)
        ratio_max, ratio_min = float(table["ratio"].max()), float(table["ratio"].min())
        c_hi = float(2.0 ** np.ceil(np.log2(2.0 * ratio_max)))
        c_lo = float(np.ceil(4.0 * 3.0 / ratio_min) / 4.0)
        result = {
            "c_lo": c_lo,
            "c_hi": c_hi,
            "ratios": table.to_dict(orient="records"),
            "provenance": ("calibrated on vertical slits h in {1/4,...,4}, half-disks "
                           "r in {1/2,1,2} and L-slits; c_hi = next power of 2 above "
                           "2*max ratio, c_lo = 3/min ratio rounded up to 1/4"),
        }
        self.log(f"calibration ratios in [{ratio_min:.4f}, {ratio_max:.4f}] -> "
                 f"c_lo={c_lo}, c_hi={c_hi}")
        if out_path is not None:
            from .utils.io_utils import open_path

            with open_path(out_path, "w") as fh:
                json.dump(result, fh, indent=2)
        return result

    # ------------------------------------------------------------------
    # Adaptive decompositions
    # ------------------------------------------------------------------
    def adaptive_whitney(self, spec: DomainSpec, j_min: Optional[int] = None) -> WhitneyComplex:
        """
        Quadtree Whitney decomposition of Ω = H \\ K over the bbox.

        Root squares of side S (a power of 2 at least the bbox height) sit on
        ℝ and cover the bbox columns. A square is accepted when
        ½diam <= dist(Q, ∂Ω) <= 4diam, subdivided when dist < diam/2 and
        above the cutoff, and discarded otherwise or when inside a filled K.

        Args:
            spec (DomainSpec): Domain with bounding box.
            j_min (Optional[int]): Finest level.

        Returns:
            WhitneyComplex: Accepted squares.

        Raises:
            InvalidDomainError: If the accepted squares do not form one
                connected complex.
        """
        x_lo, x_hi, _, y_hi = spec.bbox
        S = 2.0 ** np.ceil(np.log2(max(y_hi, (x_hi - x_lo) / 8.0, 1e-300)))
        j_root = int(round(np.log2(S)))
        j_min = j_root + self.adaptive_jmin if j_min is None else int(j_min)
        if j_min > j_root:
            raise InvalidArgumentError(f"j_min {j_min} is above the root level {j_root}")
        k = np.arange(int(np.floor(x_lo / S)), int(np.ceil(x_hi / S)))
        x0, y0 = k * S, np.zeros(k.size)
        a, b = spec.segments()
        polygon = spec.polygon()
        acc_j, acc_x, acc_y = [], [], []
        j = j_root
        while x0.size and j >= j_min:
            s = 2.0 ** j
            diam = np.sqrt(2.0) * s
            dist = y0.copy()
            if a.size:
                dist = np.minimum(dist, box_segment_distance(x0, x0 + s, y0, y0 + s, a, b))
            inside = np.zeros(x0.size, dtype=bool)
            if polygon is not None:
                inside = (dist > 0) & polygon.contains_points(
                    np.column_stack([x0 + 0.5 * s, y0 + 0.5 * s]))
            accept = ~inside & (dist >= 0.5 * diam) & (dist <= 4.0 * diam)
            split = ~inside & (dist < 0.5 * diam)
            acc_j.append(np.full(int(accept.sum()), j))
            acc_x.append(x0[accept])
            acc_y.append(y0[accept])
            self.log(f"level {j}: {int(accept.sum())} accepted, {int(split.sum())} split")
            if j == j_min:
                break
            half = 0.5 * s
            px, py = x0[split], y0[split]
            x0 = np.concatenate([px, px + half, px, px + half])
            y0 = np.concatenate([py, py, py + half, py + half])
            j -= 1
        complex_ = WhitneyComplex(np.concatenate(acc_j), np.concatenate(acc_x),
                                  np.concatenate(acc_y), spec, j_min, j_root, "adaptive")
        if len(complex_) > 1:
            n_comp, _ = connected_components(complex_.adjacency(), directed=False)
            if n_comp > 1:
                raise InvalidDomainError(
                    f"the Whitney complex has {n_comp} components at level cutoff {j_min}")
        return complex_

    def chain_distance(self, w: WhitneyComplex, z0: complex, z1: complex) -> int:
        """
        Fewest squares in an adjacency chain from the square of z0 to that of z1.

        Raises:
            ResolutionError: If a point is not covered or no chain exists.
        """
        i0, i1 = w.locate(complex(z0)), w.locate(complex(z1))
        if i0 == i1:
            return 1
        hops = shortest_path(w.adjacency(), directed=False, unweighted=True, indices=i0)[i1]
        if not np.isfinite(hops):
            raise ResolutionError(f"no chain of squares joins {z0} and {z1}")
        return int(hops) + 1

    def quasi_hyperbolic_graph(self, spec: DomainSpec, resolution: float,
                               window: Optional[Sequence[complex]] = None
                               ) -> "QuasiHyperbolicGraph":
        """Square-point graph for repeated k_Ω queries over one domain."""
        spec = _with_points(spec, window)
        j_min = int(np.floor(np.log2(resolution)))
        complex_ = self.adaptive_whitney(spec, j_min)
        return QuasiHyperbolicGraph(spec, complex_)

    def quasi_hyperbolic_distance(self, spec: DomainSpec, z0: complex, z1: complex,
                                  resolution: float) -> float:
        """
        Graph estimate of k_Ω(z0, z1) = inf ∫ |dz|/δ_Ω(z).

        Raises:
            InvalidArgumentError: If an endpoint is outside Ω.
        """
        graph = self.quasi_hyperbolic_graph(spec, resolution, [z0, z1])
        return graph.distance(z0, z1)


def _with_points(spec: DomainSpec, points: Optional[Sequence[complex]]) -> DomainSpec:
    if not points:
        return spec
    pts = np.asarray(points, dtype=complex)
    x_lo, x_hi, y_lo, y_hi = spec.bbox
    pad = 0.25 * max(float(np.ptp(pts.real)), float(np.ptp(pts.imag)), 1e-3)
    box = (min(x_lo, float(pts.real.min()) - pad), max(x_hi, float(pts.real.max()) + pad),
           y_lo, max(y_hi, float(pts.imag.max()) + pad))
    return DomainSpec(spec.hull, box, check_connected=False)


class QuasiHyperbolicGraph:
    """
    Dijkstra graph over the 9 points (corners, edge midpoints, center) of every
    square of an adaptive complex, 36 edges per square.

    An edge [p, q] weighs |q − p| / min δ_Ω over samples along it, which bounds
    ∫_[p,q] |dz|/δ_Ω from above. The graph distance is therefore an upper
    estimate of k_Ω, and `refine` is the only step that lowers it.
    """

    EDGE_SAMPLES = 8
    MOVE_PIECES = 8
    REFINE_PIECES = 32

    def __init__(self, spec: DomainSpec, complex_: WhitneyComplex):
        self.spec = spec
        self.complex = complex_
        s = complex_.side
        offsets = np.array([0, 0.5, 1.0])
        ox, oy = np.meshgrid(offsets, offsets)
        ox, oy = ox.ravel(), oy.ravel()
        pts = (complex_.x0[:, None] + ox[None, :] * s[:, None]) + 1j * (
            complex_.y0[:, None] + oy[None, :] * s[:, None])
        quantum = 2.0 ** (complex_.j_min - 2)
        keys = np.column_stack([np.round(pts.real.ravel() / quantum),
                                np.round(pts.imag.ravel() / quantum)]).astype(np.int64)
        _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
        self.nodes = pts.ravel()[first]
        node_of = inverse.reshape(pts.shape)
        ii, jj = np.triu_indices(9, k=1)
        u = node_of[:, ii].ravel()
        v = node_of[:, jj].ravel()
        # squares sharing an edge list the same point pairs
        edges = np.unique(np.column_stack([np.minimum(u, v), np.maximum(u, v)]), axis=0)
        u, v = edges[:, 0], edges[:, 1]
        weights = np.maximum(self.segment_cost(self.nodes[u], self.nodes[v]), MIN_WEIGHT)
        n = self.nodes.size
        self.base = sparse.coo_matrix((weights, (u, v)), shape=(n, n)).tocsr()
        self.node_of = node_of

    def segment_cost(self, p: np.ndarray, q: np.ndarray, pieces: int = 1,
                     samples: Optional[int] = None) -> np.ndarray:
        """
        Sum over `pieces` equal parts of [p, q] of length / min sampled δ_Ω.

        Args:
            p (np.ndarray): Segment starts.
            q (np.ndarray): Segment ends.
            pieces (int): Number of equal parts; 1 gives the graph edge weight.
            samples (int, optional): Intervals per part, endpoints included.
                Defaults to EDGE_SAMPLES for a single part and 2 otherwise.

        Returns:
            np.ndarray: Costs, infinite where a sample touches ∂Ω.
        """
        p = np.atleast_1d(p)
        q = np.atleast_1d(q)
        k = samples or (self.EDGE_SAMPLES if pieces == 1 else 2)
        s = np.linspace(0.0, 1.0, pieces * k + 1)
        points = p[:, None] + s[None, :] * (q - p)[:, None]
        delta = self.spec.delta(points.ravel()).reshape(points.shape)
        lo = np.minimum(delta[:, :-1].reshape(p.size, pieces, k).min(axis=2), delta[:, k::k])
        with np.errstate(divide="ignore"):
            inv = np.where(lo > 0, 1.0 / lo, np.inf)
        return np.abs(q - p) / pieces * inv.sum(axis=1)

    def _attach(self, z: complex) -> Tuple[np.ndarray, np.ndarray]:
        i = self.complex.locate(z)
        nbrs = np.unique(self.node_of[i])
        cost = self.segment_cost(np.full(nbrs.size, z), self.nodes[nbrs])
        return nbrs, np.maximum(cost, MIN_WEIGHT)

    def distance(self, z0: complex, z1: complex, refine: bool = True) -> float:
        """
        k_Ω(z0, z1) estimate: Dijkstra, then one local refinement pass.

        Args:
            z0 (complex): First endpoint.
            z1 (complex): Second endpoint.
            refine (bool): If False, return the graph distance itself.

        Returns:
            float: Upper estimate of k_Ω(z0, z1).
        """
        z0, z1 = complex(z0), complex(z1)
        if not (self.spec.contains(z0)[0] and self.spec.contains(z1)[0]):
            raise InvalidArgumentError("both endpoints must lie in the domain")
        if z0 == z1:
            return 0.0
        n = self.nodes.size
        n0, w0 = self._attach(z0)
        n1, w1 = self._attach(z1)
        rows = np.concatenate([np.full(n0.size, n), np.full(n1.size, n + 1)])
        cols = np.concatenate([n0, n1])
        extra = sparse.coo_matrix((np.concatenate([w0, w1]), (rows, cols)), shape=(n + 2, n + 2))
        graph = sparse.bmat([[self.base, None], [None, sparse.csr_matrix((2, 2))]]).tocsr()
        graph = (graph + extra.tocsr()).tocsr()
        if self.complex.locate(z0) == self.complex.locate(z1):
            direct = np.maximum(self.segment_cost(np.array([z0]), np.array([z1])), MIN_WEIGHT)
            graph = graph + sparse.coo_matrix((direct, ([n], [n + 1])), shape=(n + 2, n + 2))
        dist, pred = dijkstra(graph, directed=False, indices=n, return_predecessors=True)
        if not np.isfinite(dist[n + 1]):
            raise ResolutionError(f"no graph path joins {z0} and {z1}")
        if not refine:
            return float(dist[n + 1])
        path = [n + 1]
        while path[-1] != n:
            path.append(int(pred[path[-1]]))
        nodes = np.concatenate([self.nodes, [z0, z1]])
        polyline = nodes[path[::-1]]
        return min(float(dist[n + 1]), self.refine(polyline))

    def refine(self, polyline: np.ndarray) -> float:
        """
        Move each interior vertex once to the best point of a local 5x5 grid and
        return the cost of the result with every segment cut into REFINE_PIECES.
        """
        p = polyline.copy()
        for i in range(1, p.size - 1):
            h = 0.25 * min(abs(p[i] - p[i - 1]), abs(p[i + 1] - p[i]))
            offsets = np.linspace(-h, h, 5)
            cand = (p[i] + offsets[None, :] + 1j * offsets[:, None]).ravel()
            cand = cand[cand.imag > 0]
            cand = cand[self.spec.delta(cand) > 0]
            if cand.size == 0:
                continue
            cost = (self.segment_cost(np.full(cand.size, p[i - 1]), cand, self.MOVE_PIECES)
                    + self.segment_cost(cand, np.full(cand.size, p[i + 1]), self.MOVE_PIECES))
            for c in np.argsort(cost):
                if not np.any(self.spec.segment_leaves(np.array([p[i - 1], cand[c]]),
                                                       np.array([cand[c], p[i + 1]]))):
                    p[i] = cand[c]
                    break
        total = self.segment_cost(p[:-1], p[1:], self.REFINE_PIECES).sum()
        if not np.isfinite(total):
            warnings.warn("refined quasi-hyperbolic path touches the boundary")
        return float(total)


def standard_squares_meeting(K: Optional[HullCurve], j_min: int) -> WhitneyComplex:
    return WhitneyGeometry().standard_squares_meeting(K, j_min)


def whitney_area(K: Optional[HullCurve], j_min: Optional[int] = None) -> float:
    return WhitneyGeometry().whitney_area(K, j_min)


def hcap_estimate(K: Optional[HullCurve]) -> Dict[str, float]:
    return WhitneyGeometry().hcap_estimate(K)


def adaptive_whitney(spec: DomainSpec, j_min: Optional[int] = None) -> WhitneyComplex:
    return WhitneyGeometry().adaptive_whitney(spec, j_min)


def chain_distance(w: WhitneyComplex, z0: complex, z1: complex) -> int:
    return WhitneyGeometry().chain_distance(w, z0, z1)


def quasi_hyperbolic_distance(spec: DomainSpec, z0: complex, z1: complex,
                              resolution: float = 1e-2) -> float:
    return WhitneyGeometry().quasi_hyperbolic_distance(spec, z0, z1, resolution)
