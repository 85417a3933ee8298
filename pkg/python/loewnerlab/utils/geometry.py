"""
Planar geometry kernels on complex arrays.

Points are complex numbers; segments are pairs of complex endpoint arrays.
All functions are vectorized with numpy and chunk their pairwise work so the
temporary arrays stay below a few million entries.
"""

from typing import Tuple

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial.distance import directed_hausdorff, pdist

_CHUNK = 4_000_000


def _chunk_rows(n_rows: int, n_cols: int) -> int:
    return max(1, _CHUNK // max(n_cols, 1))


def point_segment_distance(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Distance from each point to the union of segments [a_k, b_k].

    Args:
        points (np.ndarray): Complex query points, shape (m,).
        a (np.ndarray): Segment start points, shape (k,).
        b (np.ndarray): Segment end points, shape (k,).

    Returns:
        np.ndarray: Minimal distances, shape (m,). Infinite when k = 0.
    """
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    out = np.full(points.shape, np.inf)
    if a.size == 0:
        return out
    d = b - a
    dd = np.abs(d) ** 2
    dd_safe = np.where(dd > 0, dd, 1.0)
    step = _chunk_rows(points.size, a.size)
    for start in range(0, points.size, step):
        p = points[start:start + step, None]
        # projection parameter clipped to the segment
        s = ((p - a).real * d.real + (p - a).imag * d.imag) / dd_safe
        s = np.clip(np.where(dd > 0, s, 0.0), 0.0, 1.0)
        out[start:start + step] = np.min(np.abs(p - (a + s * d)), axis=1)
    return out


def _orient(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> np.ndarray:
    return (q - p).real * (r - p).imag - (q - p).imag * (r - p).real


def segments_intersect(p1: np.ndarray, p2: np.ndarray, q1: np.ndarray, q2: np.ndarray,
                       tol: float = 0.0) -> np.ndarray:
    """
    Broadcasting test whether closed segments [p1, p2] and [q1, q2] meet.

    Touching endpoints count as an intersection. ``tol`` widens the test so
    segments closer than ``tol`` are reported as meeting.
    """
    o1 = _orient(p1, p2, q1)
    o2 = _orient(p1, p2, q2)
    o3 = _orient(q1, q2, p1)
    o4 = _orient(q1, q2, p2)
    proper = (np.sign(o1) * np.sign(o2) < 0) & (np.sign(o3) * np.sign(o4) < 0)
    if tol <= 0:
        # collinear / touching cases
        touching = np.zeros(np.broadcast(o1, o3).shape, dtype=bool)
        for x, s1, s2 in ((q1, p1, p2), (q2, p1, p2), (p1, q1, q2), (p2, q1, q2)):
            o = _orient(s1, s2, x)
            within = ((np.minimum(s1.real, s2.real) <= x.real) & (x.real <= np.maximum(s1.real, s2.real))
                      & (np.minimum(s1.imag, s2.imag) <= x.imag) & (x.imag <= np.maximum(s1.imag, s2.imag)))
            touching |= (o == 0) & within
        return proper | touching
    close = np.minimum.reduce([
        _pair_point_segment(q1, p1, p2), _pair_point_segment(q2, p1, p2),
        _pair_point_segment(p1, q1, q2), _pair_point_segment(p2, q1, q2),
    ]) <= tol
    return proper | close


def _pair_point_segment(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    dd = np.abs(d) ** 2
    s = np.where(dd > 0, ((x - a).real * d.real + (x - a).imag * d.imag) / np.where(dd > 0, dd, 1.0), 0.0)
    s = np.clip(s, 0.0, 1.0)
    return np.abs(x - (a + s * d))


def point_box_distance(points: np.ndarray, x0: np.ndarray, x1: np.ndarray,
                       y0: np.ndarray, y1: np.ndarray) -> np.ndarray:
    """Broadcasting distance from points to closed axis-parallel boxes."""
    dx = np.maximum(np.maximum(x0 - points.real, points.real - x1), 0.0)
    dy = np.maximum(np.maximum(y0 - points.imag, points.imag - y1), 0.0)
    return np.hypot(dx, dy)


def segment_meets_box(a: np.ndarray, b: np.ndarray, x0: np.ndarray, x1: np.ndarray,
                      y0: np.ndarray, y1: np.ndarray) -> np.ndarray:
    """
    Broadcasting test whether closed segments [a, b] meet closed boxes.

    Liang-Barsky clipping of the segment against the box.
    """
    d = b - a
    t_lo = np.zeros(np.broadcast(a, x0).shape)
    t_hi = np.ones_like(t_lo)
    ok = np.ones_like(t_lo, dtype=bool)
    for p, q in ((-d.real, a.real - x0), (d.real, x1 - a.real),
                 (-d.imag, a.imag - y0), (d.imag, y1 - a.imag)):
        p = np.broadcast_to(p, t_lo.shape)
        q = np.broadcast_to(q, t_lo.shape)
        parallel = p == 0
        ok &= ~(parallel & (q < 0))
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(parallel, 0.0, q / np.where(parallel, 1.0, p))
        t_lo = np.where(~parallel & (p < 0), np.maximum(t_lo, r), t_lo)
        t_hi = np.where(~parallel & (p > 0), np.minimum(t_hi, r), t_hi)
    return ok & (t_lo <= t_hi)


def box_segment_distance(x0: np.ndarray, x1: np.ndarray, y0: np.ndarray, y1: np.ndarray,
                         a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Distance from each box to the union of segments.

    Args:
        x0, x1, y0, y1 (np.ndarray): Box bounds, shape (m,).
        a, b (np.ndarray): Segment endpoints, shape (k,).

    Returns:
        np.ndarray: Shape (m,), zero where a box meets a segment.
    """
    m = np.asarray(x0).size
    out = np.full(m, np.inf)
    if np.asarray(a).size == 0:
        return out
    step = _chunk_rows(m, 8 * a.size)
    for start in range(0, m, step):
        sl = slice(start, start + step)
        bx0, bx1 = x0[sl, None], x1[sl, None]
        by0, by1 = y0[sl, None], y1[sl, None]
        hit = segment_meets_box(a[None, :], b[None, :], bx0, bx1, by0, by1)
        dist = np.minimum(point_box_distance(a[None, :], bx0, bx1, by0, by1),
                          point_box_distance(b[None, :], bx0, bx1, by0, by1))
        for cx, cy in ((bx0, by0), (bx1, by0), (bx0, by1), (bx1, by1)):
            dist = np.minimum(dist, _pair_point_segment(cx + 1j * cy, a[None, :], b[None, :]))
        dist = np.where(hit, 0.0, dist)
        out[sl] = dist.min(axis=1)
    return out


def point_set_diameter(points: np.ndarray) -> float:
    """Euclidean diameter of a finite complex point set."""
    points = np.asarray(points, dtype=complex).ravel()
    if points.size < 2:
        return 0.0
    xy = np.column_stack([points.real, points.imag])
    if points.size > 64:
        try:
            xy = xy[ConvexHull(xy).vertices]
        except RuntimeError:
            # collinear input, keep the extreme points
            order = np.lexsort((xy[:, 1], xy[:, 0]))
            xy = xy[[order[0], order[-1]]]
    return float(pdist(xy).max())


def hausdorff_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two vertex sets."""
    pa = np.column_stack([np.real(p), np.imag(p)])
    qa = np.column_stack([np.real(q), np.imag(q)])
    return float(max(directed_hausdorff(pa, qa)[0], directed_hausdorff(qa, pa)[0]))


def polyline_segments(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Start and end points of the consecutive segments of a polyline."""
    points = np.asarray(points, dtype=complex)
    if points.size < 2:
        return points[:0], points[:0]
    return points[:-1], points[1:]


def resample_polyline(points: np.ndarray, n: int) -> np.ndarray:
    """Resample a polyline to n points uniformly in arc length."""
    points = np.asarray(points, dtype=complex)
    if points.size < 2 or n < 2:
        return points.copy()
    s = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(points)))])
    if s[-1] == 0:
        return np.repeat(points[:1], n)
    target = np.linspace(0.0, s[-1], n)
    return np.interp(target, s, points.real) + 1j * np.interp(target, s, points.imag)


def rasterize_polyline(points: np.ndarray, x0: float, y0: float, h: float,
                       nx: int, ny: int, closed: bool = False) -> np.ndarray:
    """
    Boolean (ny, nx) mask of grid cells visited by a polyline.

    Cell (r, c) covers [x0 + c h, x0 + (c+1) h] x [y0 + r h, y0 + (r+1) h].
    Segments are sampled at spacing h/4, so a 4-connected labelling of the
    free cells never leaks across the curve.
    """
    mask = np.zeros((ny, nx), dtype=bool)
    points = np.asarray(points, dtype=complex)
    if points.size == 0:
        return mask
    if closed and points.size > 2:
        points = np.append(points, points[0])
    if points.size == 1:
        samples = points
    else:
        a, b = points[:-1], points[1:]
        counts = np.maximum(np.ceil(np.abs(b - a) / (0.25 * h)).astype(int), 1)
        seg = np.repeat(np.arange(a.size), counts)
        offsets = np.arange(seg.size) - np.repeat(np.cumsum(counts) - counts, counts)
        s = offsets / np.repeat(counts, counts)
        samples = np.concatenate([a[seg] + s * (b[seg] - a[seg]), points[-1:]])
    cols = np.floor((samples.real - x0) / h).astype(int)
    rows = np.floor((samples.imag - y0) / h).astype(int)
    keep = (cols >= 0) & (cols < nx) & (rows >= 0) & (rows < ny)
    mask[rows[keep], cols[keep]] = True
    return mask
