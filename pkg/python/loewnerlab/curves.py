#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Curve families for scenarios, calibration and tests.

Every generator returns a HullCurve whose first point is on ℝ. Simple slits
have all later vertices in H; the half-disk outline is a filled hull.
"""

from typing import Callable, Dict

import numpy as np

from .core_model import HullCurve
from .exceptions import InvalidArgumentError


def segment_curve(length: float = 2.0, angle: float = 0.5, n: int = 200,
                  base: float = 0.0) -> HullCurve:
    """Segment from ``base`` at angle ``angle·π`` with n vertices."""
    if not 0.0 < angle < 1.0:
        raise InvalidArgumentError(f"angle must lie in (0, 1), got {angle}")
    r = np.linspace(0.0, length, max(n, 2))
    return HullCurve(base + r * np.exp(1j * np.pi * angle))


def vertical_slit(height: float = 1.0, n: int = 200, base: float = 0.0) -> HullCurve:
    return segment_curve(height, 0.5, n, base)


def circular_arc(radius: float = 1.0, sweep: float = 0.5 * np.pi, n: int = 200) -> HullCurve:
    """Arc of the circle of center −radius through 0, counter-clockwise from 0."""
    if not 0.0 < sweep < np.pi:
        raise InvalidArgumentError(f"sweep must lie in (0, π), got {sweep}")
    theta = np.linspace(0.0, sweep, max(n, 2))
    return HullCurve(radius * (np.exp(1j * theta) - 1.0))


def log_spiral(rate: float = 0.3, n: int = 400, turns: float = 1.0) -> HullCurve:
    """
    Spiral i + e^{−rate(θ+π/2)} e^{iθ} winding inward around i, starting at 0.

    θ runs over [−π/2, −π/2 + 2π·turns]; the radius decreases strictly so the
    curve is simple and stays inside the unit disk around i.
    """
    if rate <= 0:
        raise InvalidArgumentError(f"spiral rate must be positive, got {rate}")
    theta = np.linspace(-0.5 * np.pi, -0.5 * np.pi + 2.0 * np.pi * turns, max(n, 2))
    points = 1j + np.exp(-rate * (theta + 0.5 * np.pi)) * np.exp(1j * theta)
    points[0] = 0.0
    return HullCurve(points)


def koch_curve(depth: int = 7, ratio: float = 0.2, height: float = 1.0) -> HullCurve:
    """
    Quasi-arc by midpoint displacement of the segment [0, i·height].

    Each refinement moves segment midpoints perpendicular to the segment by
    ``ratio`` times its length, alternating sides. A displacement that would
    leave H is reflected.
    """
    if not 0.0 < ratio <= 0.2:
        raise InvalidArgumentError(f"displacement ratio must lie in (0, 0.2], got {ratio}")
    points = np.array([0.0, 1j * height])
    for _ in range(depth):
        a, b = points[:-1], points[1:]
        sign = np.where(np.arange(a.size) % 2 == 0, 1.0, -1.0)
        normal = 1j * (b - a)
        mid = 0.5 * (a + b) + sign * ratio * normal
        flipped = 0.5 * (a + b) - sign * ratio * normal
        mid = np.where(mid.imag > 0, mid, flipped)
        refined = np.empty(2 * points.size - 1, dtype=complex)
        refined[0::2] = points
        refined[1::2] = mid
        points = refined
    return HullCurve(points)


def hugging_curve(height: float = 1e-3, length: float = 1.0, n: int = 400) -> HullCurve:
    """Climb to i·height, then run parallel to ℝ for ``length``."""
    x = np.linspace(0.0, length, max(n - 1, 2))
    return HullCurve(np.concatenate([[0.0], x + 1j * height]))


def l_slit(height: float = 1.0, arm: float = 0.5, n: int = 200) -> HullCurve:
    """Vertical slit of ``height`` followed by a horizontal arm to the right."""
    n_up = max(2, int(round(n * height / (height + arm))))
    n_arm = max(2, n - n_up + 1)
    up = 1j * np.linspace(0.0, height, n_up)
    right = np.linspace(0.0, arm, n_arm)[1:] + 1j * height
    return HullCurve(np.concatenate([up, right]))


def half_disk(radius: float = 1.0, n: int = 256, center: float = 0.0) -> HullCurve:
    """Outline of the closed half-disk, from center − radius to center + radius."""
    theta = np.linspace(np.pi, 0.0, max(n, 3))
    points = center + radius * np.exp(1j * theta)
    points.imag[[0, -1]] = 0.0
    return HullCurve(points, simple=False, filled=True)


def vertical_ray(tip: complex, top: float, n: int = 200) -> np.ndarray:
    """Geometrically spaced vertical polyline from ``tip`` up to height ``top``, tip first."""
    tip = complex(tip)
    if not top > tip.imag > 0:
        raise InvalidArgumentError("need 0 < Im(tip) < top")
    heights = np.geomspace(tip.imag, top, max(n, 2))
    return tip.real + 1j * heights


CURVE_FAMILIES: Dict[str, Callable[..., HullCurve]] = {
    "segment": segment_curve,
    "vertical": vertical_slit,
    "circular-arc": circular_arc,
    "log-spiral": log_spiral,
    "koch": koch_curve,
    "hugging": hugging_curve,
    "l-slit": l_slit,
    "half-disk": half_disk,
}


def make_curve(family: str, n: int, **params) -> HullCurve:
    """
    Build a curve of a named family at resolution n.

    For the Koch family n is translated to the refinement depth giving at
    least n vertices.
    """
    if family not in CURVE_FAMILIES:
        raise InvalidArgumentError(f"Unsupported curve family: {family}")
    if family == "koch":
        depth = int(np.ceil(np.log2(max(n - 1, 1))))
        return koch_curve(depth=depth, **params)
    return CURVE_FAMILIES[family](n=n, **params)
