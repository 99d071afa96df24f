#!/usr/bin/env python3
"""
Quadrature - Gauss rules on element edges and an area-quadrature oracle

Every integral of the method lives on element boundaries, so the main
entry points build Gauss-Legendre rules on segments, optionally graded
toward a singular point. The polygon rule (ear clipping plus collapsed
Gauss rules on triangles) is an independent oracle used for checks.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .constants import Defaults, Tolerances
from .mesh import signed_area
from ..utils.errors import IntegrationError, InvalidArgumentError
from ..utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class EdgeRule:
    """Gauss-Legendre rule on [-1, 1]."""

    points: np.ndarray
    weights: np.ndarray
    order: int

    @property
    def exact_degree(self) -> int:
        return 2 * self.order - 1


@lru_cache(maxsize=64)
def gauss_rule(order: int = Defaults.EDGE_ORDER) -> EdgeRule:
    """
    Gauss-Legendre rule with ``order`` points.

    Raises:
        InvalidArgumentError: For orders below 1.
    """
    if order < 1:
        raise InvalidArgumentError(f"Gauss rule order must be positive, got {order}")
    points, weights = leggauss(order)
    points.setflags(write=False)
    weights.setflags(write=False)
    return EdgeRule(points=points, weights=weights, order=order)


@dataclass(frozen=True)
class GradingOptions:
    """Geometric subdivision of edges passing close to a singular point."""

    enabled: bool = True
    ratio: float = Defaults.GRADED_RATIO
    levels: int = Defaults.GRADED_LEVELS
    trigger: float = Tolerances.NEAR_TIP_EDGE_RATIO

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise InvalidArgumentError(f"Grading ratio must lie in (0, 1), got {self.ratio}")
        if self.levels < 1:
            raise InvalidArgumentError(f"Grading levels must be positive, got {self.levels}")


def _graded_offsets(lo: float, hi: float, floor: float, grading: GradingOptions) -> np.ndarray:
    """Offsets +-ratio^k inside (lo, hi), none closer to zero than ``floor``."""
    steps = grading.ratio ** np.arange(1, grading.levels + 1)
    steps = steps[steps >= floor]
    candidates = np.concatenate([-steps, steps])
    return candidates[(candidates > lo) & (candidates < hi)]


def edge_quadrature(
    a: np.ndarray,
    b: np.ndarray,
    rule: EdgeRule,
    singular_point: Optional[np.ndarray] = None,
    grading: Optional[GradingOptions] = None,
    breakpoints: Optional[Sequence[float]] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Quadrature points on the segment [a, b].

    When grading is enabled and the segment passes within
    ``grading.trigger * |b - a|`` of ``singular_point``, the segment is
    split at geometric distances from the closest point and the rule is
    applied on every piece. Pieces never get narrower than
    ``Tolerances.GRADED_FLOOR`` times the edge length, nor than half the
    distance to the point. If the point lies on the segment, the two
    pieces touching it use the substitution u = e t^2, which keeps every
    quadrature point off the point and integrates r^(k/2) behaviour
    exactly. Points are placed relative to the singular point, so no
    offset is lost against large absolute coordinates.

    Args:
        a: Start point.
        b: End point.
        rule: Gauss rule applied on every piece.
        singular_point: Optional point toward which the rule is graded.
        grading: Grading options.
        breakpoints: Extra edge parameters in (0, 1) where the integrand
            is not smooth (e.g. where the edge crosses the crack).

    Returns:
        (points (q, 2), physical weights (q,), parameters s in [0, 1] (q,))
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = b - a
    length = float(np.hypot(d[0], d[1]))
    if length == 0.0:
        raise IntegrationError(f"Zero-length edge at {a.tolist()}")

    origin, s0 = a, 0.0
    offsets = [0.0, 1.0]
    on_edge = False
    if singular_point is not None and grading is not None and grading.enabled:
        singular_point = np.asarray(singular_point, dtype=float)
        s_star = float(np.clip(np.dot(singular_point - a, d) / length**2, 0.0, 1.0))
        gap = float(np.linalg.norm(a + s_star * d - singular_point))
        if gap < grading.trigger * length:
            on_edge = gap <= Tolerances.ON_CRACK_RELATIVE * length
            if on_edge:
                if s_star < Tolerances.ON_CRACK_RELATIVE:
                    s_star = 0.0
                elif s_star > 1.0 - Tolerances.ON_CRACK_RELATIVE:
                    s_star = 1.0
                origin = singular_point
            else:
                origin = a + s_star * d
            s0 = s_star
            floor = max(Tolerances.GRADED_FLOOR, 0.5 * gap / length)
            offsets = [-s0, 0.0, 1.0 - s0]
            offsets.extend(_graded_offsets(-s0, 1.0 - s0, floor, grading))

    offsets = np.unique(np.asarray(offsets, dtype=float))
    if breakpoints is not None:
        for extra in np.asarray(breakpoints, dtype=float) - s0:
            # breakpoints coinciding with an existing one within rounding are dropped
            if -s0 < extra < 1.0 - s0 and np.abs(offsets - extra).min() > Tolerances.ON_CRACK_RELATIVE:
                offsets = np.sort(np.append(offsets, extra))
    lo, hi = offsets[:-1], offsets[1:]

    t = 0.5 * (rule.points + 1.0)
    u_parts = []
    w_parts = []
    for left, right in zip(lo, hi):
        if on_edge and left == 0.0:
            u_parts.append(right * t**2)
            w_parts.append(right * t * rule.weights * length)
        elif on_edge and right == 0.0:
            u_parts.append(left * t**2)
            w_parts.append(-left * t * rule.weights * length)
        else:
            half = 0.5 * (right - left)
            u_parts.append(0.5 * (left + right) + half * rule.points)
            w_parts.append(half * rule.weights * length)

    u = np.concatenate(u_parts)
    w = np.concatenate(w_parts)
    s = np.clip(s0 + u, 0.0, 1.0)
    return origin + u[:, None] * d, w, s


def integrate_edge(
    f: Callable[[np.ndarray], np.ndarray],
    a: np.ndarray,
    b: np.ndarray,
    rule: Optional[EdgeRule] = None,
    singular_point: Optional[np.ndarray] = None,
    grading: Optional[GradingOptions] = None,
    breakpoints: Optional[Sequence[float]] = None,
):
    """
    Integrate a field along the segment [a, b].

    Args:
        f: Vectorized field taking points (q, 2) and returning values (q, ...).
        a: Start point.
        b: End point.
        rule: Gauss rule (default order 16).
        singular_point: Optional point toward which the rule is graded.
        grading: Grading options.
        breakpoints: Extra edge parameters where the field has a kink or jump.

    Returns:
        Integral with the shape of a single field value.

    Raises:
        IntegrationError: If the field is not finite at a quadrature point.
    """
    rule = rule or gauss_rule()
    points, weights, _ = edge_quadrature(a, b, rule, singular_point, grading, breakpoints)
    values = np.asarray(f(points), dtype=float)
    finite = np.isfinite(values.reshape(len(points), -1)).all(axis=1)
    if not finite.all():
        bad = points[np.flatnonzero(~finite)[0]]
        raise IntegrationError(f"Non-finite integrand at point {bad.tolist()}")
    return np.tensordot(weights, values, axes=(0, 0))


def triangulate_polygon(coords: np.ndarray) -> List[Tuple[int, int, int]]:
    """
    Ear-clipping triangulation of a simple CCW polygon.

    Raises:
        IntegrationError: If no ear can be found (non-simple polygon).
    """
    coords = np.asarray(coords, dtype=float)
    if signed_area(coords) <= 0.0:
        raise IntegrationError("Cannot triangulate a polygon that is not counter-clockwise")
    remaining = list(range(len(coords)))
    triangles: List[Tuple[int, int, int]] = []
    scale = float(np.ptp(coords, axis=0).max()) ** 2

    def is_ear(i_prev, i, i_next) -> bool:
        p, q, r = coords[i_prev], coords[i], coords[i_next]
        cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        if cross <= 1e-14 * scale:
            return False
        for j in remaining:
            if j in (i_prev, i, i_next):
                continue
            x = coords[j]
            d1 = (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0])
            d2 = (r[0] - q[0]) * (x[1] - q[1]) - (r[1] - q[1]) * (x[0] - q[0])
            d3 = (p[0] - r[0]) * (x[1] - r[1]) - (p[1] - r[1]) * (x[0] - r[0])
            if d1 >= 0 and d2 >= 0 and d3 >= 0:
                return False
        return True

    while len(remaining) > 3:
        n = len(remaining)
        for k in range(n):
            i_prev, i, i_next = remaining[k - 1], remaining[k], remaining[(k + 1) % n]
            if is_ear(i_prev, i, i_next):
                triangles.append((i_prev, i, i_next))
                remaining.pop(k)
                break
        else:
            # only collinear vertices left
            for k in range(n):
                i_prev, i, i_next = remaining[k - 1], remaining[k], remaining[(k + 1) % n]
                p, q, r = coords[i_prev], coords[i], coords[i_next]
                cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
                if abs(cross) <= 1e-14 * scale:
                    remaining.pop(k)
                    break
            else:
                raise IntegrationError("Ear clipping failed: polygon is not simple")
    triangles.append(tuple(remaining))
    return triangles


@lru_cache(maxsize=32)
def collapsed_triangle_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Collapsed Gauss rule on the reference triangle (0,0), (1,0), (0,1).

    Maps the unit square by xi = u (1 - v), eta = u v with Jacobian u;
    exact for polynomials of degree 2 * order - 2.
    """
    x, w = leggauss(order)
    u = 0.5 * (x + 1.0)
    wu = 0.5 * w
    U, V = np.meshgrid(u, u, indexing="ij")
    WU, WV = np.meshgrid(wu, wu, indexing="ij")
    xi = (U * (1.0 - V)).ravel()
    eta = (U * V).ravel()
    weights = (WU * WV * U).ravel()
    return np.column_stack([xi, eta]), weights


def integrate_polygon_oracle(
    f: Callable[[np.ndarray], np.ndarray], coords: np.ndarray, order: int = 8
):
    """
    Area integral over a polygon by triangulation.

    Args:
        f: Vectorized field taking points (q, 2).
        coords: CCW polygon vertices.
        order: Gauss points per direction of the collapsed triangle rule.
    """
    coords = np.asarray(coords, dtype=float)
    ref_points, ref_weights = collapsed_triangle_rule(order)
    total = None
    for i, j, k in triangulate_polygon(coords):
        a, b, c = coords[i], coords[j], coords[k]
        jac = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
        points = a + ref_points[:, :1] * (b - a) + ref_points[:, 1:] * (c - a)
        part = np.tensordot(ref_weights * jac, np.asarray(f(points), dtype=float), axes=(0, 0))
        total = part if total is None else total + part
    return total
