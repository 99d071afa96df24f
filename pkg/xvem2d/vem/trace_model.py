"""
Crack trace model.

Inside a cracked element the vertex hat functions are only known on the
element boundary. Their values along the crack are reconstructed with a
first-order polyharmonic spline (kernel rho, linear polynomial tail) fitted
to the boundary data, so linear functions and the partition of unity are
reproduced exactly.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.interpolate import RBFInterpolator

from ..utils.errors import TraceModelError
from ..utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class CrackTraceModel:
    """Spline interpolant of the N vertex hats of one element."""

    nodes: np.ndarray
    data: np.ndarray
    center: np.ndarray
    scale: float
    interpolant: RBFInterpolator

    @property
    def n_hats(self) -> int:
        return self.data.shape[1]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """Hat values at points x (q, 2), shape (q, N)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return self.interpolant((x - self.center) / self.scale)


def boundary_hat_values(parent_coords: np.ndarray, points: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """
    Hat values (k, N) at points lying on the boundary of the parent polygon.

    Raises:
        TraceModelError: If a point is not on the boundary.
    """
    parent_coords = np.asarray(parent_coords, dtype=float)
    n = len(parent_coords)
    scale = float(np.ptp(parent_coords, axis=0).max())
    out = np.zeros((len(np.atleast_2d(points)), n))
    for row, p in enumerate(np.atleast_2d(points)):
        best = (np.inf, 0, 0.0)
        for k in range(n):
            a, b = parent_coords[k], parent_coords[(k + 1) % n]
            d = b - a
            s = float(np.clip(np.dot(p - a, d) / np.dot(d, d), 0.0, 1.0))
            gap = float(np.linalg.norm(a + s * d - p))
            if gap < best[0]:
                best = (gap, k, s)
        gap, k, s = best
        if gap > tol * scale:
            raise TraceModelError(f"Point {p.tolist()} is not on the element boundary (gap {gap:.2e})")
        out[row, k] += 1.0 - s
        out[row, (k + 1) % n] += s
    return out


def build_trace_model(
    parent_coords: np.ndarray,
    extra_points: Optional[np.ndarray] = None,
    extra_hats: Optional[np.ndarray] = None,
) -> CrackTraceModel:
    """
    Fit the trace model of an element.

    Args:
        parent_coords: Parent polygon vertices (N, 2); hat i is 1 at vertex i.
        extra_points: Boundary points where the crack meets the element boundary.
        extra_hats: Hat values (k, N) at those points.

    Returns:
        CrackTraceModel interpolating the hats.

    Raises:
        TraceModelError: For fewer than three nodes or a singular system.
    """
    parent_coords = np.asarray(parent_coords, dtype=float)
    n = len(parent_coords)
    nodes = [p for p in parent_coords]
    data = [row for row in np.eye(n)]

    scale = float(np.ptp(parent_coords, axis=0).max())
    if extra_points is not None:
        for p, hat in zip(np.atleast_2d(extra_points), np.atleast_2d(extra_hats)):
            if np.min(np.hypot(*(np.asarray(nodes) - p).T)) <= 1e-12 * scale:
                continue
            nodes.append(np.asarray(p, dtype=float))
            data.append(np.asarray(hat, dtype=float))

    nodes = np.array(nodes)
    data = np.array(data)
    if len(nodes) < 3:
        raise TraceModelError(f"Trace model needs at least 3 nodes, got {len(nodes)}")

    center = nodes.mean(axis=0)
    try:
        interpolant = RBFInterpolator((nodes - center) / scale, data, kernel="linear", degree=1)
    except (ValueError, np.linalg.LinAlgError) as e:
        raise TraceModelError(f"Trace model interpolation system is singular: {e}")

    return CrackTraceModel(nodes=nodes, data=data, center=center, scale=scale, interpolant=interpolant)
