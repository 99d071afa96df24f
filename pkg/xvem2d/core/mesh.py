#!/usr/bin/env python3
"""
Polygonal Mesh - Mesh container, element geometry and regularity checks

This module provides the PolygonalMesh data class holding vertices, CCW
element loops and tagged boundary edges, the ElementGeometry record used
by every element kernel, the structured quadrilateral generator and the
mesh-regularity report (edge-length and star-shapedness conditions).
"""

from dataclasses import dataclass, field as dataclass_field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial.distance import pdist

from .constants import BoundaryTags
from ..utils.errors import InvalidArgumentError, MeshGenerationError
from ..utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangular domain."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise InvalidArgumentError(
                f"Degenerate rectangle [{self.x_min}, {self.x_max}] x [{self.y_min}, {self.y_max}]"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.width, self.height))

    def corners(self) -> np.ndarray:
        """Corners in counter-clockwise order starting at the lower left."""
        return np.array(
            [
                [self.x_min, self.y_min],
                [self.x_max, self.y_min],
                [self.x_max, self.y_max],
                [self.x_min, self.y_max],
            ]
        )

    def sides_of(self, point: np.ndarray, tol: float) -> Tuple[str, ...]:
        """Names of the sides a point lies on (two names at a corner)."""
        x, y = float(point[0]), float(point[1])
        sides = []
        if abs(y - self.y_min) <= tol:
            sides.append(BoundaryTags.BOTTOM)
        if abs(x - self.x_max) <= tol:
            sides.append(BoundaryTags.RIGHT)
        if abs(y - self.y_max) <= tol:
            sides.append(BoundaryTags.TOP)
        if abs(x - self.x_min) <= tol:
            sides.append(BoundaryTags.LEFT)
        return tuple(sides)

    def to_dict(self) -> Dict[str, float]:
        return {"x_min": self.x_min, "y_min": self.y_min, "x_max": self.x_max, "y_max": self.y_max}


@dataclass
class BoundaryEdge:
    """A boundary edge identified by its element and local edge index."""

    element: int
    local_edge: int
    tag: str

    def to_dict(self) -> Dict[str, Any]:
        return {"element": self.element, "local_edge": self.local_edge, "tag": self.tag}


@dataclass
class ElementGeometry:
    """
    Geometric data of one polygon.

    Edge k runs from vertex k to vertex k+1; its outward unit normal and
    length are stored at index k.
    """

    vertices: np.ndarray
    area: float
    centroid: np.ndarray
    diameter: float
    normals: np.ndarray
    lengths: np.ndarray

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def scaled(self, x: np.ndarray) -> np.ndarray:
        """Scaled coordinates (x - x_P) / h_P."""
        return (np.asarray(x, dtype=float) - self.centroid) / self.diameter

    def to_dict(self) -> Dict[str, Any]:
        return {
            "area": self.area,
            "centroid": self.centroid.tolist(),
            "diameter": self.diameter,
            "lengths": self.lengths.tolist(),
        }


def signed_area(coords: np.ndarray) -> float:
    """Shoelace signed area; positive for counter-clockwise loops."""
    coords = np.asarray(coords, dtype=float)
    x, y = coords[:, 0], coords[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def polygon_geometry(coords: np.ndarray) -> ElementGeometry:
    """Compute area, centroid, diameter, normals and edge lengths of a CCW polygon."""
    coords = np.asarray(coords, dtype=float)
    nxt = np.roll(coords, -1, axis=0)

    cross = coords[:, 0] * nxt[:, 1] - nxt[:, 0] * coords[:, 1]
    area = 0.5 * float(cross.sum())
    if area <= 0.0:
        raise InvalidArgumentError(f"Polygon has non-positive signed area {area:.3e}")

    centroid = np.array(
        [
            float(np.dot(coords[:, 0] + nxt[:, 0], cross)),
            float(np.dot(coords[:, 1] + nxt[:, 1], cross)),
        ]
    ) / (6.0 * area)

    edges = nxt - coords
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    normals = np.column_stack([edges[:, 1], -edges[:, 0]]) / lengths[:, None]
    diameter = float(pdist(coords).max()) if len(coords) > 1 else 0.0

    return ElementGeometry(
        vertices=coords,
        area=area,
        centroid=centroid,
        diameter=diameter,
        normals=normals,
        lengths=lengths,
    )


def is_convex(coords: np.ndarray, tol: float = 1e-12) -> bool:
    """Whether a CCW polygon is convex (collinear vertices allowed)."""
    coords = np.asarray(coords, dtype=float)
    e1 = np.roll(coords, -1, axis=0) - coords
    e2 = np.roll(e1, -1, axis=0)
    cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    scale = float(np.max(np.abs(coords - coords.mean(axis=0)))) ** 2
    return bool(np.all(cross >= -tol * scale))


def _segments_intersect(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    if ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4)):
        return True
    return False


def is_simple(coords: np.ndarray) -> bool:
    """Whether the closed loop has no crossing between non-adjacent edges."""
    coords = np.asarray(coords, dtype=float)
    n = len(coords)
    for i in range(n):
        a1, a2 = coords[i], coords[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_intersect(a1, a2, coords[j], coords[(j + 1) % n]):
                return False
    return True


def point_in_polygon(coords: np.ndarray, point: np.ndarray) -> bool:
    """Even-odd ray casting test (boundary points are not classified reliably)."""
    x, y = float(point[0]), float(point[1])
    inside = False
    n = len(coords)
    for i in range(n):
        x1, y1 = coords[i]
        x2, y2 = coords[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x_cross > x:
                inside = not inside
    return inside


def distance_to_boundary(coords: np.ndarray, point: np.ndarray) -> float:
    """Euclidean distance from a point to the polygon boundary."""
    coords = np.asarray(coords, dtype=float)
    a = coords
    b = np.roll(coords, -1, axis=0)
    ab = b - a
    ap = np.asarray(point, dtype=float) - a
    t = np.clip(np.einsum("ij,ij->i", ap, ab) / np.einsum("ij,ij->i", ab, ab), 0.0, 1.0)
    closest = a + t[:, None] * ab
    return float(np.min(np.hypot(*(closest - point).T)))


def contains_point(coords: np.ndarray, point: np.ndarray, tol: float, strict: bool = False) -> bool:
    """
    Point location with a distance tolerance.

    Args:
        coords: Polygon vertices.
        point: Query point.
        tol: Distance below which a point counts as on the boundary.
        strict: Require the point to be inside and farther than ``tol`` from the boundary.
    """
    dist = distance_to_boundary(coords, point)
    if dist <= tol:
        return not strict
    return point_in_polygon(coords, point)


@dataclass
class PolygonalMesh:
    """
    Polygonal discretization of a planar domain.

    Elements are counter-clockwise loops of vertex indices. Boundary edges
    carry a tag naming the part of the boundary they belong to.
    """

    vertices: np.ndarray
    elements: List[np.ndarray]
    boundary_edges: List[BoundaryEdge]
    domain: Optional[Rectangle] = None
    duplicates: Dict[int, int] = dataclass_field(default_factory=dict)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.elements = [np.asarray(loop, dtype=int) for loop in self.elements]
        self._geometry_cache: Dict[int, ElementGeometry] = {}
        self._edge_tags: Optional[Dict[Tuple[int, int], str]] = None

    @property
    def n_nodes(self) -> int:
        return len(self.vertices)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    def element_coords(self, e: int) -> np.ndarray:
        return self.vertices[self.elements[e]]

    def element_edges(self, e: int) -> List[Tuple[int, int]]:
        """Directed edges (vertex pairs) of an element."""
        loop = self.elements[e]
        return [(int(loop[k]), int(loop[(k + 1) % len(loop)])) for k in range(len(loop))]

    def geometry(self, e: int) -> ElementGeometry:
        if e not in self._geometry_cache:
            self._geometry_cache[e] = polygon_geometry(self.element_coords(e))
        return self._geometry_cache[e]

    @property
    def max_diameter(self) -> float:
        """Global mesh size h (largest element diameter)."""
        return max(self.geometry(e).diameter for e in range(self.n_elements))

    @property
    def total_area(self) -> float:
        return float(sum(self.geometry(e).area for e in range(self.n_elements)))

    def edge_tag(self, e: int, local_edge: int) -> Optional[str]:
        """Tag of a boundary edge, or None for interior edges."""
        if self._edge_tags is None:
            self._edge_tags = {(b.element, b.local_edge): b.tag for b in self.boundary_edges}
        return self._edge_tags.get((e, local_edge))

    def boundary_nodes(self, tags: Optional[Iterable[str]] = None) -> np.ndarray:
        """Sorted node ids on boundary edges with the given tags (all tags by default)."""
        wanted = None if tags is None else set(tags)
        nodes = set()
        for b in self.boundary_edges:
            if wanted is not None and b.tag not in wanted:
                continue
            loop = self.elements[b.element]
            nodes.add(int(loop[b.local_edge]))
            nodes.add(int(loop[(b.local_edge + 1) % len(loop)]))
        return np.array(sorted(nodes), dtype=int)

    def node_elements(self) -> List[List[int]]:
        """Elements incident to each node."""
        owners: List[List[int]] = [[] for _ in range(self.n_nodes)]
        for e, loop in enumerate(self.elements):
            for v in loop:
                owners[int(v)].append(e)
        return owners

    def validate(self) -> None:
        """
        Check the mesh invariants.

        Raises:
            MeshGenerationError: If any loop is invalid or the edge
                adjacency is inconsistent.
        """
        directed: Dict[Tuple[int, int], int] = {}
        for e, loop in enumerate(self.elements):
            n = len(loop)
            if n < 3:
                raise MeshGenerationError(f"Element {e} has {n} vertices")
            if loop.min() < 0 or loop.max() >= self.n_nodes:
                raise MeshGenerationError(f"Element {e} references vertices out of range")
            if np.any(loop == np.roll(loop, -1)):
                raise MeshGenerationError(f"Element {e} has duplicate consecutive vertices")
            coords = self.element_coords(e)
            if signed_area(coords) <= 0.0:
                raise MeshGenerationError(f"Element {e} is not counter-clockwise")
            if not is_simple(coords):
                raise MeshGenerationError(f"Element {e} is self-intersecting")
            for k, edge in enumerate(self.element_edges(e)):
                if edge in directed:
                    raise MeshGenerationError(
                        f"Edge {edge} used twice with the same orientation (elements {directed[edge]}, {e})"
                    )
                directed[edge] = e

        boundary = {
            (e, k)
            for (a, b), e in directed.items()
            if (b, a) not in directed
            for k in [self.element_edges(e).index((a, b))]
        }
        tagged = {(b.element, b.local_edge) for b in self.boundary_edges}
        if boundary != tagged:
            missing = sorted(boundary - tagged)[:5]
            extra = sorted(tagged - boundary)[:5]
            raise MeshGenerationError(
                f"Boundary edge list inconsistent with adjacency (untagged: {missing}, not boundary: {extra})"
            )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_nodes": self.n_nodes,
            "n_elements": self.n_elements,
            "h": self.max_diameter,
            "domain": self.domain.to_dict() if self.domain else None,
        }


def tag_boundary_edges(
    vertices: np.ndarray, elements: Sequence[np.ndarray], domain: Rectangle
) -> List[BoundaryEdge]:
    """Find edges used by a single element and tag them by rectangle side."""
    directed = set()
    for loop in elements:
        n = len(loop)
        for k in range(n):
            directed.add((int(loop[k]), int(loop[(k + 1) % n])))

    tol = 1e-9 * domain.diameter
    tags: List[BoundaryEdge] = []
    for e, loop in enumerate(elements):
        n = len(loop)
        for k in range(n):
            a, b = int(loop[k]), int(loop[(k + 1) % n])
            if (b, a) in directed:
                continue
            common = set(domain.sides_of(vertices[a], tol)) & set(domain.sides_of(vertices[b], tol))
            if not common:
                raise MeshGenerationError(f"Boundary edge ({a}, {b}) of element {e} is not on the domain boundary")
            tags.append(BoundaryEdge(element=e, local_edge=k, tag=sorted(common)[0]))
    return tags


def build_structured_quad_mesh(domain: Rectangle, nx: int, ny: int) -> PolygonalMesh:
    """
    Build a mesh of nx x ny rectangles tiling the domain.

    Args:
        domain: Rectangle to mesh.
        nx: Number of cells along x.
        ny: Number of cells along y.

    Returns:
        PolygonalMesh with boundary edges tagged by side.

    Raises:
        InvalidArgumentError: For non-positive counts.
    """
    if nx < 1 or ny < 1:
        raise InvalidArgumentError(f"Cell counts must be positive, got nx={nx}, ny={ny}")

    xs = np.linspace(domain.x_min, domain.x_max, nx + 1)
    ys = np.linspace(domain.y_min, domain.y_max, ny + 1)
    X, Y = np.meshgrid(xs, ys)
    vertices = np.column_stack([X.ravel(), Y.ravel()])

    def node(i: int, j: int) -> int:
        return j * (nx + 1) + i

    elements = []
    boundary: List[BoundaryEdge] = []
    for j in range(ny):
        for i in range(nx):
            e = len(elements)
            elements.append(np.array([node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)]))
            if j == 0:
                boundary.append(BoundaryEdge(e, 0, BoundaryTags.BOTTOM))
            if i == nx - 1:
                boundary.append(BoundaryEdge(e, 1, BoundaryTags.RIGHT))
            if j == ny - 1:
                boundary.append(BoundaryEdge(e, 2, BoundaryTags.TOP))
            if i == 0:
                boundary.append(BoundaryEdge(e, 3, BoundaryTags.LEFT))

    mesh = PolygonalMesh(vertices=vertices, elements=elements, boundary_edges=boundary, domain=domain)
    logger.info(f"Built structured mesh: {nx}x{ny} cells, {mesh.n_nodes} nodes")
    return mesh


def element_geometry(mesh: PolygonalMesh, e: int) -> ElementGeometry:
    """Geometry of element ``e``."""
    if not 0 <= e < mesh.n_elements:
        raise InvalidArgumentError(f"Element index {e} out of range [0, {mesh.n_elements})")
    return mesh.geometry(e)


def kernel_disk_radius(coords: np.ndarray) -> float:
    """
    Radius of the largest disk inside the kernel of a polygon.

    The kernel is the intersection of the inner half-planes of all edges,
    so the radius follows from a Chebyshev-center linear program.
    """
    geom = polygon_geometry(coords)
    a = geom.vertices
    # n_k . c + r <= n_k . a_k
    A_ub = np.column_stack([geom.normals, np.ones(len(a))])
    b_ub = np.einsum("ij,ij->i", geom.normals, a)
    result = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=A_ub,
        b_ub=b_ub,
        bounds=[(None, None), (None, None), (0.0, None)],
        method="highs",
    )
    if not result.success:
        return 0.0
    return float(result.x[2])


@dataclass
class RegularityReport:
    """Per-element outcome of the mesh-regularity conditions."""

    rho: float
    edge_condition: np.ndarray
    star_condition: np.ndarray
    min_edge_ratio: np.ndarray
    kernel_radius: np.ndarray

    @property
    def violating_elements(self) -> List[int]:
        return [int(e) for e in np.flatnonzero(~(self.edge_condition & self.star_condition))]

    @property
    def passed(self) -> bool:
        return not self.violating_elements

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rho": self.rho,
            "passed": self.passed,
            "violating_elements": self.violating_elements,
            "worst_edge_ratio": float(self.min_edge_ratio.min()) if len(self.min_edge_ratio) else None,
        }


def check_mesh_regularity(mesh: PolygonalMesh, rho: float) -> RegularityReport:
    """
    Evaluate the edge-length and star-shapedness conditions.

    Convex elements are star-shaped with respect to their inscribed disk
    and pass the second condition; for non-convex ones the radius of the
    largest disk in the kernel polygon must reach rho * h_P.

    Args:
        mesh: Mesh to check.
        rho: Regularity constant in (0, 1).

    Returns:
        RegularityReport listing violating elements.
    """
    if not 0.0 < rho < 1.0:
        raise InvalidArgumentError(f"rho must lie in (0, 1), got {rho}")

    n = mesh.n_elements
    edge_ok = np.zeros(n, dtype=bool)
    star_ok = np.zeros(n, dtype=bool)
    ratios = np.zeros(n)
    radii = np.zeros(n)

    for e in range(n):
        geom = mesh.geometry(e)
        ratios[e] = geom.lengths.min() / geom.diameter
        edge_ok[e] = ratios[e] >= rho
        coords = mesh.element_coords(e)
        radii[e] = kernel_disk_radius(coords)
        star_ok[e] = is_convex(coords) or radii[e] >= rho * geom.diameter

    report = RegularityReport(
        rho=rho, edge_condition=edge_ok, star_condition=star_ok, min_edge_ratio=ratios, kernel_radius=radii
    )
    if not report.passed:
        logger.warning(f"{len(report.violating_elements)} elements violate regularity with rho={rho}")
    return report
