#!/usr/bin/env python3
"""
Crack Geometry - Crack polyline, tip coordinates, enrichment plans and element splitting

This module provides the Crack data class (polyline with a tip frame), the
signed distance and tip polar coordinates used by the enrichment fields,
the classification of mesh elements and nodes into an EnrichmentPlan,
splitting of cut elements into two sub-polygons, and explicit insertion of
a crack that runs along mesh edges.
"""

from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .constants import BoundaryTags, Tolerances
from .mesh import BoundaryEdge, PolygonalMesh, contains_point, signed_area
from ..utils.errors import InvalidArgumentError, MeshGenerationError, NotSplittableError
from ..utils.logging import get_logger

logger = get_logger(__name__)


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


@dataclass
class Crack:
    """
    Crack polyline whose last point is the tip.

    The tip frame has t along the last segment (pointing into the body
    ahead of the tip) and n = t rotated by +90 degrees.
    """

    points: np.ndarray

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if len(self.points) < 2:
            raise InvalidArgumentError(f"A crack needs at least 2 points, got {len(self.points)}")
        lengths = np.hypot(*np.diff(self.points, axis=0).T)
        if np.any(lengths <= 0.0):
            raise InvalidArgumentError("Crack polyline has a zero-length segment")
        n_seg = len(self.points) - 1
        for i in range(n_seg):
            for j in range(i + 2, n_seg):
                if _segment_intersection(self.points[i], self.points[i + 1], self.points[j], self.points[j + 1]):
                    raise InvalidArgumentError(f"Crack segments {i} and {j} intersect")

    @classmethod
    def from_points(cls, points, tip: str = "last") -> "Crack":
        """Build a crack from a point list whose tip is the ``last`` or ``first`` point."""
        points = np.asarray(points, dtype=float)
        if tip == "first":
            points = points[::-1]
        elif tip != "last":
            raise InvalidArgumentError(f"Unknown tip convention {tip!r}, expected 'last' or 'first'")
        return cls(points=points)

    @property
    def tip(self) -> np.ndarray:
        return self.points[-1]

    @property
    def mouth(self) -> np.ndarray:
        return self.points[0]

    @property
    def segments(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        return [(self.points[i], self.points[i + 1]) for i in range(len(self.points) - 1)]

    @property
    def length(self) -> float:
        return float(np.hypot(*np.diff(self.points, axis=0).T).sum())

    @property
    def tangent(self) -> np.ndarray:
        d = self.points[-1] - self.points[-2]
        return d / np.linalg.norm(d)

    @property
    def normal(self) -> np.ndarray:
        t = self.tangent
        return np.array([-t[1], t[0]])

    @property
    def rotation(self) -> np.ndarray:
        """Matrix whose columns are t and n (tip frame to global frame)."""
        return np.column_stack([self.tangent, self.normal])

    def to_tip_frame(self, x: np.ndarray) -> np.ndarray:
        """Tip-frame Cartesian coordinates of one or many points."""
        x = np.asarray(x, dtype=float)
        return (x - self.tip) @ self.rotation

    def to_dict(self) -> Dict[str, Any]:
        return {"points": self.points.tolist(), "tip": self.tip.tolist(), "tangent": self.tangent.tolist()}


def _segment_intersection(p1, p2, q1, q2) -> bool:
    d1 = _cross(q2 - q1, p1 - q1)
    d2 = _cross(q2 - q1, p2 - q1)
    d3 = _cross(p2 - p1, q1 - p1)
    d4 = _cross(p2 - p1, q2 - p1)
    return bool((d1 * d2 < 0) and (d3 * d4 < 0))


def _closest_on_polyline(crack: Crack, x: np.ndarray):
    """Closest segment index, its parameter and the distance for each point in x."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    best_dist = np.full(len(x), np.inf)
    best_seg = np.zeros(len(x), dtype=int)
    best_s = np.zeros(len(x))
    for i, (a, b) in enumerate(crack.segments):
        ab = b - a
        s = np.clip(((x - a) @ ab) / (ab @ ab), 0.0, 1.0)
        dist = np.hypot(*(x - (a + s[:, None] * ab)).T)
        better = dist < best_dist
        best_dist[better] = dist[better]
        best_seg[better] = i
        best_s[better] = s[better]
    return best_seg, best_s, best_dist


def signed_distance(crack: Crack, x: np.ndarray):
    """
    Signed distance to the crack polyline.

    The magnitude is the Euclidean distance to the polyline; the sign is
    the side of the closest segment's normal. Points whose closest point is
    the tip take their sign from the tip normal.

    Args:
        crack: Crack polyline.
        x: One point of shape (2,) or many of shape (n, 2).

    Returns:
        Float for a single point, array otherwise.
    """
    x_arr = np.asarray(x, dtype=float)
    pts = np.atleast_2d(x_arr)
    seg, _, dist = _closest_on_polyline(crack, pts)

    sign = np.empty(len(pts))
    for i, (a, b) in enumerate(crack.segments):
        mask = seg == i
        if not np.any(mask):
            continue
        t = (b - a) / np.linalg.norm(b - a)
        normal = np.array([-t[1], t[0]])
        sign[mask] = (pts[mask] - a) @ normal
    values = np.where(sign < 0.0, -dist, dist)
    return float(values[0]) if x_arr.ndim == 1 else values


def tip_polar_coords(crack: Crack, x: np.ndarray, branch: int = 0):
    """
    Polar coordinates about the crack tip.

    The angle is measured from the tip tangent, positive toward the tip
    normal. Branch 0 places the cut on the crack, theta in (-pi, pi], with
    theta = pi on the upper face. Branch +1 moves the cut to theta = -pi/2
    (theta in (-pi/2, 3pi/2]) and branch -1 to theta = pi/2 (theta in
    (-3pi/2, pi/2]), which continues the fields smoothly across the crack
    line for polygons lying on one side of it. At the tip r = 0, theta = 0.

    Args:
        crack: Crack with tip frame.
        x: One point (2,) or many (n, 2).
        branch: Angular branch selector in {-1, 0, 1}.

    Returns:
        (r, theta) as floats or arrays.
    """
    if branch not in (-1, 0, 1):
        raise InvalidArgumentError(f"Branch must be -1, 0 or 1, got {branch}")
    x_arr = np.asarray(x, dtype=float)
    local = np.atleast_2d(crack.to_tip_frame(x_arr))
    r = np.hypot(local[:, 0], local[:, 1])
    theta = np.arctan2(local[:, 1], local[:, 0])
    theta = np.where(theta <= -np.pi, np.pi, theta)
    theta = np.where(r == 0.0, 0.0, theta)
    if branch == 1:
        theta = np.where(theta > -0.5 * np.pi, theta, theta + 2.0 * np.pi)
    elif branch == -1:
        theta = np.where(theta <= 0.5 * np.pi, theta, theta - 2.0 * np.pi)
    if x_arr.ndim == 1:
        return float(r[0]), float(theta[0])
    return r, theta


_BRANCH_CUT_DIRECTIONS = {0: (-1.0, 0.0), 1: (0.0, -1.0), -1: (0.0, 1.0)}


def branch_cut_crossings(crack: Crack, a: np.ndarray, b: np.ndarray, branch: int = 0) -> np.ndarray:
    """
    Edge parameters in (0, 1) where the segment [a, b] crosses the angular cut.

    The near-tip fields jump across the ray from the tip along which the
    branch puts its cut (behind the tip for branch 0, below it for +1,
    above it for -1). Crossings at the tip itself are not returned.

    Returns:
        Array holding zero or one parameter.
    """
    if branch not in _BRANCH_CUT_DIRECTIONS:
        raise InvalidArgumentError(f"Branch must be -1, 0 or 1, got {branch}")
    p, q = crack.to_tip_frame(np.array([a, b], dtype=float))
    c = np.array(_BRANCH_CUT_DIRECTIONS[branch])
    e = q - p
    length = float(np.hypot(e[0], e[1]))
    denom = float(_cross(c, e))
    if length == 0.0 or abs(denom) <= 1e-14 * length:
        return np.empty(0)
    s = -float(_cross(c, p)) / denom
    reach = float(np.dot(c, p + s * e))
    if 0.0 < s < 1.0 and reach > Tolerances.ON_CRACK_RELATIVE * length:
        return np.array([s])
    return np.empty(0)


def enrichment_branch(crack: Crack, coords: np.ndarray, tol: Optional[float] = None) -> int:
    """
    Angular branch for evaluating enrichment on a polygon.

    Polygons straddling the crack line (ahead of the tip, or containing it)
    use the default branch; polygons entirely on one side use the branch
    that keeps the fields smooth on that side.
    """
    coords = np.asarray(coords, dtype=float)
    x2 = crack.to_tip_frame(coords)[:, 1]
    if tol is None:
        tol = Tolerances.SNAP_RELATIVE * float(np.ptp(coords, axis=0).max())
    above = bool(np.any(x2 > tol))
    below = bool(np.any(x2 < -tol))
    if above and below:
        return 0
    if above:
        return 1
    if below:
        return -1
    return 0


def crack_intervals_in_polygon(
    crack: Crack, coords: np.ndarray, tol: float
) -> List[Tuple[int, float, float]]:
    """
    Pieces of the crack lying strictly inside a polygon.

    Returns:
        List of (segment index, s0, s1) with 0 <= s0 < s1 <= 1 parameters
        along that crack segment.
    """
    coords = np.asarray(coords, dtype=float)
    nxt = np.roll(coords, -1, axis=0)
    pieces: List[Tuple[int, float, float]] = []
    for i, (p, q) in enumerate(crack.segments):
        d = q - p
        seg_len = float(np.linalg.norm(d))
        breaks = {0.0, 1.0}
        for a, b in zip(coords, nxt):
            e = b - a
            denom = _cross(d, e)
            if abs(denom) > 1e-14 * seg_len * np.linalg.norm(e):
                s = _cross(a - p, e) / denom
                t = _cross(a - p, d) / denom
                if -1e-12 <= t <= 1.0 + 1e-12 and 0.0 < s < 1.0:
                    breaks.add(float(s))
        for v in coords:
            s = float(np.dot(v - p, d) / (seg_len**2))
            if 0.0 < s < 1.0 and abs(_cross(d / seg_len, v - p)) <= tol:
                breaks.add(s)
        params = sorted(breaks)
        for s0, s1 in zip(params[:-1], params[1:]):
            if (s1 - s0) * seg_len <= tol:
                continue
            mid = p + 0.5 * (s0 + s1) * d
            if contains_point(coords, mid, tol, strict=True):
                if pieces and pieces[-1][0] == i and abs(pieces[-1][2] - s0) < 1e-14:
                    pieces[-1] = (i, pieces[-1][1], s1)
                else:
                    pieces.append((i, s0, s1))
    return pieces


class EnrichmentMode(Enum):
    """Selection rule for enriched nodes."""

    NONE = "none"
    TOPOLOGICAL = "topological"
    GEOMETRIC = "geometric"


class ElementKind(Enum):
    """Relation of an element to the crack."""

    UNCUT = "uncut"
    CUT = "cut"
    TIP = "tip"


@dataclass
class EnrichmentPlan:
    """
    Enrichment and crack classification of a mesh.

    ``enriched`` flags singular-enriched nodes; ``kinds`` classifies each
    element; ``enriched_count`` holds k_P per element. ``node_distance``
    carries the signed distance of every node to the crack.
    """

    mode: EnrichmentMode
    radius: Optional[float]
    enriched: np.ndarray
    kinds: List[ElementKind]
    enriched_count: np.ndarray
    tip_element: Optional[int]
    tip_closure_elements: List[int]
    tip_on_boundary: bool
    node_distance: np.ndarray
    on_crack_tol: float

    @property
    def enriched_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.enriched)

    @property
    def n_enriched(self) -> int:
        return int(self.enriched.sum())

    @property
    def cut_elements(self) -> List[int]:
        return [e for e, k in enumerate(self.kinds) if k is ElementKind.CUT]

    @property
    def node_side(self) -> np.ndarray:
        """+1 for nodes with d >= -tol, -1 otherwise."""
        return np.where(self.node_distance >= -self.on_crack_tol, 1, -1)

    @property
    def on_crack(self) -> np.ndarray:
        return np.abs(self.node_distance) <= self.on_crack_tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode.value,
            "radius": self.radius,
            "n_enriched": self.n_enriched,
            "n_cut": len(self.cut_elements),
            "tip_element": self.tip_element,
        }


def classify_elements(
    mesh: PolygonalMesh,
    crack: Crack,
    mode: EnrichmentMode = EnrichmentMode.GEOMETRIC,
    r_e: Optional[float] = None,
) -> EnrichmentPlan:
    """
    Classify elements (uncut, cut, tip) and select enriched nodes.

    Args:
        mesh: Mesh, possibly with the crack already inserted along edges.
        crack: Crack geometry.
        mode: Enrichment rule.
        r_e: Enrichment radius for the geometric rule.

    Returns:
        EnrichmentPlan for the mesh.

    Raises:
        InvalidArgumentError: If the tip is outside the mesh or r_e is not
            positive in geometric mode.
    """
    mode = EnrichmentMode(mode)
    if mode is EnrichmentMode.GEOMETRIC and (r_e is None or r_e <= 0.0):
        raise InvalidArgumentError(f"Geometric enrichment requires r_e > 0, got {r_e}")

    h = mesh.max_diameter
    kinds: List[ElementKind] = []
    tip_element: Optional[int] = None
    tip_closure: List[int] = []

    for e in range(mesh.n_elements):
        coords = mesh.element_coords(e)
        tol = Tolerances.SNAP_RELATIVE * mesh.geometry(e).diameter
        if contains_point(coords, crack.tip, tol, strict=True):
            kinds.append(ElementKind.TIP)
            tip_element = e
            tip_closure.append(e)
            continue
        if contains_point(coords, crack.tip, tol):
            tip_closure.append(e)
        if crack_intervals_in_polygon(crack, coords, tol):
            kinds.append(ElementKind.CUT)
        else:
            kinds.append(ElementKind.UNCUT)

    if not tip_closure:
        raise InvalidArgumentError(f"Crack tip {crack.tip.tolist()} lies outside the meshed domain")

    snap = Tolerances.SNAP_RELATIVE * h
    tip_on_boundary = mesh.domain is not None and bool(mesh.domain.sides_of(crack.tip, snap))

    dist_to_tip = np.hypot(*(mesh.vertices - crack.tip).T)
    enriched = np.zeros(mesh.n_nodes, dtype=bool)
    if mode is EnrichmentMode.TOPOLOGICAL:
        enriched = dist_to_tip <= Tolerances.TIP_COINCIDENCE * h
        if not enriched.any():
            for e in tip_closure:
                enriched[mesh.elements[e]] = True
            logger.info(f"No node at the tip; enriching nodes of {len(tip_closure)} tip elements")
    elif mode is EnrichmentMode.GEOMETRIC:
        enriched = dist_to_tip <= r_e * (1.0 + 1e-12)

    counts = np.array([int(enriched[loop].sum()) for loop in mesh.elements], dtype=int)
    plan = EnrichmentPlan(
        mode=mode,
        radius=r_e if mode is EnrichmentMode.GEOMETRIC else None,
        enriched=enriched,
        kinds=kinds,
        enriched_count=counts,
        tip_element=tip_element,
        tip_closure_elements=tip_closure,
        tip_on_boundary=tip_on_boundary,
        node_distance=np.asarray(signed_distance(crack, mesh.vertices)),
        on_crack_tol=Tolerances.ON_CRACK_RELATIVE * h,
    )
    logger.info(
        f"Enrichment plan: {plan.n_enriched} enriched nodes ({mode.value}), "
        f"{len(plan.cut_elements)} cut elements, tip element {tip_element}"
    )
    return plan


@dataclass
class SubPolygon:
    """
    One side of a split element.

    ``hats`` holds the values of the parent's vertex hat functions at each
    sub-polygon vertex (rows) and ``edge_parent`` the parent edge each
    sub-polygon edge lies on, or -1 for the crack chord.
    """

    coords: np.ndarray
    side: int
    hats: np.ndarray
    edge_parent: np.ndarray

    @property
    def area(self) -> float:
        return signed_area(self.coords)


@dataclass
class SplitElement:
    """A cut element split into the sub-polygons P- and P+ along the crack chord."""

    parent: int
    minus: SubPolygon
    plus: SubPolygon
    chord: np.ndarray
    crack_segment: int
    snapped_vertices: List[int] = dataclass_field(default_factory=list)

    @property
    def parts(self) -> Tuple[SubPolygon, SubPolygon]:
        return self.minus, self.plus

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parent": self.parent,
            "area_minus": self.minus.area,
            "area_plus": self.plus.area,
            "chord": self.chord.tolist(),
        }


def split_polygon(
    coords: np.ndarray, crack: Crack, tol_relative: float = Tolerances.SNAP_RELATIVE, parent: int = -1
) -> SplitElement:
    """
    Split a polygon crossed by a straight piece of the crack.

    Intersections closer than ``tol_relative * h_P`` to a vertex snap to
    that vertex, which then belongs to P+.

    Raises:
        NotSplittableError: If the tip lies inside the polygon, the crack
            kinks inside it or the chord does not cross it completely.
    """
    coords = np.asarray(coords, dtype=float)
    n = len(coords)
    diameter = float(np.max(np.hypot(*(coords[:, None, :] - coords[None, :, :]).transpose(2, 0, 1))))
    tol = tol_relative * diameter

    if contains_point(coords, crack.tip, tol, strict=True):
        raise NotSplittableError(f"Element {parent} contains the crack tip and cannot be split")

    pieces = crack_intervals_in_polygon(crack, coords, tol)
    if not pieces:
        raise NotSplittableError(f"Element {parent} is not crossed by the crack")
    if len({p[0] for p in pieces}) > 1 or len(pieces) > 1:
        raise NotSplittableError(f"Crack kinks or re-enters inside element {parent}")

    seg, _, _ = pieces[0]
    a, b = crack.segments[seg]
    t = (b - a) / np.linalg.norm(b - a)
    normal = np.array([-t[1], t[0]])
    phi = (coords - a) @ normal
    snapped = [int(k) for k in np.flatnonzero(np.abs(phi) <= tol)]
    phi[np.abs(phi) <= tol] = 0.0

    # augmented loop: parent vertices plus strict edge crossings
    points: List[np.ndarray] = []
    values: List[float] = []
    hats: List[np.ndarray] = []
    positions: List[float] = []
    eye = np.eye(n)
    for k in range(n):
        k1 = (k + 1) % n
        points.append(coords[k])
        values.append(phi[k])
        hats.append(eye[k])
        positions.append(float(k))
        if phi[k] * phi[k1] < 0.0:
            s = phi[k] / (phi[k] - phi[k1])
            points.append(coords[k] + s * (coords[k1] - coords[k]))
            values.append(0.0)
            hats.append((1.0 - s) * eye[k] + s * eye[k1])
            positions.append(k + s)

    m = len(points)
    vals = np.array(values)
    zeros = [i for i in range(m) if vals[i] == 0.0]
    cut_points = []
    for i in zeros:
        before = next((vals[(i - j) % m] for j in range(1, m) if vals[(i - j) % m] != 0.0), 0.0)
        after = next((vals[(i + j) % m] for j in range(1, m) if vals[(i + j) % m] != 0.0), 0.0)
        if before * after < 0.0:
            cut_points.append(i)
    if len(cut_points) != 2:
        raise NotSplittableError(f"Crack line crosses element {parent} {len(cut_points)} times")

    chord = np.array([points[i] for i in cut_points])
    for x in chord:
        if _closest_on_polyline(crack, x)[2][0] > tol:
            raise NotSplittableError(f"Crack does not cross element {parent} completely")
    # orient the chord along the crack direction
    if np.dot(chord[1] - chord[0], t) < 0.0:
        chord = chord[::-1]

    def side_loop(side: int) -> SubPolygon:
        keep = []
        for i in range(m):
            if vals[i] * side > 0.0:
                keep.append(i)
            elif vals[i] == 0.0:
                neighbours = (vals[(i - 1) % m], vals[(i + 1) % m])
                if i in cut_points or any(v * side > 0.0 for v in neighbours):
                    keep.append(i)
        edge_parent = []
        for j, i in enumerate(keep):
            i_next = keep[(j + 1) % len(keep)]
            if i_next == (i + 1) % m:
                edge_parent.append(int(np.floor(positions[i])) % n)
            else:
                edge_parent.append(-1)
        return SubPolygon(
            coords=np.array([points[i] for i in keep]),
            side=side,
            hats=np.array([hats[i] for i in keep]),
            edge_parent=np.array(edge_parent, dtype=int),
        )

    minus, plus = side_loop(-1), side_loop(1)
    parent_area = signed_area(coords)
    for part in (minus, plus):
        if len(part.coords) < 3 or part.area <= 0.0:
            raise NotSplittableError(f"Degenerate sub-polygon on side {part.side:+d} of element {parent}")
    if abs(minus.area + plus.area - parent_area) > 1e-12 * max(parent_area, 1.0) * 10:
        raise NotSplittableError(f"Sub-polygon areas of element {parent} do not sum to the parent area")

    return SplitElement(
        parent=parent, minus=minus, plus=plus, chord=chord, crack_segment=seg, snapped_vertices=snapped
    )


def split_element(mesh: PolygonalMesh, e: int, crack: Crack) -> SplitElement:
    """
    Split mesh element ``e`` into P- and P+ along the crack.

    Raises:
        NotSplittableError: See :func:`split_polygon`.
    """
    if not 0 <= e < mesh.n_elements:
        raise InvalidArgumentError(f"Element index {e} out of range [0, {mesh.n_elements})")
    split = split_polygon(mesh.element_coords(e), crack, parent=e)
    if split.snapped_vertices:
        logger.debug(f"Element {e}: crack snapped to local vertices {split.snapped_vertices}")
    return split


def tip_element_faces(coords: np.ndarray, crack: Crack) -> np.ndarray:
    """
    Crack segment from the boundary entry point of a tip element to the tip.

    Returns:
        (2, 2) array [entry, tip].

    Raises:
        NotSplittableError: If the crack does not enter the element through its boundary.
    """
    coords = np.asarray(coords, dtype=float)
    tol = Tolerances.SNAP_RELATIVE * float(np.ptp(coords, axis=0).max())
    pieces = crack_intervals_in_polygon(crack, coords, tol)
    if len(pieces) != 1 or pieces[0][0] != len(crack.points) - 2 or pieces[0][2] < 1.0 - 1e-12:
        raise NotSplittableError("Crack inside the tip element is not a single straight piece")
    seg, s0, _ = pieces[0]
    a, b = crack.segments[seg]
    return np.array([a + s0 * (b - a), crack.tip])


def insert_crack_along_edges(mesh: PolygonalMesh, crack: Crack) -> PolygonalMesh:
    """
    Mesh a crack explicitly by duplicating the nodes along it.

    Every node on the crack except the tip is duplicated; elements on the
    negative side of the crack take the copies. Newly exposed edges are
    tagged as crack boundary (traction free).

    Raises:
        MeshGenerationError: If the crack does not run along mesh edges.
    """
    h = mesh.max_diameter
    tol = Tolerances.SNAP_RELATIVE * h
    dist = np.abs(np.asarray(signed_distance(crack, mesh.vertices)))
    on_crack = dist <= tol
    on_crack &= np.hypot(*(mesh.vertices - crack.tip).T) > tol

    covered = 0.0
    seen = set()
    for e in range(mesh.n_elements):
        for a, b in mesh.element_edges(e):
            key = (min(a, b), max(a, b))
            if key in seen:
                continue
            seen.add(key)
            mid = 0.5 * (mesh.vertices[a] + mesh.vertices[b])
            if dist[a] <= tol and dist[b] <= tol and abs(signed_distance(crack, mid)) <= tol:
                covered += float(np.linalg.norm(mesh.vertices[b] - mesh.vertices[a]))
    if abs(covered - crack.length) > 1e-8 * max(crack.length, h):
        raise MeshGenerationError(
            f"Crack of length {crack.length:.6g} does not follow mesh edges (covered {covered:.6g})"
        )

    vertices = [v for v in mesh.vertices]
    copy_of: Dict[int, int] = {}
    for v in np.flatnonzero(on_crack):
        copy_of[int(v)] = len(vertices)
        vertices.append(mesh.vertices[v].copy())

    elements = []
    for e, loop in enumerate(mesh.elements):
        centroid = mesh.geometry(e).centroid
        new_loop = loop.copy()
        if signed_distance(crack, centroid) < 0.0:
            new_loop = np.array([copy_of.get(int(v), int(v)) for v in loop])
        elements.append(new_loop)

    directed = set()
    for loop in elements:
        for k in range(len(loop)):
            directed.add((int(loop[k]), int(loop[(k + 1) % len(loop)])))
    old_tags = {(b.element, b.local_edge): b.tag for b in mesh.boundary_edges}
    boundary: List[BoundaryEdge] = []
    for e, loop in enumerate(elements):
        for k in range(len(loop)):
            a, b = int(loop[k]), int(loop[(k + 1) % len(loop)])
            if (b, a) in directed:
                continue
            boundary.append(BoundaryEdge(e, k, old_tags.get((e, k), BoundaryTags.CRACK)))

    duplicates = {copy: original for original, copy in copy_of.items()}
    new_mesh = PolygonalMesh(
        vertices=np.array(vertices),
        elements=elements,
        boundary_edges=boundary,
        domain=mesh.domain,
        duplicates=duplicates,
    )
    new_mesh.validate()
    logger.info(f"Inserted crack along edges: {len(copy_of)} nodes duplicated")
    return new_mesh
