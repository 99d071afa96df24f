#!/usr/bin/env python3
"""
Integration Cells - Boundary descriptions on which element kernels are computed

An IntegrationCell is a polygon together with the traces of the parent
element's vertex hat functions on each of its edges. Three kinds exist:

- a whole uncut element (hats are the usual piecewise-linear traces);
- a sub-polygon of a cut element (parent-edge pieces carry linear traces,
  the crack chord carries the spline trace model);
- a tip element, whose boundary also contains both crack faces between
  the entry point and the tip.
"""

from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from typing import List, Optional

import numpy as np

from ..core.crack import Crack, SplitElement, SubPolygon, enrichment_branch, tip_element_faces
from ..core.mesh import ElementGeometry, polygon_geometry
from ..utils.errors import InvalidArgumentError
from .trace_model import CrackTraceModel


class EdgeKind(Enum):
    """Origin of a cell edge."""

    BOUNDARY = "boundary"
    CRACK = "crack"


@dataclass
class CellEdge:
    """
    One straight edge of an integration cell.

    Boundary edges carry the hat vectors at both ends and interpolate them
    linearly; crack edges evaluate the trace model. ``normal`` is the outward
    unit normal of the cell and ``branch`` the angular branch used for the
    enrichment on this edge.
    """

    start: np.ndarray
    end: np.ndarray
    normal: np.ndarray
    kind: EdgeKind
    branch: int
    parent_edge: int = -1
    hat_start: Optional[np.ndarray] = None
    hat_end: Optional[np.ndarray] = None
    trace: Optional[CrackTraceModel] = None

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    def hats(self, points: np.ndarray, s: np.ndarray) -> np.ndarray:
        """Hat values (q, N) at edge points with parameters s in [0, 1]."""
        if self.kind is EdgeKind.BOUNDARY:
            return (1.0 - s)[:, None] * self.hat_start[None, :] + s[:, None] * self.hat_end[None, :]
        return self.trace(points)


def _outward_normal(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    return np.array([d[1], -d[0]]) / np.linalg.norm(d)


@dataclass
class IntegrationCell:
    """Polygon plus hat traces on which one element kernel is computed."""

    element: int
    coords: np.ndarray
    vertex_hats: np.ndarray
    edges: List[CellEdge]
    parent_coords: np.ndarray
    branch: int = 0
    side: int = 0
    part: Optional[str] = None
    geometry: ElementGeometry = dataclass_field(init=False)

    def __post_init__(self):
        self.geometry = polygon_geometry(self.coords)

    @property
    def n_parent(self) -> int:
        return len(self.parent_coords)

    @property
    def parent_lengths(self) -> np.ndarray:
        return np.hypot(*(np.roll(self.parent_coords, -1, axis=0) - self.parent_coords).T)

    @property
    def node_lengths(self) -> np.ndarray:
        """Mean length of the two parent edges incident to each parent vertex."""
        lengths = self.parent_lengths
        return 0.5 * (lengths + np.roll(lengths, 1))

    @property
    def label(self) -> str:
        return f"element {self.element}" + (f" ({self.part})" if self.part else "")


def _polygon_edges(coords: np.ndarray, hats: np.ndarray, branch: int, parents: np.ndarray) -> List[CellEdge]:
    edges = []
    n = len(coords)
    for k in range(n):
        a, b = coords[k], coords[(k + 1) % n]
        edges.append(
            CellEdge(
                start=a,
                end=b,
                normal=_outward_normal(a, b),
                kind=EdgeKind.BOUNDARY,
                branch=branch,
                parent_edge=int(parents[k]),
                hat_start=hats[k],
                hat_end=hats[(k + 1) % n],
            )
        )
    return edges


def build_element_cell(element: int, coords: np.ndarray, crack: Optional[Crack]) -> IntegrationCell:
    """Cell of an uncut element; the enrichment branch follows its side of the crack."""
    coords = np.asarray(coords, dtype=float)
    n = len(coords)
    branch = enrichment_branch(crack, coords) if crack is not None else 0
    hats = np.eye(n)
    return IntegrationCell(
        element=element,
        coords=coords,
        vertex_hats=hats,
        edges=_polygon_edges(coords, hats, branch, np.arange(n)),
        parent_coords=coords,
        branch=branch,
    )


def build_tip_cell(element: int, coords: np.ndarray, crack: Crack, trace: CrackTraceModel) -> IntegrationCell:
    """
    Cell of the element containing the crack tip.

    Both crack faces from the entry point to the tip are added: the upper
    face (outward normal -n, branch +1) and the lower face (outward normal
    +n, branch -1).
    """
    coords = np.asarray(coords, dtype=float)
    cell = build_element_cell(element, coords, None)
    entry, tip = tip_element_faces(coords, crack)
    n_face = _outward_normal(tip, entry)
    cell.edges.append(
        CellEdge(start=entry, end=tip, normal=-n_face, kind=EdgeKind.CRACK, branch=1, trace=trace)
    )
    cell.edges.append(
        CellEdge(start=tip, end=entry, normal=n_face, kind=EdgeKind.CRACK, branch=-1, trace=trace)
    )
    cell.part = "tip"
    return cell


def build_sub_cell(element: int, parent_coords: np.ndarray, part: SubPolygon, trace: CrackTraceModel) -> IntegrationCell:
    """Cell of one side of a cut element."""
    coords = part.coords
    n = len(coords)
    edges = []
    for k in range(n):
        a, b = coords[k], coords[(k + 1) % n]
        parent_edge = int(part.edge_parent[k])
        if parent_edge >= 0:
            edges.append(
                CellEdge(
                    start=a,
                    end=b,
                    normal=_outward_normal(a, b),
                    kind=EdgeKind.BOUNDARY,
                    branch=part.side,
                    parent_edge=parent_edge,
                    hat_start=part.hats[k],
                    hat_end=part.hats[(k + 1) % n],
                )
            )
        else:
            edges.append(
                CellEdge(
                    start=a,
                    end=b,
                    normal=_outward_normal(a, b),
                    kind=EdgeKind.CRACK,
                    branch=part.side,
                    trace=trace,
                )
            )
    return IntegrationCell(
        element=element,
        coords=coords,
        vertex_hats=part.hats,
        edges=edges,
        parent_coords=np.asarray(parent_coords, dtype=float),
        branch=part.side,
        side=part.side,
        part="minus" if part.side < 0 else "plus",
    )


def build_sub_cells(element: int, parent_coords: np.ndarray, split: SplitElement, trace: CrackTraceModel):
    """(minus, plus) cells of a cut element."""
    if split.parent != element and split.parent >= 0:
        raise InvalidArgumentError(f"Split of element {split.parent} passed for element {element}")
    return tuple(build_sub_cell(element, parent_coords, part, trace) for part in split.parts)
