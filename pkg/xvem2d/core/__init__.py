"""Geometry: meshes, crack description and quadrature."""

from .constants import BoundaryTags, Defaults, ReferenceValues, Tolerances
from .crack import (
    Crack,
    ElementKind,
    EnrichmentMode,
    EnrichmentPlan,
    SplitElement,
    SubPolygon,
    branch_cut_crossings,
    classify_elements,
    enrichment_branch,
    insert_crack_along_edges,
    signed_distance,
    split_element,
    split_polygon,
    tip_polar_coords,
)
from .mesh import (
    BoundaryEdge,
    ElementGeometry,
    PolygonalMesh,
    Rectangle,
    RegularityReport,
    build_structured_quad_mesh,
    check_mesh_regularity,
    element_geometry,
    polygon_geometry,
)
from .mesh_io import read_mesh, write_mesh, write_vtk
from .quadrature import (
    EdgeRule,
    GradingOptions,
    edge_quadrature,
    gauss_rule,
    integrate_edge,
    integrate_polygon_oracle,
)
from .voronoi import build_voronoi_mesh

__all__ = [
    "BoundaryTags",
    "Defaults",
    "ReferenceValues",
    "Tolerances",
    "Crack",
    "ElementKind",
    "EnrichmentMode",
    "EnrichmentPlan",
    "SplitElement",
    "SubPolygon",
    "branch_cut_crossings",
    "classify_elements",
    "enrichment_branch",
    "insert_crack_along_edges",
    "signed_distance",
    "split_element",
    "split_polygon",
    "tip_polar_coords",
    "BoundaryEdge",
    "ElementGeometry",
    "PolygonalMesh",
    "Rectangle",
    "RegularityReport",
    "build_structured_quad_mesh",
    "check_mesh_regularity",
    "element_geometry",
    "polygon_geometry",
    "read_mesh",
    "write_mesh",
    "write_vtk",
    "EdgeRule",
    "GradingOptions",
    "edge_quadrature",
    "gauss_rule",
    "integrate_edge",
    "integrate_polygon_oracle",
    "build_voronoi_mesh",
]
