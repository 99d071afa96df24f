"""
Mesh file I/O.

Meshes are stored as JSON documents with keys ``vertices``, ``elements``
and ``boundary_tags``; Python's float repr makes the round trip exact for
finite doubles. Solutions can be exported as legacy ASCII VTK polydata.
"""

import json
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .mesh import BoundaryEdge, PolygonalMesh, Rectangle
from ..utils.errors import InvalidArgumentError, MeshGenerationError
from ..utils.logging import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


def mesh_to_document(mesh: PolygonalMesh) -> dict:
    """Serializable representation of a mesh."""
    document = {
        "vertices": [[float(x), float(y)] for x, y in mesh.vertices],
        "elements": [[int(v) for v in loop] for loop in mesh.elements],
        "boundary_tags": [b.to_dict() for b in mesh.boundary_edges],
    }
    if mesh.domain is not None:
        document["domain"] = mesh.domain.to_dict()
    return document


def mesh_from_document(document: dict) -> PolygonalMesh:
    """Rebuild a mesh from its serializable representation."""
    try:
        vertices = np.array(document["vertices"], dtype=float).reshape(-1, 2)
        elements = [np.array(loop, dtype=int) for loop in document["elements"]]
        boundary = [
            BoundaryEdge(element=int(b["element"]), local_edge=int(b["local_edge"]), tag=str(b["tag"]))
            for b in document["boundary_tags"]
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise MeshGenerationError(f"Malformed mesh document: {e}")

    domain = Rectangle(**document["domain"]) if document.get("domain") else None
    return PolygonalMesh(vertices=vertices, elements=elements, boundary_edges=boundary, domain=domain)


def write_mesh(mesh: PolygonalMesh, path: PathLike) -> Path:
    """Write a mesh to a JSON file and return the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(mesh_to_document(mesh), f, indent=1)
    logger.info(f"Mesh written: {path} ({mesh.n_elements} elements)")
    return path


def read_mesh(path: PathLike, validate: bool = True) -> PolygonalMesh:
    """
    Read a mesh from a JSON file.

    Args:
        path: File written by :func:`write_mesh`.
        validate: Check the mesh invariants after reading.

    Raises:
        MeshGenerationError: If the file is malformed or the mesh is invalid.
    """
    path = Path(path)
    if not path.exists():
        raise InvalidArgumentError(f"Mesh file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as e:
            raise MeshGenerationError(f"Mesh file {path} is not valid JSON: {e}")
    mesh = mesh_from_document(document)
    if validate:
        mesh.validate()
    return mesh


def write_vtk(
    mesh: PolygonalMesh,
    path: PathLike,
    displacement: Optional[np.ndarray] = None,
    title: str = "xvem2d mesh",
) -> Path:
    """
    Write polygon cells as legacy ASCII VTK polydata.

    Args:
        mesh: Mesh to export.
        path: Output file.
        displacement: Optional (n_nodes, 2) nodal displacement vectors.
        title: Header line.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n_conn = sum(len(loop) + 1 for loop in mesh.elements)

    lines = [
        "# vtk DataFile Version 3.0",
        title,
        "ASCII",
        "DATASET POLYDATA",
        f"POINTS {mesh.n_nodes} double",
    ]
    lines.extend(f"{x!r} {y!r} 0.0" for x, y in mesh.vertices.tolist())
    lines.append(f"POLYGONS {mesh.n_elements} {n_conn}")
    lines.extend(" ".join([str(len(loop))] + [str(int(v)) for v in loop]) for loop in mesh.elements)

    if displacement is not None:
        displacement = np.asarray(displacement, dtype=float)
        if displacement.shape != (mesh.n_nodes, 2):
            raise InvalidArgumentError(
                f"Displacement shape {displacement.shape} does not match ({mesh.n_nodes}, 2)"
            )
        lines.append(f"POINT_DATA {mesh.n_nodes}")
        lines.append("VECTORS displacement double")
        lines.extend(f"{ux!r} {uy!r} 0.0" for ux, uy in displacement.tolist())

    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    logger.info(f"VTK written: {path}")
    return path
