#!/usr/bin/env python3
"""
Unit tests for mesh files and VTK export.
"""

import json

import numpy as np
import pytest

from xvem2d.core.mesh import build_structured_quad_mesh
from xvem2d.core.mesh_io import read_mesh, write_mesh, write_vtk
from xvem2d.core.voronoi import build_voronoi_mesh
from xvem2d.utils.errors import InvalidArgumentError, MeshGenerationError


class TestMeshFiles:
    """Test cases for JSON mesh files."""

    def test_voronoi_mesh_survives_file(self, temp_dir, unit_square):
        """Coordinates are restored bit for bit."""
        mesh = build_voronoi_mesh(unit_square, 15, rng_seed=11, lloyd_iters=5)
        path = write_mesh(mesh, temp_dir / "mesh.json")
        loaded = read_mesh(path)
        np.testing.assert_array_equal(loaded.vertices, mesh.vertices)
        assert [b.to_dict() for b in loaded.boundary_edges] == [b.to_dict() for b in mesh.boundary_edges]
        assert loaded.domain == unit_square

    def test_missing_file(self, temp_dir):
        with pytest.raises(InvalidArgumentError):
            read_mesh(temp_dir / "nope.json")

    def test_malformed_json(self, temp_dir):
        path = temp_dir / "bad.json"
        path.write_text("{not json")
        with pytest.raises(MeshGenerationError):
            read_mesh(path)

    def test_missing_keys(self, temp_dir):
        path = temp_dir / "partial.json"
        path.write_text(json.dumps({"vertices": [[0, 0]]}))
        with pytest.raises(MeshGenerationError):
            read_mesh(path)


class TestVTK:
    """Test cases for legacy VTK output."""

    def test_polydata_layout(self, temp_dir, unit_square):
        """Header, points, polygons and displacement vectors."""
        mesh = build_structured_quad_mesh(unit_square, 2, 2)
        u = np.ones((mesh.n_nodes, 2))
        text = write_vtk(mesh, temp_dir / "out.vtk", u).read_text()
        assert text.startswith("# vtk DataFile Version 3.0")
        assert "DATASET POLYDATA" in text
        assert "POINTS 9 double" in text
        assert "POLYGONS 4 20" in text
        assert "VECTORS displacement double" in text

    def test_displacement_shape_checked(self, temp_dir, unit_square):
        mesh = build_structured_quad_mesh(unit_square, 2, 2)
        with pytest.raises(InvalidArgumentError):
            write_vtk(mesh, temp_dir / "out.vtk", np.ones((3, 2)))
