#!/usr/bin/env python3
"""
Unit tests for the Voronoi mesh generator.
"""

import numpy as np
import pytest

from xvem2d.core.constants import BoundaryTags
from xvem2d.core.voronoi import build_voronoi_mesh, lloyd_relaxation
from xvem2d.utils.errors import InvalidArgumentError, MeshGenerationError


class TestVoronoiMesh:
    """Test cases for clipped Voronoi meshes."""

    def test_cell_count_and_area(self, unit_square):
        """One cell per seed tiling the rectangle."""
        mesh = build_voronoi_mesh(unit_square, 30, rng_seed=7, lloyd_iters=10)
        assert mesh.n_elements == 30
        assert mesh.total_area == pytest.approx(1.0, rel=1e-10)

    def test_valid_and_tagged(self, square_domain):
        """Loops are CCW and every boundary edge is tagged with a side."""
        mesh = build_voronoi_mesh(square_domain, 64, rng_seed=2019, lloyd_iters=20)
        mesh.validate()
        assert {b.tag for b in mesh.boundary_edges} == set(BoundaryTags.SIDES)

    def test_deterministic(self, unit_square):
        """The same seed gives the same mesh."""
        a = build_voronoi_mesh(unit_square, 20, rng_seed=3, lloyd_iters=5)
        b = build_voronoi_mesh(unit_square, 20, rng_seed=3, lloyd_iters=5)
        np.testing.assert_array_equal(a.vertices, b.vertices)
        assert all(np.array_equal(x, y) for x, y in zip(a.elements, b.elements))

    def test_explicit_grid_seeds(self, unit_square):
        """Seeds on a regular grid give square cells."""
        g = (np.arange(3) + 0.5) / 3
        seeds = np.array([[x, y] for y in g for x in g])
        mesh = build_voronoi_mesh(unit_square, 0, seeds=seeds, lloyd_iters=0, collapse_ratio=0.0)
        assert mesh.n_elements == 9
        for e in range(9):
            assert mesh.geometry(e).area == pytest.approx(1 / 9)

    def test_lloyd_keeps_centroidal_seeds(self, unit_square):
        """Seeds already at their cell centroids do not move."""
        g = (np.arange(2) + 0.5) / 2
        seeds = np.array([[x, y] for y in g for x in g])
        np.testing.assert_allclose(lloyd_relaxation(seeds, unit_square, 3), seeds, atol=1e-12)

    def test_too_few_seeds(self, unit_square):
        with pytest.raises(InvalidArgumentError):
            build_voronoi_mesh(unit_square, 1)

    def test_negative_iterations(self, unit_square):
        with pytest.raises(InvalidArgumentError):
            build_voronoi_mesh(unit_square, 10, lloyd_iters=-1)

    def test_coincident_seeds(self, unit_square):
        seeds = np.array([[0.2, 0.2], [0.2, 0.2], [0.8, 0.8]])
        with pytest.raises(MeshGenerationError):
            build_voronoi_mesh(unit_square, 0, seeds=seeds, lloyd_iters=0)
