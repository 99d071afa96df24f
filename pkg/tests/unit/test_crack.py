#!/usr/bin/env python3
"""
Unit tests for crack geometry, element classification and splitting.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xvem2d.core.constants import BoundaryTags
from xvem2d.core.crack import (
    Crack,
    ElementKind,
    EnrichmentMode,
    branch_cut_crossings,
    classify_elements,
    enrichment_branch,
    insert_crack_along_edges,
    signed_distance,
    split_element,
    split_polygon,
    tip_element_faces,
    tip_polar_coords,
)
from xvem2d.core.mesh import build_structured_quad_mesh
from xvem2d.utils.errors import InvalidArgumentError, MeshGenerationError, NotSplittableError

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def coordinate_pairs(lo: float, hi: float):
    """Two points with x in [lo, hi] and y in [-1, 1]."""
    point = st.tuples(st.floats(lo, hi), st.floats(-1.0, 1.0)).map(np.array)
    return st.tuples(point, point)


def _perimeter(coords: np.ndarray) -> float:
    return float(np.linalg.norm(np.roll(coords, -1, axis=0) - coords, axis=1).sum())


class TestCrackGeometry:
    """Test cases for the crack polyline and its tip frame."""

    def test_tip_convention(self):
        crack = Crack.from_points([(0.0, 0.0), (1.0, 1.0)], tip="first")
        np.testing.assert_allclose(crack.tip, [0.0, 0.0])
        with pytest.raises(InvalidArgumentError):
            Crack.from_points([(0.0, 0.0), (1.0, 1.0)], tip="middle")

    def test_frame(self, edge_crack):
        np.testing.assert_allclose(edge_crack.tangent, [1.0, 0.0])
        np.testing.assert_allclose(edge_crack.normal, [0.0, 1.0])
        assert edge_crack.length == pytest.approx(1.0)

    def test_signed_distance(self, edge_crack):
        """Sign by side of the crack; beyond the tip the distance is to the tip."""
        assert signed_distance(edge_crack, np.array([-0.5, 0.3])) == pytest.approx(0.3)
        assert signed_distance(edge_crack, np.array([-0.5, -0.3])) == pytest.approx(-0.3)
        assert signed_distance(edge_crack, np.array([0.3, 0.4])) == pytest.approx(0.5)

    def test_kinked_polyline_distance(self):
        crack = Crack.from_points([(-1.0, 0.0), (0.0, 0.0), (0.0, 1.0)])
        assert signed_distance(crack, np.array([-0.5, -0.2])) == pytest.approx(-0.2)
        assert abs(signed_distance(crack, np.array([0.25, 0.5]))) == pytest.approx(0.25)

    @settings(max_examples=100, deadline=None)
    @given(coordinate_pairs(-3.0, 3.0))
    def test_distance_magnitude_lipschitz(self, pair):
        """The unsigned distance never changes faster than the points move."""
        crack = Crack.from_points([(-1.0, -0.5), (0.0, 0.0), (0.5, 0.8)])
        x, y = pair
        gap = abs(abs(signed_distance(crack, x)) - abs(signed_distance(crack, y)))
        assert gap <= np.linalg.norm(x - y) * (1.0 + 1e-12) + 1e-14

    @settings(max_examples=100, deadline=None)
    @given(coordinate_pairs(-1.0, 0.0))
    def test_signed_distance_lipschitz_along_crack(self, pair):
        """Beside the crack the signed distance is 1-Lipschitz across both faces."""
        crack = Crack.from_points([(-1.0, 0.0), (0.0, 0.0)])
        x, y = pair
        gap = abs(signed_distance(crack, x) - signed_distance(crack, y))
        assert gap <= np.linalg.norm(x - y) * (1.0 + 1e-12) + 1e-14

    def test_distance_matches_dense_sampling(self):
        """Distances agree with the nearest of many points sampled on the polyline."""
        crack = Crack.from_points([(-1.0, -0.5), (0.0, 0.0), (0.5, 0.8)])
        samples = np.concatenate(
            [a + np.linspace(0.0, 1.0, 5001)[:, None] * (b - a) for a, b in crack.segments]
        )
        spacing = max(np.linalg.norm(b - a) for a, b in crack.segments) / 5000
        points = np.random.default_rng(7).uniform(-2.0, 2.0, size=(50, 2))
        brute = np.min(np.linalg.norm(points[:, None, :] - samples[None, :, :], axis=2), axis=1)
        computed = np.abs(signed_distance(crack, points))
        assert np.all(computed <= brute + 1e-14)
        assert np.all(brute - computed <= 0.5 * spacing + 1e-14)

    def test_polar_branches(self, edge_crack):
        """Branch 0 cuts along the crack; +1 and -1 extend each face smoothly."""
        below = np.array([-0.5, -1e-12])
        _, theta0 = tip_polar_coords(edge_crack, below)
        _, theta_up = tip_polar_coords(edge_crack, below, branch=1)
        assert theta0 == pytest.approx(-np.pi)
        assert theta_up == pytest.approx(np.pi)
        _, theta_down = tip_polar_coords(edge_crack, np.array([-0.5, 1e-12]), branch=-1)
        assert theta_down == pytest.approx(-np.pi)
        assert tip_polar_coords(edge_crack, np.zeros(2)) == (0.0, 0.0)
        with pytest.raises(InvalidArgumentError):
            tip_polar_coords(edge_crack, below, branch=2)

    def test_branch_cut_crossings(self, edge_crack):
        """Edges are split where they cross the ray carrying the angular cut."""
        behind = (np.array([-0.5, -0.2]), np.array([-0.5, 0.3]))
        ahead = (np.array([0.5, -0.2]), np.array([0.5, 0.3]))
        under = (np.array([0.2, -0.5]), np.array([-0.2, -0.5]))
        np.testing.assert_allclose(branch_cut_crossings(edge_crack, *behind), [0.4])
        assert len(branch_cut_crossings(edge_crack, *ahead)) == 0
        assert len(branch_cut_crossings(edge_crack, *behind, branch=1)) == 0
        np.testing.assert_allclose(branch_cut_crossings(edge_crack, *under, branch=1), [0.5])
        assert len(branch_cut_crossings(edge_crack, np.array([-0.5, 0.0]), np.zeros(2))) == 0
        with pytest.raises(InvalidArgumentError):
            branch_cut_crossings(edge_crack, *behind, branch=3)

    def test_enrichment_branch(self, edge_crack):
        above = SQUARE * 0.2 + [-0.5, 0.1]
        assert enrichment_branch(edge_crack, above) == 1
        assert enrichment_branch(edge_crack, above - [0.0, 0.4]) == -1
        assert enrichment_branch(edge_crack, above - [0.0, 0.2]) == 0


class TestClassification:
    """Test cases for element classification and enrichment selection."""

    def test_odd_mesh_kinds(self, odd_quad_mesh, edge_crack):
        """The tip sits inside the central element; the row behind it is cut."""
        plan = classify_elements(odd_quad_mesh, edge_crack, EnrichmentMode.TOPOLOGICAL)
        assert plan.tip_element == 60
        assert plan.kinds[60] is ElementKind.TIP
        assert plan.cut_elements == [55, 56, 57, 58, 59]
        assert not plan.tip_on_boundary

    def test_topological_without_tip_node(self, odd_quad_mesh, edge_crack):
        """With no node at the tip the nodes of the tip element are enriched."""
        plan = classify_elements(odd_quad_mesh, edge_crack, EnrichmentMode.TOPOLOGICAL)
        assert plan.n_enriched == 4
        assert set(plan.enriched_nodes) == set(odd_quad_mesh.elements[60].tolist())

    def test_geometric_radius(self, odd_quad_mesh, edge_crack):
        plan = classify_elements(odd_quad_mesh, edge_crack, EnrichmentMode.GEOMETRIC, r_e=0.5)
        dist = np.hypot(*odd_quad_mesh.vertices.T)
        assert plan.n_enriched == int((dist <= 0.5).sum())
        assert plan.radius == 0.5

    def test_none_mode(self, odd_quad_mesh, edge_crack):
        plan = classify_elements(odd_quad_mesh, edge_crack, EnrichmentMode.NONE)
        assert plan.n_enriched == 0
        assert plan.to_dict()["n_cut"] == 5

    def test_geometric_needs_radius(self, odd_quad_mesh, edge_crack):
        with pytest.raises(InvalidArgumentError):
            classify_elements(odd_quad_mesh, edge_crack, EnrichmentMode.GEOMETRIC, r_e=None)

    def test_tip_outside_mesh(self, unit_square):
        mesh = build_structured_quad_mesh(unit_square, 2, 2)
        crack = Crack.from_points([(0.0, 0.5), (2.0, 0.5)])
        with pytest.raises(InvalidArgumentError):
            classify_elements(mesh, crack, EnrichmentMode.NONE)

    def test_node_side(self, odd_quad_mesh, edge_crack):
        plan = classify_elements(odd_quad_mesh, edge_crack, EnrichmentMode.NONE)
        below = odd_quad_mesh.vertices[:, 1] < 0.0
        assert np.all(plan.node_side[below] == -1)
        assert np.all(plan.node_side[~below] == 1)


class TestSplitting:
    """Test cases for splitting cut polygons."""

    def test_horizontal_split(self):
        """A crack through the middle gives two halves with edge hats."""
        crack = Crack.from_points([(-1.0, 0.5), (2.0, 0.5)])
        split = split_polygon(SQUARE, crack)
        assert split.minus.area == pytest.approx(0.5)
        assert split.plus.area == pytest.approx(0.5)
        np.testing.assert_allclose(split.chord, [[0.0, 0.5], [1.0, 0.5]])
        np.testing.assert_allclose(split.minus.hats.sum(axis=1), 1.0)
        assert -1 in split.minus.edge_parent

    def test_split_through_vertices(self):
        """A diagonal crack snaps to the vertices and yields two triangles."""
        crack = Crack.from_points([(-1.0, -1.0), (2.0, 2.0)])
        split = split_polygon(SQUARE, crack)
        assert len(split.minus.coords) == 3
        assert len(split.plus.coords) == 3
        assert sorted(split.snapped_vertices) == [0, 2]

    def test_tip_inside(self):
        crack = Crack.from_points([(-1.0, 0.5), (0.5, 0.5)])
        with pytest.raises(NotSplittableError):
            split_polygon(SQUARE, crack)

    def test_not_crossed(self):
        crack = Crack.from_points([(-1.0, 2.0), (2.0, 2.0)])
        with pytest.raises(NotSplittableError):
            split_polygon(SQUARE, crack)

    @pytest.mark.parametrize(
        "points",
        [
            [(-1.0, 0.3), (2.0, 0.6)],
            [(-1.0, -1.0), (2.0, 2.0)],
            [(0.2, -1.0), (0.7, 2.0)],
        ],
    )
    def test_perimeter_and_area_conserved(self, points):
        """Both sides together have the parent's area and perimeter plus twice the chord."""
        split = split_polygon(SQUARE, Crack.from_points(points))
        chord = float(np.linalg.norm(split.chord[1] - split.chord[0]))
        total = _perimeter(split.minus.coords) + _perimeter(split.plus.coords)
        assert total == pytest.approx(_perimeter(SQUARE) + 2.0 * chord, rel=1e-12)
        assert split.minus.area + split.plus.area == pytest.approx(1.0, rel=1e-12)

    def test_split_mesh_element(self, odd_quad_mesh, edge_crack):
        split = split_element(odd_quad_mesh, 55, edge_crack)
        assert split.minus.area + split.plus.area == pytest.approx(odd_quad_mesh.geometry(55).area)
        with pytest.raises(InvalidArgumentError):
            split_element(odd_quad_mesh, 500, edge_crack)

    def test_tip_element_faces(self, odd_quad_mesh, edge_crack):
        """The crack enters the tip element through its left edge."""
        faces = tip_element_faces(odd_quad_mesh.element_coords(60), edge_crack)
        np.testing.assert_allclose(faces, [[-1.0 / 11.0, 0.0], [0.0, 0.0]], atol=1e-14)


class TestExplicitCrack:
    """Test cases for cracks meshed along element edges."""

    def test_duplicated_nodes(self, square_domain, edge_crack):
        """Nodes behind the tip are duplicated; the tip node is shared."""
        mesh = build_structured_quad_mesh(square_domain, 10, 10)
        cracked = insert_crack_along_edges(mesh, edge_crack)
        assert cracked.n_nodes == mesh.n_nodes + 5
        assert len(cracked.duplicates) == 5
        assert sum(b.tag == BoundaryTags.CRACK for b in cracked.boundary_edges) == 10

    def test_crack_off_edges(self, odd_quad_mesh, edge_crack):
        with pytest.raises(MeshGenerationError):
            insert_crack_along_edges(odd_quad_mesh, edge_crack)
