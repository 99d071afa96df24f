#!/usr/bin/env python3
"""
Unit tests for discretization, assembly, boundary conditions and the solve.
"""

import numpy as np
import pytest
from scipy import sparse

from xvem2d.core.constants import BoundaryTags
from xvem2d.core.crack import ElementKind, EnrichmentMode
from xvem2d.core.mesh import build_structured_quad_mesh
from xvem2d.solver.problem import DiscretizationSettings, discretize
from xvem2d.solver.system import (
    BoundaryConditions,
    ConstrainedSystem,
    EssentialBC,
    NaturalBC,
    PointConstraint,
    apply_bcs,
    assemble,
    interpolate,
    reaction_resultant,
    solve,
    solve_problem,
    strain_energy,
)
from xvem2d.utils.errors import InvalidArgumentError, SolverError

GRAD = np.array([[0.1, 0.2], [-0.05, 0.3]])


def linear_field(x, branch=0):
    return np.atleast_2d(x) @ GRAD.T


@pytest.fixture
def square_disc(unit_square, unit_material):
    mesh = build_structured_quad_mesh(unit_square, 4, 4)
    return discretize(mesh, unit_material)


class TestDiscretize:
    """Test cases for element kinds and DOF counts."""

    def test_uncracked(self, square_disc):
        assert square_disc.n_dofs == 50
        assert all(entry.kind is ElementKind.UNCUT for entry in square_disc.entries)
        assert square_disc.plan is None

    def test_cracked_kinds(self, odd_quad_mesh, edge_crack, material):
        settings = DiscretizationSettings(enrichment=EnrichmentMode.TOPOLOGICAL)
        disc = discretize(odd_quad_mesh, material, edge_crack, settings)
        kinds = [entry.kind for entry in disc.entries]
        assert kinds.count(ElementKind.CUT) == 5
        assert kinds.count(ElementKind.TIP) == 1
        assert disc.n_dofs == 2 * odd_quad_mesh.n_nodes + 28
        assert len(list(disc.cells())) == odd_quad_mesh.n_elements + 5
        assert disc.to_dict()["dofs"]["n_enriched_nodes"] == 4

    def test_threaded_matches_serial(self, odd_quad_mesh, edge_crack, material):
        serial = discretize(odd_quad_mesh, material, edge_crack)
        threaded = discretize(odd_quad_mesh, material, edge_crack, DiscretizationSettings(workers=3))
        diff = assemble(serial) - assemble(threaded)
        assert abs(diff).max() == 0.0

    def test_invalid_settings(self):
        with pytest.raises(InvalidArgumentError):
            DiscretizationSettings(workers=0)
        with pytest.raises(InvalidArgumentError):
            DiscretizationSettings(enrichment="geometric", enrichment_radius=None)


class TestAssembly:
    """Test cases for the global stiffness."""

    def test_symmetric(self, square_disc):
        K = assemble(square_disc)
        assert abs(K - K.T).max() <= 1e-14 * abs(K).max()

    def test_consistency_only(self, square_disc):
        K = assemble(square_disc)
        K_c = assemble(square_disc, consistency_only=True)
        assert abs(K - K_c).max() > 0.0

    def test_translation_in_kernel(self, square_disc):
        u = np.tile([1.0, 0.0], square_disc.n_dofs // 2)
        np.testing.assert_allclose(assemble(square_disc) @ u, 0.0, atol=1e-12)


class TestBoundaryConditions:
    """Test cases for condition validation and elimination."""

    def test_overlapping_tags(self, square_disc):
        bcs = BoundaryConditions(
            essential=[EssentialBC(BoundaryTags.LEFT)],
            natural=[NaturalBC(BoundaryTags.LEFT, lambda x: np.zeros_like(x))],
        )
        with pytest.raises(InvalidArgumentError):
            bcs.validate(square_disc.mesh)

    def test_point_on_missing_node(self, square_disc):
        with pytest.raises(InvalidArgumentError):
            BoundaryConditions(points=[PointConstraint(99, 0)]).validate(square_disc.mesh)

    def test_invalid_components(self):
        with pytest.raises(InvalidArgumentError):
            PointConstraint(0, 2)
        with pytest.raises(InvalidArgumentError):
            EssentialBC("left", components=(False, False))

    def test_elimination_counts(self, square_disc):
        """Every boundary node is fixed in both directions."""
        bcs = BoundaryConditions(essential=[EssentialBC(BoundaryTags.SIDES, linear_field)])
        system = apply_bcs(assemble(square_disc), np.zeros(square_disc.n_dofs), bcs, square_disc)
        assert len(system.fixed) == 2 * 16
        assert len(system.free) == 2 * 9
        assert system.K_ff.shape == (18, 18)


class TestSolve:
    """Test cases for solving small problems with known answers."""

    def test_linear_patch(self, square_disc):
        """A linear boundary field is reproduced exactly inside."""
        bcs = BoundaryConditions(essential=[EssentialBC(BoundaryTags.SIDES, linear_field)])
        solution = solve_problem(square_disc, bcs)
        exact = interpolate(square_disc, linear_field)
        np.testing.assert_allclose(solution.u, exact, atol=1e-12)
        np.testing.assert_allclose(solution.nodal_displacements(), linear_field(square_disc.mesh.vertices), atol=1e-12)
        # E = 1, nu = 0: energy is half eps : eps times the area
        strain = 0.5 * (GRAD + GRAD.T)
        assert strain_energy(solution) == pytest.approx(0.5 * np.sum(strain * strain), rel=1e-12)
        for coeffs in solution.projected_coefficients():
            assert coeffs.shape == (6,)

    def test_uniaxial_tension(self, square_disc):
        """Unit traction on the right edge stretches the square by 1/E."""
        mesh = square_disc.mesh
        bcs = BoundaryConditions(
            essential=[EssentialBC(BoundaryTags.LEFT, components=(True, False))],
            natural=[NaturalBC(BoundaryTags.RIGHT, lambda x: np.tile([1.0, 0.0], (len(x), 1)))],
            points=[PointConstraint(0, 1)],
        )
        solution = solve_problem(square_disc, bcs)
        expected = np.column_stack([mesh.vertices[:, 0], np.zeros(mesh.n_nodes)])
        np.testing.assert_allclose(solution.nodal_displacements(), expected, atol=1e-10)
        assert strain_energy(solution) == pytest.approx(0.5, rel=1e-10)
        left = mesh.boundary_nodes([BoundaryTags.LEFT])
        assert reaction_resultant(solution, left)[0] == pytest.approx(-1.0, rel=1e-10)
        assert solution.residual < 1e-10

    def test_rigid_body_motion_detected(self, square_disc):
        bcs = BoundaryConditions(natural=[NaturalBC(BoundaryTags.RIGHT, lambda x: np.tile([1.0, 0.0], (len(x), 1)))])
        system = apply_bcs(assemble(square_disc), np.zeros(square_disc.n_dofs), bcs, square_disc)
        with pytest.raises(SolverError) as excinfo:
            solve(system, square_disc)
        assert excinfo.value.hint is not None

    def test_all_fixed(self, square_disc):
        """With no free DOFs the solution is the prescribed vector."""
        mesh = build_structured_quad_mesh(square_disc.mesh.domain, 1, 1)
        disc = discretize(mesh, square_disc.material)
        solution = solve_problem(disc, BoundaryConditions(essential=[EssentialBC(BoundaryTags.SIDES, linear_field)]))
        np.testing.assert_allclose(solution.u, linear_field(mesh.vertices).ravel())
        assert solution.residual == 0.0

    def test_matches_dense_oracle(self):
        """A random SPD system with five fixed DOFs agrees with a dense solve."""
        rng = np.random.default_rng(50)
        A = rng.normal(size=(50, 50))
        K = A @ A.T + 50.0 * np.eye(50)
        f = rng.normal(size=50)
        fixed = np.arange(5)
        free = np.arange(5, 50)
        values = rng.normal(size=5)
        f_f = f[free] - K[np.ix_(free, fixed)] @ values
        system = ConstrainedSystem(
            K=sparse.csr_matrix(K),
            f=f,
            free=free,
            fixed=fixed,
            fixed_values=values,
            K_ff=sparse.csc_matrix(K[np.ix_(free, free)]),
            f_f=f_f,
        )
        solution = solve(system)
        expected = np.linalg.solve(K[np.ix_(free, free)], f_f)
        np.testing.assert_allclose(solution.u[free], expected, rtol=1e-10, atol=1e-12)
        np.testing.assert_array_equal(solution.u[fixed], values)
        np.testing.assert_allclose(solution.reactions, (K @ solution.u - f)[fixed], atol=1e-10)
