#!/usr/bin/env python3
"""
Integration tests: patch tests, mixed-mode convergence and the inclined
edge crack, checked against closed forms and tabulated values.
"""

import math

import numpy as np
import pytest

from xvem2d.core.constants import ReferenceValues
from xvem2d.experiments.benchmarks import (
    MIXED_MODE_DOMAIN,
    alpha_sweep,
    build_mesh,
    convergence_study,
    discontinuous_patch_test,
    extended_patch_test,
    inclined_convergence,
    mixed_mode_reference_energy,
    modulus_sweep,
    run_configured,
    run_inclined,
    run_mixed_mode,
    solve_mixed_mode,
)
from xvem2d.experiments.config import MeshKind
from xvem2d.fracture.sif import compute_sifs, ring_radius_sweep

pytestmark = pytest.mark.integration


class TestExtendedPatchTest:
    """Every node enriched: the exact mixed-mode field is in the discrete space."""

    def test_reference_energy(self, material):
        assert mixed_mode_reference_energy(material) == pytest.approx(
            ReferenceValues.MIXED_MODE_STRAIN_ENERGY, rel=1e-8
        )

    def test_square_mesh(self, default_config):
        run = extended_patch_test(default_config, MeshKind.QUAD)
        assert run.extra["n_elements"] == 100
        assert run.rel_error <= 1e-8

    def test_sifs_of_solved_field(self, default_config):
        """On the exactly reproduced field the interaction integral returns the unit SIFs."""
        run = extended_patch_test(default_config, MeshKind.QUAD)
        sifs = compute_sifs(run.solution, 0.4)
        assert sifs.k_i == pytest.approx(1.0, rel=1e-3)
        assert sifs.k_ii == pytest.approx(1.0, rel=1e-3)

    def test_polygonal_mesh(self, default_config):
        config = default_config.with_updates({"mesh": {"n_seeds": 64}})
        run = extended_patch_test(config, MeshKind.VORONOI)
        assert run.extra["n_elements"] == 64
        assert run.rel_error <= 1e-6

    def test_zero_boundary_data(self, default_config):
        run = extended_patch_test(default_config, MeshKind.QUAD, amplitude=0.0)
        assert run.reference_energy == 0.0
        assert run.energy == pytest.approx(0.0, abs=1e-20)
        np.testing.assert_allclose(run.solution.u, 0.0, atol=1e-14)


class TestDiscontinuousPatchTest:
    """A fully cut square under two-level tension."""

    def test_energy_and_dofs(self, default_config):
        run = discontinuous_patch_test(default_config)
        assert run.rel_error <= 1e-10
        assert run.extra["dof_error"] <= 1e-8

    def test_opening_between_halves(self, default_config):
        """The right edge moves by 1 below the crack and by 2 above it."""
        run = discontinuous_patch_test(default_config)
        solution = run.solution
        disc = solution.disc
        right = disc.mesh.boundary_nodes(["right"])
        top_right = right[np.argmax(disc.mesh.vertices[right, 1])]
        bottom_right = right[np.argmin(disc.mesh.vertices[right, 1])]
        displacements = solution.nodal_displacements()
        assert displacements[top_right, 0] == pytest.approx(2.0, rel=1e-10)
        assert displacements[bottom_right, 0] == pytest.approx(1.0, rel=1e-10)

    def test_linearity(self, default_config):
        """Doubling the traction doubles the solution and quadruples the energy."""
        single = discontinuous_patch_test(default_config)
        double = discontinuous_patch_test(default_config, load_scale=2.0)
        np.testing.assert_allclose(double.solution.u, 2.0 * single.solution.u, atol=1e-10)
        assert double.energy == pytest.approx(4.0 * single.energy, rel=1e-10)


class TestConfiguredRun:
    """Test cases for the config-driven solve."""

    def test_default_crack(self, default_config):
        run = run_configured(default_config)
        assert run.reference_energy == pytest.approx(ReferenceValues.MIXED_MODE_STRAIN_ENERGY, rel=1e-8)
        assert run.k_i is not None and run.k_ii is not None

    def test_custom_crack_has_no_reference(self, default_config):
        config = default_config.with_updates({"crack": {"points": [[-1.0, 0.05], [0.1, 0.05]]}})
        run = run_configured(config)
        assert run.reference_energy is None
        assert run.rel_error is None
        assert run.energy > 0.0

    def test_ring_radius_independence(self, default_config):
        mesh = build_mesh(default_config, MIXED_MODE_DOMAIN, 20)
        _, solution = solve_mixed_mode(default_config, mesh, "geometric")
        sweep = ring_radius_sweep(solution, (0.3, 0.4, 0.5))
        assert len(sweep.results) == 3
        for result in sweep.results:
            assert result.k_i == pytest.approx(1.0, rel=0.05)
            assert result.k_ii == pytest.approx(1.0, rel=0.05)
        assert max(sweep.spread) < 0.05


@pytest.mark.slow
class TestMixedModeConvergence:
    """Energy convergence and SIF accuracy of the mixed-mode problem."""

    def test_sifs_on_fine_mesh(self, default_config):
        run = run_mixed_mode(default_config, 80, "geometric")
        assert run.k_i == pytest.approx(1.0, rel=0.01)
        assert run.k_ii == pytest.approx(1.0, rel=0.01)

    def test_rates_on_quads(self, default_config):
        study = convergence_study(default_config, methods=("vem", "topological", "geometric"), with_sifs=False)
        assert study["topological"].slope == pytest.approx(1.0, abs=0.15)
        assert study["geometric"].slope == pytest.approx(2.0, abs=0.2)
        for plain, enriched in zip(study["vem"].runs, study["geometric"].runs):
            assert enriched.rel_error < plain.rel_error
        for plain, enriched in zip(study["vem"].runs, study["topological"].runs):
            assert enriched.rel_error < plain.rel_error

    def test_alpha_does_not_change_rate(self, default_config):
        sweep = alpha_sweep(default_config, alphas=(1e-3, 10.0), resolutions=(10, 20, 40))
        assert sorted(sweep) == [1e-3, 10.0]
        for series in sweep.values():
            assert series.slope == pytest.approx(2.0, abs=0.3)

    def test_modulus_does_not_change_error(self, default_config):
        """Relative energy errors are independent of the Young's modulus."""
        sweep = modulus_sweep(default_config, moduli=(1e3, 1e7), resolutions=(10, 20))
        soft, stiff = sweep[1e3].runs, sweep[1e7].runs
        for a, b in zip(soft, stiff):
            assert a.energy == pytest.approx(1e4 * b.energy, rel=1e-6)
            assert a.rel_error == pytest.approx(b.rel_error, rel=1e-6)

    def test_polygon_mesh_size(self, default_config):
        """Voronoi meshes of the sequence have n^2 cells."""
        mesh = build_mesh(default_config, MIXED_MODE_DOMAIN, 10, MeshKind.VORONOI)
        assert mesh.n_elements == 100
        assert mesh.total_area == pytest.approx(4.0, rel=1e-10)


@pytest.mark.slow
class TestInclinedCrack:
    """Inclined edge crack plate against tabulated SIFs."""

    @pytest.mark.parametrize("beta", [math.pi / 12, math.pi / 4])
    def test_tabulated_sifs(self, default_config, beta):
        run = run_inclined(default_config, beta, alpha=0.01)
        k_i, k_ii = ReferenceValues.INCLINED_SIF[0.01][beta]
        assert run.extra["reference_K_I"] == k_i
        assert run.k_i == pytest.approx(k_i, rel=0.005)
        assert run.k_ii == pytest.approx(k_ii, rel=0.005)

    def test_energy_convergence(self, default_config):
        series = inclined_convergence(default_config, beta=math.pi / 6)
        assert len(series.runs) == 3
        assert series.monotone
