#!/usr/bin/env python3
"""
Unit tests for the element kernel: projector identities, stiffness
structure and stabilization.

Random convex polygons are drawn with hypothesis; the identities must hold
for every polygon regardless of shape.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xvem2d.core.crack import Crack
from xvem2d.core.quadrature import integrate_polygon_oracle
from xvem2d.physics.material import Material
from xvem2d.utils.errors import InvalidArgumentError, KernelError
from xvem2d.vem.cells import build_element_cell
from xvem2d.vem.element_kernel import (
    ElementDofLayout,
    KernelSettings,
    StabilizationScheme,
    compute_cell_kernel,
    compute_projector,
)
from xvem2d.vem.hansbo import count_zero_modes

MATERIAL = Material(young_modulus=1.0e5, poisson_ratio=0.3)
CRACK = Crack.from_points([(-1.0, 0.0), (0.0, 0.0)])


def random_convex_polygon(seed: int, n: int, center=(0.5, 0.5), radius=0.2) -> np.ndarray:
    """Jittered vertices on an ellipse, counter-clockwise."""
    rng = np.random.default_rng(seed)
    base = 2.0 * np.pi * np.arange(n) / n
    angles = base + rng.uniform(-0.3, 0.3, n) * (2.0 * np.pi / n) + rng.uniform(0.0, 2.0 * np.pi)
    stretch = rng.uniform(0.6, 1.0)
    return np.column_stack(
        [center[0] + radius * np.cos(angles), center[1] + stretch * radius * np.sin(angles)]
    )


polygons = st.builds(random_convex_polygon, st.integers(0, 10**6), st.integers(3, 9))


def _kernel(coords, enriched=None, crack=None, scheme=StabilizationScheme.DOFI, alpha=1.0):
    cell = build_element_cell(0, coords, crack)
    return compute_cell_kernel(
        cell, MATERIAL, crack, h=0.1, enriched=enriched, settings=KernelSettings(stabilization=scheme, alpha=alpha)
    )


class TestDofLayout:
    """Test cases for local DOF ordering."""

    def test_standard(self):
        layout = ElementDofLayout.create(4)
        assert layout.n_dof == 8
        assert layout.n_full == 8
        assert not layout.extended

    def test_partial_enrichment(self):
        """Kept DOFs are the standard ones plus both modes of enriched vertices."""
        layout = ElementDofLayout.create(4, [True, False, True, False])
        assert layout.k == 2
        assert layout.n_full == 16
        assert layout.n_dof == 12
        np.testing.assert_array_equal(layout.kept, list(range(8)) + [8, 10, 12, 14])

    def test_mask_length(self):
        with pytest.raises(InvalidArgumentError):
            ElementDofLayout.create(4, [True])


class TestProjectorIdentities:
    """Test cases for G = B D, Pi D = I and the zero rows of G~, B~."""

    @settings(max_examples=200, deadline=None)
    @given(polygons)
    def test_standard_identities(self, coords):
        result = _kernel(coords)
        scale = np.abs(result.G).max()
        np.testing.assert_allclose(result.B @ result.D, result.G, atol=1e-10 * scale)
        np.testing.assert_allclose(result.Pi @ result.D, np.eye(6), atol=1e-10)
        np.testing.assert_array_equal(result.G_tilde[:3], 0.0)
        np.testing.assert_array_equal(result.B_tilde[:3], 0.0)

    @settings(max_examples=30, deadline=None)
    @given(polygons)
    def test_extended_identities(self, coords):
        """Fully enriched polygons above the crack reproduce all eight fields."""
        result = _kernel(coords, enriched=[True] * len(coords), crack=CRACK)
        scale = np.abs(result.G).max()
        np.testing.assert_allclose(result.B @ result.D, result.G, atol=1e-10 * scale)
        np.testing.assert_allclose(result.Pi @ result.D, np.eye(8), atol=1e-8)
        np.testing.assert_array_equal(result.G_tilde[:3], 0.0)

    @settings(max_examples=25, deadline=None)
    @given(polygons)
    def test_polynomial_block_matches_area_oracle(self, coords):
        """Boundary integrals of linear fields equal the area integral of sigma : grad."""
        result = _kernel(coords)

        def integrand(x):
            values = result.basis.evaluate(x)
            return np.einsum("qbij,qaij->qba", values.stresses, values.gradients)

        oracle = integrate_polygon_oracle(integrand, coords, order=4)
        scale = np.abs(oracle).max()
        np.testing.assert_allclose(result.G_tilde, oracle, atol=1e-12 * scale)

    @settings(max_examples=30, deadline=None)
    @given(polygons, st.booleans())
    def test_projector_idempotent(self, coords, enriched):
        """Projecting the DOFs of a projection returns the same coefficients."""
        mask = [True] * len(coords) if enriched else None
        result = _kernel(coords, enriched=mask, crack=CRACK if enriched else None)
        v = np.random.default_rng(len(coords)).normal(size=result.n_dof)
        once = result.project(v)
        twice = result.project(result.D[result.layout.kept] @ once)
        np.testing.assert_allclose(twice, once, atol=1e-7 * np.abs(once).max())


class TestStiffness:
    """Test cases for symmetry, definiteness and zero modes."""

    @settings(max_examples=50, deadline=None)
    @given(polygons, st.sampled_from(list(StabilizationScheme)))
    def test_three_rigid_modes(self, coords, scheme):
        K = _kernel(coords, scheme=scheme).stiffness
        np.testing.assert_allclose(K, K.T, atol=1e-12 * np.abs(K).max())
        assert np.linalg.eigvalsh(K).min() > -1e-9 * np.abs(K).max()
        assert count_zero_modes(K) == 3

    def test_partially_enriched_rigid_modes(self):
        coords = random_convex_polygon(5, 6)
        K = _kernel(coords, enriched=[True, True, False, False, False, False], crack=CRACK).stiffness
        assert K.shape == (16, 16)
        assert count_zero_modes(K) == 3

    def test_patch_projection(self):
        """DOFs of a linear field project onto its coefficients."""
        result = _kernel(random_convex_polygon(17, 5))
        c = np.array([0.3, -0.2, 0.1, 1.0, -0.5, 0.25])
        np.testing.assert_allclose(result.project(result.D @ c), c, atol=1e-12)

    def test_linear_field_has_no_stabilization_energy(self):
        """K_s vanishes on the polynomial DOFs."""
        result = _kernel(random_convex_polygon(3, 7))
        np.testing.assert_allclose(result.K_s @ result.D, 0.0, atol=1e-8 * np.abs(result.K_s).max())

    def test_alpha_scales_stabilization(self):
        coords = random_convex_polygon(9, 5)
        low = _kernel(coords, alpha=0.1)
        high = _kernel(coords, alpha=1.0)
        np.testing.assert_allclose(high.K_s, 10.0 * low.K_s, rtol=1e-10, atol=1e-12 * np.abs(high.K_s).max())
        np.testing.assert_allclose(high.K_c, low.K_c)

    def test_blending_rows_evaluate_total_displacement(self):
        """Vertices without enriched DOFs see the full value of every basis field."""
        coords = random_convex_polygon(5, 6)
        mask = [True, True, False, False, False, False]
        result = _kernel(coords, enriched=mask, crack=CRACK)
        values = result.basis.evaluate(coords, derivatives=False).values
        D_hat = result.D_hat
        assert D_hat.shape == (16, 8)
        for i, enriched in enumerate(mask):
            expected = values[i].T.copy()
            if enriched:
                expected[:, 6:] = 0.0
            np.testing.assert_allclose(D_hat[2 * i : 2 * i + 2], expected, atol=1e-14)
        for rank, i in enumerate(np.flatnonzero(mask)):
            rows = D_hat[12 + 2 * rank : 14 + 2 * rank]
            np.testing.assert_array_equal(rows[:, :6], 0.0)
            np.testing.assert_allclose(rows[:, 6:], values[i, 6:].T, atol=1e-14)

    def test_fully_enriched_rows_are_split(self):
        coords = random_convex_polygon(8, 4)
        J = _kernel(coords, enriched=[True] * 4, crack=CRACK).J
        assert J.shape == (16, 16)
        np.testing.assert_array_equal(J[:8, :8], np.eye(8))
        np.testing.assert_array_equal(J[:8, 8:], 0.0)
        np.testing.assert_array_equal(J[8:, :8], 0.0)

    @pytest.mark.parametrize("scheme", list(StabilizationScheme))
    def test_blending_element_psd(self, scheme):
        coords = random_convex_polygon(11, 5)
        K = _kernel(coords, enriched=[False, True, False, False, True], crack=CRACK, scheme=scheme).stiffness
        np.testing.assert_allclose(K, K.T, atol=1e-12 * np.abs(K).max())
        assert np.linalg.eigvalsh(K).min() > -1e-9 * np.abs(K).max()

    def test_drecipe_ignores_alpha(self):
        coords = random_convex_polygon(9, 5)
        low = _kernel(coords, scheme=StabilizationScheme.DRECIPE, alpha=0.01)
        high = _kernel(coords, scheme=StabilizationScheme.DRECIPE, alpha=1.0)
        np.testing.assert_array_equal(low.K_s, high.K_s)
        assert low.tau == high.tau

    def test_enriched_without_crack(self):
        cell = build_element_cell(0, random_convex_polygon(1, 4), None)
        with pytest.raises(InvalidArgumentError):
            compute_cell_kernel(cell, MATERIAL, None, 0.1, enriched=[True] * 4)


class TestSettings:
    """Test cases for kernel settings and singular projectors."""

    def test_invalid_alpha(self):
        with pytest.raises(InvalidArgumentError):
            KernelSettings(alpha=0.0)

    def test_scheme_from_string(self):
        assert KernelSettings(stabilization="drecipe").stabilization is StabilizationScheme.DRECIPE

    def test_singular_projector(self):
        with pytest.raises(KernelError):
            compute_projector(np.zeros((6, 6)), np.zeros((6, 8)), element=3)
