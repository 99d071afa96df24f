#!/usr/bin/env python3
"""
Unit tests for the material law and the near-tip fields.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xvem2d.core.crack import Crack
from xvem2d.physics.material import (
    CrackMode,
    Material,
    PlaneAssumption,
    effective_modulus,
    elasticity_tensor,
    kolosov,
    scaled_tip_fields,
    shear_modulus,
    tip_displacement,
    tip_gradient,
    tip_stress,
    williams_displacement,
    williams_fields,
    williams_scale,
)
from xvem2d.utils.errors import InvalidArgumentError, SingularPointError


class TestMaterial:
    """Test cases for the Material data class and its moduli."""

    def test_invalid_values(self):
        with pytest.raises(InvalidArgumentError):
            Material(young_modulus=-1.0, poisson_ratio=0.3)
        with pytest.raises(InvalidArgumentError):
            Material(young_modulus=1.0, poisson_ratio=0.5)

    def test_plane_from_string(self):
        assert Material(1.0, 0.2, "stress").plane is PlaneAssumption.STRESS

    def test_plane_strain_tensor(self, material):
        """Shear entry of the Voigt matrix equals mu."""
        C = elasticity_tensor(material)
        assert C[2, 2] == pytest.approx(shear_modulus(material))
        np.testing.assert_allclose(C, C.T)

    def test_plane_stress_tensor(self):
        mat = Material(1.0, 0.0, PlaneAssumption.STRESS)
        np.testing.assert_allclose(elasticity_tensor(mat), np.diag([1.0, 1.0, 0.5]))

    def test_kolosov(self):
        assert kolosov(Material(1.0, 0.3)) == pytest.approx(1.8)
        assert kolosov(Material(1.0, 0.3, PlaneAssumption.STRESS)) == pytest.approx(2.7 / 1.3)

    def test_effective_modulus(self, material):
        assert effective_modulus(material) == pytest.approx(1.0e5 / 0.91)
        assert williams_scale(material) == pytest.approx(1.0 / (4.0 * shear_modulus(material)))


class TestTipFields:
    """Test cases for the near-tip displacement, gradient and stress."""

    def test_mode_one_opening(self, material):
        """Mode I opens the faces symmetrically; the tangential jump is zero."""
        upper = tip_displacement(material, 0.25, np.pi, CrackMode.I)
        lower = tip_displacement(material, 0.25, -np.pi, CrackMode.I)
        assert upper[1] > 0.0
        assert lower[1] == pytest.approx(-upper[1])
        assert lower[0] == pytest.approx(upper[0])

    def test_mode_two_sliding(self, material):
        """Mode II slides the faces; the normal jump is zero."""
        upper = tip_displacement(material, 0.25, np.pi, CrackMode.II)
        lower = tip_displacement(material, 0.25, -np.pi, CrackMode.II)
        assert lower[0] == pytest.approx(-upper[0])
        assert lower[1] == pytest.approx(upper[1])

    def test_zero_at_tip(self, material):
        np.testing.assert_allclose(tip_displacement(material, 0.0, 0.0, "I"), [0.0, 0.0])

    def test_negative_radius(self, material):
        with pytest.raises(InvalidArgumentError):
            tip_displacement(material, -1.0, 0.0, "I")

    def test_gradient_singular_at_tip(self, material):
        with pytest.raises(SingularPointError):
            tip_gradient(material, 0.0, 0.0, "II")

    @settings(max_examples=40, deadline=None)
    @given(
        st.floats(min_value=0.05, max_value=2.0),
        st.floats(min_value=-3.0, max_value=3.0),
        st.sampled_from([CrackMode.I, CrackMode.II]),
    )
    def test_gradient_matches_differences(self, r, theta, mode):
        """Analytic gradient agrees with central differences in Cartesian coordinates."""
        mat = Material(1.0e5, 0.3)
        x = np.array([r * np.cos(theta), r * np.sin(theta)])
        step = 1e-6

        def u(p):
            return tip_displacement(mat, np.hypot(*p), np.arctan2(p[1], p[0]), mode)

        numeric = np.column_stack(
            [(u(x + step * e) - u(x - step * e)) / (2 * step) for e in np.eye(2)]
        )
        np.testing.assert_allclose(tip_gradient(mat, r, theta, mode), numeric, rtol=1e-5, atol=1e-7)

    @pytest.mark.parametrize("mode", [CrackMode.I, CrackMode.II])
    def test_faces_traction_free(self, material, mode):
        """sigma_12 and sigma_22 vanish on both crack faces."""
        for theta in (np.pi, -np.pi + 1e-15):
            sigma = tip_stress(material, 0.3, theta, mode)
            scale = np.abs(tip_stress(material, 0.3, 0.0, mode)).max()
            assert abs(sigma[0, 1]) <= 1e-12 * scale
            assert abs(sigma[1, 1]) <= 1e-12 * scale

    def test_mode_one_stress_ahead_of_tip(self, material):
        """sigma_22 = K / sqrt(2 pi r) ahead of the tip for the unit field."""
        r = 0.2
        sigma = williams_scale(material) * tip_stress(material, r, 0.0, CrackMode.I)
        assert sigma[1, 1] == pytest.approx(1.0 / np.sqrt(2 * np.pi * r), rel=1e-12)
        assert sigma[0, 1] == pytest.approx(0.0, abs=1e-12)

    def test_scaled_fields(self, material):
        np.testing.assert_allclose(
            scaled_tip_fields(material, 4.0, 0.5, 1.0, "I"), tip_displacement(material, 0.5, 1.0, "I") / 2.0
        )
        with pytest.raises(InvalidArgumentError):
            scaled_tip_fields(material, 0.0, 0.5, 1.0, "I")


class TestWilliamsFields:
    """Test cases for global-frame fields with given SIFs."""

    def test_rotation_invariance(self, material):
        """A rotated crack carries the rotated field."""
        straight = Crack.from_points([(-1.0, 0.0), (0.0, 0.0)])
        c, s = np.cos(0.7), np.sin(0.7)
        R = np.array([[c, -s], [s, c]])
        rotated = Crack.from_points([R @ np.array([-1.0, 0.0]), (0.0, 0.0)])
        x = np.array([[0.3, 0.2], [-0.4, 0.5]])
        u0, g0, s0 = williams_fields(material, straight, x, 1.0, 0.5)
        u1, g1, s1 = williams_fields(material, rotated, x @ R.T, 1.0, 0.5)
        np.testing.assert_allclose(u1, u0 @ R.T, atol=1e-14)
        np.testing.assert_allclose(s1, R @ s0 @ R.T, rtol=1e-10, atol=1e-10)

    def test_displacement_helper(self, material, edge_crack):
        x = np.array([[0.3, -0.1], [0.2, 0.4]])
        u, _, _ = williams_fields(material, edge_crack, x, 1.0, 1.0)
        np.testing.assert_allclose(williams_displacement(material, edge_crack, x, 1.0, 1.0), u)
