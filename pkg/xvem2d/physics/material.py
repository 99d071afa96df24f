#!/usr/bin/env python3
"""
Material and Crack-Tip Fields - Isotropic plane elasticity and near-tip asymptotics

This module provides the Material data class (E, nu, plane assumption),
the Voigt elasticity matrix, the Kolosov constant and the mode-I / mode-II
near-tip displacement fields with their analytic gradients and stresses.

The fields are evaluated in the tip frame; helpers rotate them to the
global frame. Displacements carry no 1/(2 mu) prefactor; multiplying by
``williams_scale(mat)`` gives the classical unit stress-intensity fields.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple

import numpy as np

from ..core.crack import Crack, tip_polar_coords
from ..utils.errors import InvalidArgumentError, SingularPointError

_SQRT_2PI = np.sqrt(2.0 * np.pi)


class PlaneAssumption(Enum):
    """Two-dimensional reduction of the elasticity problem."""

    STRAIN = "strain"
    STRESS = "stress"


class CrackMode(Enum):
    """Fracture mode of a near-tip field."""

    I = "I"  # noqa: E741
    II = "II"


@dataclass(frozen=True)
class Material:
    """Homogeneous isotropic linear-elastic material."""

    young_modulus: float
    poisson_ratio: float
    plane: PlaneAssumption = PlaneAssumption.STRAIN

    def __post_init__(self):
        object.__setattr__(self, "plane", PlaneAssumption(self.plane))
        if not self.young_modulus > 0.0:
            raise InvalidArgumentError(f"Young's modulus must be positive, got {self.young_modulus}")
        if not -1.0 < self.poisson_ratio < 0.5:
            raise InvalidArgumentError(f"Poisson ratio must lie in (-1, 0.5), got {self.poisson_ratio}")

    def to_dict(self) -> Dict[str, Any]:
        return {"E": self.young_modulus, "nu": self.poisson_ratio, "plane": self.plane.value}


def elasticity_tensor(mat: Material) -> np.ndarray:
    """Voigt elasticity matrix for (xx, yy, 2xy) strains."""
    E, nu = mat.young_modulus, mat.poisson_ratio
    if mat.plane is PlaneAssumption.STRAIN:
        factor = E / ((1.0 + nu) * (1.0 - 2.0 * nu))
        return factor * np.array(
            [[1.0 - nu, nu, 0.0], [nu, 1.0 - nu, 0.0], [0.0, 0.0, 0.5 * (1.0 - 2.0 * nu)]]
        )
    factor = E / (1.0 - nu**2)
    return factor * np.array([[1.0, nu, 0.0], [nu, 1.0, 0.0], [0.0, 0.0, 0.5 * (1.0 - nu)]])


def kolosov(mat: Material) -> float:
    """Kolosov constant: 3 - 4 nu (plane strain) or (3 - nu) / (1 + nu) (plane stress)."""
    nu = mat.poisson_ratio
    if mat.plane is PlaneAssumption.STRAIN:
        return 3.0 - 4.0 * nu
    return (3.0 - nu) / (1.0 + nu)


def shear_modulus(mat: Material) -> float:
    return mat.young_modulus / (2.0 * (1.0 + mat.poisson_ratio))


def effective_modulus(mat: Material) -> float:
    """E' = E / (1 - nu^2) in plane strain, E in plane stress."""
    if mat.plane is PlaneAssumption.STRAIN:
        return mat.young_modulus / (1.0 - mat.poisson_ratio**2)
    return mat.young_modulus


def williams_scale(mat: Material) -> float:
    """Factor turning the enrichment fields into unit stress-intensity fields."""
    return 1.0 / (4.0 * shear_modulus(mat))


def _angular(kappa: float, theta: np.ndarray, mode: CrackMode) -> Tuple[np.ndarray, np.ndarray]:
    """Angular functions g(theta) and their derivatives, each of shape (..., 2)."""
    c1, s1 = np.cos(0.5 * theta), np.sin(0.5 * theta)
    c3, s3 = np.cos(1.5 * theta), np.sin(1.5 * theta)
    if mode is CrackMode.I:
        g = np.stack([(2 * kappa - 1) * c1 - c3, (2 * kappa + 1) * s1 - s3], axis=-1)
        dg = np.stack(
            [
                -0.5 * (2 * kappa - 1) * s1 + 1.5 * s3,
                0.5 * (2 * kappa + 1) * c1 - 1.5 * c3,
            ],
            axis=-1,
        )
    else:
        g = np.stack([(2 * kappa + 3) * s1 + s3, -(2 * kappa - 3) * c1 - c3], axis=-1)
        dg = np.stack(
            [
                0.5 * (2 * kappa + 3) * c1 + 1.5 * c3,
                0.5 * (2 * kappa - 3) * s1 + 1.5 * s3,
            ],
            axis=-1,
        )
    return g, dg


def tip_displacement(mat: Material, r, theta, mode) -> np.ndarray:
    """
    Near-tip displacement in the tip frame.

    Args:
        mat: Material (through the Kolosov constant).
        r: Distance(s) to the tip, r >= 0.
        theta: Angle(s) in the tip frame.
        mode: CrackMode or "I"/"II".

    Returns:
        Array of shape (..., 2).
    """
    mode = CrackMode(mode)
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r < 0.0):
        raise InvalidArgumentError("Distance to the tip must be non-negative")
    g, _ = _angular(kolosov(mat), theta, mode)
    return np.sqrt(r / (2.0 * np.pi))[..., None] * g


def tip_gradient(mat: Material, r, theta, mode) -> np.ndarray:
    """
    Displacement gradient grad[i, j] = du_i / dx_j in the tip frame.

    Raises:
        SingularPointError: If any r is zero.
    """
    mode = CrackMode(mode)
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r <= 0.0):
        raise SingularPointError("Crack-tip field gradient is unbounded at the tip")
    g, dg = _angular(kolosov(mat), theta, mode)
    root = _SQRT_2PI * np.sqrt(r)
    du_dr = g / (2.0 * root)[..., None]
    du_dt = dg / root[..., None]
    cos_t, sin_t = np.cos(theta)[..., None], np.sin(theta)[..., None]
    d_dx1 = cos_t * du_dr - sin_t * du_dt
    d_dx2 = sin_t * du_dr + cos_t * du_dt
    return np.stack([d_dx1, d_dx2], axis=-1)


def stress_from_gradient(mat: Material, grad: np.ndarray) -> np.ndarray:
    """Cauchy stress tensor(s) from displacement gradient(s) of shape (..., 2, 2)."""
    grad = np.asarray(grad, dtype=float)
    strain = np.stack([grad[..., 0, 0], grad[..., 1, 1], grad[..., 0, 1] + grad[..., 1, 0]], axis=-1)
    s = strain @ elasticity_tensor(mat).T
    return np.stack(
        [np.stack([s[..., 0], s[..., 2]], axis=-1), np.stack([s[..., 2], s[..., 1]], axis=-1)],
        axis=-2,
    )


def strain_from_gradient(grad: np.ndarray) -> np.ndarray:
    grad = np.asarray(grad, dtype=float)
    return 0.5 * (grad + np.swapaxes(grad, -1, -2))


def tip_stress(mat: Material, r, theta, mode) -> np.ndarray:
    """Near-tip stress tensor in the tip frame, shape (..., 2, 2)."""
    return stress_from_gradient(mat, tip_gradient(mat, r, theta, mode))


@dataclass
class TipFieldValue:
    """Displacement, gradient and stress of a near-tip field (tip frame)."""

    displacement: np.ndarray
    gradient: np.ndarray
    stress: np.ndarray

    @property
    def strain(self) -> np.ndarray:
        return strain_from_gradient(self.gradient)


def tip_fields(mat: Material, r, theta, mode) -> TipFieldValue:
    grad = tip_gradient(mat, r, theta, mode)
    return TipFieldValue(
        displacement=tip_displacement(mat, r, theta, mode),
        gradient=grad,
        stress=stress_from_gradient(mat, grad),
    )


def scaled_tip_fields(mat: Material, h: float, r, theta, mode) -> np.ndarray:
    """Dimensionless near-tip displacement u / sqrt(h), h the global mesh size."""
    if not h > 0.0:
        raise InvalidArgumentError(f"Mesh size must be positive, got {h}")
    return tip_displacement(mat, r, theta, mode) / np.sqrt(h)


def to_global(crack: Crack, displacement: np.ndarray, gradient: np.ndarray = None):
    """Rotate tip-frame displacement (..., 2) and gradient (..., 2, 2) to the global frame."""
    R = crack.rotation
    u = np.asarray(displacement) @ R.T
    if gradient is None:
        return u
    return u, R @ np.asarray(gradient) @ R.T


def williams_fields(
    mat: Material, crack: Crack, x: np.ndarray, k_i: float = 1.0, k_ii: float = 0.0, branch: int = 0
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Classical near-tip fields with stress intensity factors K_I, K_II.

    Args:
        mat: Material.
        crack: Crack (tip and frame).
        x: Points (q, 2) in the global frame, away from the tip.
        k_i: Mode-I stress intensity factor.
        k_ii: Mode-II stress intensity factor.
        branch: Angular branch (see :func:`tip_polar_coords`).

    Returns:
        (displacement (q, 2), gradient (q, 2, 2), stress (q, 2, 2)) in the global frame.
    """
    r, theta = tip_polar_coords(crack, np.atleast_2d(x), branch)
    scale = williams_scale(mat)
    u = scale * (k_i * tip_displacement(mat, r, theta, CrackMode.I) + k_ii * tip_displacement(mat, r, theta, CrackMode.II))
    g = scale * (k_i * tip_gradient(mat, r, theta, CrackMode.I) + k_ii * tip_gradient(mat, r, theta, CrackMode.II))
    u, g = to_global(crack, u, g)
    return u, g, stress_from_gradient(mat, g)


def williams_displacement(
    mat: Material, crack: Crack, x: np.ndarray, k_i: float = 1.0, k_ii: float = 0.0, branch: int = 0
) -> np.ndarray:
    """Global displacement of the classical near-tip field; defined at the tip (zero)."""
    r, theta = tip_polar_coords(crack, np.atleast_2d(x), branch)
    scale = williams_scale(mat)
    u = scale * (k_i * tip_displacement(mat, r, theta, CrackMode.I) + k_ii * tip_displacement(mat, r, theta, CrackMode.II))
    return to_global(crack, u)
