"""
Extended polynomial basis.

Six scaled linear vector fields (three rigid-body modes, three constant
strain modes) plus, for enriched elements, the two scaled near-tip fields:

    m0 = (1, 0)   m1 = (0, 1)   m2 = (eta, -xi)
    m3 = (xi, 0)  m4 = (0, eta) m5 = (eta, xi)
    m6 = u_I / sqrt(h)   m7 = u_II / sqrt(h)

with xi = (x - x_P) / h_P and eta = (y - y_P) / h_P.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .material import CrackMode, Material, stress_from_gradient, tip_displacement, tip_gradient, to_global
from ..core.crack import Crack, tip_polar_coords
from ..core.mesh import ElementGeometry
from ..utils.errors import InvalidArgumentError, SingularPointError

N_STANDARD_MODES = 6
N_EXTENDED_MODES = 8


@dataclass
class BasisValues:
    """Values (q, n, 2), gradients (q, n, 2, 2) and stresses (q, n, 2, 2) of the basis fields."""

    values: np.ndarray
    gradients: Optional[np.ndarray] = None
    stresses: Optional[np.ndarray] = None

    @property
    def n_modes(self) -> int:
        return self.values.shape[1]


@dataclass
class ExtendedBasis:
    """
    Basis of one polygon.

    ``centroid`` and ``diameter`` define the scaled monomials, ``h`` scales
    the enrichment, ``branch`` selects the angular branch of the near-tip
    fields. ``n_modes`` is 6 (standard) or 8 (enriched).
    """

    centroid: np.ndarray
    diameter: float
    material: Material
    crack: Optional[Crack] = None
    h: float = 1.0
    branch: int = 0
    n_modes: int = N_EXTENDED_MODES

    def __post_init__(self):
        if self.n_modes not in (N_STANDARD_MODES, N_EXTENDED_MODES):
            raise InvalidArgumentError(f"Basis has 6 or 8 modes, got {self.n_modes}")
        if self.n_modes == N_EXTENDED_MODES and self.crack is None:
            raise InvalidArgumentError("The extended basis needs a crack")

    @classmethod
    def for_geometry(
        cls,
        geom: ElementGeometry,
        mat: Material,
        crack: Optional[Crack],
        h: float,
        branch: int = 0,
        enriched: bool = True,
    ) -> "ExtendedBasis":
        return cls(
            centroid=geom.centroid,
            diameter=geom.diameter,
            material=mat,
            crack=crack,
            h=h,
            branch=branch,
            n_modes=N_EXTENDED_MODES if enriched else N_STANDARD_MODES,
        )

    @property
    def enriched(self) -> bool:
        return self.n_modes == N_EXTENDED_MODES

    def enrichment(self, x: np.ndarray, derivatives: bool = True):
        """
        Scaled near-tip fields at x in the global frame.

        Returns:
            values (q, 2, 2) indexed [point, mode, component] and, with
            ``derivatives``, gradients (q, 2, 2, 2).
        """
        r, theta = tip_polar_coords(self.crack, np.atleast_2d(x), self.branch)
        root_h = np.sqrt(self.h)
        values = []
        grads = []
        for mode in (CrackMode.I, CrackMode.II):
            u_t = tip_displacement(self.material, r, theta, mode) / root_h
            if derivatives:
                if np.any(r == 0.0):
                    raise SingularPointError("Enrichment derivatives requested at the crack tip")
                g_t = tip_gradient(self.material, r, theta, mode) / root_h
                u_g, g_g = to_global(self.crack, u_t, g_t)
                grads.append(g_g)
            else:
                u_g = to_global(self.crack, u_t)
            values.append(u_g)
        values = np.stack(values, axis=1)
        if not derivatives:
            return values
        return values, np.stack(grads, axis=1)

    def evaluate(self, x: np.ndarray, derivatives: bool = True) -> BasisValues:
        """Evaluate all modes at points x of shape (q, 2)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        q = len(x)
        xi, eta = ((x - self.centroid) / self.diameter).T
        zero, one = np.zeros(q), np.ones(q)

        values = np.empty((q, self.n_modes, 2))
        values[:, 0] = np.column_stack([one, zero])
        values[:, 1] = np.column_stack([zero, one])
        values[:, 2] = np.column_stack([eta, -xi])
        values[:, 3] = np.column_stack([xi, zero])
        values[:, 4] = np.column_stack([zero, eta])
        values[:, 5] = np.column_stack([eta, xi])
        if not derivatives:
            if self.enriched:
                values[:, 6:] = self.enrichment(x, derivatives=False)
            return BasisValues(values=values)

        inv_h = 1.0 / self.diameter
        gradients = np.zeros((q, self.n_modes, 2, 2))
        gradients[:, 2] = [[0.0, inv_h], [-inv_h, 0.0]]
        gradients[:, 3] = [[inv_h, 0.0], [0.0, 0.0]]
        gradients[:, 4] = [[0.0, 0.0], [0.0, inv_h]]
        gradients[:, 5] = [[0.0, inv_h], [inv_h, 0.0]]
        if self.enriched:
            values[:, 6:], gradients[:, 6:] = self.enrichment(x, derivatives=True)

        stresses = stress_from_gradient(self.material, gradients)
        stresses[:, :3] = 0.0
        return BasisValues(values=values, gradients=gradients, stresses=stresses)


def eval_extended_basis(
    geom: ElementGeometry,
    mat: Material,
    crack: Optional[Crack],
    h: float,
    x: np.ndarray,
    branch: int = 0,
    enriched: bool = True,
    derivatives: bool = True,
) -> BasisValues:
    """Evaluate the (extended) basis of a polygon at points x."""
    return ExtendedBasis.for_geometry(geom, mat, crack, h, branch, enriched).evaluate(x, derivatives)
