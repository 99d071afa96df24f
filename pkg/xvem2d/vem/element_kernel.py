#!/usr/bin/env python3
"""
Element Kernel - Projector and stiffness of one (extended) virtual element

This module implements the per-element recipe:

1. D: degrees of freedom of each basis field m_alpha;
2. G~, B~: boundary integrals of sigma(m_beta) n against m_alpha and
   against the traces of the virtual basis functions;
3. rank repair of the first three rows with average translations and
   average rotation;
4. the projector Pi = G^-1 B and the consistency stiffness Pi^T G~ Pi;
5. dofi-dofi or D-recipe stabilization built on R = J - J D Pi, with
   total-displacement rows at blending vertices;
6. restriction of the 4N-dof extended kernel to the enriched vertices.

Elements without enriched vertices use the six-field standard basis and
2N degrees of freedom.
"""

from dataclasses import dataclass, field as dataclass_field, replace
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from ..core.constants import Defaults, Tolerances
from ..core.crack import Crack, branch_cut_crossings
from ..core.quadrature import GradingOptions, edge_quadrature, gauss_rule
from ..physics.basis import N_EXTENDED_MODES, N_STANDARD_MODES, ExtendedBasis
from ..physics.material import Material, elasticity_tensor
from ..utils.errors import IntegrationError, InvalidArgumentError, KernelError
from ..utils.logging import get_logger
from .cells import IntegrationCell

logger = get_logger(__name__)


class StabilizationScheme(Enum):
    """Stabilization recipe."""

    DOFI = "dofi"
    DRECIPE = "drecipe"


@dataclass(frozen=True)
class KernelSettings:
    """Numerical settings shared by all element kernels."""

    edge_order: int = Defaults.EDGE_ORDER
    grading: GradingOptions = dataclass_field(default_factory=GradingOptions)
    stabilization: StabilizationScheme = StabilizationScheme.DOFI
    alpha: float = Defaults.ALPHA

    def __post_init__(self):
        object.__setattr__(self, "stabilization", StabilizationScheme(self.stabilization))
        if not self.alpha > 0.0:
            raise InvalidArgumentError(f"Stabilization parameter alpha must be positive, got {self.alpha}")
        if self.edge_order < 1:
            raise InvalidArgumentError(f"Edge quadrature order must be positive, got {self.edge_order}")


@dataclass(frozen=True)
class ElementDofLayout:
    """
    Local DOF ordering of an element with N vertices.

    The full extended ordering is x/y interleaved standard DOFs (2N), then
    one mode-I DOF per vertex (N), then one mode-II DOF per vertex (N).
    The kept DOFs drop the enriched slots of non-enriched vertices.
    """

    n_vertices: int
    enriched: Tuple[bool, ...]

    @classmethod
    def create(cls, n_vertices: int, enriched: Optional[Sequence[bool]] = None) -> "ElementDofLayout":
        if enriched is None:
            enriched = (False,) * n_vertices
        enriched = tuple(bool(v) for v in enriched)
        if len(enriched) != n_vertices:
            raise InvalidArgumentError(f"Enrichment mask has {len(enriched)} entries for {n_vertices} vertices")
        return cls(n_vertices=n_vertices, enriched=enriched)

    @property
    def k(self) -> int:
        return sum(self.enriched)

    @property
    def extended(self) -> bool:
        return self.k > 0

    @property
    def n_modes(self) -> int:
        return N_EXTENDED_MODES if self.extended else N_STANDARD_MODES

    @property
    def n_full(self) -> int:
        return 4 * self.n_vertices if self.extended else 2 * self.n_vertices

    @property
    def n_dof(self) -> int:
        return 2 * self.n_vertices + 2 * self.k

    @property
    def enriched_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.enriched)

    @property
    def kept(self) -> np.ndarray:
        n = self.n_vertices
        standard = np.arange(2 * n)
        if not self.extended:
            return standard
        local = self.enriched_vertices
        return np.concatenate([standard, 2 * n + local, 3 * n + local])


def _check_finite(values: np.ndarray, points: np.ndarray, cell: IntegrationCell) -> None:
    finite = np.isfinite(values.reshape(len(points), -1)).all(axis=1)
    if not finite.all():
        bad = points[np.flatnonzero(~finite)[0]]
        raise IntegrationError(f"{cell.label}: non-finite integrand at {bad.tolist()}")


def compute_D(layout: ElementDofLayout, cell: IntegrationCell, basis: ExtendedBasis) -> np.ndarray:
    """
    DOF matrix: column alpha holds the DOFs of m_alpha.

    Polynomial fields have their vertex values in the standard slots. An
    enrichment field interpolated exactly has zero standard DOFs and a unit
    DOF in every slot of its own mode.
    """
    n = layout.n_vertices
    values = basis.evaluate(cell.parent_coords, derivatives=False).values
    D = np.zeros((layout.n_full, layout.n_modes))
    D[0 : 2 * n : 2, :N_STANDARD_MODES] = values[:, :N_STANDARD_MODES, 0]
    D[1 : 2 * n : 2, :N_STANDARD_MODES] = values[:, :N_STANDARD_MODES, 1]
    if layout.extended:
        D[2 * n : 3 * n, 6] = 1.0
        D[3 * n : 4 * n, 7] = 1.0
    return D


def compute_GB_boundary(
    layout: ElementDofLayout,
    cell: IntegrationCell,
    basis: ExtendedBasis,
    settings: KernelSettings,
    singular_point: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Boundary integrals G~ (modes x modes) and B~ (modes x n_full).

    (G~)_ba = sum over edges of the integral of (sigma(m_b) n) . m_a and
    (B~)_bi the same against the trace of the i-th virtual basis function.
    Edges crossing the angular cut of their branch are split there.
    """
    n = layout.n_vertices
    n_modes = layout.n_modes
    rule = gauss_rule(settings.edge_order)
    G = np.zeros((n_modes, n_modes))
    B = np.zeros((n_modes, layout.n_full))
    branch_bases: Dict[int, ExtendedBasis] = {}

    for edge in cell.edges:
        breaks = branch_cut_crossings(basis.crack, edge.start, edge.end, edge.branch) if layout.extended else None
        points, weights, s = edge_quadrature(edge.start, edge.end, rule, singular_point, settings.grading, breaks)
        edge_basis = branch_bases.setdefault(edge.branch, replace(basis, branch=edge.branch))
        values = edge_basis.evaluate(points)
        traction = np.einsum("qmij,j->qmi", values.stresses, edge.normal)
        _check_finite(traction, points, cell)

        G += np.einsum("q,qbi,qai->ba", weights, traction, values.values)
        hats = edge.hats(points, s)
        B[:, 0 : 2 * n : 2] += np.einsum("q,qb,qn->bn", weights, traction[:, :, 0], hats)
        B[:, 1 : 2 * n : 2] += np.einsum("q,qb,qn->bn", weights, traction[:, :, 1], hats)
        if layout.extended:
            work = np.einsum("qbi,qmi->qbm", traction, values.values[:, 6:8])
            B[:, 2 * n : 3 * n] += np.einsum("q,qb,qn->bn", weights, work[:, :, 0], hats)
            B[:, 3 * n : 4 * n] += np.einsum("q,qb,qn->bn", weights, work[:, :, 1], hats)

    return G, B


def vertex_values(layout: ElementDofLayout, cell: IntegrationCell, basis: ExtendedBasis) -> np.ndarray:
    """Values (k, n_full, 2) of the virtual basis functions at the cell vertices."""
    n = layout.n_vertices
    hats = cell.vertex_hats
    V = np.zeros((len(cell.coords), layout.n_full, 2))
    V[:, 0 : 2 * n : 2, 0] = hats
    V[:, 1 : 2 * n : 2, 1] = hats
    if layout.extended:
        enrichment = basis.enrichment(cell.coords, derivatives=False)
        V[:, 2 * n : 3 * n, :] = hats[:, :, None] * enrichment[:, None, 0, :]
        V[:, 3 * n : 4 * n, :] = hats[:, :, None] * enrichment[:, None, 1, :]
    return V


def repair_rank(
    G_tilde: np.ndarray,
    B_tilde: np.ndarray,
    layout: ElementDofLayout,
    cell: IntegrationCell,
    basis: ExtendedBasis,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Replace the three zero rows by average translations and rotation.

    Rows 0 and 1 become vertex averages of the x and y components, row 2
    the vertex average of r . v with r = (eta, -xi).
    """
    k = len(cell.coords)
    modes = basis.evaluate(cell.coords, derivatives=False).values
    xi, eta = ((cell.coords - basis.centroid) / basis.diameter).T
    r = np.column_stack([eta, -xi])

    G = G_tilde.copy()
    G[0] = modes[:, :, 0].mean(axis=0)
    G[1] = modes[:, :, 1].mean(axis=0)
    G[2] = np.einsum("ki,kmi->m", r, modes) / k

    V = vertex_values(layout, cell, basis)
    B = B_tilde.copy()
    B[0] = V[:, :, 0].mean(axis=0)
    B[1] = V[:, :, 1].mean(axis=0)
    B[2] = np.einsum("ki,kni->n", r, V) / k
    return G, B


def compute_projector(
    G: np.ndarray, B: np.ndarray, element: Optional[int] = None, part: Optional[str] = None
) -> Tuple[np.ndarray, float]:
    """
    Solve G Pi = B.

    Returns:
        (Pi, condition number of G)

    Raises:
        KernelError: If G is singular or too badly conditioned.
    """
    cond = float(np.linalg.cond(G))
    if not np.isfinite(cond) or cond > Tolerances.CONDITION_LIMIT:
        raise KernelError(f"projection matrix is singular (condition number {cond:.3e})", element, part)
    if cond > Tolerances.CONDITION_WARNING:
        logger.warning(f"Element {element} ({part or 'whole'}): G condition number {cond:.3e}")
    else:
        logger.debug(f"Element {element} ({part or 'whole'}): G condition number {cond:.3e}")
    Pi = lu_solve(lu_factor(G), B)
    return Pi, cond


def consistency_stiffness(Pi: np.ndarray, G_tilde: np.ndarray) -> np.ndarray:
    """K_c = Pi^T G~ Pi, symmetrized."""
    K = Pi.T @ G_tilde @ Pi
    return 0.5 * (K + K.T)


def evaluation_matrix(layout: ElementDofLayout, cell: IntegrationCell, basis: ExtendedBasis) -> np.ndarray:
    """
    Matrix J of nodal evaluations, one row per stabilized vertex quantity.

    Without enrichment J is the identity. Otherwise the first 2N rows give
    the displacement at each vertex: the standard DOFs alone at enriched
    vertices, and the total displacement (standard DOFs plus u_I, u_II
    times the enriched slots) at the other vertices. Two more rows per
    enriched vertex give the x and y components of its enriched
    contribution a_i u_I + b_i u_II. At blending vertices only the total
    displacement is penalized.

    Returns:
        J of shape (2N + 2k, n_full).
    """
    if not layout.extended:
        return np.eye(layout.n_full)
    n = layout.n_vertices
    enriched = layout.enriched_vertices
    enrichment = basis.enrichment(cell.parent_coords, derivatives=False)
    J = np.zeros((2 * n + 2 * len(enriched), layout.n_full))
    J[: 2 * n, : 2 * n] = np.eye(2 * n)
    for i in np.flatnonzero(~np.asarray(layout.enriched)):
        J[2 * i : 2 * i + 2, [2 * n + i, 3 * n + i]] = enrichment[i].T
    for rank, i in enumerate(enriched):
        rows = 2 * n + 2 * rank + np.arange(2)
        J[np.ix_(rows, [2 * n + i, 3 * n + i])] = enrichment[i].T
    return J


def evaluation_dofs(layout: ElementDofLayout) -> np.ndarray:
    """Local (full) DOF attached to each row of the evaluation matrix."""
    n = layout.n_vertices
    if not layout.extended:
        return np.arange(layout.n_full)
    enriched = layout.enriched_vertices
    paired = np.column_stack([2 * n + enriched, 3 * n + enriched]).ravel()
    return np.concatenate([np.arange(2 * n), paired])


def dof_vertices(layout: ElementDofLayout) -> np.ndarray:
    """Vertex owning each full local DOF."""
    n = layout.n_vertices
    return np.concatenate([np.repeat(np.arange(n), 2), np.arange(n), np.arange(n)])[: layout.n_full]


def stabilization(
    K_c: np.ndarray,
    D: np.ndarray,
    Pi: np.ndarray,
    J: np.ndarray,
    layout: ElementDofLayout,
    cell: IntegrationCell,
    material: Material,
    scheme: StabilizationScheme = StabilizationScheme.DOFI,
    alpha: float = Defaults.ALPHA,
) -> Tuple[np.ndarray, float]:
    """
    Stabilization stiffness K_s = R^T S R with R = J - (J D) Pi.

    dofi-dofi uses S = tau I with tau = alpha trace(K_c) / n_full. The
    D-recipe uses S_jj = max(trace(C) / 3 h_j, (K_c)_dd) for row j, where
    d is the DOF attached to the row and h_j the mean length of the parent
    edges at its vertex; alpha plays no role there.

    Returns:
        (K_s, tau); tau is the mean diagonal of S for the D-recipe.

    Raises:
        InvalidArgumentError: For alpha <= 0.
    """
    if not alpha > 0.0:
        raise InvalidArgumentError(f"Stabilization parameter alpha must be positive, got {alpha}")
    scheme = StabilizationScheme(scheme)
    R = J - (J @ D) @ Pi

    if scheme is StabilizationScheme.DOFI:
        tau = alpha * float(np.trace(K_c)) / layout.n_full
        K_s = tau * (R.T @ R)
    else:
        row_dofs = evaluation_dofs(layout)
        row_h = cell.node_lengths[dof_vertices(layout)[row_dofs]]
        scale = np.trace(elasticity_tensor(material)) / 3.0
        S = np.maximum(scale * row_h, np.diag(K_c)[row_dofs])
        K_s = R.T @ (S[:, None] * R)
        tau = float(S.mean())
    return 0.5 * (K_s + K_s.T), tau


def restrict_partial(K_full: np.ndarray, layout: ElementDofLayout) -> np.ndarray:
    """Rows and columns of the kept DOFs (enriched slots of enriched vertices only)."""
    kept = layout.kept
    return K_full[np.ix_(kept, kept)]


@dataclass
class ElementKernelResult:
    """Matrices of one integration cell; K_c and K_s are on the kept DOFs."""

    element: int
    part: Optional[str]
    layout: ElementDofLayout
    basis: ExtendedBasis
    D: np.ndarray
    G_tilde: np.ndarray
    B_tilde: np.ndarray
    G: np.ndarray
    B: np.ndarray
    Pi: np.ndarray
    J: np.ndarray
    K_c: np.ndarray
    K_s: np.ndarray
    tau: float
    condition: float
    cell: Optional[IntegrationCell] = None

    @property
    def D_hat(self) -> np.ndarray:
        return self.J @ self.D

    @property
    def Pi_kept(self) -> np.ndarray:
        return self.Pi[:, self.layout.kept]

    @property
    def stiffness(self) -> np.ndarray:
        return self.K_c + self.K_s

    @property
    def n_dof(self) -> int:
        return self.layout.n_dof

    def project(self, dofs: np.ndarray) -> np.ndarray:
        """Basis coefficients of the projection of a local (kept) DOF vector."""
        return self.Pi_kept @ np.asarray(dofs, dtype=float)


def compute_cell_kernel(
    cell: IntegrationCell,
    material: Material,
    crack: Optional[Crack],
    h: float,
    enriched: Optional[Sequence[bool]] = None,
    settings: Optional[KernelSettings] = None,
) -> ElementKernelResult:
    """
    Run the full element recipe on one integration cell.

    Args:
        cell: Cell geometry and hat traces.
        material: Material law.
        crack: Crack for the enrichment fields (None without enrichment).
        h: Global mesh size scaling the enrichment.
        enriched: Per parent vertex enrichment flags.
        settings: Quadrature and stabilization settings.

    Returns:
        ElementKernelResult of the cell.
    """
    settings = settings or KernelSettings()
    layout = ElementDofLayout.create(cell.n_parent, enriched)
    if layout.extended and crack is None:
        raise InvalidArgumentError(f"{cell.label}: enriched vertices require a crack")

    basis = ExtendedBasis(
        centroid=cell.geometry.centroid,
        diameter=cell.geometry.diameter,
        material=material,
        crack=crack,
        h=h,
        branch=cell.branch,
        n_modes=layout.n_modes,
    )
    singular_point = crack.tip if crack is not None else None

    D = compute_D(layout, cell, basis)
    G_tilde, B_tilde = compute_GB_boundary(layout, cell, basis, settings, singular_point)
    G, B = repair_rank(G_tilde, B_tilde, layout, cell, basis)
    Pi, cond = compute_projector(G, B, cell.element, cell.part)
    K_c_full = consistency_stiffness(Pi, G_tilde)
    J = evaluation_matrix(layout, cell, basis)
    K_s_full, tau = stabilization(
        K_c_full, D, Pi, J, layout, cell, material, settings.stabilization, settings.alpha
    )

    return ElementKernelResult(
        element=cell.element,
        part=cell.part,
        layout=layout,
        basis=basis,
        D=D,
        G_tilde=G_tilde,
        B_tilde=B_tilde,
        G=G,
        B=B,
        Pi=Pi,
        J=J,
        K_c=restrict_partial(K_c_full, layout),
        K_s=restrict_partial(K_s_full, layout),
        tau=tau,
        condition=cond,
        cell=cell,
    )
