#!/usr/bin/env python3
"""
Global System - Assembly, boundary conditions, solve and energy

The element kernels of a Discretization are scattered into one sparse
stiffness matrix. Essential conditions are imposed by eliminating the
constrained DOFs (with the matching right-hand-side correction, so the
reduced matrix stays symmetric); natural conditions are integrated along
tagged boundary edges against the standard and enriched traces.
"""

import time
from dataclasses import dataclass, field as dataclass_field, replace
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from ..core.constants import Tolerances
from ..core.crack import branch_cut_crossings
from ..core.mesh import PolygonalMesh
from ..core.quadrature import edge_quadrature, gauss_rule
from ..physics.basis import N_EXTENDED_MODES, ExtendedBasis
from ..utils.errors import InvalidArgumentError, SolverError
from ..utils.logging import get_logger
from ..vem.cells import EdgeKind
from ..vem.element_kernel import ElementKernelResult
from .problem import Discretization

logger = get_logger(__name__)

# (points (q, 2), branch) -> values (q, 2)
FieldFunction = Callable[[np.ndarray, int], np.ndarray]
# points (q, 2) -> traction (q, 2)
TractionFunction = Callable[[np.ndarray], np.ndarray]


@dataclass
class EssentialBC:
    """
    Prescribed displacement on the boundary edges carrying ``tags``.

    ``value`` receives vertex coordinates and the angular branch of the
    cell they are seen from; None means zero. ``components`` selects the
    constrained directions. ``enrichment_split`` gives the prescribed
    mode-I/mode-II multipliers of enriched boundary nodes; the standard
    DOFs then receive the remainder of the field.
    """

    tags: Tuple[str, ...]
    value: Optional[FieldFunction] = None
    components: Tuple[bool, bool] = (True, True)
    enrichment_split: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        self.tags = tuple([self.tags] if isinstance(self.tags, str) else self.tags)
        self.components = tuple(bool(c) for c in self.components)
        if len(self.components) != 2 or not any(self.components):
            raise InvalidArgumentError(f"Essential BC must constrain at least one component, got {self.components}")

    @property
    def full(self) -> bool:
        return all(self.components)

    def evaluate(self, x: np.ndarray, branch: int) -> np.ndarray:
        x = np.atleast_2d(x)
        if self.value is None:
            return np.zeros_like(x)
        return np.asarray(self.value(x, branch), dtype=float).reshape(len(x), 2)


@dataclass
class NaturalBC:
    """Prescribed traction on the boundary edges carrying ``tags``."""

    tags: Tuple[str, ...]
    traction: TractionFunction

    def __post_init__(self):
        self.tags = tuple([self.tags] if isinstance(self.tags, str) else self.tags)


@dataclass
class PointConstraint:
    """Fixes one standard component of one node."""

    node: int
    component: int
    value: float = 0.0

    def __post_init__(self):
        if self.component not in (0, 1):
            raise InvalidArgumentError(f"Component must be 0 or 1, got {self.component}")


@dataclass
class BoundaryConditions:
    """Essential, natural and point conditions of one problem."""

    essential: List[EssentialBC] = dataclass_field(default_factory=list)
    natural: List[NaturalBC] = dataclass_field(default_factory=list)
    points: List[PointConstraint] = dataclass_field(default_factory=list)

    def validate(self, mesh: PolygonalMesh) -> None:
        """
        Check the conditions against a mesh.

        Raises:
            InvalidArgumentError: If a tag is both essential and natural, or a
                point constraint names a missing node.
        """
        essential_tags = {t for bc in self.essential for t in bc.tags}
        natural_tags = {t for bc in self.natural for t in bc.tags}
        overlap = essential_tags & natural_tags
        if overlap:
            raise InvalidArgumentError(f"Edges tagged {sorted(overlap)} carry both essential and natural conditions")

        known = {b.tag for b in mesh.boundary_edges}
        missing = (essential_tags | natural_tags) - known
        if missing:
            logger.warning(f"Boundary tags {sorted(missing)} match no mesh edge")

        for pc in self.points:
            if not 0 <= pc.node < mesh.n_nodes:
                raise InvalidArgumentError(f"Point constraint on missing node {pc.node}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "essential": [{"tags": list(bc.tags), "components": list(bc.components)} for bc in self.essential],
            "natural": [list(bc.tags) for bc in self.natural],
            "points": [{"node": p.node, "component": p.component, "value": p.value} for p in self.points],
        }


@dataclass
class ConstrainedSystem:
    """Reduced system on the free DOFs plus what is needed to expand it."""

    K: sparse.csr_matrix
    f: np.ndarray
    free: np.ndarray
    fixed: np.ndarray
    fixed_values: np.ndarray
    K_ff: sparse.csc_matrix
    f_f: np.ndarray

    @property
    def n_dofs(self) -> int:
        return len(self.f)

    def expand(self, u_free: np.ndarray) -> np.ndarray:
        u = np.zeros(self.n_dofs)
        u[self.free] = u_free
        u[self.fixed] = self.fixed_values
        return u


@dataclass
class SolutionField:
    """
    Global DOF vector of a solved problem.

    ``reactions`` is ``K u - f`` restricted to the constrained DOFs.
    """

    disc: Discretization
    u: np.ndarray
    reactions: np.ndarray
    fixed: np.ndarray
    residual: float
    stats: Dict[str, Any] = dataclass_field(default_factory=dict)

    def cells(self) -> List[Tuple[ElementKernelResult, np.ndarray]]:
        """(cell kernel, local DOF values) of every integration cell."""
        return [(kernel, self.u[dofs]) for kernel, dofs in self.disc.cells()]

    def projected_coefficients(self) -> List[np.ndarray]:
        """Basis coefficients of the projected solution, per integration cell."""
        return [kernel.project(values) for kernel, values in self.cells()]

    def nodal_displacements(self) -> np.ndarray:
        """
        Displacement (n_nodes, 2) at every node from its primary copy.

        Enriched nodes add the enrichment value times their mode DOFs.
        """
        disc = self.disc
        dofmap = disc.dofmap
        out = self.u[dofmap.standard].copy()
        enriched_nodes = np.flatnonzero(dofmap.is_enriched)
        if len(enriched_nodes) == 0:
            return out

        for branch in (1, -1):
            nodes = enriched_nodes[dofmap.node_side[enriched_nodes] == branch]
            if len(nodes) == 0:
                continue
            basis = ExtendedBasis(
                centroid=disc.crack.tip,
                diameter=1.0,
                material=disc.material,
                crack=disc.crack,
                h=disc.h,
                branch=branch,
                n_modes=N_EXTENDED_MODES,
            )
            values = basis.enrichment(disc.mesh.vertices[nodes], derivatives=False)
            amplitudes = self.u[dofmap.enriched[nodes]]
            out[nodes] += np.einsum("qm,qmc->qc", amplitudes, values)
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_dofs": len(self.u),
            "n_fixed": len(self.fixed),
            "residual": self.residual,
            **self.stats,
        }


def assemble(disc: Discretization, consistency_only: bool = False) -> sparse.csr_matrix:
    """
    Scatter-add element matrices into the global stiffness.

    Entries are collected in element order, so repeated runs give identical
    matrices.

    Args:
        disc: Discretization.
        consistency_only: Assemble K_c only (no stabilization).

    Returns:
        Symmetric CSR matrix of size n_dofs.
    """
    rows, cols, vals = [], [], []
    for kernel, dofs in disc.cells():
        K_e = kernel.K_c if consistency_only else kernel.stiffness
        K_e = 0.5 * (K_e + K_e.T)
        rows.append(np.repeat(dofs, len(dofs)))
        cols.append(np.tile(dofs, len(dofs)))
        vals.append(K_e.ravel())

    n = disc.n_dofs
    if not rows:
        return sparse.csr_matrix((n, n))
    K = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()
    logger.debug(f"Assembled global stiffness: {n} unknowns, {K.nnz} nonzeros")
    return K


def _enriched_rank(kernel: ElementKernelResult) -> Dict[int, int]:
    return {int(j): r for r, j in enumerate(kernel.layout.enriched_vertices)}


def _edge_basis(kernel: ElementKernelResult, branch: int) -> ExtendedBasis:
    basis = kernel.basis
    if basis.branch == branch:
        return basis
    return replace(basis, branch=branch)


def load_vector(disc: Discretization, bcs: BoundaryConditions) -> np.ndarray:
    """
    Consistent nodal loads of the natural boundary conditions.

    The traction is integrated along every cell edge lying on a tagged
    boundary edge, against the hat traces (standard DOFs) and the hat traces
    times the enrichment (enriched DOFs).
    """
    f = np.zeros(disc.n_dofs)
    if not bcs.natural:
        return f

    settings = disc.settings.kernel
    rule = gauss_rule(settings.edge_order)
    singular_point = disc.crack.tip if disc.crack is not None else None

    for kernel, dofs in disc.cells():
        cell = kernel.cell
        layout = kernel.layout
        n = layout.n_vertices
        f_local = np.zeros(layout.n_full)
        touched = False
        for edge in cell.edges:
            if edge.kind is not EdgeKind.BOUNDARY or edge.parent_edge < 0:
                continue
            tag = disc.mesh.edge_tag(cell.element, edge.parent_edge)
            for bc in bcs.natural:
                if tag not in bc.tags:
                    continue
                breaks = None
                if layout.extended:
                    breaks = branch_cut_crossings(disc.crack, edge.start, edge.end, edge.branch)
                points, weights, s = edge_quadrature(
                    edge.start, edge.end, rule, singular_point, settings.grading, breaks
                )
                traction = np.asarray(bc.traction(points), dtype=float).reshape(len(points), 2)
                hats = edge.hats(points, s)
                f_local[0 : 2 * n : 2] += np.einsum("q,q,qn->n", weights, traction[:, 0], hats)
                f_local[1 : 2 * n : 2] += np.einsum("q,q,qn->n", weights, traction[:, 1], hats)
                if layout.extended:
                    enrichment = _edge_basis(kernel, edge.branch).enrichment(points, derivatives=False)
                    work = np.einsum("qc,qmc->qm", traction, enrichment)
                    f_local[2 * n : 3 * n] += np.einsum("q,q,qn->n", weights, work[:, 0], hats)
                    f_local[3 * n : 4 * n] += np.einsum("q,q,qn->n", weights, work[:, 1], hats)
                touched = True
        if touched:
            np.add.at(f, dofs, f_local[layout.kept])
    return f


def _assign(constraints: Dict[int, float], dof: int, value: float) -> None:
    previous = constraints.setdefault(int(dof), float(value))
    if abs(previous - value) > 1e-10 * max(1.0, abs(previous)):
        logger.debug(f"DOF {dof} constrained twice ({previous:.6e} kept, {value:.6e} ignored)")


def essential_constraints(disc: Discretization, bcs: BoundaryConditions) -> Dict[int, float]:
    """
    Prescribed values of constrained DOFs.

    Every cell edge lying on a tagged parent edge constrains the DOF copies
    that cell uses for the vertices whose hats do not vanish on it, with the
    field evaluated on the cell's branch.

    Returns:
        Mapping global DOF id -> value; the first assignment wins.
    """
    constraints: Dict[int, float] = {}
    for kernel, dofs in disc.cells():
        cell = kernel.cell
        layout = kernel.layout
        n = layout.n_vertices
        k = layout.k
        ranks = _enriched_rank(kernel)
        for edge in cell.edges:
            if edge.kind is not EdgeKind.BOUNDARY or edge.parent_edge < 0:
                continue
            tag = disc.mesh.edge_tag(cell.element, edge.parent_edge)
            for bc in bcs.essential:
                if tag not in bc.tags:
                    continue
                support = np.flatnonzero((np.abs(edge.hat_start) > 1e-14) | (np.abs(edge.hat_end) > 1e-14))
                for j in support:
                    x = cell.parent_coords[j]
                    g = bc.evaluate(x, cell.branch)[0]
                    if j in ranks and bc.full:
                        r = ranks[j]
                        if bc.enrichment_split is not None:
                            c = np.asarray(bc.enrichment_split, dtype=float)
                            enrichment = kernel.basis.enrichment(x, derivatives=False)[0]
                            g = g - c[0] * enrichment[0] - c[1] * enrichment[1]
                        else:
                            c = np.zeros(2)
                        _assign(constraints, dofs[2 * n + r], c[0])
                        _assign(constraints, dofs[2 * n + k + r], c[1])
                    for comp in (0, 1):
                        if bc.components[comp]:
                            _assign(constraints, dofs[2 * j + comp], g[comp])

    for pc in bcs.points:
        _assign(constraints, disc.dofmap.standard[pc.node, pc.component], pc.value)
    return constraints


def apply_bcs(
    K: sparse.spmatrix,
    f: np.ndarray,
    bcs: BoundaryConditions,
    disc: Discretization,
) -> ConstrainedSystem:
    """
    Impose boundary conditions by elimination.

    Natural loads are added to ``f``; the constrained DOFs are removed and
    their known values moved to the right-hand side.

    Args:
        K: Global stiffness.
        f: Body load vector (zeros in this solver).
        bcs: Boundary conditions.
        disc: Discretization providing the DOF map and mesh.

    Returns:
        ConstrainedSystem on the free DOFs.
    """
    bcs.validate(disc.mesh)
    K = sparse.csr_matrix(K)
    f = np.asarray(f, dtype=float) + load_vector(disc, bcs)

    constraints = essential_constraints(disc, bcs)
    fixed = np.array(sorted(constraints), dtype=int)
    values = np.array([constraints[d] for d in fixed], dtype=float)
    mask = np.ones(disc.n_dofs, dtype=bool)
    mask[fixed] = False
    free = np.flatnonzero(mask)

    K_ff = K[free][:, free].tocsc()
    f_f = f[free] - K[free][:, fixed] @ values
    logger.info(f"Constrained system: {len(free)} free, {len(fixed)} fixed DOFs")
    return ConstrainedSystem(K=K, f=f, free=free, fixed=fixed, fixed_values=values, K_ff=K_ff, f_f=f_f)


_RIGID_HINT = "check that the essential conditions remove all rigid-body motions"


def solve(system: ConstrainedSystem, disc: Optional[Discretization] = None) -> SolutionField:
    """
    Solve the reduced system by sparse LU factorization.

    Raises:
        SolverError: If the matrix is singular or the residual is too large.
    """
    start = time.perf_counter()
    n_free = len(system.free)
    if n_free == 0:
        u_free = np.zeros(0)
        residual = 0.0
    else:
        try:
            lu = splu(system.K_ff)
        except RuntimeError as e:
            raise SolverError(f"Global stiffness is singular: {e}", hint=_RIGID_HINT)

        pivots = np.abs(lu.U.diagonal())
        if pivots.min() <= 1e-13 * pivots.max():
            n_small = int(np.sum(pivots <= 1e-13 * pivots.max()))
            raise SolverError(f"Global stiffness has {n_small} vanishing pivots", hint=_RIGID_HINT)

        u_free = lu.solve(system.f_f)
        if not np.all(np.isfinite(u_free)):
            raise SolverError("Solve produced non-finite values", hint=_RIGID_HINT)

        norm_f = float(np.linalg.norm(system.f_f))
        residual = float(np.linalg.norm(system.K_ff @ u_free - system.f_f))
        if norm_f > 0.0:
            residual /= norm_f
        if residual > Tolerances.RESIDUAL_LIMIT:
            raise SolverError(f"Relative residual {residual:.2e} exceeds {Tolerances.RESIDUAL_LIMIT:.0e}")
        if residual > Tolerances.RESIDUAL_WARNING:
            logger.warning(f"Relative residual {residual:.2e} above {Tolerances.RESIDUAL_WARNING:.0e}")

    u = system.expand(u_free)
    reactions = (system.K @ u - system.f)[system.fixed]
    elapsed = time.perf_counter() - start
    logger.info(f"Solved {n_free} unknowns in {elapsed:.3f}s (residual {residual:.2e})")
    return SolutionField(
        disc=disc,
        u=u,
        reactions=reactions,
        fixed=system.fixed,
        residual=residual,
        stats={"n_free": n_free, "nnz": int(system.K_ff.nnz), "solve_time": elapsed},
    )


def solve_problem(disc: Discretization, bcs: BoundaryConditions) -> SolutionField:
    """Assemble, constrain and solve in one call."""
    K = assemble(disc)
    system = apply_bcs(K, np.zeros(disc.n_dofs), bcs, disc)
    return solve(system, disc)


def strain_energy(solution: SolutionField) -> float:
    """Half the consistency energy of the projected solution, summed over cells."""
    energy = 0.0
    for kernel, values in solution.cells():
        energy += 0.5 * float(values @ kernel.K_c @ values)
    return energy


def interpolate(
    disc: Discretization,
    value: FieldFunction,
    enrichment_split: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """
    DOF vector of a known field.

    Standard DOFs take the nodal values (seen from each cell's branch);
    with ``enrichment_split`` the enriched DOFs take the given multipliers
    and the standard DOFs of enriched nodes the remainder.
    """
    u = np.zeros(disc.n_dofs)
    assigned = np.zeros(disc.n_dofs, dtype=bool)
    c = np.asarray(enrichment_split, dtype=float) if enrichment_split is not None else np.zeros(2)

    for kernel, dofs in disc.cells():
        cell = kernel.cell
        layout = kernel.layout
        n, k = layout.n_vertices, layout.k
        ranks = _enriched_rank(kernel)
        g = np.asarray(value(cell.parent_coords, cell.branch), dtype=float).reshape(n, 2)
        local = np.zeros(layout.n_dof)
        for j in range(n):
            gj = g[j]
            if j in ranks:
                r = ranks[j]
                if enrichment_split is not None:
                    enrichment = kernel.basis.enrichment(cell.parent_coords[j], derivatives=False)[0]
                    gj = gj - c[0] * enrichment[0] - c[1] * enrichment[1]
                local[2 * n + r] = c[0]
                local[2 * n + k + r] = c[1]
            local[2 * j : 2 * j + 2] = gj
        new = ~assigned[dofs]
        u[dofs[new]] = local[new]
        assigned[dofs] = True
    return u


def reaction_resultant(solution: SolutionField, nodes: Iterable[int]) -> np.ndarray:
    """Sum of the standard reactions (x, y) at the given nodes."""
    dofmap = solution.disc.dofmap
    lookup = {int(d): r for d, r in zip(solution.fixed, solution.reactions)}
    total = np.zeros(2)
    for node in nodes:
        for comp in (0, 1):
            for table in (dofmap.standard, dofmap.ghost_standard):
                dof = int(table[node, comp])
                if dof >= 0:
                    total[comp] += lookup.get(dof, 0.0)
    return total
