#!/usr/bin/env python3
"""
Stress Intensity Factors - Interaction integral in boundary form

The domain form of the interaction integral is turned into a sum of edge
integrals over a ring of elements around the tip: inside each integration
cell the projected solution and the auxiliary near-tip field are both
equilibrated, so only the boundary terms weighted by the ring function w
remain. w is 1 at nodes closer to the tip than r_d, 0 elsewhere, and is
interpolated with the element hat traces along every cell edge.
"""

from dataclasses import dataclass, field as dataclass_field, replace
from typing import Any, Callable, Dict, Iterable, List, Tuple

import numpy as np

from ..core.constants import Defaults, Tolerances
from ..core.crack import Crack, branch_cut_crossings
from ..core.mesh import PolygonalMesh
from ..core.quadrature import edge_quadrature, gauss_rule
from ..physics.material import (
    CrackMode,
    Material,
    effective_modulus,
    strain_from_gradient,
    stress_from_gradient,
    tip_fields,
    williams_fields,
    williams_scale,
)
from ..solver.problem import Discretization
from ..solver.system import SolutionField
from ..utils.errors import IntegrationError, InvalidArgumentError
from ..utils.logging import get_logger
from ..vem.cells import EdgeKind
from ..vem.element_kernel import ElementKernelResult

logger = get_logger(__name__)

# (points (q, 2), branch) -> displacement gradient (q, 2, 2), global frame
GradientFunction = Callable[[np.ndarray, int], np.ndarray]


@dataclass
class JDomain:
    """Ring of elements and nodal weights of the interaction integral."""

    radius: float
    tip: np.ndarray
    weights: np.ndarray
    ring: List[int]

    @property
    def n_ring(self) -> int:
        return len(self.ring)

    def to_dict(self) -> Dict[str, Any]:
        return {"radius": self.radius, "n_ring": self.n_ring, "n_inside": int(self.weights.sum())}


@dataclass
class AuxiliaryState:
    """Unit stress-intensity near-tip field of one mode, in the tip frame."""

    mode: CrackMode
    displacement: np.ndarray
    gradient: np.ndarray
    stress: np.ndarray


@dataclass
class SIFResult:
    """Extracted stress intensity factors for one ring."""

    k_i: float
    k_ii: float
    integrals: Tuple[float, float]
    radius: float
    n_ring: int
    imbalance: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "K_I": self.k_i,
            "K_II": self.k_ii,
            "I_I": self.integrals[0],
            "I_II": self.integrals[1],
            "radius": self.radius,
            "n_ring": self.n_ring,
            "imbalance": self.imbalance,
        }


@dataclass
class RadiusSweep:
    """SIFs over several ring radii."""

    results: List[SIFResult] = dataclass_field(default_factory=list)

    @property
    def spread(self) -> Tuple[float, float]:
        """Largest relative deviation of K_I and K_II from their mean."""
        spreads = []
        for values in (np.array([r.k_i for r in self.results]), np.array([r.k_ii for r in self.results])):
            mean = float(np.mean(values))
            scale = abs(mean) if mean != 0.0 else 1.0
            spreads.append(float(np.max(np.abs(values - mean))) / scale)
        return spreads[0], spreads[1]

    def to_dict(self) -> Dict[str, Any]:
        spread_i, spread_ii = self.spread
        return {"results": [r.to_dict() for r in self.results], "spread_K_I": spread_i, "spread_K_II": spread_ii}


def build_jdomain(mesh: PolygonalMesh, crack: Crack, r_d: float) -> JDomain:
    """
    Ring of elements crossed by the circle of radius r_d about the tip.

    Raises:
        InvalidArgumentError: If r_d is not positive or no element has both
            inside and outside nodes.
    """
    if not r_d > 0.0:
        raise InvalidArgumentError(f"Ring radius must be positive, got {r_d}")
    distance = np.hypot(*(mesh.vertices - crack.tip).T)
    weights = (distance < r_d).astype(float)
    ring = [e for e, loop in enumerate(mesh.elements) if 0.0 < weights[loop].sum() < len(loop)]
    if not ring:
        raise InvalidArgumentError(f"No element crosses the circle of radius {r_d} about the tip")

    for e in ring:
        loop = mesh.elements[e]
        for k in range(len(loop)):
            tag = mesh.edge_tag(e, k)
            if tag is not None and tag != "crack" and weights[loop[k]] + weights[loop[(k + 1) % len(loop)]] > 0:
                logger.warning(f"Ring of radius {r_d} reaches the domain boundary (element {e}, edge '{tag}')")
                break
    logger.debug(f"J-domain: radius {r_d}, {len(ring)} ring elements, {int(weights.sum())} inside nodes")
    return JDomain(radius=float(r_d), tip=crack.tip.copy(), weights=weights, ring=ring)


def auxiliary_fields(mat: Material, mode, r, theta) -> AuxiliaryState:
    """
    Near-tip field with unit stress intensity factor.

    Raises:
        SingularPointError: If r is zero.
    """
    mode = CrackMode(mode)
    fields = tip_fields(mat, r, theta, mode)
    scale = williams_scale(mat)
    return AuxiliaryState(
        mode=mode,
        displacement=scale * fields.displacement,
        gradient=scale * fields.gradient,
        stress=scale * fields.stress,
    )


def _aux_global(mat: Material, crack: Crack, points: np.ndarray, mode: CrackMode, branch: int):
    k_i, k_ii = (1.0, 0.0) if mode is CrackMode.I else (0.0, 1.0)
    _, grad, stress = williams_fields(mat, crack, points, k_i, k_ii, branch)
    return grad, stress


def _to_tip_frame(R: np.ndarray, tensor: np.ndarray) -> np.ndarray:
    return np.einsum("ai,qab,bj->qij", R, tensor, R)


def _flux(mat: Material, R: np.ndarray, grad_1: np.ndarray, grad_2: np.ndarray, stress_2: np.ndarray) -> np.ndarray:
    """Interaction flux F_j (q, 2) in the tip frame."""
    g1 = _to_tip_frame(R, grad_1)
    g2 = _to_tip_frame(R, grad_2)
    s1 = stress_from_gradient(mat, g1)
    s2 = _to_tip_frame(R, stress_2)
    work = np.einsum("qij,qij->q", s1, strain_from_gradient(g2))
    flux = np.einsum("qij,qi->qj", s1, g2[:, :, 0]) + np.einsum("qij,qi->qj", s2, g1[:, :, 0])
    flux[:, 0] -= work
    return flux


def _ring_integral(
    disc: Discretization,
    jdomain: JDomain,
    gradient: Callable[[ElementKernelResult, np.ndarray, np.ndarray, int], np.ndarray],
    mode: CrackMode,
) -> Tuple[float, float]:
    """
    Sum of the weighted edge fluxes over all cells of the ring.

    Returns:
        (integral, largest non-cancelling contribution of a shared edge)
    """
    crack = disc.crack
    mat = disc.material
    R = crack.rotation
    settings = disc.settings.kernel
    rule = gauss_rule(settings.edge_order)
    ring = set(jdomain.ring)
    shared: Dict[Tuple[int, int], List[float]] = {}
    total = 0.0

    for entry in disc.entries:
        if entry.element not in ring:
            continue
        loop = disc.mesh.elements[entry.element]
        w_nodes = jdomain.weights[loop]
        for kernel, dofs in entry.cells():
            for edge in kernel.cell.edges:
                breaks = branch_cut_crossings(crack, edge.start, edge.end, edge.branch)
                points, weights, s = edge_quadrature(edge.start, edge.end, rule, crack.tip, settings.grading, breaks)
                w = edge.hats(points, s) @ w_nodes
                if not np.any(w):
                    continue
                grad_1 = gradient(kernel, dofs, points, edge.branch)
                grad_2, stress_2 = _aux_global(mat, crack, points, mode, edge.branch)
                flux = _flux(mat, R, grad_1, grad_2, stress_2)
                normal = R.T @ edge.normal
                value = float(np.sum(weights * w * (flux @ normal)))
                if not np.isfinite(value):
                    raise IntegrationError(f"Non-finite interaction flux on element {entry.element}")
                total += value
                if edge.kind is EdgeKind.BOUNDARY and edge.parent_edge >= 0:
                    a = int(loop[edge.parent_edge])
                    b = int(loop[(edge.parent_edge + 1) % len(loop)])
                    shared.setdefault((min(a, b), max(a, b)), []).append(value)

    imbalance = max((abs(sum(v)) for v in shared.values() if len(v) > 1), default=0.0)
    return total, imbalance


def _projected_gradient(solution: SolutionField):
    def gradient(kernel: ElementKernelResult, dofs: np.ndarray, points: np.ndarray, branch: int) -> np.ndarray:
        coefficients = kernel.project(solution.u[dofs])
        basis = kernel.basis if kernel.basis.branch == branch else _with_branch(kernel, branch)
        values = basis.evaluate(points)
        return np.einsum("m,qmij->qij", coefficients, values.gradients)

    return gradient


def _with_branch(kernel: ElementKernelResult, branch: int):
    return replace(kernel.basis, branch=branch)


def _check_imbalance(total: float, imbalance: float, mode: CrackMode) -> None:
    if imbalance > Tolerances.RING_IMBALANCE_WARNING * abs(total):
        logger.warning(
            f"Mode-{mode.value} interaction integral: shared edges leave {imbalance:.3e} uncancelled (|I| = {abs(total):.3e})"
        )


def interaction_integral(solution: SolutionField, jdomain: JDomain, mode) -> float:
    """Interaction integral of the projected solution with the unit auxiliary field of ``mode``."""
    mode = CrackMode(mode)
    total, imbalance = _ring_integral(solution.disc, jdomain, _projected_gradient(solution), mode)
    _check_imbalance(total, imbalance, mode)
    return total


def field_interaction_integral(
    disc: Discretization, jdomain: JDomain, gradient: GradientFunction, mode
) -> float:
    """Interaction integral of a known displacement gradient field."""
    mode = CrackMode(mode)

    def field_gradient(kernel, dofs, points, branch):
        return np.asarray(gradient(points, branch), dtype=float)

    total, _ = _ring_integral(disc, jdomain, field_gradient, mode)
    return total


def extract_sifs(i_mode_i: float, i_mode_ii: float, mat: Material) -> Tuple[float, float]:
    """K_I, K_II = E'/2 times the mode-I and mode-II interaction integrals."""
    half = 0.5 * effective_modulus(mat)
    return half * i_mode_i, half * i_mode_ii


def compute_sifs(solution: SolutionField, r_d: float = Defaults.SIF_RADIUS) -> SIFResult:
    """Stress intensity factors of a solved cracked problem."""
    disc = solution.disc
    if disc.crack is None:
        raise InvalidArgumentError("Stress intensity factors need a cracked problem")
    jdomain = build_jdomain(disc.mesh, disc.crack, r_d)
    gradient = _projected_gradient(solution)
    integrals, imbalance = [], 0.0
    for mode in (CrackMode.I, CrackMode.II):
        total, shared = _ring_integral(disc, jdomain, gradient, mode)
        _check_imbalance(total, shared, mode)
        integrals.append(total)
        imbalance = max(imbalance, shared)
    k_i, k_ii = extract_sifs(integrals[0], integrals[1], disc.material)
    logger.info(f"SIFs at r_d = {r_d}: K_I = {k_i:.6g}, K_II = {k_ii:.6g} ({jdomain.n_ring} ring elements)")
    return SIFResult(
        k_i=k_i,
        k_ii=k_ii,
        integrals=(integrals[0], integrals[1]),
        radius=float(r_d),
        n_ring=jdomain.n_ring,
        imbalance=imbalance,
    )


def ring_radius_sweep(solution: SolutionField, radii: Iterable[float]) -> RadiusSweep:
    """SIFs for several ring radii and their relative spread."""
    sweep = RadiusSweep(results=[compute_sifs(solution, r) for r in radii])
    if sweep.results:
        spread_i, spread_ii = sweep.spread
        logger.info(f"Ring sweep over {len(sweep.results)} radii: spread K_I {spread_i:.2%}, K_II {spread_ii:.2%}")
    return sweep
