#!/usr/bin/env python3
"""
Voronoi Mesh Generator - Lloyd-relaxed Voronoi tessellations of a rectangle

Cells of the seeds are clipped to the rectangle by mirroring the seed set
across the four sides before calling Qhull, which makes every cell of an
original seed bounded and exactly clipped. Vertices produced several times
by neighbouring cells are merged, and very short edges are collapsed so
the generated meshes satisfy the regularity conditions.
"""

from typing import Dict, List, Optional

import numpy as np
from scipy.spatial import Voronoi, cKDTree

from .constants import Defaults, Tolerances
from .mesh import PolygonalMesh, Rectangle, polygon_geometry, tag_boundary_edges
from ..utils.errors import InvalidArgumentError, MeshGenerationError
from ..utils.logging import get_logger

logger = get_logger(__name__)


def _mirror_seeds(seeds: np.ndarray, domain: Rectangle) -> np.ndarray:
    left = seeds.copy()
    left[:, 0] = 2.0 * domain.x_min - left[:, 0]
    right = seeds.copy()
    right[:, 0] = 2.0 * domain.x_max - right[:, 0]
    bottom = seeds.copy()
    bottom[:, 1] = 2.0 * domain.y_min - bottom[:, 1]
    top = seeds.copy()
    top[:, 1] = 2.0 * domain.y_max - top[:, 1]
    return np.vstack([seeds, left, right, bottom, top])


def _clipped_cells(seeds: np.ndarray, domain: Rectangle) -> List[np.ndarray]:
    """Voronoi cells of the seeds clipped to the domain, each as CCW coordinates."""
    vor = Voronoi(_mirror_seeds(seeds, domain))
    snap = Tolerances.SNAP_RELATIVE * domain.diameter
    cells = []
    for i in range(len(seeds)):
        region = vor.regions[vor.point_region[i]]
        if not region or -1 in region:
            raise MeshGenerationError(f"Voronoi cell of seed {i} is unbounded after mirroring")
        coords = vor.vertices[region].copy()
        coords[:, 0] = np.clip(coords[:, 0], domain.x_min, domain.x_max)
        coords[:, 1] = np.clip(coords[:, 1], domain.y_min, domain.y_max)
        for axis, bounds in ((0, (domain.x_min, domain.x_max)), (1, (domain.y_min, domain.y_max))):
            for value in bounds:
                coords[np.abs(coords[:, axis] - value) <= snap, axis] = value

        center = coords.mean(axis=0)
        order = np.argsort(np.arctan2(coords[:, 1] - center[1], coords[:, 0] - center[0]))
        cells.append(coords[order])
    return cells


def _check_seed_separation(seeds: np.ndarray, domain: Rectangle) -> None:
    tol = Tolerances.DEDUP_RELATIVE * domain.diameter * 1e3
    pairs = cKDTree(seeds).query_pairs(r=tol)
    if pairs:
        i, j = sorted(pairs)[0]
        raise MeshGenerationError(
            f"Coincident seeds {i} and {j} at {seeds[i].tolist()} ({len(pairs)} pairs closer than {tol:.1e})"
        )


def lloyd_relaxation(seeds: np.ndarray, domain: Rectangle, iterations: int) -> np.ndarray:
    """Move each seed to the centroid of its clipped cell, ``iterations`` times."""
    seeds = np.array(seeds, dtype=float)
    for _ in range(iterations):
        _check_seed_separation(seeds, domain)
        cells = _clipped_cells(seeds, domain)
        seeds = np.array([polygon_geometry(c).centroid for c in cells])
    return seeds


def _merge_vertices(cells: List[np.ndarray], tol: float):
    """Merge vertices closer than ``tol`` and return (vertices, index loops)."""
    points = np.vstack(cells)
    parent = np.arange(len(points))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in sorted(cKDTree(points).query_pairs(r=tol)):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    roots = np.array([find(i) for i in range(len(points))])
    unique_roots, new_index = np.unique(roots, return_inverse=True)
    vertices = points[unique_roots]

    loops = []
    offset = 0
    for c in cells:
        loop = new_index[offset : offset + len(c)]
        offset += len(c)
        loops.append(_drop_repeats(list(loop)))
    return vertices, loops


def _drop_repeats(loop: List[int]) -> List[int]:
    out: List[int] = []
    for v in loop:
        if not out or out[-1] != v:
            out.append(int(v))
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def _collapse_short_edges(
    vertices: np.ndarray, loops: List[List[int]], domain: Rectangle, ratio: float
) -> int:
    """
    Merge edges shorter than ``ratio`` times the cell diameter.

    Corners never move, boundary vertices only slide along their side, and
    a collapse that would leave a cell with fewer than three vertices is
    skipped. Operates in place and returns the number of collapses.
    """
    snap = Tolerances.SNAP_RELATIVE * domain.diameter
    node_cells: Dict[int, set] = {}
    for c, loop in enumerate(loops):
        for v in loop:
            node_cells.setdefault(v, set()).add(c)

    collapsed = 0
    changed = True
    while changed:
        changed = False
        for c in range(len(loops)):
            loop = loops[c]
            coords = vertices[loop]
            diameter = polygon_geometry(coords).diameter
            n = len(loop)
            for k in range(n):
                a, b = loop[k], loop[(k + 1) % n]
                if np.linalg.norm(vertices[a] - vertices[b]) >= ratio * diameter:
                    continue
                sides_a = set(domain.sides_of(vertices[a], snap))
                sides_b = set(domain.sides_of(vertices[b], snap))
                if len(sides_a) == 2 and len(sides_b) == 2:
                    continue
                if len(sides_a) == 2 or (sides_a and not sides_b):
                    target = vertices[a].copy()
                elif len(sides_b) == 2 or (sides_b and not sides_a):
                    target = vertices[b].copy()
                elif sides_a == sides_b:
                    target = 0.5 * (vertices[a] + vertices[b])
                else:
                    continue
                shared = node_cells[a] & node_cells[b]
                if any(len(loops[s]) <= 3 for s in shared):
                    continue

                vertices[a] = target
                for s in node_cells[b]:
                    loops[s] = _drop_repeats([a if v == b else v for v in loops[s]])
                node_cells[a] |= node_cells.pop(b)
                collapsed += 1
                changed = True
                break
    return collapsed


def build_voronoi_mesh(
    domain: Rectangle,
    n_seeds: int,
    rng_seed: int = Defaults.RNG_SEED,
    lloyd_iters: int = Defaults.LLOYD_ITERATIONS,
    seeds: Optional[np.ndarray] = None,
    collapse_ratio: float = Defaults.COLLAPSE_RATIO,
) -> PolygonalMesh:
    """
    Build a clipped, Lloyd-relaxed Voronoi mesh of a rectangle.

    Args:
        domain: Rectangle to mesh.
        n_seeds: Number of cells.
        rng_seed: Seed of the generator drawing the initial seeds.
        lloyd_iters: Number of Lloyd iterations.
        seeds: Optional explicit initial seeds (overrides random sampling).
        collapse_ratio: Edges shorter than this fraction of the cell
            diameter are collapsed; 0 disables collapsing.

    Returns:
        PolygonalMesh whose element i is the cell of seed i.

    Raises:
        InvalidArgumentError: For fewer than two seeds.
        MeshGenerationError: When seeds coincide or cells degenerate.
    """
    if seeds is not None:
        seeds = np.asarray(seeds, dtype=float)
        n_seeds = len(seeds)
    if n_seeds < 2:
        raise InvalidArgumentError(f"A Voronoi mesh needs at least 2 seeds, got {n_seeds}")
    if lloyd_iters < 0:
        raise InvalidArgumentError(f"lloyd_iters must be non-negative, got {lloyd_iters}")

    if seeds is None:
        rng = np.random.default_rng(rng_seed)
        seeds = np.column_stack(
            [
                rng.uniform(domain.x_min, domain.x_max, n_seeds),
                rng.uniform(domain.y_min, domain.y_max, n_seeds),
            ]
        )

    seeds = lloyd_relaxation(seeds, domain, lloyd_iters)
    _check_seed_separation(seeds, domain)
    cells = _clipped_cells(seeds, domain)

    vertices, loops = _merge_vertices(cells, Tolerances.DEDUP_RELATIVE * domain.diameter)
    collapsed = 0
    if collapse_ratio > 0.0:
        collapsed = _collapse_short_edges(vertices, loops, domain, collapse_ratio)

    used = np.unique(np.concatenate([np.asarray(loop) for loop in loops]))
    remap = -np.ones(len(vertices), dtype=int)
    remap[used] = np.arange(len(used))
    vertices = vertices[used]
    elements = [remap[np.asarray(loop)] for loop in loops]

    for e, loop in enumerate(elements):
        if len(loop) < 3:
            raise MeshGenerationError(f"Voronoi cell {e} degenerated to {len(loop)} vertices")

    boundary = tag_boundary_edges(vertices, elements, domain)
    mesh = PolygonalMesh(vertices=vertices, elements=elements, boundary_edges=boundary, domain=domain)
    mesh.validate()

    logger.info(
        f"Built Voronoi mesh: {mesh.n_elements} cells, {mesh.n_nodes} nodes, "
        f"{lloyd_iters} Lloyd iterations, {collapsed} short edges collapsed"
    )
    return mesh
