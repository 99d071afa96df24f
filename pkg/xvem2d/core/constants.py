"""Numerical constants, defaults and reference values."""

import math


# Geometric and algebraic tolerances
class Tolerances:
    """Tolerances shared by geometry, kernels and the solver."""

    # Geometry
    SNAP_RELATIVE = 1e-10  # Crack/vertex snapping, relative to h_P
    DEDUP_RELATIVE = 1e-12  # Vertex merging, relative to domain diameter
    TIP_COINCIDENCE = 1e-12  # Topological enrichment, relative to h
    ON_CRACK_RELATIVE = 1e-10  # |d(x)| below this (times h) counts as on the crack

    # Element kernels
    CONDITION_WARNING = 1e8  # Log G_X condition numbers above this
    CONDITION_LIMIT = 1e12  # Reject G_X above this
    ZERO_MODE_RELATIVE = 1e-10  # Eigenvalue threshold relative to ||K||
    NEAR_TIP_EDGE_RATIO = 0.05  # Edge-to-tip distance (times h_E) that triggers grading
    GRADED_FLOOR = 1e-6  # Narrowest graded piece, relative to the edge length

    # Solver
    RESIDUAL_WARNING = 1e-10  # Relative residual reported as a warning
    RESIDUAL_LIMIT = 1e-6  # Relative residual treated as a failed solve

    # SIF ring monitoring
    RING_IMBALANCE_WARNING = 1e-2  # Non-cancelling edge contributions relative to |I|


# Defaults
class Defaults:
    """Default values for runs when no configuration overrides them."""

    YOUNG_MODULUS = 1.0e5
    POISSON_RATIO = 0.3
    PLANE = "strain"

    EDGE_ORDER = 16  # Gauss points per edge
    GRADED_RATIO = 0.15  # Geometric ratio of graded edge subdivision
    GRADED_LEVELS = 24  # Number of geometric layers toward the tip

    STABILIZATION = "dofi"
    ALPHA = 1.0

    ENRICHMENT = "geometric"
    ENRICHMENT_RADIUS = 0.5

    SIF_RADIUS = 0.4

    LLOYD_ITERATIONS = 50
    RNG_SEED = 2019
    COLLAPSE_RATIO = 0.1  # Voronoi edges shorter than this times h_P are merged


# Boundary tags
class BoundaryTags:
    """Tags attached to boundary edges of generated meshes."""

    LEFT = "left"
    RIGHT = "right"
    BOTTOM = "bottom"
    TOP = "top"
    CRACK = "crack"

    SIDES = (BOTTOM, RIGHT, TOP, LEFT)


# Published reference values
class ReferenceValues:
    """Reference numbers of the benchmark problems."""

    # Half the energy norm of the unit-SIF mixed-mode field on (-1,1)^2
    MIXED_MODE_STRAIN_ENERGY = 1.6776885579e-5

    # Inclined edge crack on a 60x120 square mesh, alpha -> (beta -> (K_I, K_II))
    INCLINED_SIF = {
        0.01: {
            math.pi / 12: (2.9351, 0.4631),
            math.pi / 6: (2.3652, 0.7607),
            math.pi / 4: (1.6418, 0.8333),
        },
        0.05: {
            math.pi / 12: (2.9333, 0.4627),
            math.pi / 6: (2.3639, 0.7603),
            math.pi / 4: (1.6408, 0.8329),
        },
        0.10: {
            math.pi / 12: (2.9262, 0.4615),
            math.pi / 6: (2.3582, 0.7584),
            math.pi / 4: (1.6370, 0.8308),
        },
    }

    # Same problem computed with X-FEM
    INCLINED_SIF_XFEM = {
        math.pi / 12: (2.9349, 0.4630),
        math.pi / 6: (2.3651, 0.7606),
        math.pi / 4: (1.6419, 0.8334),
    }
