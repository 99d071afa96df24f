"""Stress intensity factor extraction by the interaction integral."""

from .sif import (
    AuxiliaryState,
    JDomain,
    RadiusSweep,
    SIFResult,
    auxiliary_fields,
    build_jdomain,
    compute_sifs,
    extract_sifs,
    field_interaction_integral,
    interaction_integral,
    ring_radius_sweep,
)

__all__ = [
    "AuxiliaryState",
    "JDomain",
    "RadiusSweep",
    "SIFResult",
    "auxiliary_fields",
    "build_jdomain",
    "compute_sifs",
    "extract_sifs",
    "field_interaction_integral",
    "interaction_integral",
    "ring_radius_sweep",
]
