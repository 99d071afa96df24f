"""Run configuration, benchmark problems and report writing."""

from .benchmarks import (
    BenchmarkRun,
    ConvergenceSeries,
    alpha_sweep,
    build_mesh,
    config_crack,
    convergence_study,
    discontinuous_patch_test,
    extended_patch_test,
    inclined_convergence,
    inclined_crack,
    mixed_mode_crack,
    mixed_mode_field,
    mixed_mode_reference_energy,
    modulus_sweep,
    prepare_crack_mesh,
    run_inclined,
    run_configured,
    run_mixed_mode,
    solve_inclined,
    solve_mixed_mode,
)
from .config import MeshKind, RunConfig, config_hash, deep_merge, load_run_config
from .reporting import CSV_COLUMNS, ReportWriter, mesh_statistics

__all__ = [
    "BenchmarkRun",
    "ConvergenceSeries",
    "alpha_sweep",
    "build_mesh",
    "config_crack",
    "convergence_study",
    "discontinuous_patch_test",
    "extended_patch_test",
    "inclined_convergence",
    "inclined_crack",
    "mixed_mode_crack",
    "mixed_mode_field",
    "mixed_mode_reference_energy",
    "modulus_sweep",
    "prepare_crack_mesh",
    "run_configured",
    "run_inclined",
    "run_mixed_mode",
    "solve_inclined",
    "solve_mixed_mode",
    "MeshKind",
    "RunConfig",
    "config_hash",
    "deep_merge",
    "load_run_config",
    "CSV_COLUMNS",
    "ReportWriter",
    "mesh_statistics",
]
