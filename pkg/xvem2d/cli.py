#!/usr/bin/env python3
"""
Command Line Interface for the xvem2d fracture solver
"""

import math
import os
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import click
from rich.console import Console
from rich.table import Table

from . import __version__
from .core.mesh_io import write_vtk
from .experiments.benchmarks import (
    BenchmarkRun,
    ConvergenceSeries,
    alpha_sweep,
    convergence_study,
    discontinuous_patch_test,
    extended_patch_test,
    inclined_convergence,
    modulus_sweep,
    run_configured,
    run_inclined,
)
from .experiments.config import MeshKind, RunConfig, config_hash, load_run_config
from .experiments.reporting import ReportWriter
from .utils.errors import ConfigurationError, XVEMError
from .utils.logging import setup_logging

console = Console()

MESH_CHOICES = {"quad": MeshKind.QUAD, "poly": MeshKind.VORONOI}
ENRICHMENT_CHOICES = {
    "vem": ("vem",),
    "topo": ("topological",),
    "geom": ("geometric",),
    "all": ("vem", "topological", "geometric"),
}


def _overrides(stabilization: Optional[str], sif_radius: Optional[float]) -> Dict[str, Any]:
    updates: Dict[str, Any] = {}
    if stabilization:
        updates["stabilization"] = {"scheme": stabilization}
    if sif_radius is not None:
        updates["sif"] = {"radius": sif_radius}
    return updates


def _resolve(ctx: click.Context, config_file: Optional[str] = None, **options) -> RunConfig:
    """Config for one command: global file, command file, then command-line options."""
    path = config_file or ctx.obj.get("config_path")
    config = load_run_config(path, overrides=_overrides(**options))
    if not ctx.obj.get("verbose"):
        setup_logging(config.general.log_level)
    return config


def _fmt(value: Optional[float], spec: str = ".4e") -> str:
    return "-" if value is None else format(value, spec)


def _show_runs(title: str, runs: Iterable[BenchmarkRun]) -> None:
    table = Table(title=title)
    for column in ("run", "h", "dofs", "energy", "rel. error", "K_I", "K_II", "time [s]"):
        table.add_column(column, justify="right" if column != "run" else "left")
    for run in runs:
        table.add_row(
            run.to_row()["label"],
            _fmt(run.h, ".4f"),
            str(run.n_dofs),
            _fmt(run.energy, ".10e"),
            _fmt(run.rel_error, ".3e"),
            _fmt(run.k_i, ".4f"),
            _fmt(run.k_ii, ".4f"),
            _fmt(run.wall_time, ".2f"),
        )
    console.print(table)


def _write_outputs(
    config: RunConfig,
    output: Optional[str],
    name: str,
    command: str,
    runs: List[BenchmarkRun],
    results: Any,
    vtk: Optional[str] = None,
) -> None:
    directory = output or (config.output.directory if config.output.vtk else None)
    if directory:
        writer = ReportWriter(directory, config)
        mesh = runs[-1].solution.disc.mesh if runs and runs[-1].solution is not None else None
        paths = writer.write_report(name, command, [r.to_row() for r in runs], results, mesh)
        click.echo(f"📊 Results table: {paths['csv']}")
        click.echo(f"📋 Report: {paths['json']}")
        if config.output.vtk and vtk is None and runs and runs[-1].solution is not None:
            vtk = str(Path(directory) / f"{name}.vtk")
    if vtk:
        solution = runs[-1].solution if runs else None
        if solution is None:
            click.echo("⚠️  No solution field available for VTK output")
            return
        path = write_vtk(solution.disc.mesh, vtk, solution.nodal_displacements(), title=f"xvem2d {command}")
        click.echo(f"🧊 VTK mesh written to: {path}")


def _series_runs(study: Dict[Any, ConvergenceSeries]) -> List[BenchmarkRun]:
    return [run for series in study.values() for run in series.runs]


def _show_slopes(title: str, study: Dict[Any, ConvergenceSeries]) -> None:
    table = Table(title=title)
    table.add_column("series")
    table.add_column("slope", justify="right")
    table.add_column("monotone", justify="center")
    for key, series in study.items():
        table.add_row(str(key), _fmt(series.slope, ".3f"), "✅" if series.monotone else "⚠️")
    console.print(table)


def _fail(ctx: click.Context, message: str, error: Exception) -> None:
    click.echo(f"❌ {message}: {error}", err=True)
    if ctx.obj.get("verbose"):
        import traceback

        traceback.print_exc()
    sys.exit(1)


def common_options(func):
    """Options every solve command shares."""
    func = click.option("--output", "-o", type=click.Path(), help="Directory for the CSV and JSON report")(func)
    func = click.option(
        "--stabilization",
        type=click.Choice(["dofi", "drecipe"]),
        help="Stabilization scheme",
    )(func)
    func = click.option("--sif-radius", type=float, help="Interaction-integral domain radius r_d")(func)
    return func


@click.group()
@click.version_option(version=__version__)
@click.option("--config", "-c", "config_path", type=click.Path(exists=True), help="YAML configuration file")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], verbose: bool):
    """xvem2d - Extended virtual elements for 2D linear elastic fracture."""
    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose
    ctx.obj["config_path"] = config_path
    if verbose:
        setup_logging("DEBUG")


@cli.command()
@click.argument("config_file", type=click.Path(exists=True), required=False)
@common_options
@click.option("--vtk", type=click.Path(), help="Write the deformed mesh as legacy VTK")
@click.pass_context
def run(ctx: click.Context, config_file, output, stabilization, sif_radius, vtk):
    """Solve the configured mixed-mode crack problem."""
    try:
        config = _resolve(ctx, config_file, stabilization=stabilization, sif_radius=sif_radius)
        click.echo(f"🔧 Configuration {config_hash(config)[:12]}")
        click.echo(f"🧩 Mesh: {config.mesh.kind.value}, enrichment: {config.enrichment.mode.value}")

        result = run_configured(config)
        _show_runs("Run", [result])
        _write_outputs(config, output, "run", "run", [result], result.to_dict(), vtk)
        click.echo("✅ Solve complete!")

    except (XVEMError, ConfigurationError) as e:
        _fail(ctx, "Solve failed", e)


@cli.command("patch-test")
@click.option(
    "--kind", "-k", type=click.Choice(["extended", "discontinuous"]), default="extended", help="Patch test to run"
)
@click.option("--mesh", "-m", "mesh_kind", type=click.Choice(sorted(MESH_CHOICES)), default="quad", help="Mesh family")
@click.option("--zero-bc", is_flag=True, help="Extended test with zero boundary data")
@common_options
@click.option("--vtk", type=click.Path(), help="Write the deformed mesh as legacy VTK")
@click.pass_context
def patch_test(ctx: click.Context, kind, mesh_kind, zero_bc, output, stabilization, sif_radius, vtk):
    """Run the extended or the discontinuous patch test."""
    try:
        config = _resolve(ctx, stabilization=stabilization, sif_radius=sif_radius)
        click.echo(f"🧪 {kind.capitalize()} patch test")

        if kind == "extended":
            result = extended_patch_test(config, MESH_CHOICES[mesh_kind], amplitude=0.0 if zero_bc else 1.0)
        else:
            result = discontinuous_patch_test(config)

        _show_runs(f"{kind.capitalize()} patch test", [result])
        if "dof_error" in result.extra:
            click.echo(f"📐 Max DOF deviation from the exact interpolant: {result.extra['dof_error']:.3e}")
        _write_outputs(config, output, f"patch_{kind}", "patch-test", [result], result.to_dict(), vtk)
        click.echo("✅ Patch test complete!")

    except (XVEMError, ConfigurationError) as e:
        _fail(ctx, "Patch test failed", e)


@cli.command()
@click.option("--mesh", "-m", "mesh_kind", type=click.Choice(sorted(MESH_CHOICES)), default="quad", help="Mesh family")
@click.option(
    "--enrichment", "-e", type=click.Choice(sorted(ENRICHMENT_CHOICES)), default="all", help="Methods to compare"
)
@click.option("--resolutions", "-r", multiple=True, type=int, help="Elements per side (repeatable)")
@click.option("--alpha-sweep", "sweep_alpha", is_flag=True, help="Repeat geometric enrichment for several alpha values")
@click.option("--modulus-sweep", "sweep_modulus", is_flag=True, help="Repeat geometric enrichment for several Young's moduli")
@common_options
@click.pass_context
def convergence(
    ctx: click.Context, mesh_kind, enrichment, resolutions, sweep_alpha, sweep_modulus, output, stabilization, sif_radius
):
    """Mixed-mode strain-energy convergence study."""
    try:
        config = _resolve(ctx, stabilization=stabilization, sif_radius=sif_radius)
        kwargs: Dict[str, Any] = {}
        if resolutions:
            kwargs["resolutions"] = tuple(resolutions)
        click.echo(f"📈 Convergence study on {mesh_kind} meshes")

        study = convergence_study(config, methods=ENRICHMENT_CHOICES[enrichment], kind=MESH_CHOICES[mesh_kind], **kwargs)
        runs = _series_runs(study)
        _show_runs("Convergence", runs)
        _show_slopes("Energy-error slopes", study)
        results: Dict[str, Any] = {"study": {k: s.to_dict() for k, s in study.items()}}

        if sweep_alpha:
            click.echo("🔁 Alpha sweep")
            sweep = alpha_sweep(config, **kwargs)
            _show_slopes("Slopes per alpha", sweep)
            runs += _series_runs(sweep)
            results["alpha_sweep"] = {str(k): s.to_dict() for k, s in sweep.items()}

        if sweep_modulus:
            click.echo("🔁 Young's modulus sweep")
            sweep = modulus_sweep(config, **kwargs)
            _show_slopes("Slopes per Young's modulus", sweep)
            runs += _series_runs(sweep)
            results["modulus_sweep"] = {str(k): s.to_dict() for k, s in sweep.items()}

        _write_outputs(config, output, f"convergence_{mesh_kind}", "convergence", runs, results)
        click.echo("✅ Convergence study complete!")

    except (XVEMError, ConfigurationError) as e:
        _fail(ctx, "Convergence study failed", e)


@cli.command()
@click.option("--beta", "-b", type=float, default=math.pi / 6, show_default=True, help="Crack angle in radians")
@click.option("--alpha", "-a", type=float, help="Stabilization multiplier")
@click.option("--nx", type=int, default=60, show_default=True, help="Elements across the width (height gets 2nx)")
@click.option("--convergence", "energy_convergence", is_flag=True, help="Energy convergence over h = 1/4 .. 1/40")
@common_options
@click.option("--vtk", type=click.Path(), help="Write the deformed mesh as legacy VTK")
@click.pass_context
def inclined(ctx: click.Context, beta, alpha, nx, energy_convergence, output, stabilization, sif_radius, vtk):
    """Inclined edge crack plate under uniform tension."""
    try:
        config = _resolve(ctx, stabilization=stabilization, sif_radius=sif_radius)
        if alpha is not None:
            config = config.with_updates({"stabilization": {"alpha": alpha}})

        if energy_convergence:
            click.echo(f"📈 Inclined plate energy convergence, beta = {beta:.4f}")
            series = inclined_convergence(config, beta=beta)
            _show_runs("Inclined plate convergence", series.runs)
            _show_slopes("Energy-error slope", {series.method: series})
            _write_outputs(config, output, "inclined_convergence", "inclined", series.runs, series.to_dict())
        else:
            click.echo(f"📐 Inclined edge crack, beta = {beta:.4f}, alpha = {config.stabilization.alpha}")
            result = run_inclined(config, beta, nx=nx)
            _show_runs("Inclined edge crack", [result])
            if "reference_K_I" in result.extra:
                click.echo(
                    f"📋 Reference K_I = {result.extra['reference_K_I']:.4f} "
                    f"(error {result.extra['K_I_error']:.3%}), "
                    f"K_II = {result.extra['reference_K_II']:.4f} (error {result.extra['K_II_error']:.3%})"
                )
            _write_outputs(config, output, "inclined", "inclined", [result], result.to_dict(), vtk)
        click.echo("✅ Inclined crack benchmark complete!")

    except (XVEMError, ConfigurationError) as e:
        _fail(ctx, "Inclined crack benchmark failed", e)


@cli.command()
@click.pass_context
def info(ctx: click.Context):
    """Show version, resolved configuration and its hash."""
    try:
        config = load_run_config(ctx.obj.get("config_path"))
    except ConfigurationError as e:
        _fail(ctx, "Configuration error", e)
        return

    click.echo(f"🔧 xvem2d v{__version__}")
    click.echo(f"📍 Python: {sys.version}")
    click.echo(f"📁 Working directory: {os.getcwd()}")
    click.echo(f"🔑 Configuration hash: {config_hash(config)}")
    click.echo("\n📋 Resolved configuration:")
    click.echo(config.to_yaml())
    click.echo("📋 Available commands:")
    click.echo("  • run          - Solve the configured crack problem")
    click.echo("  • patch-test   - Extended or discontinuous patch test")
    click.echo("  • convergence  - Mixed-mode energy convergence study")
    click.echo("  • inclined     - Inclined edge crack benchmark")
    click.echo("  • info         - Show this information")


def main():
    """Main entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
