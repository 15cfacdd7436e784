#!/usr/bin/env python3
"""
thermosig CLI - Main entry point
Batch front end for simulation, fitting and load-signature reports
"""

import sys
from functools import wraps
from pathlib import Path
from typing import List, Optional

import click
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from thermosig import __version__
from thermosig.core.config import ConfigManager, RunConfig
from thermosig.core.errors import ConfigError, ThermosigError, recovery_hint
from thermosig.ingest.frames import FrameSeries, build_frame_segments
from thermosig.ingest.reader import parse_csv
from thermosig.regression.grid import FitResult, grid_fit
from thermosig.regression.scope import fit_windows, summarize_windows
from thermosig.regression.system import assemble_segments, regressor_correlation
from thermosig.report.evaluation import check_truth, evaluate
from thermosig.report.signature import compute_signature, signature_frame, summarize
from thermosig.report.writers import read_json, read_theta, write_json, write_table
from thermosig.synth.simulator import simulate
from thermosig.synth.writer import emit_simulation, truth_payload
from thermosig.utils.logging import LOG_FILE, enable_debug, logger

console = Console()

config_option = click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path), help="Run configuration (JSON or YAML)")
out_option = click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), help="Output directory (overrides config)")
threads_option = click.option("--threads", type=int, help="Grid-search worker threads (overrides config)")
dataset_option = click.option("--dataset", "dataset_path", required=True, type=click.Path(dir_okay=False, path_type=Path), help="Station dataset CSV")


def _fail(error: ThermosigError) -> None:
    console.print(f"[red]✗ {error}[/red]")
    hint = recovery_hint(error)
    if hint:
        console.print(f"[dim]{hint}[/dim]")
    logger.debug(f"Exiting with code {error.exit_code} after {type(error).__name__}")
    sys.exit(error.exit_code)


def handle_errors(command):
    """Map thermosig errors to their exit codes"""

    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ThermosigError as e:
            _fail(e)

    return wrapper


def _load(config_path: Optional[Path], out_dir: Optional[Path] = None, threads: Optional[int] = None, use_integrated: Optional[bool] = None) -> RunConfig:
    manager = ConfigManager(config_path)
    manager.load()
    config = manager.update(output_dir=out_dir, threads=threads, use_integrated=use_integrated)
    if config.debug:
        enable_debug()
    return config


def _segments(dataset_path: Path, config: RunConfig) -> List[FrameSeries]:
    records = parse_csv(dataset_path, config.column_map)
    return build_frame_segments(records, config.constants, config.mode_rule, config.max_gap_steps)


def _theta_table(title: str, fit: FitResult) -> Table:
    table = Table(title=title)
    table.add_column("Coefficient", style="cyan")
    table.add_column("Value", justify="right")
    for name, value in fit.theta.to_dict().items():
        table.add_row(name, f"{value:.6g}")
    table.add_row("relative error", f"{fit.relative_error:.6g}")
    table.add_row("frames used", str(fit.mode_frames_used))
    return table


@click.group(invoke_without_command=True)
@click.option("--version", is_flag=True, help="Show version and exit")
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.pass_context
def main(ctx, version, debug):
    """thermosig - Subway station HVAC load signatures

    Fits passenger, environment and refrigerator coefficients from station
    sensor data and decomposes the cooling load.
    """
    if debug:
        enable_debug()

    logger.debug(f"thermosig CLI started, version={__version__}, debug={debug}")

    if version:
        console.print(f"thermosig version {__version__}")
        sys.exit(0)

    if ctx.invoked_subcommand is None:
        console.print(ctx.get_help())


@main.command(name="simulate")
@config_option
@out_option
@handle_errors
def simulate_cmd(config_path, out_dir):
    """Generate a synthetic dataset with known coefficients"""
    logger.debug("simulate command started")
    config = _load(config_path, out_dir)
    if config.scenario is None:
        raise ConfigError("Config has no 'scenario' section; 'simulate' needs one", field="scenario")

    result = simulate(config.scenario)
    dataset = emit_simulation(result, config.output_dir / "dataset.csv", config.column_map)
    truth = write_json(truth_payload(result, dataset), config.output_dir / "truth.json")

    console.print(f"[green]✓ Simulated {len(result.series)} frames[/green]")
    console.print(f"[dim]{dataset}\n{truth}[/dim]")
    if not result.controller_ok:
        console.print("[yellow]⚠ Indoor temperature left the controller band; see the log[/yellow]")


@main.command(name="fit")
@config_option
@dataset_option
@click.option("--raw/--integrated", "raw", default=None, help="Fit raw rows or their prefix sums (default from config)")
@out_option
@threads_option
@handle_errors
def fit_cmd(config_path, dataset_path, raw, out_dir, threads):
    """Fit (c_p, alpha, beta_ac) by constrained grid search"""
    logger.debug("fit command started")
    config = _load(config_path, out_dir, threads, None if raw is None else not raw)
    segments = _segments(dataset_path, config)
    system = assemble_segments(segments, config.constants)
    corr = regressor_correlation(system)
    logger.debug(f"Regressor correlations: {corr.round(4).tolist()}")

    fit = grid_fit(system, config.grid, config.use_integrated, config.threads)
    payload = {**fit.to_dict(), "dataset": dataset_path.name}
    write_json(payload, config.output_dir / "fit.json")
    if fit.surface is not None:
        write_table(fit.surface.to_frame(), config.output_dir / "error_surface.csv")

    console.print(_theta_table("Fitted coefficients", fit))
    if fit.at_boundary:
        console.print("[yellow]⚠ Optimum lies on the search boundary[/yellow]")
    console.print(f"[dim]Reports written to {config.output_dir}[/dim]")


@main.command(name="signature")
@config_option
@dataset_option
@click.option("--theta", "theta_path", required=True, type=click.Path(dir_okay=False, path_type=Path), help="fit.json or truth.json")
@out_option
@handle_errors
def signature_cmd(config_path, dataset_path, theta_path, out_dir):
    """Decompose load into passenger and environment parts"""
    logger.debug("signature command started")
    config = _load(config_path, out_dir)
    theta = read_theta(theta_path)
    signature = compute_signature(_segments(dataset_path, config), theta, config.constants)
    summary = summarize(signature)
    write_table(signature_frame(signature), config.output_dir / "signature.csv")
    write_json(summary, config.output_dir / "summary.json")

    shares = summary["shares"]
    table = Table(title="Load signature")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("frames", str(summary["frames"]))
    table.add_row("total load", f"{summary['totals']['load']:.6g}")
    for label, key in (("passenger share", "passenger"), ("environment share", "environment")):
        table.add_row(label, "n/a" if shares[key] is None else f"{shares[key]:.3%}")
    if summary["integrated_relative_error"] is not None:
        table.add_row("integrated relative error", f"{summary['integrated_relative_error']:.6g}")
    console.print(table)


@main.command(name="eval")
@config_option
@dataset_option
@click.option("--truth", "truth_path", required=True, type=click.Path(dir_okay=False, path_type=Path), help="truth.json written by 'simulate'")
@out_option
@threads_option
@handle_errors
def eval_cmd(config_path, dataset_path, truth_path, out_dir, threads):
    """Compare raw and integrated fits against known coefficients"""
    logger.debug("eval command started")
    config = _load(config_path, out_dir, threads)
    segments = _segments(dataset_path, config)
    truth = check_truth(read_json(truth_path), segments)
    report = evaluate(assemble_segments(segments, config.constants), truth, config.grid, config.threads)
    write_json(report, config.output_dir / "eval.json")

    table = Table(title="Coefficient relative errors")
    table.add_column("Coefficient", style="cyan")
    table.add_column("Raw", justify="right")
    table.add_column("Integrated", justify="right")
    for name in ("c_p", "alpha", "beta_ac"):
        table.add_row(name, f"{report['raw']['coefficient_errors'][name]:.4g}", f"{report['integrated']['coefficient_errors'][name]:.4g}")
    console.print(table)


@main.command(name="scope")
@config_option
@dataset_option
@click.option("--window-steps", type=int, help="Window length in steps (overrides config)")
@out_option
@threads_option
@handle_errors
def scope_cmd(config_path, dataset_path, window_steps, out_dir, threads):
    """Fit each window of the dataset separately"""
    logger.debug("scope command started")
    config = _load(config_path, out_dir, threads)
    steps = window_steps or config.window_steps
    if steps < 2:
        raise ConfigError(f"--window-steps must be at least 2, got {steps}", field="window_steps")
    fits = []
    for segment in _segments(dataset_path, config):
        fits.extend(fit_windows(segment, config.constants, config.grid, config.use_integrated, steps, workers=config.threads))
    summary = summarize_windows(fits)
    write_json({"window_steps": steps, "windows": [w.to_dict() for w in fits], "summary": summary}, config.output_dir / "scope.json")

    table = Table(title=f"{len(fits)} window(s) of {steps} steps")
    table.add_column("Coefficient", style="cyan")
    for column in ("mean", "min", "max", "cv"):
        table.add_column(column, justify="right")
    for name in ("c_p", "alpha", "beta_ac"):
        if name in summary:
            stats = summary[name]
            table.add_row(name, *("n/a" if stats[k] is None else f"{stats[k]:.4g}" for k in ("mean", "min", "max", "cv")))
    console.print(table)


@main.group()
def config():
    """Inspect and create run configurations"""
    logger.debug("config command group started")


@config.command(name="show")
@config_option
@handle_errors
def config_show(config_path):
    """Display the effective configuration"""
    manager = ConfigManager(config_path)
    manager.load()
    console.print(Panel.fit(manager.show(), title="Effective configuration"))
    if LOG_FILE is not None:
        console.print(f"[dim]Log file: {str(LOG_FILE).replace(str(Path.home()), '~')}[/dim]")


@config.command(name="validate")
@config_option
def config_validate(config_path):
    """Validate a configuration file"""
    try:
        ConfigManager(config_path).load()
    except ConfigError as e:
        console.print(f"[red]✗ Configuration is invalid: {e}[/red]")
        logger.debug(f"Config validation failed at {e.field}")
        sys.exit(e.exit_code)
    console.print("[green]✓ Configuration is valid[/green]")


@config.command(name="init")
@click.argument("path", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--with-scenario", is_flag=True, help="Include a default synthetic scenario")
@handle_errors
def config_init(path, with_scenario):
    """Write a configuration file with default values"""
    from thermosig.synth.scenario import Scenario

    config = RunConfig(scenario=Scenario() if with_scenario else None)
    saved = ConfigManager(path).save(config)
    console.print(f"[green]✓ Wrote {saved}[/green]")


if __name__ == "__main__":
    main()
