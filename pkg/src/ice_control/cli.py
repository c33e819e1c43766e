"""Batch front door: simulate, steady, optimize and sample-dist commands.

Exit codes: 0 success, 2 configuration/validation error, 3 numerical failure.
``ice optimize`` additionally exits 1 when the final best objective misses the
``--success-threshold``.
"""

from __future__ import annotations

import os
import sys

import click
import numpy as np

from .artifacts import (
    write_best_params_csv,
    write_distribution_csv,
    write_generations_csv,
    write_summary,
    write_trajectory_csv,
)
from .config import ConfigError, ExperimentConfig, load_config
from .core import frobenius_distance
from .distributions import sample_density
from .dynamics import (
    AmbiguousSteadyStateError,
    IntegrationDivergedError,
    propagate,
    steady_state,
)
from .ga import Evaluator, ObjectiveSpec, run_ga
from .gas import GasKernel
from .radiation import build_radiation_liouvillian

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(config_path: str, seed: int | None = None) -> ExperimentConfig:
    try:
        return load_config(config_path, seed_override=seed)
    except ConfigError as exc:
        _fail(EXIT_VALIDATION, str(exc))


def _build_liouvillian(cfg: ExperimentConfig, dist) -> np.ndarray:
    if cfg.environment_kind == "radiation":
        return build_radiation_liouvillian(cfg.system, dist, cfg.radiation_coupling)
    return GasKernel(cfg.system, cfg.gas_coupling, cfg.quadrature).liouvillian(dist)


def _require_fixed_distribution(cfg: ExperimentConfig):
    if cfg.optimizing:
        _fail(EXIT_VALIDATION, "this command needs a fixed distribution, not 'optimize'")
    return cfg.distribution


def _out_dir(cfg: ExperimentConfig, out: str | None) -> str:
    path = out or cfg.output_dir or "."
    os.makedirs(path, exist_ok=True)
    return path


def _print_state(rho: np.ndarray) -> None:
    for row in rho:
        click.echo("  " + "  ".join(f"{x.real:+.6f}{x.imag:+.6f}j" for x in row))


@click.group()
def main():
    """Steady-state engineering of quantum systems by shaped incoherent environments."""


@main.command()
@click.argument("config_path", type=click.Path())
@click.option("--out", default=None, help="Output directory (overrides config).")
def simulate(config_path, out):
    """Propagate under a fixed distribution; write trajectory and distribution CSVs."""
    cfg = _load(config_path)
    dist = _require_fixed_distribution(cfg)
    L = _build_liouvillian(cfg, dist)
    try:
        traj = propagate(L, cfg.initial_state, cfg.dynamics)
    except IntegrationDivergedError as exc:
        _fail(EXIT_NUMERICAL, str(exc))
    out_dir = _out_dir(cfg, out)
    write_trajectory_csv(out_dir, traj)
    k, n = sample_density(dist, *cfg.sample_range)
    write_distribution_csv(out_dir, k, n)
    final = traj.states[-1]
    click.echo(f"propagated to t = {traj.times[-1]:.6g} (converged: {traj.converged})")
    click.echo("final state:")
    _print_state(final)
    if cfg.target is not None:
        click.echo(f"J vs target: {frobenius_distance(final, cfg.target):.6g}")


@main.command()
@click.argument("config_path", type=click.Path())
def steady(config_path):
    """Directly solve for the invariant state of the configured generator."""
    cfg = _load(config_path)
    dist = _require_fixed_distribution(cfg)
    L = _build_liouvillian(cfg, dist)
    try:
        rho, report = steady_state(L)
    except AmbiguousSteadyStateError as exc:
        click.echo(f"ambiguous steady state: {exc}", err=True)
        click.echo(
            "smallest singular values: "
            + ", ".join(f"{s:.3e}" for s in exc.report.singular_values),
            err=True,
        )
        sys.exit(EXIT_NUMERICAL)
    click.echo("steady state:")
    _print_state(rho)
    click.echo(
        f"null-space dimension {report.null_dim} "
        f"(threshold {report.threshold:.3e}); smallest singular values: "
        + ", ".join(f"{s:.3e}" for s in report.singular_values)
    )
    if cfg.target is not None:
        click.echo(f"J vs target: {frobenius_distance(rho, cfg.target):.6g}")


@main.command()
@click.argument("config_path", type=click.Path())
@click.option("--success-threshold", default=0.05, show_default=True, type=float)
@click.option("--seed", default=None, type=int, help="Override the config seed.")
@click.option("--out", default=None, help="Output directory (overrides config).")
@click.option("--quiet", is_flag=True, help="Suppress per-generation progress.")
def optimize(config_path, success_threshold, seed, out, quiet):
    """Run the GA over the environment distribution; write all run artifacts."""
    cfg = _load(config_path, seed=seed)
    if not cfg.optimizing:
        _fail(EXIT_VALIDATION, "config must set distribution: optimize")
    kwargs = {}
    if cfg.radiation_coupling is not None:
        kwargs["radiation_coupling"] = cfg.radiation_coupling
    if cfg.quadrature is not None:
        kwargs["quadrature"] = cfg.quadrature
    objective = ObjectiveSpec(
        system=cfg.system,
        environment=cfg.environment_kind,
        target=cfg.target,
        gas_coupling=cfg.gas_coupling,
        initial_state=cfg.initial_state,
        propagation=cfg.dynamics,
        **kwargs,
    )

    def progress(gen, best, avg):
        if not quiet:
            click.echo(f"generation {gen:4d}  best J {best:.6g}  avg J {avg:.6g}")

    try:
        run = run_ga(cfg.ga, objective, progress=progress)
    except IntegrationDivergedError as exc:
        _fail(EXIT_NUMERICAL, str(exc))

    out_dir = _out_dir(cfg, out)
    write_generations_csv(out_dir, run.best_j, run.avg_j)
    k, n = sample_density(run.best_params, *cfg.sample_range)
    write_distribution_csv(out_dir, k, n)
    write_best_params_csv(out_dir, run.best_params.centers, run.best_params.widths)
    evaluator = Evaluator(objective, cfg.ga)
    L = evaluator.liouvillian(run.best_params)
    try:
        traj = propagate(L, cfg.initial_state, cfg.dynamics)
        steady = traj.states[-1]
    except IntegrationDivergedError as exc:
        _fail(EXIT_NUMERICAL, str(exc))
    write_trajectory_csv(out_dir, traj)
    final_j = float(run.best_j[-1])
    write_summary(out_dir, cfg.resolved, cfg.seed, final_j, steady)
    click.echo(f"final best J = {final_j:.6g} (threshold {success_threshold})")
    sys.exit(0 if final_j < success_threshold else 1)


@main.command("sample-dist")
@click.argument("config_path", type=click.Path())
@click.option("--out", default=None, help="Output directory (overrides config).")
def sample_dist(config_path, out):
    """Tabulate the configured distribution to distribution.csv."""
    cfg = _load(config_path)
    dist = _require_fixed_distribution(cfg)
    out_dir = _out_dir(cfg, out)
    k, n = sample_density(dist, *cfg.sample_range)
    path = write_distribution_csv(out_dir, k, n)
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
