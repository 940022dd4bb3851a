"""Experiment runner: sweep or rate table, CSV curves, run manifest."""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

from rich.console import Console

from oim_relay.analytics.rates import RateSummary, rate_summary
from oim_relay.core.config import Metric
from oim_relay.montecarlo.sweep import SweepRow, sweep
from oim_relay.pipelines.scenario import ExperimentSpec
from oim_relay.reports.csv_export import write_rates_csv, write_sweep_csv
from oim_relay.reports.manifest import RunManifest, write_manifest
from oim_relay.reports.render import gridpoint_line, render_rates_table, render_sweep_table


@dataclass(frozen=True)
class ExperimentResult:
    spec: ExperimentSpec
    rows: tuple[SweepRow, ...]
    rates: RateSummary | None
    outputs: tuple[Path, ...]
    manifest_path: Path


def execute(
    spec: ExperimentSpec,
    *,
    workers: int = 1,
    console: Console | None = None,
) -> ExperimentResult:
    """Run ``spec`` and write ``<metric>.csv`` plus ``manifest.json`` to its output path.

    With a console, each finished grid point is logged as one line.
    """
    started = time.perf_counter()
    out_dir = Path(spec.output_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{spec.metric.value}.csv"

    rows: list[SweepRow] = []
    summary: RateSummary | None = None
    if spec.metric == Metric.RATES:
        summary = rate_summary(spec.config)
        write_rates_csv([summary], csv_path)
    else:
        on_row = None if console is None else (lambda r: console.print(gridpoint_line(r)))
        rows = sweep(
            spec.config,
            spec.metric,
            spec.methodologies,
            spec.snr_db.points(),
            spec.trials,
            spec.seed,
            workers=workers,
            batch_size=spec.batch_size,
            stratified=spec.stratified,
            on_row=on_row,
        )
        write_sweep_csv(rows, csv_path)

    manifest = RunManifest.for_run(
        spec, [csv_path.name], wall_time_s=time.perf_counter() - started,
    )
    manifest_path = write_manifest(manifest, out_dir)
    return ExperimentResult(
        spec=spec,
        rows=tuple(rows),
        rates=summary,
        outputs=(csv_path,),
        manifest_path=manifest_path,
    )


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentResult:
    """CLI entry point: run with a line-per-gridpoint log and a summary table."""
    console = Console()
    grid = spec.snr_db.points()
    cfg = spec.config
    if spec.metric == Metric.RATES:
        console.print(
            f"[bold]Rates[/bold] N_T={cfg.n_total} N_S={cfg.n_selected} M={cfg.apm_order}"
        )
    else:
        console.print(
            f"[bold]{spec.metric.value} sweep[/bold] {len(grid)} points x "
            f"{len(spec.methodologies)} methodologies, trials={spec.trials} "
            f"seed={spec.seed} workers={workers}"
        )

    result = execute(spec, workers=workers, console=console)

    if result.rates is not None:
        render_rates_table(result.rates, console)
    else:
        render_sweep_table(result.rows, console)
    for path in result.outputs:
        console.print(f"CSV written to {path}")
    console.print(f"Manifest written to {result.manifest_path}")
    return result
