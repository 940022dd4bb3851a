"""CLI entry point using Typer."""

from __future__ import annotations

from pathlib import Path
from typing import List, Optional

import typer

app = typer.Typer(name="oimrelay", help="Adaptive OFDM-IM two-hop relay simulator")

EXIT_FAILURE = 1
EXIT_INVALID_SPEC = 2


def _fail(message: str, code: int) -> typer.Exit:
    typer.echo(message, err=True)
    return typer.Exit(code=code)


@app.command("run")
def run(
    spec: Optional[Path] = typer.Option(None, "--spec", help="Scenario file (key = value)"),
    metric: Optional[str] = typer.Option(None, help="outage, capacity, ser or rates"),
    methodology: Optional[List[str]] = typer.Option(
        None, "--methodology", help="Selection policy (repeatable)",
    ),
    snr_db: Optional[str] = typer.Option(None, "--snr-db", help="SNR grid start:stop:step in dB"),
    trials: Optional[int] = typer.Option(None, help="Monte Carlo trials per grid point"),
    seed: Optional[int] = typer.Option(None, help="Run seed"),
    out: Optional[str] = typer.Option(None, "--out", help="Output directory"),
    n_total: Optional[int] = typer.Option(None, "--n-total", help="Subcarriers per block N_T"),
    n_selected: Optional[int] = typer.Option(None, "--n-selected", help="Selected subcarriers N_S"),
    apm_order: Optional[int] = typer.Option(None, "--apm-order", help="PSK order M"),
    batch_size: Optional[int] = typer.Option(None, "--batch-size", help="Trials per RNG batch"),
    stratified: Optional[bool] = typer.Option(
        None, "--stratified/--uniform", help="Cycle patterns instead of drawing them",
    ),
    workers: int = typer.Option(
        1, envvar="OIM_RELAY_WORKERS", help="Worker processes for Monte Carlo batches",
    ),
) -> None:
    """Run an experiment and write <metric>.csv plus manifest.json.

    Flags override values read from --spec.
    """
    from oim_relay.pipelines.experiment import run_experiment
    from oim_relay.pipelines.scenario import parse_scenario, spec_from_values

    overrides = {
        "metric": metric,
        "methodologies": ",".join(methodology) if methodology else None,
        "snr_db": snr_db,
        "trials": trials,
        "seed": seed,
        "output_path": out,
        "n_total": n_total,
        "n_selected": n_selected,
        "apm_order": apm_order,
        "batch_size": batch_size,
        "stratified": stratified,
    }
    try:
        values = parse_scenario(spec.read_text(encoding="utf-8")) if spec else {}
        values.update({k: str(v) for k, v in overrides.items() if v is not None})
        experiment = spec_from_values(values)
    except OSError as e:
        raise _fail(str(e), EXIT_FAILURE) from e
    except ValueError as e:
        raise _fail(f"invalid spec: {e}", EXIT_INVALID_SPEC) from e

    if workers < 1:
        raise _fail(f"workers must be >= 1, got {workers}", EXIT_INVALID_SPEC)
    try:
        run_experiment(experiment, workers=workers)
    except OSError as e:
        raise _fail(str(e), EXIT_FAILURE) from e
    except ValueError as e:
        raise _fail(str(e), EXIT_INVALID_SPEC) from e


@app.command("rates")
def rates(
    n_total: int = typer.Option(..., "--n-total", help="Subcarriers per block N_T"),
    n_selected: int = typer.Option(..., "--n-selected", help="Selected subcarriers N_S"),
    apm_order: int = typer.Option(..., "--apm-order", help="PSK order M"),
) -> None:
    """Average adaptive rate against classic OFDM-IM and FPSK."""
    from oim_relay.analytics.rates import rate_summary
    from oim_relay.core.config import SystemConfig
    from oim_relay.reports.render import render_rates_table

    try:
        config = SystemConfig(n_total=n_total, n_selected=n_selected, apm_order=apm_order)
        summary = rate_summary(config)
    except ValueError as e:
        raise _fail(str(e), EXIT_INVALID_SPEC) from e
    render_rates_table(summary)


@app.command("asymptote")
def asymptote(
    n_total: int = typer.Option(..., "--n-total", help="Subcarriers per block N_T"),
    n_selected: int = typer.Option(..., "--n-selected", help="Selected subcarriers N_S"),
    mu1: float = typer.Option(1.0, help="Mean gain of hop 1"),
    mu2: float = typer.Option(1.0, help="Mean gain of hop 2"),
    threshold: float = typer.Option(1.0, help="Outage threshold s (linear)"),
) -> None:
    """Derive the high-SNR outage term symbolically and check it against the closed form."""
    from oim_relay.analytics.asymptotic import AsymptoticMismatch, reconcile_outage_asymptote
    from oim_relay.core.config import Methodology, SystemConfig
    from oim_relay.reports.render import render_asymptote_table

    try:
        config = SystemConfig(
            n_total=n_total,
            n_selected=n_selected,
            apm_order=2,
            mean_gain_hop1=mu1,
            mean_gain_hop2=mu2,
            outage_threshold=threshold,
        )
        terms = [
            reconcile_outage_asymptote(m, config)
            for m in (Methodology.DECENTRALIZED, Methodology.CENTRALIZED)
        ]
    except AsymptoticMismatch as e:
        raise _fail(str(e), EXIT_FAILURE) from e
    except ValueError as e:
        raise _fail(str(e), EXIT_INVALID_SPEC) from e
    render_asymptote_table(terms)


@app.command("critical")
def critical(
    n_total: List[int] = typer.Option(
        ..., "--n-total", help="Subcarriers per block N_T (repeatable)",
    ),
    methodology: Optional[List[str]] = typer.Option(
        None, "--methodology", help="decentralized and/or centralized (default both)",
    ),
    mu1: float = typer.Option(1.0, help="Mean gain of hop 1"),
    mu2: float = typer.Option(1.0, help="Mean gain of hop 2"),
    lo_db: float = typer.Option(-20.0, "--lo-db", help="Lower end of the P_t/N_0 search [dB]"),
    hi_db: float = typer.Option(80.0, "--hi-db", help="Upper end of the P_t/N_0 search [dB]"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the table as CSV"),
) -> None:
    """P_t/N_0 at which the fixed N_T/2 scheme matches adaptive capacity, against N_S."""
    from oim_relay.analytics.critical import ADAPTIVE_METHODOLOGIES, critical_power_table
    from oim_relay.core.config import Methodology, SystemConfig
    from oim_relay.reports.csv_export import write_critical_csv
    from oim_relay.reports.render import render_critical_table

    try:
        methodologies = (
            [Methodology(m) for m in methodology] if methodology else list(ADAPTIVE_METHODOLOGIES)
        )
        if any(m not in ADAPTIVE_METHODOLOGIES for m in methodologies):
            raise ValueError("critical power ratio needs decentralized or centralized")
        if not lo_db < hi_db:
            raise ValueError(f"--lo-db must be below --hi-db, got {lo_db} and {hi_db}")
        base = SystemConfig(
            n_total=n_total[0], n_selected=1, apm_order=2, mean_gain_hop1=mu1, mean_gain_hop2=mu2,
        )
        points = critical_power_table(methodologies, n_total, base, lo_db, hi_db)
    except ValueError as e:
        raise _fail(str(e), EXIT_INVALID_SPEC) from e
    render_critical_table(points)
    if out is not None:
        try:
            path = write_critical_csv(points, out)
        except OSError as e:
            raise _fail(str(e), EXIT_FAILURE) from e
        typer.echo(f"CSV written to {path}")
