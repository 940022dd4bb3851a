"""Rich console rendering for sweeps, rates, outage asymptotes and critical power ratios."""

from __future__ import annotations

from collections.abc import Sequence

from rich.console import Console
from rich.table import Table

from oim_relay.analytics.asymptotic import OutageLeadingTerm
from oim_relay.analytics.critical import CriticalPoint
from oim_relay.analytics.rates import RateSummary
from oim_relay.montecarlo.sweep import SweepRow


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.4e}"


def gridpoint_line(row: SweepRow) -> str:
    """One-line progress entry for a finished (grid point, methodology) pair."""
    est = row.estimate
    line = (
        f"{row.snr_db:6.2f} dB  {row.methodology.value:<13} {row.metric.value}: "
        f"mc={est.mean:.4e} +/- {est.std_error:.1e}"
    )
    if row.analytic is not None:
        line += f"  analytic={row.analytic.value:.4e}"
        if row.analytic.clipped:
            line += " [yellow](clipped)[/yellow]"
    if row.asymptotic is not None:
        line += f"  asymptote={row.asymptotic.value:.4e}"
    return line


def render_sweep_table(rows: Sequence[SweepRow], console: Console | None = None) -> None:
    """Print MC estimates against the closed forms, flagging > 3 SE gaps."""
    if console is None:
        console = Console()
    if not rows:
        return

    table = Table(title=f"{rows[0].metric.value} sweep")
    table.add_column("SNR [dB]", justify="right", style="cyan")
    table.add_column("Methodology")
    table.add_column("MC mean", justify="right")
    table.add_column("MC SE", justify="right", style="dim")
    table.add_column("Analytic", justify="right")
    table.add_column("Asymptote", justify="right", style="dim")

    for row in rows:
        analytic = None if row.analytic is None else row.analytic.value
        style = None
        if analytic is not None and not row.estimate.within(analytic, 3.0):
            style = "yellow"
        table.add_row(
            f"{row.snr_db:.2f}",
            row.methodology.value,
            _fmt(row.estimate.mean),
            _fmt(row.estimate.std_error),
            _fmt(analytic),
            _fmt(None if row.asymptotic is None else row.asymptotic.value),
            style=style,
        )
    console.print(table)


def render_rates_table(summary: RateSummary, console: Console | None = None) -> None:
    if console is None:
        console = Console()
    table = Table(
        title=f"Rates for N_T={summary.n_total}, N_S={summary.n_selected}, M={summary.apm_order}"
    )
    table.add_column("Scheme")
    table.add_column("bpcu", justify="right", style="green")
    table.add_row("adaptive dual-mode", f"{summary.adaptive:g}")
    table.add_row("classic OFDM-IM", f"{summary.classic:g}")
    table.add_row("FPSK", f"{summary.fpsk:g}")
    console.print(table)


def render_asymptote_table(
    terms: Sequence[OutageLeadingTerm], console: Console | None = None,
) -> None:
    if console is None:
        console = Console()
    table = Table(title="High-SNR outage: P_o ~ c (N_0 / P_t)^d")
    table.add_column("Methodology")
    table.add_column("d", justify="right", style="cyan")
    table.add_column("c (exact)", justify="right")
    table.add_column("c", justify="right", style="dim")
    for term in terms:
        table.add_row(
            term.methodology.value,
            str(term.order),
            str(term.coefficient),
            f"{float(term.coefficient):.6g}",
        )
    console.print(table)


def render_critical_table(
    points: Sequence[CriticalPoint], console: Console | None = None,
) -> None:
    """Critical power ratio per (N_T, N_S, methodology); '-' where the curves never cross."""
    if console is None:
        console = Console()
    table = Table(title="Critical power ratio (fixed N_T/2 scheme vs adaptive)")
    table.add_column("N_T", justify="right", style="cyan")
    table.add_column("N_S", justify="right", style="cyan")
    table.add_column("Methodology")
    table.add_column("P_t/N_0 [dB]", justify="right", style="green")
    for point in points:
        table.add_row(
            str(point.n_total),
            str(point.n_selected),
            point.methodology.value,
            "-" if point.snr_db is None else f"{point.snr_db:.2f}",
        )
    console.print(table)
