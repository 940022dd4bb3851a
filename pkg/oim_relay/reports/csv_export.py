"""Schema-stable CSV writers for sweep curves, rate benchmarks and critical power ratios.

Floats are written with ``repr`` (shortest round-trip form) and missing
values as empty fields, so reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from pathlib import Path

from oim_relay.analytics.critical import CriticalPoint
from oim_relay.analytics.rates import RateSummary
from oim_relay.montecarlo.sweep import SweepRow

SWEEP_HEADER = (
    "snr_db",
    "methodology",
    "metric",
    "mc_mean",
    "mc_stderr",
    "analytic",
    "asymptotic",
)
RATES_HEADER = (
    "n_total",
    "n_selected",
    "apm_order",
    "rate_adaptive",
    "rate_classic",
    "rate_fpsk",
)
CRITICAL_HEADER = (
    "n_total",
    "n_selected",
    "methodology",
    "critical_snr_db",
)


def format_float(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def sweep_record(row: SweepRow) -> tuple[str, ...]:
    return (
        format_float(row.snr_db),
        row.methodology.value,
        row.metric.value,
        format_float(row.estimate.mean),
        format_float(row.estimate.std_error),
        format_float(None if row.analytic is None else row.analytic.value),
        format_float(None if row.asymptotic is None else row.asymptotic.value),
    )


def rates_record(summary: RateSummary) -> tuple[str, ...]:
    return (
        str(summary.n_total),
        str(summary.n_selected),
        str(summary.apm_order),
        format_float(summary.adaptive),
        format_float(summary.classic),
        format_float(summary.fpsk),
    )


def critical_record(point: CriticalPoint) -> tuple[str, ...]:
    return (
        str(point.n_total),
        str(point.n_selected),
        point.methodology.value,
        format_float(point.snr_db),
    )


def _write(path: Path, header: Sequence[str], records: Iterable[Sequence[str]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(records)
    return path


def write_sweep_csv(rows: Sequence[SweepRow], path: str | Path) -> Path:
    return _write(Path(path), SWEEP_HEADER, (sweep_record(r) for r in rows))


def write_rates_csv(summaries: Sequence[RateSummary], path: str | Path) -> Path:
    return _write(Path(path), RATES_HEADER, (rates_record(s) for s in summaries))


def write_critical_csv(points: Sequence[CriticalPoint], path: str | Path) -> Path:
    return _write(Path(path), CRITICAL_HEADER, (critical_record(p) for p in points))
