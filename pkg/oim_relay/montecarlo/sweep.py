"""SNR sweeps: Monte Carlo estimates next to the matching closed forms.

Every grid point gets its own seed derived from the run seed and the
point index.  All methodologies at a point share it, so their curves are
compared on common random channels.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from oim_relay.analytics.capacity import capacity_average
from oim_relay.analytics.outage import outage_asymptotic, outage_average
from oim_relay.analytics.ser import ser_union_bound
from oim_relay.core.config import Methodology, Metric, SystemConfig
from oim_relay.core.errors import IntractableError, ParameterError
from oim_relay.core.results import AnalyticCurvePoint, CurveKind, MetricEstimate
from oim_relay.montecarlo.engine import DEFAULT_BATCH_SIZE, run_metric


@dataclass(frozen=True)
class SweepRow:
    snr_db: float
    methodology: Methodology
    metric: Metric
    estimate: MetricEstimate
    analytic: AnalyticCurvePoint | None
    asymptotic: AnalyticCurvePoint | None


def point_seed(seed: int, point_index: int) -> int:
    """Independent 64-bit seed for grid point ``point_index``."""
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(point_index,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def analytic_point(
    metric: Metric, methodology: Methodology, config: SystemConfig,
) -> AnalyticCurvePoint | None:
    """Closed-form value at ``config.snr_tx``; None when no tractable form exists."""
    if metric == Metric.OUTAGE:
        value = outage_average(methodology, config.outage_threshold, config)
        return AnalyticCurvePoint(snr_tx=config.snr_tx, value=value, kind=CurveKind.OUTAGE_EXACT)
    if metric == Metric.CAPACITY:
        try:
            value = capacity_average(methodology, config)
        except IntractableError:
            return None
        return AnalyticCurvePoint(snr_tx=config.snr_tx, value=value, kind=CurveKind.CAPACITY)
    if metric == Metric.SER:
        try:
            value, clipped = ser_union_bound(methodology, config)
        except IntractableError:
            return None
        return AnalyticCurvePoint(
            snr_tx=config.snr_tx, value=value, kind=CurveKind.SER_APPROX, clipped=clipped,
        )
    raise ParameterError(f"metric {metric.value} has no SNR curve")


def asymptotic_point(
    metric: Metric, methodology: Methodology, config: SystemConfig,
) -> AnalyticCurvePoint | None:
    if metric != Metric.OUTAGE:
        return None
    value = outage_asymptotic(methodology, config.outage_threshold, config)
    return AnalyticCurvePoint(
        snr_tx=config.snr_tx, value=value, kind=CurveKind.OUTAGE_ASYMPTOTIC,
    )


def sweep(
    config: SystemConfig,
    metric: Metric,
    methodologies: Sequence[Methodology],
    snr_db_grid: Sequence[float],
    trials: int,
    seed: int,
    *,
    workers: int = 1,
    batch_size: int = DEFAULT_BATCH_SIZE,
    stratified: bool = False,
    on_row: Callable[[SweepRow], None] | None = None,
) -> list[SweepRow]:
    """Rows ordered by grid point, then by methodology as given."""
    rows: list[SweepRow] = []
    for index, snr_db in enumerate(snr_db_grid):
        point = config.with_snr_db(snr_db)
        seed_here = point_seed(seed, index)
        for methodology in methodologies:
            tally = run_metric(
                metric, point, methodology, trials, seed_here,
                workers=workers, batch_size=batch_size, stratified=stratified,
            )
            estimate = MetricEstimate(
                mean=tally.mean,
                std_error=tally.std_error,
                trials=tally.trials,
                metric=metric,
                methodology=methodology,
                config=point,
            )
            row = SweepRow(
                snr_db=float(snr_db),
                methodology=methodology,
                metric=metric,
                estimate=estimate,
                analytic=analytic_point(metric, methodology, point),
                asymptotic=asymptotic_point(metric, methodology, point),
            )
            rows.append(row)
            if on_row is not None:
                on_row(row)
    return rows
