"""Tests for SNR sweeps and their analytic companions."""

from __future__ import annotations

import pytest

from oim_relay.core.config import Methodology, Metric, SystemConfig
from oim_relay.core.errors import ParameterError
from oim_relay.core.results import CurveKind
from oim_relay.montecarlo.engine import run_metric
from oim_relay.montecarlo.sweep import SweepRow, analytic_point, asymptotic_point, point_seed, sweep

METHODS = (Methodology.DECENTRALIZED, Methodology.CENTRALIZED)


class TestPointSeed:
    def test_deterministic(self) -> None:
        assert point_seed(7, 3) == point_seed(7, 3)

    def test_distinct_per_point_and_seed(self) -> None:
        seeds = {point_seed(7, i) for i in range(50)} | {point_seed(8, 0)}
        assert len(seeds) == 51

    def test_fits_uint64(self) -> None:
        assert 0 <= point_seed(2**64 - 1, 10) < 2**64


class TestSweep:
    def test_rows_ordered_by_point_then_methodology(self, config_4_2: SystemConfig) -> None:
        seen: list[SweepRow] = []
        rows = sweep(
            config_4_2, Metric.OUTAGE, METHODS, [0.0, 10.0, 20.0], trials=1_000, seed=1,
            on_row=seen.append,
        )
        assert len(rows) == 6
        assert seen == rows
        assert [(r.snr_db, r.methodology) for r in rows] == [
            (db, m) for db in (0.0, 10.0, 20.0) for m in METHODS
        ]

    def test_point_config_and_curves(self, config_4_2: SystemConfig) -> None:
        (row,) = sweep(config_4_2, Metric.OUTAGE, [Methodology.NONE], [10.0], 1_000, seed=1)
        assert row.estimate.config.snr_tx == pytest.approx(10.0)
        assert row.analytic is not None and row.analytic.kind == CurveKind.OUTAGE_EXACT
        assert row.asymptotic is not None and row.asymptotic.kind == CurveKind.OUTAGE_ASYMPTOTIC

    def test_methodologies_share_point_seed(self, config_4_2: SystemConfig) -> None:
        rows = sweep(config_4_2, Metric.CAPACITY, METHODS, [0.0, 5.0], 1_000, seed=42)
        point = config_4_2.with_snr_db(5.0)
        for row in rows[2:]:
            tally = run_metric(
                Metric.CAPACITY, point, row.methodology, 1_000, point_seed(42, 1),
            )
            assert row.estimate.mean == tally.mean

    def test_capacity_has_no_asymptote(self, config_4_2: SystemConfig) -> None:
        (row,) = sweep(config_4_2, Metric.CAPACITY, [Methodology.FPSK], [10.0], 1_000, seed=0)
        assert row.analytic is not None and row.analytic.kind == CurveKind.CAPACITY
        assert row.asymptotic is None


class TestAnalyticPoint:
    def test_rates_have_no_curve(self, config_4_2: SystemConfig) -> None:
        with pytest.raises(ParameterError):
            analytic_point(Metric.RATES, Methodology.DECENTRALIZED, config_4_2)
        assert asymptotic_point(Metric.SER, Methodology.DECENTRALIZED, config_4_2) is None

    def test_intractable_forms_are_skipped(self) -> None:
        config = SystemConfig(n_total=8, n_selected=7, apm_order=2)
        assert analytic_point(Metric.CAPACITY, Methodology.DECENTRALIZED, config) is None
        assert analytic_point(Metric.SER, Methodology.CENTRALIZED, config) is None

    def test_ser_clipping_is_reported(self, config_4_2: SystemConfig) -> None:
        point = analytic_point(
            Metric.SER, Methodology.DECENTRALIZED, config_4_2.with_updates(snr_tx=0.01),
        )
        assert point is not None
        assert point.clipped
        assert point.value <= 1.0
