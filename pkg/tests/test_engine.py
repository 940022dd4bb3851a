"""Tests for the batched Monte Carlo engine and strict trial records."""

from __future__ import annotations

import math
from collections import Counter

import pytest

from oim_relay.analytics.outage import outage_average
from oim_relay.core.blocks import MappingScheme
from oim_relay.core.config import Methodology, Metric, SystemConfig
from oim_relay.core.errors import ParameterError
from oim_relay.montecarlo.engine import (
    BatchTally,
    _batch_sizes,
    run_capacity,
    run_metric,
    run_outage,
    run_ser_detailed,
    simulate_batch,
)
from oim_relay.montecarlo.records import TrialRecord, check_trial_record


def _same_tally(a: BatchTally, b: BatchTally) -> bool:
    return (a.trials, a.total, a.total_sq, a.hop1_events, a.hop2_events) == (
        b.trials, b.total, b.total_sq, b.hop1_events, b.hop2_events,
    )


class TestTally:
    def test_merge(self) -> None:
        a = BatchTally(trials=2, total=1.0, total_sq=1.0, hop1_events=1)
        b = BatchTally(trials=3, total=2.0, total_sq=2.0, hop2_events=2)
        merged = a.merge(b)
        assert merged.trials == 5
        assert merged.mean == pytest.approx(0.6)
        assert (merged.hop1_events, merged.hop2_events) == (1, 2)

    def test_binomial_standard_error(self) -> None:
        tally = BatchTally(trials=1000, total=250.0, total_sq=250.0)
        assert tally.std_error == pytest.approx(math.sqrt(0.25 * 0.75 / 1000))

    def test_batch_partition(self) -> None:
        assert _batch_sizes(25, 10) == [10, 10, 5]
        assert _batch_sizes(20, 10) == [10, 10]
        assert _batch_sizes(3, 10) == [3]


class TestReproducibility:
    def test_same_seed_same_estimate(self, config_4_2: SystemConfig) -> None:
        a = run_metric(Metric.CAPACITY, config_4_2, Methodology.DECENTRALIZED, 5000, seed=3)
        b = run_metric(Metric.CAPACITY, config_4_2, Methodology.DECENTRALIZED, 5000, seed=3)
        c = run_metric(Metric.CAPACITY, config_4_2, Methodology.DECENTRALIZED, 5000, seed=4)
        assert _same_tally(a, b)
        assert not _same_tally(a, c)

    def test_worker_count_does_not_matter(self, config_4_2: SystemConfig) -> None:
        kwargs = dict(trials=12_000, seed=11, batch_size=2_000)
        serial = run_metric(Metric.SER, config_4_2, Methodology.CENTRALIZED, workers=1, **kwargs)
        parallel = run_metric(Metric.SER, config_4_2, Methodology.CENTRALIZED, workers=3, **kwargs)
        assert _same_tally(serial, parallel)

    def test_trailing_partial_batch(self, config_4_2: SystemConfig) -> None:
        config = config_4_2.with_snr_db(5.0)
        tally = run_metric(
            Metric.OUTAGE, config, Methodology.NONE, 2_500, seed=1, batch_size=1_000,
        )
        by_hand = BatchTally()
        for batch_id, size in enumerate((1_000, 1_000, 500)):
            by_hand = by_hand.merge(simulate_batch(
                batch_id, size, metric=Metric.OUTAGE, methodology=Methodology.NONE,
                config=config, seed=1, batch_size=1_000,
            ))
        assert tally.trials == 2_500
        assert _same_tally(tally, by_hand)

    def test_tiny_threshold_never_in_outage(self, config_4_2: SystemConfig) -> None:
        config = config_4_2.with_updates(outage_threshold=1e-12)
        for m in Methodology:
            assert run_metric(Metric.OUTAGE, config, m, 1_000, seed=2).total == 0.0


class TestOutageEstimates:
    @pytest.mark.parametrize("methodology", list(Methodology))
    def test_matches_closed_form(self, methodology: Methodology, config_4_2: SystemConfig) -> None:
        config = config_4_2.with_snr_db(10.0)
        estimate = run_outage(config, methodology, trials=200_000, seed=99)
        exact = outage_average(methodology, config.outage_threshold, config)
        assert estimate.within(exact, n_sigma=4.0)

    @pytest.mark.slow
    @pytest.mark.parametrize(("n_total", "n_selected"), [(4, 1), (4, 3), (8, 4)])
    @pytest.mark.parametrize("methodology", [Methodology.DECENTRALIZED, Methodology.CENTRALIZED])
    @pytest.mark.parametrize("snr_db", [10.0, 20.0])
    def test_matches_closed_form_across_configs(
        self, n_total: int, n_selected: int, methodology: Methodology, snr_db: float,
    ) -> None:
        config = SystemConfig(n_total=n_total, n_selected=n_selected, apm_order=2).with_snr_db(snr_db)
        trials = 400_000
        estimate = run_outage(config, methodology, trials=trials, seed=123)
        exact = outage_average(methodology, 1.0, config)
        assert estimate.within(exact, n_sigma=4.0, floor=3.0 / trials)

    def test_stratified_matches_closed_form(self, config_8_4: SystemConfig) -> None:
        config = config_8_4.with_snr_db(5.0)
        estimate = run_outage(
            config, Methodology.DECENTRALIZED, trials=100_000, seed=5, stratified=True,
        )
        exact = outage_average(Methodology.DECENTRALIZED, 1.0, config)
        assert estimate.within(exact, n_sigma=4.0)


class TestSer:
    @pytest.mark.parametrize("methodology", list(Methodology))
    def test_noiseless_link_is_error_free(
        self, methodology: Methodology, quiet_config: SystemConfig,
    ) -> None:
        config = quiet_config.with_updates(snr_tx=1e12)
        result = run_ser_detailed(config, methodology, trials=5_000, seed=8)
        assert result.estimate.mean == 0.0
        assert result.relay_error_rate == 0.0
        assert result.second_hop_error_rate == 0.0

    def test_end_to_end_bounded_by_hops(self, config_4_2: SystemConfig) -> None:
        config = config_4_2.with_snr_db(5.0)
        result = run_ser_detailed(config, Methodology.DECENTRALIZED, trials=20_000, seed=9)
        p = result.estimate.mean
        assert p > 0
        assert p <= result.relay_error_rate + result.second_hop_error_rate + 1e-12


class TestStrictMode:
    @pytest.mark.parametrize("metric", [Metric.OUTAGE, Metric.CAPACITY, Metric.SER])
    @pytest.mark.parametrize("methodology", list(Methodology))
    def test_records_satisfy_protocol(
        self, metric: Metric, methodology: Methodology, config_8_4: SystemConfig,
    ) -> None:
        tally = run_metric(
            metric, config_8_4, methodology, 1_500, seed=13, batch_size=500, strict=True,
        )
        assert len(tally.records) == 1_500
        assert [r.trial for r in tally.records] == list(range(1_500))

    def test_stratified_patterns_are_balanced(self, config_4_2: SystemConfig) -> None:
        tally = run_metric(
            Metric.OUTAGE, config_4_2, Methodology.DECENTRALIZED, 4_000, seed=1,
            batch_size=1_000, stratified=True, strict=True,
        )
        assert Counter(r.index_k for r in tally.records) == {1: 1000, 2: 1000, 3: 1000, 4: 1000}

    def test_records_not_kept_by_default(self, config_4_2: SystemConfig) -> None:
        tally = run_metric(Metric.OUTAGE, config_4_2, Methodology.NONE, 100, seed=1)
        assert tally.records == ()


class TestArguments:
    def test_rejects_bad_arguments(self, config_4_2: SystemConfig) -> None:
        with pytest.raises(ParameterError):
            run_metric(Metric.RATES, config_4_2, Methodology.NONE, 10, seed=0)
        with pytest.raises(ParameterError):
            run_metric(Metric.OUTAGE, config_4_2, Methodology.NONE, 0, seed=0)
        with pytest.raises(ParameterError):
            run_metric(Metric.OUTAGE, config_4_2, Methodology.NONE, 10, seed=0, batch_size=0)
        with pytest.raises(ParameterError):
            run_metric(Metric.OUTAGE, config_4_2, Methodology.NONE, 10, seed=0, workers=0)


def _record(**changes: object) -> TrialRecord:
    scheme = MappingScheme(selected=(1, 2), complementary=3)
    base = dict(
        trial=0,
        index_k=2,
        index_weight=1,
        scheme_hop1=scheme,
        scheme_hop2=scheme,
        active_hop1=(1,),
        active_hop2=(1,),
        outage_hop1=False,
        outage_hop2=False,
        capacity=1.0,
    )
    base.update(changes)
    return TrialRecord(**base)  # type: ignore[arg-type]


class TestRecordChecks:
    def test_valid_record(self, config_4_2: SystemConfig) -> None:
        assert check_trial_record(_record(), Methodology.CENTRALIZED, config_4_2) == []

    def test_active_outside_selected(self, config_4_2: SystemConfig) -> None:
        bad = _record(active_hop1=(4,))
        assert any("outside selected" in v for v in check_trial_record(
            bad, Methodology.DECENTRALIZED, config_4_2,
        ))

    def test_complementary_mode_slot(self, config_4_2: SystemConfig) -> None:
        bad = _record(index_k=1, index_weight=0, active_hop1=(1,), active_hop2=(3,))
        violations = check_trial_record(bad, Methodology.DECENTRALIZED, config_4_2)
        assert len(violations) == 1
        assert "complementary mode" in violations[0]

    def test_centralized_needs_shared_scheme(self, config_4_2: SystemConfig) -> None:
        other = MappingScheme(selected=(1, 4), complementary=2)
        bad = _record(scheme_hop2=other)
        assert check_trial_record(bad, Methodology.DECENTRALIZED, config_4_2) == []
        assert check_trial_record(bad, Methodology.CENTRALIZED, config_4_2)

    def test_fpsk_single_shared_subcarrier(self, config_4_2: SystemConfig) -> None:
        bad = _record(scheme_hop1=None, scheme_hop2=None, active_hop1=(1, 2), active_hop2=(1, 3))
        violations = check_trial_record(bad, Methodology.FPSK, config_4_2)
        assert len(violations) == 2

    def test_negative_capacity(self, config_4_2: SystemConfig) -> None:
        assert check_trial_record(_record(capacity=-0.5), Methodology.NONE, config_4_2)


class TestManySelectedSubcarriers:
    @pytest.mark.parametrize("methodology", list(Methodology))
    def test_outage_and_capacity_run_without_codebook(self, methodology: Methodology) -> None:
        config = SystemConfig(n_total=16, n_selected=12, apm_order=2).with_snr_db(30.0)
        trials = 20_000
        outage = run_outage(config, methodology, trials=trials, seed=31)
        exact = outage_average(methodology, 1.0, config)
        assert outage.within(exact, n_sigma=4.0, floor=3.0 / trials)
        capacity = run_capacity(config, methodology, trials=2_000, seed=32)
        assert 0.0 < capacity.mean < math.inf


class TestFixedSchemeBaseline:
    def test_uses_half_the_subcarriers(self) -> None:
        narrow = SystemConfig(n_total=8, n_selected=2, apm_order=2)
        tally = run_metric(
            Metric.OUTAGE, narrow, Methodology.NONE, 600, seed=17, batch_size=200, strict=True,
        )
        assert {r.scheme_hop1.selected for r in tally.records} == {(1, 2, 3, 4)}
        assert all(len(r.active_hop1) <= 4 for r in tally.records)

    def test_estimate_ignores_adaptive_selection_count(self) -> None:
        narrow = SystemConfig(n_total=4, n_selected=1, apm_order=2).with_snr_db(10.0)
        estimate = run_outage(narrow, Methodology.NONE, trials=200_000, seed=18)
        exact = outage_average(Methodology.NONE, 1.0, narrow.with_updates(n_selected=2))
        assert estimate.within(exact, n_sigma=4.0)
