"""Tests for order-assignment combinatorics and the outage closed forms."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from oim_relay.analytics.combinatorics import (
    OrderAssignment,
    complementary_order,
    order_assignments,
    selected_orders,
    symbol_count_weights,
    upsilon,
    upsilon_exact,
    upsilon_support,
)
from oim_relay.analytics.outage import (
    fixed_scheme_weight,
    outage_asymptotic,
    outage_average,
    outage_conditional,
    outage_conditional_centralized,
    outage_conditional_decentralized,
)
from oim_relay.channel.order_stats import order_stat_cdf
from oim_relay.core.config import Methodology, SystemConfig
from oim_relay.core.errors import ParameterError
from oim_relay.core.patterns import enumerate_patterns, pattern_from_bits, pattern_from_index

ADAPTIVE = (Methodology.DECENTRALIZED, Methodology.CENTRALIZED)
CONFIGS = [(4, 1), (4, 2), (4, 3), (8, 4)]


def _config(n_total: int, n_selected: int, snr_db: float = 20.0) -> SystemConfig:
    return SystemConfig(
        n_total=n_total, n_selected=n_selected, apm_order=2, snr_tx=10 ** (snr_db / 10),
    )


class TestUpsilon:
    @pytest.mark.parametrize("n_total", [2, 4, 8])
    def test_normalized(self, n_total: int) -> None:
        for n_selected in range(1, min(n_total, 9)):
            config = SystemConfig(n_total=n_total, n_selected=n_selected, apm_order=2)
            for k in enumerate_patterns(n_selected)[1:]:
                total = sum(upsilon_exact(k, xi, config) for xi in upsilon_support(k, config))
                assert total == Fraction(1)

    def test_single_active_is_uniform(self, config_8_4: SystemConfig) -> None:
        k = pattern_from_bits((0, 0, 1, 0))
        values = [upsilon(k, xi, config_8_4) for xi in upsilon_support(k, config_8_4)]
        assert values == pytest.approx([0.25] * 4)

    def test_all_active_pins_weakest_selected(self, config_4_2: SystemConfig) -> None:
        k = pattern_from_bits((1, 1))
        assert list(upsilon_support(k, config_4_2)) == [3]
        assert upsilon(k, 3, config_4_2) == 1.0

    def test_against_random_subsets(self, config_8_4: SystemConfig) -> None:
        gen = np.random.default_rng(0)
        k = pattern_from_bits((1, 0, 1, 0))
        # Selected orders 5..8 in random relative positions; the weakest active order.
        perms = np.argsort(gen.random((200_000, 4)), axis=1) + 5
        weakest = np.minimum(perms[:, 0], perms[:, 2])
        for xi in upsilon_support(k, config_8_4):
            assert np.mean(weakest == xi) == pytest.approx(upsilon(k, xi, config_8_4), abs=5e-3)

    def test_complementary_rejected(self, config_4_2: SystemConfig) -> None:
        with pytest.raises(ParameterError):
            upsilon(pattern_from_index(1, 2), 3, config_4_2)

    def test_outside_support_rejected(self, config_4_2: SystemConfig) -> None:
        with pytest.raises(ParameterError):
            upsilon(pattern_from_bits((1, 0)), 2, config_4_2)


class TestOrders:
    def test_orders(self, config_8_4: SystemConfig) -> None:
        assert selected_orders(config_8_4) == (5, 6, 7, 8)
        assert complementary_order(config_8_4) == 4

    def test_assignments(self, config_4_2: SystemConfig) -> None:
        assignments = order_assignments(2, config_4_2)
        assert len(assignments) == 2
        assert {a.orders for a in assignments} == {(3, 4), (4, 3)}

    def test_assignment_validation(self, config_4_2: SystemConfig) -> None:
        with pytest.raises(ValueError):
            OrderAssignment(orders=(3, 3))
        with pytest.raises(ParameterError):
            OrderAssignment(orders=(2, 3)).check_against(config_4_2)


class TestConditionalOutage:
    def test_complementary_uses_order_below_selected(self, config_4_2: SystemConfig) -> None:
        k = pattern_from_index(1, 2)
        expected = order_stat_cdf(2, 1.0 / config_4_2.snr_tx, 4, 1.0)
        assert outage_conditional_decentralized(k, 1.0, 1, config_4_2) == pytest.approx(expected)

    def test_power_split_scales_threshold(self, config_4_2: SystemConfig) -> None:
        k = pattern_from_bits((1, 1))
        expected = order_stat_cdf(3, 2.0 / config_4_2.snr_tx, 4, config_4_2.link_mean_gain)
        assert outage_conditional_centralized(k, 1.0, config_4_2) == pytest.approx(expected)

    def test_hops_combine_as_union(self, asymmetric_config: SystemConfig) -> None:
        k = pattern_from_bits((1, 0))
        p1 = outage_conditional_decentralized(k, 1.0, 1, asymmetric_config)
        p2 = outage_conditional_decentralized(k, 1.0, 2, asymmetric_config)
        total = outage_conditional(Methodology.DECENTRALIZED, k, 1.0, asymmetric_config)
        assert total == pytest.approx(p1 + p2 - p1 * p2)

    def test_negative_threshold(self, config_4_2: SystemConfig) -> None:
        with pytest.raises(ParameterError):
            outage_conditional_centralized(pattern_from_bits((1, 0)), -1.0, config_4_2)

    def test_fpsk_has_no_patterns(self, config_4_2: SystemConfig) -> None:
        with pytest.raises(ParameterError):
            outage_conditional(Methodology.FPSK, pattern_from_bits((1, 0)), 1.0, config_4_2)


class TestAverageOutage:
    def test_vanishes_at_zero_threshold(self, config_4_2: SystemConfig) -> None:
        for m in Methodology:
            assert outage_average(m, 0.0, config_4_2) == pytest.approx(0.0, abs=1e-15)

    def test_monotone_in_snr(self) -> None:
        for m in Methodology:
            values = [outage_average(m, 1.0, _config(4, 2, db)) for db in range(0, 45, 5)]
            assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize(("n_total", "n_selected"), CONFIGS)
    @pytest.mark.parametrize("methodology", ADAPTIVE)
    def test_diversity_slope(self, n_total: int, n_selected: int, methodology: Methodology) -> None:
        p50 = outage_average(methodology, 1.0, _config(n_total, n_selected, 50.0))
        p60 = outage_average(methodology, 1.0, _config(n_total, n_selected, 60.0))
        slope = (math.log10(p60) - math.log10(p50)) / 1.0
        assert slope == pytest.approx(-(n_total - n_selected), abs=0.1)

    @pytest.mark.parametrize(("n_total", "n_selected"), CONFIGS)
    @pytest.mark.parametrize("methodology", list(Methodology))
    def test_asymptote_converges(
        self, n_total: int, n_selected: int, methodology: Methodology,
    ) -> None:
        config = _config(n_total, n_selected, 60.0)
        ratio = outage_asymptotic(methodology, 1.0, config) / outage_average(methodology, 1.0, config)
        assert 0.95 <= ratio <= 1.05

    @pytest.mark.parametrize("snr_db", [20.0, 30.0, 40.0])
    def test_decentralized_beats_centralized(self, snr_db: float) -> None:
        config = _config(4, 2, snr_db)
        dec = outage_average(Methodology.DECENTRALIZED, 1.0, config)
        cent = outage_average(Methodology.CENTRALIZED, 1.0, config)
        assert dec <= cent

    @pytest.mark.parametrize(("n_total", "n_selected"), CONFIGS)
    def test_adaptation_beats_fixed_scheme(self, n_total: int, n_selected: int) -> None:
        config = _config(n_total, n_selected, 30.0)
        fixed = outage_average(Methodology.NONE, 1.0, config)
        for m in ADAPTIVE:
            assert outage_average(m, 1.0, config) < fixed

    def test_fixed_scheme_weight(self) -> None:
        for n_selected in range(1, 7):
            brute = 1 + sum(k.n_active**2 for k in enumerate_patterns(n_selected))
            assert fixed_scheme_weight(n_selected) == brute

    def test_fpsk_is_single_link(self, asymmetric_config: SystemConfig) -> None:
        x = 1.0 / asymmetric_config.snr_tx
        expected = 1 - math.exp(-x / asymmetric_config.link_mean_gain)
        assert outage_average(Methodology.FPSK, 1.0, asymmetric_config) == pytest.approx(expected)


class TestFixedSchemeBaseline:
    @pytest.mark.parametrize("n_selected", [1, 3])
    def test_ignores_adaptive_selection_count(self, n_selected: int) -> None:
        narrow = _config(4, n_selected, 20.0)
        half = _config(4, 2, 20.0)
        assert outage_average(Methodology.NONE, 1.0, narrow) == pytest.approx(
            outage_average(Methodology.NONE, 1.0, half), rel=1e-14,
        )

    @pytest.mark.parametrize("n_total", [4, 8, 16])
    def test_symbol_counts_match_pattern_average(self, n_total: int) -> None:
        config = _config(n_total, n_total // 2, 15.0)
        patterns = enumerate_patterns(n_total // 2)
        brute = sum(outage_conditional(Methodology.NONE, k, 1.0, config) for k in patterns)
        assert outage_average(Methodology.NONE, 1.0, config) == pytest.approx(
            brute / len(patterns), rel=1e-12,
        )

    def test_symbol_count_weights_cover_all_patterns(self) -> None:
        for n_selected in range(1, 9):
            weights = symbol_count_weights(n_selected)
            assert sum(count for _, count in weights) == 2**n_selected
            by_count: dict[int, int] = {}
            for k in enumerate_patterns(n_selected):
                by_count[k.n_symbols] = by_count.get(k.n_symbols, 0) + 1
            merged: dict[int, int] = {}
            for n_sym, count in weights:
                merged[n_sym] = merged.get(n_sym, 0) + count
            assert merged == by_count

    def test_large_subcarrier_count(self) -> None:
        config = _config(64, 4, 30.0)
        value = outage_average(Methodology.NONE, 1.0, config)
        assert 0.0 < value < 1.0
