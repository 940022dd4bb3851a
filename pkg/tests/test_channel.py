"""Tests for channel sampling and order-statistic distributions."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from oim_relay.channel.fading import (
    ChannelRealization,
    RngStream,
    complex_gains,
    sample_channel_batch,
    sample_realization,
)
from oim_relay.channel.order_stats import (
    link_gain_distribution,
    link_order_stat_cdf,
    link_order_stat_pdf,
    log_order_stat_mgf,
    order_stat_cdf,
    order_stat_pdf,
)
from oim_relay.core.config import SystemConfig
from oim_relay.core.errors import ParameterError

_SAMPLES = 400_000


def _sorted_samples(n_total: int, mu: float, seed: int) -> np.ndarray:
    gen = RngStream(seed=seed).generator()
    return np.sort(gen.exponential(mu, size=(_SAMPLES, n_total)), axis=1)


class TestRngStream:
    def test_same_address_same_stream(self) -> None:
        a = RngStream(seed=5, stream_id=2).generator().standard_normal(8)
        b = RngStream(seed=5, stream_id=2).generator().standard_normal(8)
        np.testing.assert_array_equal(a, b)

    def test_streams_differ(self) -> None:
        a = RngStream(seed=5, stream_id=2).generator().standard_normal(8)
        b = RngStream(seed=5, stream_id=3).generator().standard_normal(8)
        assert not np.array_equal(a, b)

    def test_seed_range(self) -> None:
        with pytest.raises(ValueError):
            RngStream(seed=-1)
        with pytest.raises(ValueError):
            RngStream(seed=2**64)


class TestFading:
    def test_mean_gain(self, rng: np.random.Generator) -> None:
        h = complex_gains(rng, 2.5, 200_000)
        assert np.mean(np.abs(h) ** 2) == pytest.approx(2.5, rel=0.02)

    def test_realization_shapes(self, config_4_2: SystemConfig) -> None:
        r = sample_realization(RngStream(seed=1), config_4_2)
        assert r.hop1.shape == (4,)
        assert r.gains(2).shape == (4,)
        assert np.all(r.gains(1) >= 0)

    def test_realization_read_only(self, realization: ChannelRealization) -> None:
        with pytest.raises(ValueError):
            realization.hop1[0] = 0.0

    def test_hops_independent_means(self, asymmetric_config: SystemConfig) -> None:
        gen = RngStream(seed=3).generator()
        h1, h2 = sample_channel_batch(gen, asymmetric_config, 50_000)
        assert h1.shape == (50_000, 4)
        assert np.mean(np.abs(h1) ** 2) == pytest.approx(2.0, rel=0.02)
        assert np.mean(np.abs(h2) ** 2) == pytest.approx(0.5, rel=0.02)

    def test_bad_hop(self, realization: ChannelRealization) -> None:
        with pytest.raises(ValueError):
            realization.hop(0)


class TestOrderStatistics:
    @pytest.mark.parametrize("xi", [1, 2, 3, 4])
    def test_cdf_against_sorted_samples(self, xi: int) -> None:
        samples = _sorted_samples(4, 1.0, seed=xi)[:, xi - 1]
        for s in (0.1, 0.5, 1.0, 2.0):
            empirical = np.mean(samples <= s)
            exact = order_stat_cdf(xi, s, 4, 1.0)
            se = math.sqrt(max(exact * (1 - exact), 1e-12) / _SAMPLES)
            assert abs(empirical - exact) <= 4 * se + 1e-4

    @pytest.mark.parametrize("xi", [1, 3, 4])
    def test_pdf_integrates_to_cdf(self, xi: int) -> None:
        for s in (0.3, 1.5):
            mass, _ = integrate.quad(lambda u: order_stat_pdf(xi, u, 4, 0.7), 0, s)
            assert mass == pytest.approx(order_stat_cdf(xi, s, 4, 0.7), abs=1e-9)

    def test_cdf_small_argument_is_accurate(self) -> None:
        # Smallest of 4 Exp(1): 1 - exp(-4 s) ~ 4 s
        assert order_stat_cdf(1, 1e-12, 4, 1.0) == pytest.approx(4e-12, rel=1e-6)

    def test_order_range(self) -> None:
        with pytest.raises(ParameterError):
            order_stat_cdf(0, 1.0, 4, 1.0)
        with pytest.raises(ParameterError):
            order_stat_pdf(5, 1.0, 4, 1.0)

    def test_link_gain_is_min_of_hops(self) -> None:
        gen = RngStream(seed=9).generator()
        g = np.minimum(gen.exponential(2.0, _SAMPLES), gen.exponential(0.5, _SAMPLES))
        _, cdf = link_gain_distribution(0.3, 2.0, 0.5)
        assert np.mean(g <= 0.3) == pytest.approx(cdf, abs=4e-3)

    @pytest.mark.parametrize("xi", [2, 4])
    def test_link_order_stat_against_samples(self, xi: int) -> None:
        gen = RngStream(seed=11).generator()
        link = np.minimum(
            gen.exponential(2.0, (_SAMPLES, 4)), gen.exponential(0.5, (_SAMPLES, 4)),
        )
        kth = np.sort(link, axis=1)[:, xi - 1]
        exact = link_order_stat_cdf(xi, 0.4, 4, 2.0, 0.5)
        se = math.sqrt(exact * (1 - exact) / _SAMPLES)
        assert abs(np.mean(kth <= 0.4) - exact) <= 4 * se + 1e-4
        mass, _ = integrate.quad(lambda u: link_order_stat_pdf(xi, u, 4, 2.0, 0.5), 0, 0.4)
        assert mass == pytest.approx(exact, abs=1e-9)


class TestOrderStatMgf:
    @pytest.mark.parametrize("xi", [1, 2, 4])
    @pytest.mark.parametrize("t", [0.1, 3.0])
    def test_against_quadrature(self, xi: int, t: float) -> None:
        mu = 1.3
        value, _ = integrate.quad(
            lambda u: math.exp(-t * u) * order_stat_pdf(xi, u, 4, mu), 0, math.inf,
        )
        assert math.exp(log_order_stat_mgf(xi, t, 4, mu)) == pytest.approx(value, rel=1e-7)

    def test_unsorted(self) -> None:
        assert math.exp(log_order_stat_mgf(None, 2.0, 4, 0.5)) == pytest.approx(0.5)

    def test_zero_argument(self) -> None:
        assert log_order_stat_mgf(3, 0.0, 4, 1.0) == pytest.approx(0.0, abs=1e-12)
