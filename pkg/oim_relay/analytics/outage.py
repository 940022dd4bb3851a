"""Exact and high-SNR outage probability.

An outage occurs when any active subcarrier on either hop falls below the
threshold s.  With power split evenly over N_A(k) active subcarriers the
per-hop outage for pattern k > 1 is governed by the weakest active order
statistic; the all-zero pattern puts full power on the complementary
subcarrier, order N_T - N_S.
"""

from __future__ import annotations

import math

from oim_relay.analytics.combinatorics import (
    complementary_order,
    symbol_count_weights,
    upsilon,
    upsilon_support,
)
from oim_relay.channel.order_stats import exponential_cdf, order_stat_cdf
from oim_relay.core.config import Methodology, SystemConfig
from oim_relay.core.errors import ParameterError
from oim_relay.core.patterns import ActivationPattern, enumerate_patterns


def _sorted_outage(k_pattern: ActivationPattern, s: float, mu: float, config: SystemConfig) -> float:
    if s < 0:
        raise ParameterError(f"outage threshold must be >= 0, got {s}")
    inv_snr = 1.0 / config.snr_tx
    if k_pattern.is_complementary:
        return order_stat_cdf(complementary_order(config), s * inv_snr, config.n_total, mu)
    scaled = s * inv_snr * k_pattern.n_active
    return sum(
        upsilon(k_pattern, xi, config) * order_stat_cdf(xi, scaled, config.n_total, mu)
        for xi in upsilon_support(k_pattern, config)
    )


def outage_conditional_decentralized(
    k_pattern: ActivationPattern, s: float, hop: int, config: SystemConfig,
) -> float:
    """P_{o-i}(s|k) for hop i under its own best mapping scheme."""
    return _sorted_outage(k_pattern, s, config.hop_mean_gain(hop), config)


def outage_conditional_centralized(
    k_pattern: ActivationPattern, s: float, config: SystemConfig,
) -> float:
    """P_o(s|k) with one scheme ranked by link gains (mean mu_Sigma)."""
    return _sorted_outage(k_pattern, s, config.link_mean_gain, config)


def outage_conditional_fixed(
    k_pattern: ActivationPattern, s: float, config: SystemConfig,
) -> float:
    """P_o(s|k) on the fixed N_T/2 default scheme: unsorted exponential link gains."""
    return _fixed_outage(k_pattern.n_symbols, s, config)


def _fixed_outage(n_sym: int, s: float, config: SystemConfig) -> float:
    if s < 0:
        raise ParameterError(f"outage threshold must be >= 0, got {s}")
    per_link = float(exponential_cdf(s * n_sym / config.snr_tx, config.link_mean_gain))
    return float(-math.expm1(n_sym * math.log1p(-per_link)))


def outage_conditional(
    methodology: Methodology, k_pattern: ActivationPattern, s: float, config: SystemConfig,
) -> float:
    """End-to-end P_o(s|k), hops combined as P_1 + P_2 - P_1 P_2."""
    if methodology == Methodology.DECENTRALIZED:
        p1 = outage_conditional_decentralized(k_pattern, s, 1, config)
        p2 = outage_conditional_decentralized(k_pattern, s, 2, config)
        return p1 + p2 - p1 * p2
    if methodology == Methodology.CENTRALIZED:
        return outage_conditional_centralized(k_pattern, s, config)
    if methodology == Methodology.NONE:
        return outage_conditional_fixed(k_pattern, s, config)
    raise ParameterError(f"methodology {methodology.value} has no activation patterns")


def outage_average(methodology: Methodology, s: float, config: SystemConfig) -> float:
    """Equiprobable average of the end-to-end outage over all 2^{N_S} patterns."""
    if methodology == Methodology.FPSK:
        if s < 0:
            raise ParameterError(f"outage threshold must be >= 0, got {s}")
        return float(exponential_cdf(s / config.snr_tx, config.link_mean_gain))
    config = config.for_methodology(methodology)
    if methodology == Methodology.NONE:
        total = sum(
            count * _fixed_outage(n_sym, s, config)
            for n_sym, count in symbol_count_weights(config.n_selected)
        )
        return min(1.0, max(0.0, total / 2**config.n_selected))
    patterns = enumerate_patterns(config.n_selected)
    total = sum(outage_conditional(methodology, k, s, config) for k in patterns)
    return min(1.0, max(0.0, total / len(patterns)))


def fixed_scheme_weight(n_selected: int) -> int:
    """1 + sum_k N_A(k)^2 over all patterns = 1 + N_S (N_S+1) 2^{N_S-2}."""
    return 1 + n_selected * (n_selected + 1) * 2**n_selected // 4


def outage_asymptotic(methodology: Methodology, s: float, config: SystemConfig) -> float:
    """Leading high-SNR term of :func:`outage_average`.

    Adaptive selection has diversity order d = N_T - N_S, dominated by the
    complementary mode; the fixed scheme and FPSK have diversity order 1.
    """
    x = s / config.snr_tx
    mu1, mu2, mu_link = config.mean_gain_hop1, config.mean_gain_hop2, config.link_mean_gain
    if methodology in (Methodology.DECENTRALIZED, Methodology.CENTRALIZED):
        d = config.diversity_order
        lead = math.comb(config.n_total, d) / 2**config.n_selected
        if methodology == Methodology.DECENTRALIZED:
            coefficient = mu1**-d + mu2**-d
        else:
            coefficient = mu_link**-d
        return lead * coefficient * x**d
    if methodology == Methodology.NONE:
        half = config.baseline_selected
        return x / mu_link * fixed_scheme_weight(half) / 2**half
    if methodology == Methodology.FPSK:
        return x / mu_link
    raise ParameterError(f"unknown methodology {methodology}")
