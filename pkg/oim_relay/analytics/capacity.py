"""Closed-form average network capacity.

Per active subcarrier the DF link carries (1/2) log2(1 + min(gamma_1, gamma_2)).
Every integral of log2(1+s) against an order-statistic density collapses to
finite sums of e^{p} Ei(-p) terms through

    int_0^inf ln(1+s) e^{-p s} ds = -e^{p} Ei(-p) / p.

The sums alternate in sign with binomial weights, so for large N_T they
cancel catastrophically.  When the weights pass 2^53 or the sum loses more
than eight digits, lambda and nu are taken from adaptive quadrature of
their defining integrals instead.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable
from functools import lru_cache

import numpy as np
from scipy import integrate

from oim_relay.analytics.combinatorics import (
    complementary_order,
    selected_orders,
    symbol_count_weights,
)
from oim_relay.channel.order_stats import order_stat_cdf, order_stat_pdf
from oim_relay.core.config import Methodology, SystemConfig
from oim_relay.core.errors import IntractableError, ParameterError
from oim_relay.core.patterns import ActivationPattern, enumerate_patterns
from oim_relay.core.specialfn import exp_ei_neg

MAX_PERMUTATION_SELECTED = 6
LITERAL_PERMUTATION_SELECTED = 4

# Largest log2 of a binomial weight the finite sums are evaluated with.
MAX_SERIES_WEIGHT_BITS = 53
# Largest sum |terms| / |sum terms| accepted from the finite sums.
CANCELLATION_LIMIT = 1e8

_TWO_LN2 = 2.0 * math.log(2.0)


def _order_coefficient(xi: int, n_total: int) -> float:
    return math.factorial(n_total) / (math.factorial(xi - 1) * math.factorial(n_total - xi))


def _check(xi: int, n_total: int, x: float) -> None:
    if not 1 <= xi <= n_total:
        raise ParameterError(f"order must lie in [1, {n_total}], got {xi}")
    if not x > 0:
        raise ParameterError(f"x must be > 0, got {x}")


def _well_conditioned(terms: np.ndarray) -> bool:
    total = float(terms.sum())
    if not math.isfinite(total) or total == 0.0:
        return False
    return float(np.abs(terms).sum()) <= CANCELLATION_LIMIT * abs(total)


def _order_mean(xi: int, n_total: int, mu: float) -> float:
    return mu * sum(1.0 / j for j in range(n_total - xi + 1, n_total + 1))


def _half_log_quadrature(x: float, weight: Callable[[float], float], centre: float) -> float:
    """int_0^inf (1/2) log2(1 + u/x) weight(u) du, split around the bulk of ``weight``."""

    def integrand(u: float) -> float:
        return math.log1p(u / x) / _TWO_LN2 * weight(u)

    split = 4.0 * centre
    head, _ = integrate.quad(integrand, 0.0, split, points=[centre], limit=200)
    tail, _ = integrate.quad(integrand, split, math.inf, limit=200)
    return head + tail


@lru_cache(maxsize=512)
def _lambda_series(xi: int, n_total: int) -> tuple[np.ndarray, np.ndarray]:
    b = np.arange(xi)
    a = (n_total - xi + 1 + b).astype(float)
    signs = np.where(b % 2 == 0, -1.0, 1.0)
    coeff = signs * np.array([math.comb(xi - 1, int(j)) for j in b], dtype=float)
    return coeff, a


@lru_cache(maxsize=512)
def _nu_series(
    xi: int, eta: int, n_total: int, mu_i: float, mu_j: float,
) -> tuple[np.ndarray, np.ndarray]:
    coeffs: list[float] = []
    kappas: list[float] = []
    for n in range(eta, n_total + 1):
        for d in range(n + 1):
            for b in range(xi):
                sign = -1.0 if (b + d) % 2 == 0 else 1.0
                coeffs.append(
                    sign * math.comb(n_total, n) * math.comb(n, d) * math.comb(xi - 1, b)
                )
                kappas.append((n_total - xi + 1 + b) / mu_i + (n_total - n + d) / mu_j)
    return np.array(coeffs), np.array(kappas)


def lambda_term(xi: int, x: float, hop_mu: float, n_total: int) -> float:
    """lambda(xi, x) = int (x/2) log2(1+s) f_(xi)(x s) ds for Exp(hop_mu) gains."""
    _check(xi, n_total, x)
    if not hop_mu > 0:
        raise ParameterError(f"mean gain must be > 0, got {hop_mu}")
    if xi - 1 <= MAX_SERIES_WEIGHT_BITS:
        coeff, a = _lambda_series(xi, n_total)
        terms = coeff * exp_ei_neg(x * a / hop_mu) / a
        if _well_conditioned(terms):
            return float(_order_coefficient(xi, n_total) / _TWO_LN2 * terms.sum())
    return _half_log_quadrature(
        x,
        lambda u: order_stat_pdf(xi, u, n_total, hop_mu),
        _order_mean(xi, n_total, hop_mu),
    )


def nu_term(xi: int, eta: int, x: float, mu_i: float, mu_j: float, n_total: int) -> float:
    """nu_{i,j}(xi, eta, x) = int (x/2) log2(1+s) f_{i(xi)}(x s) F_{j(eta)}(x s) ds."""
    _check(xi, n_total, x)
    _check(eta, n_total, x)
    if n_total * math.log2(3.0) + xi - 1 <= MAX_SERIES_WEIGHT_BITS:
        coeff, kappa = _nu_series(xi, eta, n_total, mu_i, mu_j)
        terms = coeff * exp_ei_neg(x * kappa) / kappa
        if _well_conditioned(terms):
            return float(_order_coefficient(xi, n_total) / (mu_i * _TWO_LN2) * terms.sum())
    return _half_log_quadrature(
        x,
        lambda u: order_stat_pdf(xi, u, n_total, mu_i) * order_stat_cdf(eta, u, n_total, mu_j),
        _order_mean(xi, n_total, mu_i),
    )


def capacity_special_G(xi: int, eta: int, x: float, config: SystemConfig) -> float:
    """Lambda_G: capacity of min(gamma_1, gamma_2) with hop orders (xi, eta)."""
    n_total = config.n_total
    mu1, mu2 = config.mean_gain_hop1, config.mean_gain_hop2
    return (
        lambda_term(xi, x, mu1, n_total)
        - nu_term(xi, eta, x, mu1, mu2, n_total)
        + lambda_term(eta, x, mu2, n_total)
        - nu_term(eta, xi, x, mu2, mu1, n_total)
    )


def capacity_special_L(xi: int, x: float, config: SystemConfig) -> float:
    """Lambda_L: capacity of the xi-th order link gain (mean mu_Sigma)."""
    return lambda_term(xi, x, config.link_mean_gain, config.n_total)


def capacity_special_unsorted(x: float, config: SystemConfig) -> float:
    """Capacity of a single unsorted link (exponential with mean mu_Sigma)."""
    return lambda_term(1, x, config.link_mean_gain, 1)


def _pattern_x(k_pattern: ActivationPattern, config: SystemConfig) -> float:
    return k_pattern.n_symbols / config.snr_tx


@lru_cache(maxsize=64)
def _hop_grid(x: float, config: SystemConfig) -> dict[tuple[int, int], float]:
    """Lambda_G for every pair of selected orders; shared by patterns with equal N_A."""
    orders = selected_orders(config)
    return {(xi, eta): capacity_special_G(xi, eta, x, config) for xi in orders for eta in orders}


@lru_cache(maxsize=64)
def _link_orders(x: float, config: SystemConfig) -> dict[int, float]:
    return {xi: capacity_special_L(xi, x, config) for xi in selected_orders(config)}


def _decentralized(k_pattern: ActivationPattern, config: SystemConfig, literal: bool) -> float:
    x = _pattern_x(k_pattern, config)
    if k_pattern.is_complementary:
        d = complementary_order(config)
        return capacity_special_G(d, d, x, config)
    orders = selected_orders(config)
    grid = _hop_grid(x, config)
    n_active = k_pattern.n_active
    if not literal:
        return n_active / config.n_selected**2 * sum(grid.values())
    assignments = list(itertools.permutations(orders, n_active))
    total = sum(
        grid[(xi, eta)]
        for first in assignments
        for second in assignments
        for xi, eta in zip(first, second)
    )
    return total / len(assignments) ** 2


def _centralized(k_pattern: ActivationPattern, config: SystemConfig, literal: bool) -> float:
    x = _pattern_x(k_pattern, config)
    if k_pattern.is_complementary:
        return capacity_special_L(complementary_order(config), x, config)
    orders = selected_orders(config)
    per_order = _link_orders(x, config)
    n_active = k_pattern.n_active
    if not literal:
        return n_active / config.n_selected * sum(per_order.values())
    assignments = list(itertools.permutations(orders, n_active))
    return sum(per_order[xi] for a in assignments for xi in a) / len(assignments)


def capacity_conditional(
    k_pattern: ActivationPattern,
    methodology: Methodology,
    config: SystemConfig,
    literal: bool | None = None,
) -> float:
    """C(k): average capacity given pattern k.

    ``literal`` selects the explicit double sum over order assignments;
    by default it is used for N_S <= 4 and the symmetry-reduced form above.
    """
    if methodology in (Methodology.DECENTRALIZED, Methodology.CENTRALIZED):
        if config.n_selected > MAX_PERMUTATION_SELECTED:
            raise IntractableError(
                f"capacity permutation sums need n_selected <= {MAX_PERMUTATION_SELECTED}, "
                f"got {config.n_selected}"
            )
        if literal is None:
            literal = config.n_selected <= LITERAL_PERMUTATION_SELECTED
        if methodology == Methodology.DECENTRALIZED:
            return _decentralized(k_pattern, config, literal)
        return _centralized(k_pattern, config, literal)
    if methodology == Methodology.NONE:
        return k_pattern.n_symbols * capacity_special_unsorted(_pattern_x(k_pattern, config), config)
    if methodology == Methodology.FPSK:
        return capacity_special_unsorted(1.0 / config.snr_tx, config)
    raise ParameterError(f"unknown methodology {methodology}")


def capacity_average(methodology: Methodology, config: SystemConfig) -> float:
    """Equiprobable average of C(k) over all patterns, complementary mode included."""
    if methodology == Methodology.FPSK:
        return capacity_special_unsorted(1.0 / config.snr_tx, config)
    config = config.for_methodology(methodology)
    if methodology == Methodology.NONE:
        total = sum(
            count * n_sym * capacity_special_unsorted(n_sym / config.snr_tx, config)
            for n_sym, count in symbol_count_weights(config.n_selected)
        )
        return max(0.0, total / 2**config.n_selected)
    patterns = enumerate_patterns(config.n_selected)
    total = sum(capacity_conditional(k, methodology, config) for k in patterns)
    return max(0.0, total / len(patterns))
