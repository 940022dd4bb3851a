"""Union-bound SER approximation.

Each pairwise error term averages the two-exponential Q approximation
against independent per-slot gain distributions.  With complex noise
CN(0, N_0) the pairwise error probability is Q(sqrt(P_t/(2 N_0) sum |h_n Delta_n|^2)),
so t = P_t/(4 N_0) |Delta_n|^2 (first exponential) or P_t/(3 N_0) |Delta_n|^2
(second), and the average is a product of per-slot moment generating
functions E[exp(-t U_n)], where U_n is the xi_n-th order statistic for a
selected slot, order N_T - N_S for the complementary slot, or an unsorted
exponential on a fixed scheme.  Delta_n is the difference of the two
blocks' per-slot amplitudes chi / sqrt(max(1, N_A)).
"""

from __future__ import annotations

import enum
import itertools
import math

import numpy as np

from oim_relay.analytics.combinatorics import (
    OrderAssignment,
    complementary_order,
    selected_orders,
)
from oim_relay.channel.order_stats import log_order_stat_mgf
from oim_relay.core.blocks import ConcatenatedBlock
from oim_relay.core.config import Methodology, SystemConfig
from oim_relay.core.errors import IntractableError, ParameterError
from oim_relay.modem.codebook import Codebook, codebook_for

MAX_SER_SELECTED = 4
MAX_SER_APM_ORDER = 4
MAX_SER_CODEBOOK = 1024

# Exponent scales of the two Q-approximation terms and their weights.
_Q_TERMS = ((0.25, 1.0 / 12.0), (1.0 / 3.0, 0.25))


class SerVariant(str, enum.Enum):
    """Gain model behind the pairwise term: one hop, the link, or unsorted."""

    HOP = "G"
    LINK = "L"
    UNSORTED = "U"


def _variant_mu(variant: SerVariant, config: SystemConfig, hop: int) -> float:
    if variant == SerVariant.HOP:
        return config.hop_mean_gain(hop)
    return config.link_mean_gain


def _normalized(block: ConcatenatedBlock) -> np.ndarray:
    return np.asarray(block.slots) / math.sqrt(block.pattern.n_symbols)


def ser_theta(
    x_true: ConcatenatedBlock,
    x_hyp: ConcatenatedBlock,
    orders: OrderAssignment | None,
    variant: SerVariant,
    config: SystemConfig,
    hop: int = 1,
) -> float:
    """Theta: Q-approximated pairwise error probability averaged over gains.

    ``orders`` assigns one order statistic to each of the N_S selected slots;
    it must be None for the unsorted variant.
    """
    delta_sq = np.abs(_normalized(x_true) - _normalized(x_hyp)) ** 2
    slot_orders = _slot_orders(orders, variant, config)
    mu = _variant_mu(variant, config, hop)
    total = 0.0
    for scale, weight in _Q_TERMS:
        t = scale * config.snr_tx * delta_sq
        log_mgf = sum(
            float(log_order_stat_mgf(o, t[n], config.n_total, mu))
            for n, o in enumerate(slot_orders)
        )
        total += weight * math.exp(log_mgf)
    return total


def _slot_orders(
    orders: OrderAssignment | None, variant: SerVariant, config: SystemConfig,
) -> list[int | None]:
    if variant == SerVariant.UNSORTED:
        if orders is not None:
            raise ParameterError("the unsorted variant takes no order assignment")
        return [None] * (config.n_selected + 1)
    if orders is None:
        raise ParameterError(f"variant {variant.value} needs an order assignment")
    orders.check_against(config, length=config.n_selected)
    return [*orders.orders, complementary_order(config)]


def _slot_levels(codebook: Codebook) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Per slot: the distinct amplitude values and each candidate's level index."""
    levels: list[np.ndarray] = []
    codes: list[np.ndarray] = []
    for col in codebook.symbols.T:
        rounded = np.round(col, 12)
        values, inverse = np.unique(rounded, return_inverse=True)
        levels.append(values)
        codes.append(inverse.ravel())
    return levels, codes


def _omega(
    codebook: Codebook,
    assignments: list[list[int | None]],
    mu: float,
    config: SystemConfig,
) -> np.ndarray:
    """Omega(X) for every candidate X: assignment-averaged sum over X' != X of Theta."""
    levels, codes = _slot_levels(codebook)
    n_total = config.n_total
    size = codebook.size
    accumulated = np.zeros(size)
    for slot_orders in assignments:
        theta = np.zeros((size, size))
        for scale, weight in _Q_TERMS:
            log_mgf = np.zeros((size, size))
            for slot, order in enumerate(slot_orders):
                vals = levels[slot]
                t = scale * config.snr_tx * np.abs(vals[:, None] - vals[None, :]) ** 2
                table = log_order_stat_mgf(order, t, n_total, mu)
                log_mgf += table[np.ix_(codes[slot], codes[slot])]
            theta += weight * np.exp(log_mgf)
        np.fill_diagonal(theta, 0.0)
        accumulated += theta.sum(axis=1)
    return accumulated / len(assignments)


def _check_tractable(methodology: Methodology, codebook: Codebook, config: SystemConfig) -> None:
    if methodology in (Methodology.DECENTRALIZED, Methodology.CENTRALIZED):
        if config.n_selected > MAX_SER_SELECTED or config.apm_order > MAX_SER_APM_ORDER:
            raise IntractableError(
                f"SER union bound needs n_selected <= {MAX_SER_SELECTED} and "
                f"apm_order <= {MAX_SER_APM_ORDER}, got ({config.n_selected}, {config.apm_order})"
            )
    if codebook.size > MAX_SER_CODEBOOK:
        raise IntractableError(
            f"SER union bound over {codebook.size} candidates exceeds {MAX_SER_CODEBOOK}"
        )


def _sorted_assignments(config: SystemConfig) -> list[list[int | None]]:
    comp = complementary_order(config)
    return [
        [*perm, comp]
        for perm in itertools.permutations(selected_orders(config), config.n_selected)
    ]


def ser_omega(
    methodology: Methodology, config: SystemConfig, hop: int = 1,
) -> np.ndarray:
    """Per-candidate union-bound error probability on one hop (or the link)."""
    codebook = codebook_for(methodology, config)
    _check_tractable(methodology, codebook, config)
    if methodology == Methodology.DECENTRALIZED:
        return _omega(codebook, _sorted_assignments(config), config.hop_mean_gain(hop), config)
    if methodology == Methodology.CENTRALIZED:
        return _omega(codebook, _sorted_assignments(config), config.link_mean_gain, config)
    unsorted = [[None] * codebook.n_slots]
    return _omega(codebook, unsorted, config.hop_mean_gain(hop), config)


def ser_union_bound(methodology: Methodology, config: SystemConfig) -> tuple[float, bool]:
    """(average SER, clipped) where clipped flags a value outside [0, 1]."""
    codebook = codebook_for(methodology, config)
    if methodology == Methodology.CENTRALIZED:
        raw = ser_omega(methodology, config)
        clipped = bool(np.any(raw > 1.0))
        per_block = np.minimum(raw, 1.0)
    else:
        omega1 = ser_omega(methodology, config, hop=1)
        omega2 = ser_omega(methodology, config, hop=2)
        clipped = bool(np.any(omega1 > 1.0) or np.any(omega2 > 1.0))
        omega1 = np.minimum(omega1, 1.0)
        omega2 = np.minimum(omega2, 1.0)
        per_block = omega1 + omega2 - omega1 * omega2
    value = float(np.dot(codebook.prior, per_block))
    if value > 1.0:
        clipped = True
    return min(1.0, max(0.0, value)), clipped


def ser_average(methodology: Methodology, config: SystemConfig) -> float:
    """Prior-weighted end-to-end SER approximation, clipped to [0, 1]."""
    return ser_union_bound(methodology, config)[0]
