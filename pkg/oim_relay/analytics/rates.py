"""Transmission-rate benchmarks against classic OFDM-IM and FPSK."""

from __future__ import annotations

import math
from dataclasses import dataclass

from oim_relay.core.config import SystemConfig
from oim_relay.core.errors import ParameterError
from oim_relay.modem.rate import average_rate


def _floor_log2(value: int) -> int:
    return value.bit_length() - 1


def rate_benchmarks(config: SystemConfig) -> tuple[float, float]:
    """(B_classic, B_FPSK) in bpcu.

    Classic OFDM-IM activates N_T/2 of N_T subcarriers with combinatorial
    index mapping; FPSK activates exactly one.
    """
    n_total = config.n_total
    if n_total % 2:
        raise ParameterError(f"classic OFDM-IM needs an even n_total, got {n_total}")
    classic = n_total // 2 * config.bits_per_symbol + _floor_log2(math.comb(n_total, n_total // 2))
    fpsk = config.bits_per_symbol + _floor_log2(n_total)
    return float(classic), float(fpsk)


@dataclass(frozen=True)
class RateSummary:
    n_total: int
    n_selected: int
    apm_order: int
    adaptive: float
    classic: float
    fpsk: float


def rate_summary(config: SystemConfig) -> RateSummary:
    classic, fpsk = rate_benchmarks(config)
    return RateSummary(
        n_total=config.n_total,
        n_selected=config.n_selected,
        apm_order=config.apm_order,
        adaptive=average_rate(config),
        classic=classic,
        fpsk=fpsk,
    )
