"""Average transmission rate of the dual-mode protocol."""

from __future__ import annotations

import math
from fractions import Fraction

from oim_relay.core.config import SystemConfig
from oim_relay.core.patterns import enumerate_patterns


def average_rate(config: SystemConfig) -> float:
    """B = N_S + log2(M) / 2^{N_S} * (1 + 2^{N_S-1} N_S) in bpcu."""
    n_s = config.n_selected
    return n_s + config.bits_per_symbol / 2**n_s * (1 + 2 ** (n_s - 1) * n_s)


def pattern_average_rate(n_selected: int, apm_order: int) -> Fraction:
    """E_k[N_S + max(1, N_A(k)) log2 M], by enumerating every pattern."""
    bits_per_symbol = int(math.log2(apm_order))
    patterns = enumerate_patterns(n_selected)
    total = sum(n_selected + p.n_symbols * bits_per_symbol for p in patterns)
    return Fraction(total, len(patterns))
