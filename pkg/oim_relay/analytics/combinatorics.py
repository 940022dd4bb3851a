"""Order-assignment combinatorics shared by the closed forms."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from pydantic import BaseModel, model_validator

from oim_relay.core.config import SystemConfig
from oim_relay.core.errors import ParameterError
from oim_relay.core.patterns import ActivationPattern


class OrderAssignment(BaseModel):
    """Orders Xi of the gains sitting on successive active (or all) slots."""

    model_config = {"frozen": True}

    orders: tuple[int, ...]

    @model_validator(mode="after")
    def _distinct(self) -> OrderAssignment:
        if len(set(self.orders)) != len(self.orders):
            raise ValueError(f"orders must be distinct, got {self.orders}")
        return self

    def check_against(self, config: SystemConfig, length: int | None = None) -> None:
        lo, hi = config.n_total - config.n_selected + 1, config.n_total
        if any(not lo <= o <= hi for o in self.orders):
            raise ParameterError(f"orders must lie in [{lo}, {hi}], got {self.orders}")
        if length is not None and len(self.orders) != length:
            raise ParameterError(f"expected {length} orders, got {len(self.orders)}")


def selected_orders(config: SystemConfig) -> tuple[int, ...]:
    """Orders N_T-N_S+1 .. N_T occupied by the selected subcarriers."""
    return tuple(range(config.n_total - config.n_selected + 1, config.n_total + 1))


def complementary_order(config: SystemConfig) -> int:
    return config.n_total - config.n_selected


def order_assignments(length: int, config: SystemConfig) -> list[OrderAssignment]:
    """D(k): every ordered choice of ``length`` distinct selected orders."""
    return [
        OrderAssignment(orders=perm)
        for perm in itertools.permutations(selected_orders(config), length)
    ]


def upsilon_exact(k_pattern: ActivationPattern, xi: int, config: SystemConfig) -> Fraction:
    """P(the weakest active subcarrier sits at order xi), as an exact fraction.

    Upsilon(k, xi) = C(N_T - xi, N_A - 1) / C(N_S, N_A) for
    N_T-N_S+1 <= xi <= N_T-N_A+1.
    """
    n_active = k_pattern.n_active
    if n_active < 1:
        raise ParameterError("upsilon needs at least one active subcarrier")
    lo = config.n_total - config.n_selected + 1
    hi = config.n_total - n_active + 1
    if not lo <= xi <= hi:
        raise ParameterError(f"xi must lie in [{lo}, {hi}], got {xi}")
    return Fraction(
        math.comb(config.n_total - xi, n_active - 1), math.comb(config.n_selected, n_active),
    )


def upsilon(k_pattern: ActivationPattern, xi: int, config: SystemConfig) -> float:
    return float(upsilon_exact(k_pattern, xi, config))


def upsilon_support(k_pattern: ActivationPattern, config: SystemConfig) -> range:
    return range(
        config.n_total - config.n_selected + 1, config.n_total - k_pattern.n_active + 2,
    )

def symbol_count_weights(n_selected: int) -> tuple[tuple[int, int], ...]:
    """(max(1, N_A), number of patterns) over all 2^{N_S} patterns.

    The all-zero pattern comes first and carries one symbol on the
    complementary subcarrier.
    """
    if n_selected < 1:
        raise ParameterError(f"n_selected must be >= 1, got {n_selected}")
    return ((1, 1), *((a, math.comb(n_selected, a)) for a in range(1, n_selected + 1)))
