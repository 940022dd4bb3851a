"""Protocol invariant checks.

Each check returns a list of human-readable violations (empty when the
object is consistent).  Strict Monte Carlo runs collect them per batch and
raise ProtocolInvariantViolation.
"""

from __future__ import annotations

from oim_relay.core.blocks import ConcatenatedBlock, MappingScheme
from oim_relay.core.config import SystemConfig


class ProtocolInvariantViolation(Exception):
    """Raised by strict runs when simulated trials break the dual-mode protocol."""

    def __init__(self, stage: str, violations: list[str]) -> None:
        self.stage = stage
        self.violations = violations
        msg = f"Protocol invariant violation in {stage}:\n" + "\n".join(violations)
        super().__init__(msg)


def check_scheme(scheme: MappingScheme, config: SystemConfig) -> list[str]:
    violations: list[str] = []
    if len(scheme.selected) != config.n_selected:
        violations.append(
            f"scheme selects {len(scheme.selected)} subcarriers, expected {config.n_selected}"
        )
    if max(scheme.slot_subcarriers()) > config.n_total:
        violations.append(f"scheme {scheme.slot_subcarriers()} exceeds n_total={config.n_total}")
    return violations


def check_block_energy(block: ConcatenatedBlock) -> list[str]:
    """Power fractions on the slots must sum to one: P_t split over max(1, N_A) slots."""
    violations: list[str] = []
    n_symbols = block.pattern.n_symbols
    energy = sum(abs(v) ** 2 for v in block.slots) / n_symbols
    if abs(energy - 1.0) > 1e-9:
        violations.append(
            f"block k={block.pattern.index_k}: normalized energy {energy!r} != 1"
        )
    if len(block.symbols) != n_symbols:
        violations.append(
            f"block k={block.pattern.index_k}: carries {len(block.symbols)} symbols, "
            f"expected {n_symbols}"
        )
    return violations


def check_active_subcarriers(
    index_weight: int,
    active: tuple[int, ...],
    scheme: MappingScheme,
    hop: int,
) -> list[str]:
    """Active set must match the pattern weight and sit on the right subcarriers."""
    violations: list[str] = []
    expected = index_weight if index_weight > 0 else 1
    if len(active) != expected:
        violations.append(
            f"hop {hop}: {len(active)} active subcarriers for index weight {index_weight}"
        )
    if index_weight == 0:
        if active != (scheme.complementary,):
            violations.append(
                f"hop {hop}: complementary mode must use subcarrier {scheme.complementary}, "
                f"used {active}"
            )
    elif not set(active) <= set(scheme.selected):
        violations.append(
            f"hop {hop}: active {active} outside selected {scheme.selected}"
        )
    return violations
