"""Mapping schemes and concatenated transmit blocks."""

from __future__ import annotations

from dataclasses import dataclass

from pydantic import BaseModel, model_validator

from oim_relay.core.config import SystemConfig
from oim_relay.core.errors import ParameterError
from oim_relay.core.patterns import ActivationPattern

_UNIT_TOL = 1e-9


class MappingScheme(BaseModel):
    """A selected codebook N_S(c) plus the complementary subcarrier.

    Indices are absolute and 1-based.  Relative index n (1-based) refers to
    the n-th smallest entry of ``selected``.
    """

    model_config = {"frozen": True}

    selected: tuple[int, ...]
    complementary: int

    @model_validator(mode="after")
    def _check_structure(self) -> MappingScheme:
        if not self.selected:
            raise ValueError("selected must be non-empty")
        if any(b <= a for a, b in zip(self.selected, self.selected[1:])):
            raise ValueError(f"selected must be strictly increasing, got {self.selected}")
        if min(self.selected) < 1 or self.complementary < 1:
            raise ValueError("subcarrier indices are 1-based")
        if self.complementary in self.selected:
            raise ValueError(
                f"complementary {self.complementary} lies inside selected {self.selected}"
            )
        return self

    @property
    def n_selected(self) -> int:
        return len(self.selected)

    def absolute_index(self, relative: int) -> int:
        if not 1 <= relative <= len(self.selected):
            raise ParameterError(
                f"relative index must lie in [1, {len(self.selected)}], got {relative}"
            )
        return self.selected[relative - 1]

    def slot_subcarriers(self) -> tuple[int, ...]:
        """Absolute subcarrier of every block slot: selected, then complementary."""
        return self.selected + (self.complementary,)

    def check_against(self, config: SystemConfig) -> None:
        if len(self.selected) != config.n_selected:
            raise ParameterError(
                f"scheme has {len(self.selected)} selected subcarriers, "
                f"config expects {config.n_selected}"
            )
        if max(self.slot_subcarriers()) > config.n_total:
            raise ParameterError(
                f"scheme indexes beyond n_total={config.n_total}: {self.slot_subcarriers()}"
            )


@dataclass(frozen=True)
class ConcatenatedBlock:
    """X(k) = <x(k), chi>: N_S selected slots then the complementary slot.

    Slot values are unit-modulus PSK symbols or zero; power scaling is
    applied at transmission time.
    """

    slots: tuple[complex, ...]
    pattern: ActivationPattern

    def __post_init__(self) -> None:
        n_sel = self.pattern.n_selected
        if len(self.slots) != n_sel + 1:
            raise ParameterError(
                f"block needs {n_sel + 1} slots, got {len(self.slots)}"
            )
        active = set(self.pattern.active_set)
        if self.pattern.is_complementary:
            expected_on = {n_sel + 1}
        else:
            expected_on = active
        for n, value in enumerate(self.slots, start=1):
            if n in expected_on:
                if abs(abs(value) - 1.0) > _UNIT_TOL:
                    raise ParameterError(f"slot {n} must be unit modulus, got {value}")
            elif value != 0:
                raise ParameterError(f"slot {n} must be zero under pattern k={self.pattern.index_k}")

    @property
    def symbols(self) -> tuple[complex, ...]:
        """The APM symbols carried, in ascending slot order."""
        return tuple(v for v in self.slots if v != 0)

    def active_subcarriers(self, scheme: MappingScheme) -> tuple[int, ...]:
        """Absolute subcarriers that carry energy when sent under ``scheme``."""
        if self.pattern.is_complementary:
            return (scheme.complementary,)
        return tuple(scheme.absolute_index(n) for n in self.pattern.active_set)
