"""Scenario configuration for the two-hop OFDM-IM relay link.

All objects are frozen Pydantic models: immutable after construction and
validated on every copy.
"""

from __future__ import annotations

import enum
import math
from typing import Any

from pydantic import BaseModel, field_validator, model_validator


class Methodology(str, enum.Enum):
    """Mapping-scheme selection policy across the two hops."""

    DECENTRALIZED = "decentralized"
    CENTRALIZED = "centralized"
    NONE = "none"
    FPSK = "fpsk"


# Methodologies that run the dual-mode protocol over a selected codebook.
DUAL_MODE_METHODOLOGIES = frozenset(
    {Methodology.DECENTRALIZED, Methodology.CENTRALIZED, Methodology.NONE}
)


class Metric(str, enum.Enum):
    OUTAGE = "outage"
    CAPACITY = "capacity"
    SER = "ser"
    RATES = "rates"


def is_power_of_two(value: int) -> bool:
    return value >= 1 and value & (value - 1) == 0


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


class SystemConfig(BaseModel):
    """All scenario parameters of one link configuration.

    ``snr_tx`` is the linear transmit SNR P_t/N_0; ``noise_power`` fixes N_0
    so that ``tx_power`` = P_t.  ``outage_threshold`` is the linear SNR s.
    """

    model_config = {"frozen": True}

    n_total: int
    n_selected: int
    apm_order: int
    mean_gain_hop1: float = 1.0
    mean_gain_hop2: float = 1.0
    snr_tx: float = 100.0
    outage_threshold: float = 1.0
    noise_power: float = 1.0

    @field_validator("n_total")
    @classmethod
    def _n_total_power_of_two(cls, v: int) -> int:
        if v < 2 or not is_power_of_two(v):
            raise ValueError(f"n_total must be 2^zeta with zeta >= 1, got {v}")
        return v

    @field_validator("apm_order")
    @classmethod
    def _apm_order_power_of_two(cls, v: int) -> int:
        if v < 2 or not is_power_of_two(v):
            raise ValueError(f"apm_order must be a power of two >= 2, got {v}")
        return v

    @field_validator(
        "mean_gain_hop1", "mean_gain_hop2", "snr_tx", "outage_threshold", "noise_power",
    )
    @classmethod
    def _strictly_positive(cls, v: float) -> float:
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"real parameters must be finite and > 0, got {v}")
        return v

    @model_validator(mode="after")
    def _selected_within_total(self) -> SystemConfig:
        if not 1 <= self.n_selected < self.n_total:
            raise ValueError(
                f"n_selected must satisfy 1 <= n_selected < n_total, "
                f"got n_selected={self.n_selected}, n_total={self.n_total}"
            )
        return self

    @property
    def bits_per_symbol(self) -> int:
        """B_M = log2(M)."""
        return self.apm_order.bit_length() - 1

    @property
    def tx_power(self) -> float:
        return self.snr_tx * self.noise_power

    @property
    def link_mean_gain(self) -> float:
        """mu_Sigma, the mean of min(|h_1|^2, |h_2|^2) on one subcarrier."""
        mu1, mu2 = self.mean_gain_hop1, self.mean_gain_hop2
        return mu1 * mu2 / (mu1 + mu2)

    @property
    def diversity_order(self) -> int:
        return self.n_total - self.n_selected

    @property
    def baseline_selected(self) -> int:
        """Subcarriers the scheme without adaptation maps onto: N_T/2."""
        return self.n_total // 2

    def for_methodology(self, methodology: Methodology) -> SystemConfig:
        """The config a methodology actually runs on.

        The no-adaptation baseline always uses N_T/2 selected subcarriers,
        whatever ``n_selected`` the adaptive schemes are given.
        """
        if methodology == Methodology.NONE and self.n_selected != self.baseline_selected:
            return self.with_updates(n_selected=self.baseline_selected)
        return self

    def hop_mean_gain(self, hop: int) -> float:
        if hop == 1:
            return self.mean_gain_hop1
        if hop == 2:
            return self.mean_gain_hop2
        raise ValueError(f"hop must be 1 or 2, got {hop}")

    def with_updates(self, **changes: Any) -> SystemConfig:
        """Return a re-validated copy with the given fields replaced."""
        return SystemConfig.model_validate({**self.model_dump(), **changes})

    def with_snr_db(self, snr_db: float) -> SystemConfig:
        return self.with_updates(snr_tx=db_to_linear(snr_db))
