"""Result carriers shared by the Monte Carlo engines and the analytics."""

from __future__ import annotations

import enum
import math

from pydantic import BaseModel, model_validator

from oim_relay.core.config import Methodology, Metric, SystemConfig


class CurveKind(str, enum.Enum):
    OUTAGE_EXACT = "outage_exact"
    OUTAGE_ASYMPTOTIC = "outage_asymptotic"
    CAPACITY = "capacity"
    SER_APPROX = "ser_approx"
    RATE = "rate"


_PROBABILITY_KINDS = frozenset(
    {CurveKind.OUTAGE_EXACT, CurveKind.OUTAGE_ASYMPTOTIC, CurveKind.SER_APPROX}
)


class AnalyticCurvePoint(BaseModel):
    """One closed-form evaluation.

    ``clipped`` marks a union-bound value that exceeded 1 and was clipped,
    i.e. a point outside the approximation's validity region.
    """

    model_config = {"frozen": True}

    snr_tx: float
    value: float
    kind: CurveKind
    clipped: bool = False

    @model_validator(mode="after")
    def _check_range(self) -> AnalyticCurvePoint:
        if not (math.isfinite(self.value) and self.value >= 0):
            raise ValueError(f"{self.kind.value} value must be finite and >= 0, got {self.value}")
        # The asymptote is a power law and may exceed 1 at low SNR.
        if self.kind in _PROBABILITY_KINDS - {CurveKind.OUTAGE_ASYMPTOTIC} and self.value > 1:
            raise ValueError(f"{self.kind.value} value must be <= 1, got {self.value}")
        return self


class MetricEstimate(BaseModel):
    """A Monte Carlo point estimate with its standard error."""

    model_config = {"frozen": True}

    mean: float
    std_error: float
    trials: int
    metric: Metric
    methodology: Methodology
    config: SystemConfig

    @model_validator(mode="after")
    def _check(self) -> MetricEstimate:
        if self.trials <= 0:
            raise ValueError(f"trials must be > 0, got {self.trials}")
        if self.std_error < 0:
            raise ValueError(f"std_error must be >= 0, got {self.std_error}")
        return self

    def within(self, value: float, n_sigma: float = 3.0, floor: float = 0.0) -> bool:
        """True when ``value`` lies within n_sigma standard errors (plus floor)."""
        return abs(self.mean - value) <= n_sigma * self.std_error + floor
