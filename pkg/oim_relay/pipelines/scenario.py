"""Experiment specifications and the flat ``key = value`` scenario format.

See docs/SCENARIO_FORMAT.md for the list of keys.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any

from pydantic import BaseModel, field_validator, model_validator

from oim_relay.core.config import Methodology, Metric, SystemConfig
from oim_relay.core.errors import ParameterError
from oim_relay.montecarlo.engine import DEFAULT_BATCH_SIZE

MIN_MC_TRIALS = 1_000

_CONFIG_KEYS = (
    "n_total",
    "n_selected",
    "apm_order",
    "mean_gain_hop1",
    "mean_gain_hop2",
    "outage_threshold",
    "noise_power",
)
_SPEC_KEYS = (
    "metric",
    "methodologies",
    "snr_db",
    "trials",
    "seed",
    "output_path",
    "batch_size",
    "stratified",
)
_TRUE = frozenset({"1", "true", "yes", "on"})
_FALSE = frozenset({"0", "false", "no", "off"})


class SnrGrid(BaseModel):
    """Inclusive dB grid start, start+step, ..., <= stop."""

    model_config = {"frozen": True}

    start: float
    stop: float
    step: float

    @model_validator(mode="after")
    def _check(self) -> SnrGrid:
        if not self.start <= self.stop:
            raise ValueError(f"snr_db start must be <= stop, got {self.start} > {self.stop}")
        if not self.step > 0:
            raise ValueError(f"snr_db step must be > 0, got {self.step}")
        return self

    @classmethod
    def parse(cls, text: str) -> SnrGrid:
        parts = text.split(":")
        if len(parts) != 3:
            raise ParameterError(f"snr_db must look like start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ParameterError(f"snr_db values must be numbers, got {text!r}") from None
        return cls(start=start, stop=stop, step=step)

    def points(self) -> list[float]:
        count = math.floor((self.stop - self.start) / self.step + 1e-9) + 1
        return [round(self.start + i * self.step, 10) for i in range(count)]

    def __str__(self) -> str:
        return f"{self.start!r}:{self.stop!r}:{self.step!r}"


class ExperimentSpec(BaseModel):
    """Everything that determines an experiment's output files."""

    model_config = {"frozen": True}

    config: SystemConfig
    metric: Metric
    methodologies: tuple[Methodology, ...] = (Methodology.DECENTRALIZED, Methodology.CENTRALIZED)
    snr_db: SnrGrid = SnrGrid(start=0.0, stop=30.0, step=5.0)
    trials: int = 100_000
    seed: int = 0
    output_path: str = "artifacts/run"
    batch_size: int = DEFAULT_BATCH_SIZE
    stratified: bool = False

    @field_validator("methodologies")
    @classmethod
    def _distinct(cls, v: tuple[Methodology, ...]) -> tuple[Methodology, ...]:
        if not v:
            raise ValueError("at least one methodology is required")
        if len(set(v)) != len(v):
            raise ValueError(f"methodologies must be distinct, got {[m.value for m in v]}")
        return v

    @field_validator("seed")
    @classmethod
    def _seed_uint64(cls, v: int) -> int:
        if not 0 <= v < 2**64:
            raise ValueError(f"seed must be unsigned 64-bit, got {v}")
        return v

    @field_validator("batch_size")
    @classmethod
    def _positive_batch(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"batch_size must be >= 1, got {v}")
        return v

    @model_validator(mode="after")
    def _enough_trials(self) -> ExperimentSpec:
        if self.metric != Metric.RATES and self.trials < MIN_MC_TRIALS:
            raise ValueError(
                f"trials must be >= {MIN_MC_TRIALS} for Monte Carlo metrics, got {self.trials}"
            )
        return self


def parse_scenario(text: str) -> dict[str, str]:
    """Split scenario text into raw key/value strings.

    Blank lines and ``#`` comments are skipped; duplicate keys are an error.
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ParameterError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if key in values:
            raise ParameterError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def _parse_bool(key: str, text: str) -> bool:
    lowered = text.lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ParameterError(f"{key} must be a boolean, got {text!r}")


def spec_from_values(values: dict[str, str]) -> ExperimentSpec:
    """Build an ExperimentSpec from parsed scenario values."""
    unknown = set(values) - set(_CONFIG_KEYS) - set(_SPEC_KEYS)
    if unknown:
        raise ParameterError(f"unknown scenario keys: {sorted(unknown)}")
    config = {k: values[k] for k in _CONFIG_KEYS if k in values}
    spec: dict[str, Any] = {"config": config}
    for key in ("metric", "trials", "seed", "output_path", "batch_size"):
        if key in values:
            spec[key] = values[key]
    if "methodologies" in values:
        spec["methodologies"] = tuple(
            m.strip() for m in values["methodologies"].split(",") if m.strip()
        )
    if "snr_db" in values:
        spec["snr_db"] = SnrGrid.parse(values["snr_db"])
    if "stratified" in values:
        spec["stratified"] = _parse_bool("stratified", values["stratified"])
    return ExperimentSpec.model_validate(spec)


def load_scenario(path: str | Path) -> ExperimentSpec:
    return spec_from_values(parse_scenario(Path(path).read_text(encoding="utf-8")))
