"""Rayleigh block-fading channel realizations and reproducible RNG streams."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, field_validator

from oim_relay.core.config import SystemConfig

_UINT64_MAX = 2**64 - 1


class RngStream(BaseModel):
    """Address of an independent counter-based random stream.

    The same (seed, stream_id) always yields the same Philox sequence, no
    matter which process or in which order streams are opened.
    """

    model_config = {"frozen": True}

    seed: int
    stream_id: int = 0

    @field_validator("seed", "stream_id")
    @classmethod
    def _fits_uint64(cls, v: int) -> int:
        if not 0 <= v <= _UINT64_MAX:
            raise ValueError(f"seed and stream_id must be unsigned 64-bit, got {v}")
        return v

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(seq))


def _as_generator(rng: RngStream | np.random.Generator) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngStream) else rng


def complex_gains(
    rng: np.random.Generator, mean_gain: float, shape: int | tuple[int, ...],
) -> np.ndarray:
    """Circularly-symmetric Gaussian gains with E|h|^2 = mean_gain."""
    scale = np.sqrt(mean_gain / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Per-subcarrier complex gains h_1(n), h_2(n), n = 1..N_T (stored 0-based)."""

    hop1: np.ndarray
    hop2: np.ndarray

    def __post_init__(self) -> None:
        for arr in (self.hop1, self.hop2):
            arr.setflags(write=False)

    def hop(self, hop: int) -> np.ndarray:
        if hop == 1:
            return self.hop1
        if hop == 2:
            return self.hop2
        raise ValueError(f"hop must be 1 or 2, got {hop}")

    def gains(self, hop: int) -> np.ndarray:
        """|h_i(n)|^2 for every subcarrier."""
        return np.abs(self.hop(hop)) ** 2


def sample_realization(
    rng: RngStream | np.random.Generator, config: SystemConfig,
) -> ChannelRealization:
    """Draw one independent realization of both hops."""
    gen = _as_generator(rng)
    hop1 = complex_gains(gen, config.mean_gain_hop1, config.n_total)
    hop2 = complex_gains(gen, config.mean_gain_hop2, config.n_total)
    return ChannelRealization(hop1=hop1, hop2=hop2)


def sample_channel_batch(
    rng: np.random.Generator, config: SystemConfig, size: int,
) -> tuple[np.ndarray, np.ndarray]:
    """``size`` independent realizations as two (size, N_T) arrays."""
    hop1 = complex_gains(rng, config.mean_gain_hop1, (size, config.n_total))
    hop2 = complex_gains(rng, config.mean_gain_hop2, (size, config.n_total))
    return hop1, hop2
