"""Dual-mode encoding, per-hop transmission and ML detection of single blocks.

These are the block-at-a-time operations; the Monte Carlo engines run the
same arithmetic over whole trial batches through
:func:`oim_relay.modem.codebook.detect_candidates`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, model_validator

from oim_relay.channel.fading import ChannelRealization, RngStream
from oim_relay.core.blocks import ConcatenatedBlock, MappingScheme
from oim_relay.core.config import SystemConfig
from oim_relay.core.errors import ParameterError
from oim_relay.core.patterns import pattern_from_bits
from oim_relay.modem.codebook import (
    bits_from_symbol_index,
    block_from_candidate,
    candidate_from_block,
    detect_candidates,
    dual_mode_codebook,
    psk_constellation,
    symbol_index_from_bits,
)


class BitPayload(BaseModel):
    """One variable-length codeword's worth of bits.

    ``symbol_bits`` holds max(1, N_A(k)) groups of B_M bits each; the single
    group of the all-zero pattern rides on the complementary subcarrier.
    """

    model_config = {"frozen": True}

    index_bits: tuple[int, ...]
    symbol_bits: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_lengths(self) -> BitPayload:
        flat = self.index_bits + tuple(b for g in self.symbol_bits for b in g)
        if any(b not in (0, 1) for b in flat):
            raise ValueError("payload bits must be binary")
        expected_groups = max(1, sum(self.index_bits))
        if len(self.symbol_bits) != expected_groups:
            raise ValueError(
                f"index bits {self.index_bits} need {expected_groups} symbol groups, "
                f"got {len(self.symbol_bits)}"
            )
        if len({len(g) for g in self.symbol_bits}) > 1:
            raise ValueError("symbol groups must share one width")
        return self

    @property
    def n_bits(self) -> int:
        """B(k) = B_S + max(1, N_A(k)) B_M."""
        return len(self.index_bits) + sum(len(g) for g in self.symbol_bits)


@dataclass(frozen=True, eq=False)
class HopObservation:
    """Received samples on the N_S selected slots then the complementary slot."""

    received: np.ndarray
    noise_var: float

    def __post_init__(self) -> None:
        self.received.setflags(write=False)


def _check_payload(payload: BitPayload, config: SystemConfig) -> None:
    if len(payload.index_bits) != config.n_selected:
        raise ParameterError(
            f"payload carries {len(payload.index_bits)} index bits, "
            f"config needs B_S={config.n_selected}"
        )
    if payload.symbol_bits and len(payload.symbol_bits[0]) != config.bits_per_symbol:
        raise ParameterError(
            f"symbol groups must have B_M={config.bits_per_symbol} bits"
        )


def encode(payload: BitPayload, config: SystemConfig) -> ConcatenatedBlock:
    """Map bits to X(k) under the dual-mode protocol."""
    _check_payload(payload, config)
    pattern = pattern_from_bits(payload.index_bits)
    chi = psk_constellation(config.apm_order)
    symbols = [complex(chi[symbol_index_from_bits(g, config.apm_order)]) for g in payload.symbol_bits]
    slots = [0j] * (config.n_selected + 1)
    if pattern.is_complementary:
        slots[config.n_selected] = symbols[0]
    else:
        for relative, symbol in zip(pattern.active_set, symbols):
            slots[relative - 1] = symbol
    return ConcatenatedBlock(slots=tuple(slots), pattern=pattern)


def decode(block: ConcatenatedBlock, config: SystemConfig) -> BitPayload:
    """Inverse of :func:`encode` for a codeword block."""
    codebook = dual_mode_codebook(config.n_selected, config.apm_order)
    candidate = candidate_from_block(codebook, block)
    groups = tuple(
        bits_from_symbol_index(m, config.apm_order) for m in codebook.symbol_indices[candidate]
    )
    return BitPayload(index_bits=block.pattern.bits, symbol_bits=groups)


def _slot_channel(
    realization: ChannelRealization, scheme: MappingScheme, hop: int,
) -> np.ndarray:
    positions = np.array(scheme.slot_subcarriers()) - 1
    return realization.hop(hop)[positions]


def transmit_through_hop(
    block: ConcatenatedBlock,
    realization: ChannelRealization,
    scheme: MappingScheme,
    hop: int,
    rng: RngStream | np.random.Generator,
    config: SystemConfig,
) -> HopObservation:
    """y = sqrt(P_t / max(1, N_A)) h X + w on the N_S+1 block slots."""
    scheme.check_against(config)
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    amplitude = np.sqrt(config.tx_power / block.pattern.n_symbols)
    h = _slot_channel(realization, scheme, hop)
    n_slots = config.n_selected + 1
    noise = np.sqrt(config.noise_power / 2.0) * (
        gen.standard_normal(n_slots) + 1j * gen.standard_normal(n_slots)
    )
    received = amplitude * h * np.asarray(block.slots) + noise
    return HopObservation(received=received, noise_var=config.noise_power)


def ml_detect(
    obs: HopObservation,
    realization: ChannelRealization,
    scheme: MappingScheme,
    config: SystemConfig,
    hop: int = 1,
) -> ConcatenatedBlock:
    """Exhaustive ML search over all Card(X) blocks, candidate scaling included."""
    scheme.check_against(config)
    codebook = dual_mode_codebook(config.n_selected, config.apm_order)
    h = _slot_channel(realization, scheme, hop)
    candidate = int(detect_candidates(obs.received, h, codebook, config.tx_power)[0])
    return block_from_candidate(codebook, candidate)


def relay_forward(
    detected: ConcatenatedBlock, scheme_hop2: MappingScheme, config: SystemConfig,
) -> ConcatenatedBlock:
    """Regenerate the relay's decision for transmission under the hop-2 scheme.

    The logical block (pattern and symbols) is unchanged; only the physical
    subcarriers, given by ``scheme_hop2``, differ.
    """
    scheme_hop2.check_against(config)
    return encode(decode(detected, config), config)
