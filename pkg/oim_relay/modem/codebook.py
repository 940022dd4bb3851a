"""Candidate sets for ML detection.

A :class:`Codebook` lists every transmittable block as a row of per-slot
normalized amplitudes: active slots carry chi / sqrt(max(1, N_A)), so each
row has unit total power and the transmitter scales by sqrt(P_t).  The
dual-mode codebook has N_S+1 slots (selected then complementary); the FPSK
codebook has one slot per subcarrier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from oim_relay.core.blocks import ConcatenatedBlock
from oim_relay.core.config import Methodology, SystemConfig
from oim_relay.core.errors import IntractableError, ParameterError
from oim_relay.core.patterns import (
    ActivationPattern,
    enumerate_patterns,
    pattern_from_index,
    symbol_space_size,
)

MAX_CODEBOOK_SIZE = 1 << 16

# Candidate rows evaluated per detection chunk.
_DETECT_CHUNK = 4096


def psk_constellation(apm_order: int) -> np.ndarray:
    """chi_m = exp(j 2 pi (m-1) / M), m = 1..M (stored 0-based)."""
    return np.exp(2j * np.pi * np.arange(apm_order) / apm_order)


def _gray_decode(value: int) -> int:
    index = value
    shift = value >> 1
    while shift:
        index ^= shift
        shift >>= 1
    return index


def symbol_index_from_bits(bits: tuple[int, ...] | list[int], apm_order: int) -> int:
    """PSK index for a B_M-bit group (MSB first), Gray-labelled.

    Labels are complemented before Gray decoding so that for BPSK bit 1 maps
    to +1 and bit 0 to -1.
    """
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return _gray_decode(value ^ (apm_order - 1))


def bits_from_symbol_index(index: int, apm_order: int) -> tuple[int, ...]:
    width = apm_order.bit_length() - 1
    label = (index ^ (index >> 1)) ^ (apm_order - 1)
    return tuple((label >> (width - 1 - i)) & 1 for i in range(width))


@dataclass(frozen=True, eq=False)
class Codebook:
    """Every candidate block with its pattern and symbol indices.

    ``pattern_power[p, l]`` is the power fraction of slot l under pattern p;
    ``pattern_of[c]`` is the pattern row of candidate c.
    """

    n_slots: int
    apm_order: int
    symbols: np.ndarray
    pattern_of: np.ndarray
    symbol_indices: tuple[tuple[int, ...], ...]
    pattern_power: np.ndarray
    _lookup: dict[tuple[int, tuple[int, ...]], int] = field(repr=False, compare=False)

    def __post_init__(self) -> None:
        for arr in (self.symbols, self.pattern_of, self.pattern_power):
            arr.setflags(write=False)

    @property
    def size(self) -> int:
        return self.symbols.shape[0]

    @property
    def n_patterns(self) -> int:
        return self.pattern_power.shape[0]

    @property
    def prior(self) -> np.ndarray:
        """P(candidate): uniform pattern, then uniform symbols."""
        n_symbols = np.array([len(s) for s in self.symbol_indices])
        return 1.0 / (self.n_patterns * self.apm_order ** n_symbols.astype(float))

    def index_of(self, pattern_row: int, symbol_indices: tuple[int, ...]) -> int:
        try:
            return self._lookup[(pattern_row, tuple(symbol_indices))]
        except KeyError:
            raise ParameterError(
                f"no candidate for pattern row {pattern_row} with symbols {symbol_indices}"
            ) from None


def _assemble(
    n_slots: int,
    apm_order: int,
    rows: list[tuple[int, tuple[int, ...], np.ndarray]],
    pattern_power: np.ndarray,
) -> Codebook:
    symbols = np.array([r[2] for r in rows], dtype=complex)
    pattern_of = np.array([r[0] for r in rows], dtype=np.int64)
    indices = tuple(r[1] for r in rows)
    lookup = {(r[0], r[1]): c for c, r in enumerate(rows)}
    return Codebook(
        n_slots=n_slots,
        apm_order=apm_order,
        symbols=symbols,
        pattern_of=pattern_of,
        symbol_indices=indices,
        pattern_power=pattern_power,
        _lookup=lookup,
    )


@lru_cache(maxsize=32)
def dual_mode_pattern_power(n_selected: int) -> np.ndarray:
    """Power fraction of each of the N_S+1 slots under every pattern k (row k-1)."""
    table = np.zeros((2**n_selected, n_selected + 1))
    for pattern in enumerate_patterns(n_selected):
        table[pattern.index_k - 1, _pattern_slots(pattern)] = 1.0 / pattern.n_symbols
    table.setflags(write=False)
    return table


@lru_cache(maxsize=32)
def fpsk_pattern_power(n_total: int) -> np.ndarray:
    """One full-power subcarrier out of the first 2^floor(log2 N_T)."""
    n_index = 1 << (n_total.bit_length() - 1)
    table = np.zeros((n_index, n_total))
    table[np.arange(n_index), np.arange(n_index)] = 1.0
    table.setflags(write=False)
    return table


def pattern_power_for(methodology: Methodology, config: SystemConfig) -> np.ndarray:
    """Slot power table of a methodology without building its candidate set."""
    if methodology == Methodology.FPSK:
        return fpsk_pattern_power(config.n_total)
    return dual_mode_pattern_power(config.for_methodology(methodology).n_selected)


def _pattern_slots(pattern: ActivationPattern) -> list[int]:
    if pattern.is_complementary:
        return [pattern.n_selected]
    return [n - 1 for n in pattern.active_set]


@lru_cache(maxsize=32)
def dual_mode_codebook(n_selected: int, apm_order: int) -> Codebook:
    """All Card(X) concatenated blocks, grouped by pattern k (row k-1)."""
    size = symbol_space_size(n_selected, apm_order)
    if size > MAX_CODEBOOK_SIZE:
        raise IntractableError(
            f"symbol space of {size} blocks exceeds the detector limit {MAX_CODEBOOK_SIZE}"
        )
    chi = psk_constellation(apm_order)
    n_slots = n_selected + 1
    rows: list[tuple[int, tuple[int, ...], np.ndarray]] = []
    for pattern in enumerate_patterns(n_selected):
        row = pattern.index_k - 1
        slots = _pattern_slots(pattern)
        amplitude = 1.0 / np.sqrt(len(slots))
        for combo in itertools.product(range(apm_order), repeat=len(slots)):
            vec = np.zeros(n_slots, dtype=complex)
            vec[slots] = amplitude * chi[list(combo)]
            rows.append((row, combo, vec))
    return _assemble(n_slots, apm_order, rows, dual_mode_pattern_power(n_selected))


@lru_cache(maxsize=32)
def fpsk_codebook(n_total: int, apm_order: int) -> Codebook:
    """One active subcarrier out of 2^floor(log2 N_T), one PSK symbol at full power."""
    n_index = 1 << (n_total.bit_length() - 1)
    chi = psk_constellation(apm_order)
    rows: list[tuple[int, tuple[int, ...], np.ndarray]] = []
    for active in range(n_index):
        for m in range(apm_order):
            vec = np.zeros(n_total, dtype=complex)
            vec[active] = chi[m]
            rows.append((active, (m,), vec))
    return _assemble(n_total, apm_order, rows, fpsk_pattern_power(n_total))


def codebook_for(methodology: Methodology, config: SystemConfig) -> Codebook:
    if methodology == Methodology.FPSK:
        return fpsk_codebook(config.n_total, config.apm_order)
    return dual_mode_codebook(config.for_methodology(methodology).n_selected, config.apm_order)


def block_from_candidate(codebook: Codebook, candidate: int) -> ConcatenatedBlock:
    """The dual-mode block for candidate row ``candidate``."""
    n_selected = codebook.n_slots - 1
    pattern = pattern_from_index(int(codebook.pattern_of[candidate]) + 1, n_selected)
    chi = psk_constellation(codebook.apm_order)
    slots = [0j] * codebook.n_slots
    positions = [n_selected] if pattern.is_complementary else [n - 1 for n in pattern.active_set]
    for pos, m in zip(positions, codebook.symbol_indices[candidate]):
        slots[pos] = complex(chi[m])
    return ConcatenatedBlock(slots=tuple(slots), pattern=pattern)


def candidate_from_block(codebook: Codebook, block: ConcatenatedBlock) -> int:
    """Inverse of :func:`block_from_candidate`."""
    if block.pattern.n_selected != codebook.n_slots - 1:
        raise ParameterError("block and codebook disagree on N_S")
    chi = psk_constellation(codebook.apm_order)
    indices = tuple(int(np.argmin(np.abs(chi - s))) for s in block.symbols)
    return codebook.index_of(block.pattern.index_k - 1, indices)


def detect_candidates(
    received: np.ndarray,
    channel: np.ndarray,
    codebook: Codebook,
    tx_power: float,
) -> np.ndarray:
    """Row-wise ML decision argmin_c ||y - sqrt(P_t) diag(h) X_c||^2.

    ``received`` and ``channel`` are (B, L) arrays over the codebook slots.
    The |y|^2 term is common to every candidate and dropped.
    """
    received = np.atleast_2d(received)
    channel = np.atleast_2d(channel)
    amp = np.sqrt(tx_power)
    power = np.abs(codebook.symbols) ** 2
    decisions = np.empty(received.shape[0], dtype=np.int64)
    for start in range(0, received.shape[0], _DETECT_CHUNK):
        stop = start + _DETECT_CHUNK
        h = channel[start:stop]
        energy = (np.abs(h) ** 2) @ power.T * tx_power
        corr = (np.conj(received[start:stop]) * h) @ codebook.symbols.T
        decisions[start:stop] = np.argmin(energy - 2.0 * amp * corr.real, axis=1)
    return decisions
