"""Activation patterns and codebook combinatorics.

Index bits are read little-endian: bit n (0-based) switches relative
subcarrier n+1, and k = 1 + sum(bits[n] * 2**n).  This puts k = 1 at the
all-zero vector (complementary transmission mode) and k = 2^{N_S} at the
all-one vector.
"""

from __future__ import annotations

import math
from functools import lru_cache

from pydantic import BaseModel, model_validator

from oim_relay.core.errors import ParameterError

MAX_PATTERN_BITS = 16


class ActivationPattern(BaseModel):
    """One activation state k of the N_S selected subcarriers."""

    model_config = {"frozen": True}

    index_k: int
    bits: tuple[int, ...]

    @model_validator(mode="after")
    def _check_consistency(self) -> ActivationPattern:
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be binary, got {self.bits}")
        expected = 1 + sum(b << n for n, b in enumerate(self.bits))
        if self.index_k != expected:
            raise ValueError(
                f"index_k={self.index_k} does not match bits {self.bits} (expected {expected})"
            )
        return self

    @property
    def n_selected(self) -> int:
        return len(self.bits)

    @property
    def active_set(self) -> tuple[int, ...]:
        """Relative indices (1-based) of active selected subcarriers."""
        return tuple(n + 1 for n, b in enumerate(self.bits) if b)

    @property
    def n_active(self) -> int:
        return sum(self.bits)

    @property
    def is_complementary(self) -> bool:
        return self.index_k == 1

    @property
    def n_symbols(self) -> int:
        """Number of APM symbols carried: max(1, N_A(k))."""
        return max(1, self.n_active)


def _check_n_selected(n_selected: int) -> None:
    if not 1 <= n_selected <= MAX_PATTERN_BITS:
        raise ParameterError(
            f"n_selected must lie in [1, {MAX_PATTERN_BITS}], got {n_selected}"
        )


def pattern_from_bits(bits: tuple[int, ...] | list[int]) -> ActivationPattern:
    bits = tuple(int(b) for b in bits)
    _check_n_selected(len(bits))
    return ActivationPattern(
        index_k=1 + sum(b << n for n, b in enumerate(bits)), bits=bits,
    )


def pattern_from_index(index_k: int, n_selected: int) -> ActivationPattern:
    _check_n_selected(n_selected)
    if not 1 <= index_k <= 2**n_selected:
        raise ParameterError(
            f"index_k must lie in [1, {2**n_selected}], got {index_k}"
        )
    value = index_k - 1
    return ActivationPattern(
        index_k=index_k, bits=tuple((value >> n) & 1 for n in range(n_selected)),
    )


@lru_cache(maxsize=None)
def _enumerate(n_selected: int) -> tuple[ActivationPattern, ...]:
    return tuple(pattern_from_index(k, n_selected) for k in range(1, 2**n_selected + 1))


def enumerate_patterns(n_selected: int) -> list[ActivationPattern]:
    """All 2^{N_S} activation patterns, ordered by k."""
    _check_n_selected(n_selected)
    return list(_enumerate(n_selected))


def codebook_count(n_total: int, n_selected: int) -> int:
    """Card(C) = C(N_T, N_S) mapping schemes."""
    if not 1 <= n_selected < n_total:
        raise ParameterError(
            f"need 1 <= n_selected < n_total, got ({n_total}, {n_selected})"
        )
    return math.comb(n_total, n_selected)


def symbol_space_size(n_selected: int, apm_order: int) -> int:
    """Card(X) = M + (1+M)^{N_S} - 1 concatenated blocks."""
    if n_selected < 1 or apm_order < 2:
        raise ParameterError(
            f"need n_selected >= 1 and apm_order >= 2, got ({n_selected}, {apm_order})"
        )
    return apm_order + (1 + apm_order) ** n_selected - 1
