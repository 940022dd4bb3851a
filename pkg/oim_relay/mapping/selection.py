"""Adaptive mapping-scheme and complementary-subcarrier selection.

Selection is a top-N_S partial sort on the per-subcarrier gain (hop gain
for the decentralized policy, min of the two hop gains for the
centralized one).  Ties go to the smaller absolute index.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, model_validator

from oim_relay.channel.fading import ChannelRealization
from oim_relay.core.blocks import MappingScheme
from oim_relay.core.config import Methodology, SystemConfig
from oim_relay.core.errors import ParameterError


class SelectionResult(BaseModel):
    """The mapping schemes used by the source (hop 1) and the relay (hop 2)."""

    model_config = {"frozen": True}

    scheme_hop1: MappingScheme
    scheme_hop2: MappingScheme
    methodology: Methodology

    @model_validator(mode="after")
    def _check_policy(self) -> SelectionResult:
        if self.methodology == Methodology.FPSK:
            raise ValueError("FPSK does not use a mapping scheme")
        if (
            self.methodology in (Methodology.CENTRALIZED, Methodology.NONE)
            and self.scheme_hop1 != self.scheme_hop2
        ):
            raise ValueError(f"{self.methodology.value} requires identical schemes per hop")
        return self

    def scheme(self, hop: int) -> MappingScheme:
        if hop == 1:
            return self.scheme_hop1
        if hop == 2:
            return self.scheme_hop2
        raise ValueError(f"hop must be 1 or 2, got {hop}")


def rank_descending(gains: np.ndarray) -> np.ndarray:
    """Subcarrier positions sorted by gain, largest first, ties to smaller index.

    Works row-wise on a (..., N_T) array.
    """
    return np.argsort(-gains, axis=-1, kind="stable")


def top_selection(gains: np.ndarray, n_selected: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise (selected, complementary) as 0-based positions.

    ``selected`` is sorted ascending so that column n is relative index n+1.
    """
    order = rank_descending(gains)
    selected = np.sort(order[..., :n_selected], axis=-1)
    return selected, order[..., n_selected]


def _as_gain_vector(gains: ArrayLike, config: SystemConfig, name: str) -> np.ndarray:
    arr = np.asarray(gains, dtype=float)
    if arr.shape != (config.n_total,):
        raise ParameterError(
            f"{name} must have length n_total={config.n_total}, got shape {arr.shape}"
        )
    if np.any(arr < 0):
        raise ParameterError(f"{name} must be non-negative")
    return arr


def _scheme_from_positions(selected: np.ndarray, complementary: np.ndarray) -> MappingScheme:
    return MappingScheme(
        selected=tuple(int(i) + 1 for i in selected),
        complementary=int(complementary) + 1,
    )


def select_decentralized(gains: ArrayLike, config: SystemConfig) -> MappingScheme:
    """Best codebook for one hop from that hop's gains alone."""
    arr = _as_gain_vector(gains, config, "gains")
    return _scheme_from_positions(*top_selection(arr, config.n_selected))


def select_centralized(
    gains1: ArrayLike, gains2: ArrayLike, config: SystemConfig,
) -> MappingScheme:
    """Single codebook for the whole link, ranked by the per-subcarrier min gain."""
    arr1 = _as_gain_vector(gains1, config, "gains1")
    arr2 = _as_gain_vector(gains2, config, "gains2")
    return _scheme_from_positions(*top_selection(np.minimum(arr1, arr2), config.n_selected))


def default_scheme(config: SystemConfig) -> SelectionResult:
    """Fixed scheme without adaptation: selected {1..N_T/2}, complementary N_T/2+1."""
    half = config.baseline_selected
    scheme = MappingScheme(
        selected=tuple(range(1, half + 1)),
        complementary=half + 1,
    )
    return SelectionResult(
        scheme_hop1=scheme, scheme_hop2=scheme, methodology=Methodology.NONE,
    )


def select_schemes(
    methodology: Methodology, realization: ChannelRealization, config: SystemConfig,
) -> SelectionResult:
    """Apply one selection policy to a channel realization."""
    if methodology == Methodology.NONE:
        return default_scheme(config)
    g1, g2 = realization.gains(1), realization.gains(2)
    if methodology == Methodology.DECENTRALIZED:
        return SelectionResult(
            scheme_hop1=select_decentralized(g1, config),
            scheme_hop2=select_decentralized(g2, config),
            methodology=methodology,
        )
    if methodology == Methodology.CENTRALIZED:
        scheme = select_centralized(g1, g2, config)
        return SelectionResult(scheme_hop1=scheme, scheme_hop2=scheme, methodology=methodology)
    raise ParameterError(f"methodology {methodology.value} has no mapping scheme")


def batch_slot_positions(
    methodology: Methodology, gains1: np.ndarray, gains2: np.ndarray, n_selected: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-trial absolute slot positions (0-based), shape (B, N_S+1), for both hops.

    Columns 0..N_S-1 are the selected subcarriers in relative order; the last
    column is the complementary subcarrier.
    """
    batch = gains1.shape[0]
    if methodology == Methodology.NONE:
        fixed = np.broadcast_to(np.arange(n_selected + 1), (batch, n_selected + 1))
        return fixed, fixed
    if methodology == Methodology.DECENTRALIZED:
        sel1, comp1 = top_selection(gains1, n_selected)
        sel2, comp2 = top_selection(gains2, n_selected)
        return (
            np.concatenate([sel1, comp1[:, None]], axis=1),
            np.concatenate([sel2, comp2[:, None]], axis=1),
        )
    if methodology == Methodology.CENTRALIZED:
        sel, comp = top_selection(np.minimum(gains1, gains2), n_selected)
        slots = np.concatenate([sel, comp[:, None]], axis=1)
        return slots, slots
    raise ParameterError(f"methodology {methodology.value} has no mapping scheme")
