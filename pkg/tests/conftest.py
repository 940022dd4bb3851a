"""Shared fixtures for oim-relay tests."""

from __future__ import annotations

import numpy as np
import pytest

from oim_relay.channel.fading import ChannelRealization, RngStream, sample_realization
from oim_relay.core.config import SystemConfig


@pytest.fixture
def config_4_2() -> SystemConfig:
    """N_T=4, N_S=2, BPSK at 20 dB, unit hop gains, s=1."""
    return SystemConfig(n_total=4, n_selected=2, apm_order=2, snr_tx=100.0)


@pytest.fixture
def config_4_2_qpsk() -> SystemConfig:
    return SystemConfig(n_total=4, n_selected=2, apm_order=4, snr_tx=100.0)


@pytest.fixture
def config_8_4() -> SystemConfig:
    return SystemConfig(n_total=8, n_selected=4, apm_order=2, snr_tx=100.0)


@pytest.fixture
def asymmetric_config() -> SystemConfig:
    """Unequal hop gains so hop-specific and link means all differ."""
    return SystemConfig(
        n_total=4,
        n_selected=2,
        apm_order=2,
        mean_gain_hop1=2.0,
        mean_gain_hop2=0.5,
        snr_tx=100.0,
    )


@pytest.fixture
def quiet_config() -> SystemConfig:
    """Practically noiseless link for exact-detection checks."""
    return SystemConfig(n_total=4, n_selected=2, apm_order=4, snr_tx=1e10)


@pytest.fixture
def rng() -> np.random.Generator:
    return RngStream(seed=12345).generator()


@pytest.fixture
def realization(config_4_2: SystemConfig) -> ChannelRealization:
    return sample_realization(RngStream(seed=7, stream_id=3), config_4_2)
