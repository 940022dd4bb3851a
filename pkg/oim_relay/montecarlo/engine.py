"""Vectorized Monte Carlo engines for outage, capacity and SER.

Trials are simulated in fixed-size batches.  Batch b draws from its own
Philox stream (seed, b), and per-batch tallies are merged in batch order,
so an estimate depends only on (config, methodology, trials, seed,
batch_size) and never on the number of worker processes.

Within a batch the draw order is fixed: channel gains for both hops,
then patterns, then (SER only) symbols and noise.  Runs of different
methodologies with the same seed therefore see identical channels.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Any

import numpy as np

from oim_relay.channel.fading import RngStream, sample_channel_batch
from oim_relay.core.blocks import MappingScheme
from oim_relay.core.config import Methodology, Metric, SystemConfig
from oim_relay.core.errors import ParameterError
from oim_relay.core.invariants import ProtocolInvariantViolation
from oim_relay.core.results import MetricEstimate
from oim_relay.mapping.selection import batch_slot_positions
from oim_relay.modem.codebook import (
    Codebook,
    codebook_for,
    detect_candidates,
    pattern_power_for,
)
from oim_relay.montecarlo.records import TrialRecord, check_trial_record

DEFAULT_BATCH_SIZE = 10_000

_SIMULATED_METRICS = (Metric.OUTAGE, Metric.CAPACITY, Metric.SER)


@dataclass(frozen=True)
class BatchTally:
    """Running sums of one metric over a set of trials.

    For SER ``total`` counts end-to-end block errors, ``hop1_events`` the
    blocks the relay got wrong and ``hop2_events`` the blocks the
    destination decided differently from what the relay sent.
    """

    trials: int = 0
    total: float = 0.0
    total_sq: float = 0.0
    hop1_events: int = 0
    hop2_events: int = 0
    records: tuple[TrialRecord, ...] = field(default=(), repr=False)

    def merge(self, other: BatchTally) -> BatchTally:
        return BatchTally(
            trials=self.trials + other.trials,
            total=self.total + other.total,
            total_sq=self.total_sq + other.total_sq,
            hop1_events=self.hop1_events + other.hop1_events,
            hop2_events=self.hop2_events + other.hop2_events,
            records=self.records + other.records,
        )

    @property
    def mean(self) -> float:
        return self.total / self.trials

    @property
    def std_error(self) -> float:
        variance = max(self.total_sq / self.trials - self.mean**2, 0.0)
        return math.sqrt(variance / self.trials)


@dataclass(frozen=True)
class SerTally:
    """End-to-end SER estimate plus the per-hop detection error rates."""

    estimate: MetricEstimate
    relay_error_rate: float
    second_hop_error_rate: float


def _pattern_groups(codebook: Codebook) -> tuple[np.ndarray, np.ndarray]:
    """First candidate row and candidate count of every pattern."""
    counts = np.bincount(codebook.pattern_of, minlength=codebook.n_patterns)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    return starts, counts


def _draw_patterns(
    gen: np.random.Generator, n_patterns: int, size: int, offset: int, stratified: bool,
) -> np.ndarray:
    if stratified:
        return (offset + np.arange(size)) % n_patterns
    return gen.integers(0, n_patterns, size=size)


def _slot_channels(
    methodology: Methodology,
    hop1: np.ndarray,
    hop2: np.ndarray,
    n_selected: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray | None, np.ndarray | None]:
    """Complex gains seen by each codebook slot, plus slot positions (dual-mode only)."""
    if methodology == Methodology.FPSK:
        return hop1, hop2, None, None
    pos1, pos2 = batch_slot_positions(
        methodology, np.abs(hop1) ** 2, np.abs(hop2) ** 2, n_selected,
    )
    return (
        np.take_along_axis(hop1, pos1, axis=1),
        np.take_along_axis(hop2, pos2, axis=1),
        pos1,
        pos2,
    )


def _noise(gen: np.random.Generator, noise_power: float, shape: tuple[int, ...]) -> np.ndarray:
    scale = math.sqrt(noise_power / 2.0)
    return scale * (gen.standard_normal(shape) + 1j * gen.standard_normal(shape))


def simulate_batch(
    batch_id: int,
    size: int,
    *,
    metric: Metric,
    methodology: Methodology,
    config: SystemConfig,
    seed: int,
    batch_size: int = DEFAULT_BATCH_SIZE,
    stratified: bool = False,
    keep_records: bool = False,
) -> BatchTally:
    """Simulate ``size`` trials drawn from stream (seed, batch_id)."""
    gen = RngStream(seed=seed, stream_id=batch_id).generator()
    hop1, hop2 = sample_channel_batch(gen, config, size)
    n_selected = config.for_methodology(methodology).n_selected
    c1, c2, pos1, pos2 = _slot_channels(methodology, hop1, hop2, n_selected)

    pattern_power = pattern_power_for(methodology, config)
    patterns = _draw_patterns(
        gen, pattern_power.shape[0], size, batch_id * batch_size, stratified,
    )
    power = pattern_power[patterns]
    active = power > 0
    snr1 = config.snr_tx * power * np.abs(c1) ** 2
    snr2 = config.snr_tx * power * np.abs(c2) ** 2

    s = config.outage_threshold
    down1 = np.any(active & (snr1 < s), axis=1)
    down2 = np.any(active & (snr2 < s), axis=1)
    capacity = np.where(active, 0.5 * np.log2(1.0 + np.minimum(snr1, snr2)), 0.0).sum(axis=1)

    relay_ok: np.ndarray | None = None
    dest_ok: np.ndarray | None = None
    if metric == Metric.OUTAGE:
        values = (down1 | down2).astype(float)
        hop_events = (int(down1.sum()), int(down2.sum()))
    elif metric == Metric.CAPACITY:
        values = capacity
        hop_events = (0, 0)
    elif metric == Metric.SER:
        codebook = codebook_for(methodology, config)
        starts, counts = _pattern_groups(codebook)
        sent = starts[patterns] + gen.integers(0, counts[patterns])
        amp = math.sqrt(config.tx_power)
        y1 = c1 * amp * codebook.symbols[sent] + _noise(gen, config.noise_power, c1.shape)
        relayed = detect_candidates(y1, c1, codebook, config.tx_power)
        y2 = c2 * amp * codebook.symbols[relayed] + _noise(gen, config.noise_power, c2.shape)
        received = detect_candidates(y2, c2, codebook, config.tx_power)
        relay_ok = relayed == sent
        dest_ok = received == sent
        values = (~dest_ok).astype(float)
        hop_events = (int((~relay_ok).sum()), int((received != relayed).sum()))
    else:
        raise ParameterError(f"metric {metric.value} is not simulated")

    records: tuple[TrialRecord, ...] = ()
    if keep_records:
        records = _build_records(
            batch_id * batch_size, patterns, active,
            pos1, pos2, down1, down2, capacity, relay_ok, dest_ok,
        )
    return BatchTally(
        trials=size,
        total=float(values.sum()),
        total_sq=float(np.square(values).sum()),
        hop1_events=hop_events[0],
        hop2_events=hop_events[1],
        records=records,
    )


def _scheme(positions: np.ndarray) -> MappingScheme:
    return MappingScheme(
        selected=tuple(int(p) + 1 for p in positions[:-1]),
        complementary=int(positions[-1]) + 1,
    )


def _build_records(
    first_trial: int,
    patterns: np.ndarray,
    active: np.ndarray,
    pos1: np.ndarray | None,
    pos2: np.ndarray | None,
    down1: np.ndarray,
    down2: np.ndarray,
    capacity: np.ndarray,
    relay_ok: np.ndarray | None,
    dest_ok: np.ndarray | None,
) -> tuple[TrialRecord, ...]:
    records: list[TrialRecord] = []
    for t in range(patterns.shape[0]):
        slots = np.flatnonzero(active[t])
        if pos1 is None or pos2 is None:
            scheme1 = scheme2 = None
            act1 = act2 = tuple(int(n) + 1 for n in slots)
            weight = 1
        else:
            scheme1, scheme2 = _scheme(pos1[t]), _scheme(pos2[t])
            act1 = tuple(int(pos1[t, n]) + 1 for n in slots)
            act2 = tuple(int(pos2[t, n]) + 1 for n in slots)
            weight = int(patterns[t]).bit_count()
        records.append(
            TrialRecord(
                trial=first_trial + t,
                index_k=int(patterns[t]) + 1,
                index_weight=weight,
                scheme_hop1=scheme1,
                scheme_hop2=scheme2,
                active_hop1=act1,
                active_hop2=act2,
                outage_hop1=bool(down1[t]),
                outage_hop2=bool(down2[t]),
                capacity=float(capacity[t]),
                relay_correct=None if relay_ok is None else bool(relay_ok[t]),
                destination_correct=None if dest_ok is None else bool(dest_ok[t]),
            )
        )
    return tuple(records)


def _batch_sizes(trials: int, batch_size: int) -> list[int]:
    full, rest = divmod(trials, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


def run_metric(
    metric: Metric,
    config: SystemConfig,
    methodology: Methodology,
    trials: int,
    seed: int,
    *,
    workers: int = 1,
    batch_size: int = DEFAULT_BATCH_SIZE,
    stratified: bool = False,
    strict: bool = False,
) -> BatchTally:
    """Merged tally of ``trials`` trials of one metric.

    ``strict`` keeps a :class:`TrialRecord` per trial and raises
    :class:`ProtocolInvariantViolation` when any record breaks the protocol.
    """
    if metric not in _SIMULATED_METRICS:
        raise ParameterError(f"metric {metric.value} is not simulated")
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if batch_size < 1:
        raise ParameterError(f"batch_size must be >= 1, got {batch_size}")
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")

    job = partial(
        simulate_batch,
        metric=metric,
        methodology=methodology,
        config=config,
        seed=seed,
        batch_size=batch_size,
        stratified=stratified,
        keep_records=strict,
    )
    sizes = _batch_sizes(trials, batch_size)
    ids = range(len(sizes))
    if workers > 1 and len(sizes) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(sizes))) as pool:
            tallies = list(pool.map(job, ids, sizes))
    else:
        tallies = [job(b, n) for b, n in zip(ids, sizes)]

    merged = BatchTally()
    for tally in tallies:
        merged = merged.merge(tally)

    if strict:
        violations = [
            v
            for record in merged.records
            for v in check_trial_record(record, methodology, config)
        ]
        if violations:
            raise ProtocolInvariantViolation(f"{metric.value}/{methodology.value}", violations)
    return merged


def _estimate(
    tally: BatchTally, metric: Metric, methodology: Methodology, config: SystemConfig,
) -> MetricEstimate:
    return MetricEstimate(
        mean=tally.mean,
        std_error=tally.std_error,
        trials=tally.trials,
        metric=metric,
        methodology=methodology,
        config=config,
    )


def run_outage(
    config: SystemConfig, methodology: Methodology, trials: int, seed: int, **options: Any,
) -> MetricEstimate:
    """Fraction of trials where some active subcarrier on either hop falls below s."""
    tally = run_metric(Metric.OUTAGE, config, methodology, trials, seed, **options)
    return _estimate(tally, Metric.OUTAGE, methodology, config)


def run_capacity(
    config: SystemConfig, methodology: Methodology, trials: int, seed: int, **options: Any,
) -> MetricEstimate:
    """Mean of sum over active subcarriers of (1/2) log2(1 + min(gamma_1, gamma_2))."""
    tally = run_metric(Metric.CAPACITY, config, methodology, trials, seed, **options)
    return _estimate(tally, Metric.CAPACITY, methodology, config)


def run_ser(
    config: SystemConfig, methodology: Methodology, trials: int, seed: int, **options: Any,
) -> MetricEstimate:
    """Fraction of blocks the destination detects differently from what the source sent."""
    return run_ser_detailed(config, methodology, trials, seed, **options).estimate


def run_ser_detailed(
    config: SystemConfig, methodology: Methodology, trials: int, seed: int, **options: Any,
) -> SerTally:
    tally = run_metric(Metric.SER, config, methodology, trials, seed, **options)
    return SerTally(
        estimate=_estimate(tally, Metric.SER, methodology, config),
        relay_error_rate=tally.hop1_events / tally.trials,
        second_hop_error_rate=tally.hop2_events / tally.trials,
    )
