"""Per-trial records for strict Monte Carlo runs."""

from __future__ import annotations

from dataclasses import dataclass

from oim_relay.core.blocks import MappingScheme
from oim_relay.core.config import Methodology, SystemConfig
from oim_relay.core.invariants import check_active_subcarriers, check_scheme


@dataclass(frozen=True)
class TrialRecord:
    """What one trial did: pattern, schemes, per-hop outcomes.

    ``index_weight`` is the Hamming weight of the drawn index bits; the
    detection fields are None for metrics that do not detect.
    """

    trial: int
    index_k: int
    index_weight: int
    scheme_hop1: MappingScheme | None
    scheme_hop2: MappingScheme | None
    active_hop1: tuple[int, ...]
    active_hop2: tuple[int, ...]
    outage_hop1: bool
    outage_hop2: bool
    capacity: float
    relay_correct: bool | None = None
    destination_correct: bool | None = None

    @property
    def n_active(self) -> int:
        return len(self.active_hop1)


def check_trial_record(
    record: TrialRecord, methodology: Methodology, config: SystemConfig,
) -> list[str]:
    violations: list[str] = []
    tag = f"trial {record.trial}"
    if record.capacity < 0:
        violations.append(f"{tag}: negative capacity {record.capacity!r}")
    if len(record.active_hop1) != len(record.active_hop2):
        violations.append(f"{tag}: hops disagree on the number of active subcarriers")
    if record.relay_correct is False and record.destination_correct is None:
        violations.append(f"{tag}: relay detection recorded without destination outcome")

    if methodology == Methodology.FPSK:
        if record.n_active != 1:
            violations.append(f"{tag}: FPSK must activate exactly one subcarrier")
        if record.active_hop1 != record.active_hop2:
            violations.append(f"{tag}: FPSK hops must share the active subcarrier")
        return violations

    scheme_config = config.for_methodology(methodology)
    for hop, scheme, active in (
        (1, record.scheme_hop1, record.active_hop1),
        (2, record.scheme_hop2, record.active_hop2),
    ):
        if scheme is None:
            violations.append(f"{tag}: hop {hop} has no mapping scheme")
            continue
        violations.extend(f"{tag}: {v}" for v in check_scheme(scheme, scheme_config))
        violations.extend(
            f"{tag}: {v}"
            for v in check_active_subcarriers(record.index_weight, active, scheme, hop)
        )
    if (
        methodology in (Methodology.CENTRALIZED, Methodology.NONE)
        and record.scheme_hop1 != record.scheme_hop2
    ):
        violations.append(f"{tag}: {methodology.value} must reuse the hop-1 scheme")
    if record.index_k - 1 != 0 and record.index_weight == 0:
        violations.append(f"{tag}: k={record.index_k} has zero index weight")
    return violations
