"""Critical power ratio between adaptive and fixed-scheme capacity.

The fixed N_T/2 scheme activates more subcarriers on average than an
adaptive scheme with N_S < N_T/2, so at high P_t/N_0 its capacity
overtakes the adaptive one.  The critical power ratio is the P_t/N_0 of
that crossing.  When N_S >= N_T/2 the adaptive scheme stays ahead at
every power and there is no crossing.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from scipy import optimize

from oim_relay.analytics.capacity import capacity_average
from oim_relay.core.config import Methodology, SystemConfig
from oim_relay.core.errors import DomainError, IntractableError, ParameterError

ADAPTIVE_METHODOLOGIES = (Methodology.DECENTRALIZED, Methodology.CENTRALIZED)

DEFAULT_SEARCH_DB = (-20.0, 80.0)


@dataclass(frozen=True)
class CriticalPoint:
    """One (N_T, N_S, methodology) entry; ``snr_db`` is None without a crossing."""

    n_total: int
    n_selected: int
    methodology: Methodology
    snr_db: float | None


def capacity_gap(methodology: Methodology, config: SystemConfig) -> float:
    """Adaptive capacity minus fixed-scheme capacity at ``config.snr_tx``."""
    return capacity_average(methodology, config) - capacity_average(Methodology.NONE, config)


def critical_power_ratio(
    methodology: Methodology,
    config: SystemConfig,
    lo_db: float = DEFAULT_SEARCH_DB[0],
    hi_db: float = DEFAULT_SEARCH_DB[1],
    xtol: float = 1e-6,
) -> float:
    """P_t/N_0 in dB at which the fixed scheme's capacity equals the adaptive one.

    Raises DomainError when the capacity gap keeps one sign on [lo_db, hi_db].
    """
    if methodology not in ADAPTIVE_METHODOLOGIES:
        raise ParameterError(
            f"critical power ratio needs an adaptive methodology, got {methodology.value}"
        )
    if not lo_db < hi_db:
        raise ParameterError(f"search range must satisfy lo_db < hi_db, got [{lo_db}, {hi_db}]")

    def gap(snr_db: float) -> float:
        return capacity_gap(methodology, config.with_snr_db(snr_db))

    low, high = gap(lo_db), gap(hi_db)
    if low == 0.0:
        return lo_db
    if high == 0.0:
        return hi_db
    if (low > 0) == (high > 0):
        raise DomainError(
            f"no capacity crossing for N_T={config.n_total}, N_S={config.n_selected} "
            f"({methodology.value}) in [{lo_db}, {hi_db}] dB"
        )
    return float(optimize.brentq(gap, lo_db, hi_db, xtol=xtol))


def critical_power_table(
    methodologies: Sequence[Methodology],
    n_totals: Iterable[int],
    base: SystemConfig | None = None,
    lo_db: float = DEFAULT_SEARCH_DB[0],
    hi_db: float = DEFAULT_SEARCH_DB[1],
) -> list[CriticalPoint]:
    """Critical power ratio against N_S = 1 .. N_T-1 for every N_T and methodology.

    Entries without a crossing, or whose capacity sums are intractable,
    carry ``snr_db=None``.
    """
    points: list[CriticalPoint] = []
    for n_total in n_totals:
        for methodology in methodologies:
            for n_selected in range(1, n_total):
                if base is None:
                    config = SystemConfig(n_total=n_total, n_selected=n_selected, apm_order=2)
                else:
                    config = base.with_updates(n_total=n_total, n_selected=n_selected)
                try:
                    snr_db: float | None = critical_power_ratio(methodology, config, lo_db, hi_db)
                except (DomainError, IntractableError):
                    snr_db = None
                points.append(CriticalPoint(n_total, n_selected, methodology, snr_db))
    return points
