"""Order statistics of exponential channel and link gains.

Orders count from the bottom: xi = 1 is the smallest of N_T gains and
xi = N_T the largest.  Selected subcarriers therefore sit at orders
N_T-N_S+1 .. N_T, and the complementary subcarrier at order N_T-N_S.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import gammaln

from oim_relay.core.errors import ParameterError


def _check_order(xi: int, n_total: int) -> None:
    if not 1 <= xi <= n_total:
        raise ParameterError(f"order xi must lie in [1, {n_total}], got {xi}")


def _check_mu(mu: float) -> None:
    if not mu > 0:
        raise ParameterError(f"mean gain must be > 0, got {mu}")


def _out(values: np.ndarray) -> float | np.ndarray:
    return float(values) if values.ndim == 0 else values


def exponential_cdf(s: ArrayLike, mu: float) -> np.ndarray:
    """F(s) = 1 - exp(-s/mu), accurate for small s."""
    return -np.expm1(-np.asarray(s, dtype=float) / mu)


def order_stat_cdf(xi: int, s: ArrayLike, n_total: int, mu: float) -> float | np.ndarray:
    """P(xi-th smallest of N_T i.i.d. Exp(mu) gains <= s)."""
    _check_order(xi, n_total)
    _check_mu(mu)
    f = exponential_cdf(s, mu)
    g = np.exp(-np.asarray(s, dtype=float) / mu)
    total = np.zeros_like(f)
    for n in range(xi, n_total + 1):
        total = total + math.comb(n_total, n) * f**n * g ** (n_total - n)
    return _out(np.clip(total, 0.0, 1.0))


def order_stat_pdf(xi: int, s: ArrayLike, n_total: int, mu: float) -> float | np.ndarray:
    """Density of the xi-th smallest of N_T i.i.d. Exp(mu) gains."""
    _check_order(xi, n_total)
    _check_mu(mu)
    s_arr = np.asarray(s, dtype=float)
    f = exponential_cdf(s_arr, mu)
    g = np.exp(-s_arr / mu)
    coeff = math.factorial(n_total) / (
        math.factorial(xi - 1) * math.factorial(n_total - xi)
    )
    density = coeff * f ** (xi - 1) * g ** (n_total - xi) * g / mu
    return _out(np.where(s_arr < 0, 0.0, density))


def link_gain_distribution(
    s: ArrayLike, mu1: float, mu2: float,
) -> tuple[float | np.ndarray, float | np.ndarray]:
    """(density, CDF) of min(|h_1|^2, |h_2|^2) on one subcarrier."""
    _check_mu(mu1)
    _check_mu(mu2)
    mu_link = mu1 * mu2 / (mu1 + mu2)
    s_arr = np.asarray(s, dtype=float)
    density = np.exp(-s_arr / mu_link) / mu_link
    return _out(density), _out(exponential_cdf(s_arr, mu_link))


def link_order_stat_cdf(
    xi: int, s: ArrayLike, n_total: int, mu1: float, mu2: float,
) -> float | np.ndarray:
    """Phi_(xi): CDF of the xi-th smallest link gain among N_T links."""
    _check_mu(mu1)
    _check_mu(mu2)
    return order_stat_cdf(xi, s, n_total, mu1 * mu2 / (mu1 + mu2))


def link_order_stat_pdf(
    xi: int, s: ArrayLike, n_total: int, mu1: float, mu2: float,
) -> float | np.ndarray:
    """phi_(xi): density of the xi-th smallest link gain among N_T links."""
    _check_mu(mu1)
    _check_mu(mu2)
    return order_stat_pdf(xi, s, n_total, mu1 * mu2 / (mu1 + mu2))


def log_order_stat_mgf(
    xi: int | None, t: ArrayLike, n_total: int, mu: float,
) -> np.ndarray:
    """ln E[exp(-t U)] for U the xi-th smallest of N_T Exp(mu) gains.

    ``xi=None`` gives the unsorted exponential, -ln(1 + t mu).
    """
    a = np.asarray(t, dtype=float) * mu
    if xi is None:
        return -np.log1p(a)
    _check_order(xi, n_total)
    return (
        gammaln(n_total + 1) - gammaln(n_total - xi + 1)
        + gammaln(n_total - xi + 1 + a) - gammaln(n_total + 1 + a)
    )
