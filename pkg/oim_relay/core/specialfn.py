"""Numerically stable special functions for the closed-form analytics.

Every function accepts a scalar or an array and returns the same shape
(scalars come back as ``float``).
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from oim_relay.core.errors import DomainError

# Above this argument e^x E_1(x) is taken from its asymptotic series.
EI_ASYMPTOTIC_SWITCH = 40.0
_EI_ASYMPTOTIC_TERMS = 30


def _out(values: np.ndarray) -> float | np.ndarray:
    return float(values) if values.ndim == 0 else values


def _require_positive(arr: np.ndarray, name: str) -> None:
    if not np.all(arr > 0):
        raise DomainError(f"{name} requires x > 0, got {arr[~(arr > 0)].ravel()[:3]}")


def log_gamma(x: ArrayLike) -> float | np.ndarray:
    """ln Gamma(x) for x > 0."""
    arr = np.asarray(x, dtype=float)
    _require_positive(arr, "log_gamma")
    return _out(special.gammaln(arr))


def gamma_ratio(a: ArrayLike, b: ArrayLike) -> float | np.ndarray:
    """Gamma(a)/Gamma(b) evaluated in log space."""
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    _require_positive(a_arr, "gamma_ratio")
    _require_positive(b_arr, "gamma_ratio")
    return _out(np.exp(special.gammaln(a_arr) - special.gammaln(b_arr)))


def _exp_e1_asymptotic(x: np.ndarray) -> np.ndarray:
    """e^x E_1(x) ~ (1/x) sum_n (-1)^n n! / x^n, valid for large x."""
    total = np.ones_like(x)
    term = np.ones_like(x)
    for n in range(1, _EI_ASYMPTOTIC_TERMS):
        term = term * (-n / x)
        total = total + term
    return total / x


def exp_ei_neg(x: ArrayLike) -> float | np.ndarray:
    """The product e^{x} Ei(-x) = -e^{x} E_1(x) for x > 0.

    Finite and negative everywhere; tends to -1/x as x grows.
    """
    arr = np.asarray(x, dtype=float)
    _require_positive(arr, "exp_ei_neg")
    near = np.minimum(arr, EI_ASYMPTOTIC_SWITCH)
    far = np.maximum(arr, EI_ASYMPTOTIC_SWITCH)
    direct = np.exp(near) * special.exp1(near)
    result = np.where(arr <= EI_ASYMPTOTIC_SWITCH, direct, _exp_e1_asymptotic(far))
    return _out(-result)


def q_exact(x: ArrayLike) -> float | np.ndarray:
    """Gaussian tail Q(x) = erfc(x / sqrt 2) / 2."""
    arr = np.asarray(x, dtype=float)
    return _out(0.5 * special.erfc(arr / math.sqrt(2.0)))


def q_approx(x: ArrayLike) -> float | np.ndarray:
    """Two-exponential Q-function approximation, tight for large x."""
    arr = np.asarray(x, dtype=float)
    sq = arr * arr
    return _out(np.exp(-sq / 2.0) / 12.0 + np.exp(-2.0 * sq / 3.0) / 4.0)
