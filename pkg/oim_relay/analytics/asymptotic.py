"""Symbolic derivation of the high-SNR outage leading term.

Two-layer check of the diversity order:
  1. Symbolic: expand the exact average outage as a power series in
     x = N_0/P_t with exact rational arithmetic and read off the lowest
     non-vanishing power and its coefficient.
  2. Closed form: compare against ``outage_asymptotic`` evaluated at unit SNR.

Disagreement raises AsymptoticMismatch.  This is the only module that
imports SymPy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

from oim_relay.analytics.combinatorics import (
    complementary_order,
    symbol_count_weights,
    upsilon_exact,
    upsilon_support,
)
from oim_relay.analytics.outage import outage_asymptotic
from oim_relay.core.config import Methodology, SystemConfig
from oim_relay.core.patterns import enumerate_patterns

_x = sp.Symbol("x", positive=True)


class AsymptoticMismatch(Exception):
    """Raised when the symbolic and closed-form asymptotes disagree."""


@dataclass(frozen=True)
class OutageLeadingTerm:
    """P_o ~ coefficient * (N_0/P_t)^order as P_t/N_0 grows."""

    methodology: Methodology
    order: int
    coefficient: Fraction

    def evaluate(self, snr_tx: float) -> float:
        return float(self.coefficient) * snr_tx ** -self.order


def _rational(value: float) -> sp.Rational:
    return sp.nsimplify(value, rational=True)


def _truncate(poly: sp.Poly, degree: int) -> sp.Poly:
    terms = {m: c for m, c in poly.as_dict().items() if m[0] <= degree}
    if not terms:
        return sp.Poly(0, _x, domain=sp.QQ)
    return sp.Poly.from_dict(terms, _x, domain=sp.QQ)


def _power(poly: sp.Poly, n: int, degree: int) -> sp.Poly:
    result = sp.Poly(1, _x, domain=sp.QQ)
    for _ in range(n):
        result = _truncate(result * poly, degree)
    return result


def _exponential_cdf(rate: sp.Rational, degree: int) -> sp.Poly:
    """Taylor polynomial of 1 - exp(-rate x) through x^degree."""
    expr = -sum((-rate * _x) ** j / sp.factorial(j) for j in range(1, degree + 1))
    return sp.Poly(expr, _x, domain=sp.QQ)


def _order_stat_cdf(xi: int, n_total: int, cdf: sp.Poly, degree: int) -> sp.Poly:
    one = sp.Poly(1, _x, domain=sp.QQ)
    total = sp.Poly(0, _x, domain=sp.QQ)
    for n in range(xi, n_total + 1):
        term = _power(cdf, n, degree) * _power(one - cdf, n_total - n, degree)
        total = total + _truncate(term, degree) * math.comb(n_total, n)
    return _truncate(total, degree)


def _sorted_hop_series(
    config: SystemConfig, mu: sp.Rational, s: sp.Rational, degree: int,
) -> list[sp.Poly]:
    n_total = config.n_total
    series: list[sp.Poly] = []
    for pattern in enumerate_patterns(config.n_selected):
        if pattern.is_complementary:
            cdf = _exponential_cdf(s / mu, degree)
            series.append(_order_stat_cdf(complementary_order(config), n_total, cdf, degree))
            continue
        cdf = _exponential_cdf(s * pattern.n_active / mu, degree)
        total = sp.Poly(0, _x, domain=sp.QQ)
        for xi in upsilon_support(pattern, config):
            weight = upsilon_exact(pattern, xi, config)
            total = total + _order_stat_cdf(xi, n_total, cdf, degree) * sp.Rational(
                weight.numerator, weight.denominator,
            )
        series.append(total)
    return series


def _average_outage_series(
    methodology: Methodology, config: SystemConfig, s: sp.Rational, degree: int,
) -> sp.Poly:
    config = config.for_methodology(methodology)
    mu1 = _rational(config.mean_gain_hop1)
    mu2 = _rational(config.mean_gain_hop2)
    mu_link = mu1 * mu2 / (mu1 + mu2)
    one = sp.Poly(1, _x, domain=sp.QQ)

    if methodology == Methodology.FPSK:
        return _exponential_cdf(s / mu_link, degree)

    if methodology == Methodology.DECENTRALIZED:
        hop1 = _sorted_hop_series(config, mu1, s, degree)
        hop2 = _sorted_hop_series(config, mu2, s, degree)
        per_pattern = [_truncate(p + q - p * q, degree) for p, q in zip(hop1, hop2)]
    elif methodology == Methodology.CENTRALIZED:
        per_pattern = _sorted_hop_series(config, mu_link, s, degree)
    else:
        weighted = sp.Poly(0, _x, domain=sp.QQ)
        for n_sym, count in symbol_count_weights(config.n_selected):
            survive = one - _exponential_cdf(s * n_sym / mu_link, degree)
            weighted = weighted + (one - _power(survive, n_sym, degree)) * count
        return _truncate(weighted * sp.Rational(1, 2**config.n_selected), degree)

    total = sum(per_pattern[1:], per_pattern[0])
    return _truncate(total * sp.Rational(1, len(per_pattern)), degree)


def derive_outage_leading_term(
    methodology: Methodology, config: SystemConfig, s: float | None = None,
) -> OutageLeadingTerm:
    """Lowest-order term of the exact average outage in x = N_0/P_t."""
    threshold = _rational(config.outage_threshold if s is None else s)
    degree = config.n_total
    series = _average_outage_series(methodology, config, threshold, degree)
    nonzero = sorted((m[0], c) for m, c in series.as_dict().items() if c != 0)
    if not nonzero:
        raise AsymptoticMismatch(
            f"no non-vanishing term through x^{degree} for {methodology.value}"
        )
    order, coeff = nonzero[0]
    coeff = sp.Rational(coeff)
    return OutageLeadingTerm(
        methodology=methodology,
        order=order,
        coefficient=Fraction(int(coeff.p), int(coeff.q)),
    )


def expected_diversity_order(methodology: Methodology, config: SystemConfig) -> int:
    if methodology in (Methodology.DECENTRALIZED, Methodology.CENTRALIZED):
        return config.diversity_order
    return 1


def reconcile_outage_asymptote(
    methodology: Methodology,
    config: SystemConfig,
    s: float | None = None,
    rel_tol: float = 1e-9,
) -> OutageLeadingTerm:
    """Derive the leading term symbolically and cross-check the closed form.

    Raises AsymptoticMismatch if the diversity order or the coefficient
    disagree.
    """
    threshold = config.outage_threshold if s is None else s
    derived = derive_outage_leading_term(methodology, config, threshold)

    expected_order = expected_diversity_order(methodology, config)
    if derived.order != expected_order:
        raise AsymptoticMismatch(
            f"{methodology.value}: symbolic diversity order {derived.order}, "
            f"expected {expected_order}"
        )

    closed = outage_asymptotic(methodology, threshold, config.with_updates(snr_tx=1.0))
    symbolic = float(derived.coefficient)
    if abs(symbolic - closed) > rel_tol * max(abs(closed), abs(symbolic)):
        raise AsymptoticMismatch(
            f"{methodology.value}: symbolic coefficient {symbolic!r}, "
            f"closed form {closed!r}"
        )
    return derived
