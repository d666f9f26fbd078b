"""Closed-form moments of quicksort comparison counts and checks of the moment ODEs.

Notation: f_s(u) = sum_n beta_s(n) u**n is the generating function of the
s-th factorial moment.  All log factors are written in terms of
L(u) = log(1/(1-u)) = -log(1-u); the f_2 expansion folds the resulting signs
into its term weights (see ``F2_TERMS``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ContractViolation
from .exact_arith import (
    TruncatedSeries,
    binomial,
    geometric_pow_series,
    harmonic,
    harmonic2,
    log_inv_series,
    series_derivative,
    series_from,
)
from .pgf_engine import MomentReport, Source


def mean_closed(n: int) -> Fraction:
    return 2 * ((n + 1) * harmonic(n) - n)


def variance_closed(n: int) -> Fraction:
    return 7 * n * n - 4 * (n + 1) ** 2 * harmonic2(n) - 2 * (n + 1) * harmonic(n) + 13 * n


def beta1_closed(n: int) -> Fraction:
    return 2 * ((n + 1) * harmonic(n) - n)


def beta2_closed(n: int) -> Fraction:
    h, h2 = harmonic(n), harmonic2(n)
    m = n + 1
    return (
        4 * m * m * (h * h - h2)
        + 4 * m * m * h
        - 8 * m * h
        + 8 * n * h
        - 4 * n * h * (5 + 3 * n)
        + 11 * n * n
        + 15 * n
    )


def closed_moments_report(n: int, max_order: int = 2) -> MomentReport:
    """Moment report built from the closed forms; only orders up to 2 are known."""
    if max_order != 2:
        raise ContractViolation("closed forms exist only for factorial moments of order <= 2")
    b1, b2 = beta1_closed(n), beta2_closed(n)
    return MomentReport(n, (b1, b2), mean_closed(n), variance_closed(n), Source.CLOSED_FORM)


def greene_log_coeff(m: int, n: int) -> Fraction:
    """[u^n] (1-u)^-(m+1) L(u), via (H_{n+m} - H_m) C(n+m, n)."""
    return (harmonic(n + m) - harmonic(m)) * binomial(n + m, n)


def greene_log2_coeff(m: int, n: int) -> Fraction:
    """[u^n] (1-u)^-(m+1) L(u)**2."""
    d1 = harmonic(n + m) - harmonic(m)
    d2 = harmonic2(n + m) - harmonic2(m)
    return (d1 * d1 - d2) * binomial(n + m, n)


def f1_coeff(n: int) -> Fraction:
    """[u^n] 2 (1-u)^-2 L(u)."""
    return 2 * greene_log_coeff(1, n)


# f_2 as sum of weight * L**power / (1-u)**pole, with log(1-u) = -L folded in:
#   8 log^2(1-u)/(1-u)^3 -> +8 L^2/(1-u)^3     -8 log(1-u)/(1-u)^3 -> +8 L/(1-u)^3
#  -4 log^2(1-u)/(1-u)^2 -> -4 L^2/(1-u)^2    +12 log(1-u)/(1-u)^2 -> -12 L/(1-u)^2
#   6/(1-u)^3 -> +6                            -6/(1-u)^2 -> -6
F2_TERMS = (
    # (weight, log power, pole order)
    (8, 2, 3),
    (8, 1, 3),
    (-4, 2, 2),
    (-12, 1, 2),
    (6, 0, 3),
    (-6, 0, 2),
)


def _pole_log_coeff(power: int, pole: int, n: int) -> Fraction:
    m = pole - 1
    if power == 0:
        return Fraction(binomial(n + m, n))
    if power == 1:
        return greene_log_coeff(m, n)
    return greene_log2_coeff(m, n)


def f2_coeff(n: int) -> Fraction:
    """[u^n] f_2(u), term by term through the Greene coefficient formulas."""
    return sum((w * _pole_log_coeff(p, q, n) for w, p, q in F2_TERMS), Fraction(0))


def f2_series_direct(N: int) -> TruncatedSeries:
    """f_2 to order N through series products only (no harmonic-number formulas)."""
    L = log_inv_series(N)
    powers = {0: TruncatedSeries.monomial(0, N), 1: L, 2: L * L}
    total = TruncatedSeries.zero(N)
    for w, p, q in F2_TERMS:
        total = total + w * (geometric_pow_series(q, N) * powers[p])
    return total


@dataclass(frozen=True)
class OdeResidualReport:
    s: int
    order: int
    residual: TruncatedSeries

    @property
    def is_zero(self) -> bool:
        return self.residual.is_zero()

    def first_nonzero(self) -> int | None:
        for i, c in enumerate(self.residual):
            if c:
                return i
        return None


def _series(coeffs: Sequence | Callable | None, default: Callable, N: int) -> TruncatedSeries:
    if coeffs is None:
        return series_from(default, N)
    if callable(coeffs):
        return series_from(coeffs, N)
    if len(coeffs) != N + 1:
        raise ContractViolation(f"expected {N + 1} coefficients, got {len(coeffs)}")
    return TruncatedSeries(coeffs)


def ode_residual_f1(N: int, f1: Sequence | Callable | None = None) -> OdeResidualReport:
    """Residual of f1' - 2 f1/(1-u) - 2u/(1-u)^3 - 2/(1-u)^2, to order N - 1.

    ``f1`` overrides the closed-form coefficients (a sequence of N+1 values or
    a function of n), which is how negative controls are injected.
    """
    if N < 2:
        raise ContractViolation(f"ode_residual_f1 needs N >= 2, got {N}")
    F1 = _series(f1, f1_coeff, N)
    lhs = series_derivative(F1) - (2 * (F1 * geometric_pow_series(1, N))).truncate(N - 1)
    rhs = (2 * geometric_pow_series(3, N).shift(1) + 2 * geometric_pow_series(2, N)).truncate(N - 1)
    return OdeResidualReport(1, N, lhs - rhs)


# z**2 expanded around z = 1: 1 + 2(z-1) + (z-1)**2
_Z2_WEIGHTS = (1, 2, 1)


def ode_residual_fs(
    s: int,
    N: int,
    f1: Sequence | Callable | None = None,
    f2: Sequence | Callable | None = None,
) -> OdeResidualReport:
    """Residual of the order-s moment ODE

        f_s'(u) = s! sum_{i+j+k+l+m=s} a_i f_j^(k)(u) f_l^(m)(u) u^(k+m) / (j! k! l! m!)

    with (a_0, a_1, a_2) = (1, 2, 1), evaluated on series truncated at u**N.
    f_0 = 1/(1-u); f_1, f_2 default to the closed forms.
    """
    if s not in (1, 2):
        raise ContractViolation(f"moment ODE check supports s in {{1, 2}}, got {s}")
    if N < s + 2:
        raise ContractViolation(f"ode_residual_fs needs N >= s + 2, got N={N}, s={s}")

    f = [
        geometric_pow_series(1, N),
        _series(f1, f1_coeff, N),
        _series(f2, f2_coeff, N),
    ]

    # u**k f_j^(k)(u) / k! keeps order N: the shift restores the lost top terms
    cache: dict = {}

    def scaled_derivative(j: int, k: int) -> TruncatedSeries:
        key = (j, k)
        if key not in cache:
            g = f[j]
            for _ in range(k):
                g = series_derivative(g)
            padded = TruncatedSeries(list(g) + [0] * k)
            cache[key] = Fraction(1, math.factorial(k)) * padded.shift(k)
        return cache[key]

    rhs = TruncatedSeries.zero(N)
    for i in range(min(s, 2) + 1):
        for j in range(s - i + 1):
            for k in range(s - i - j + 1):
                for l in range(s - i - j - k + 1):
                    m = s - i - j - k - l
                    coef = Fraction(_Z2_WEIGHTS[i], math.factorial(j) * math.factorial(l))
                    rhs = rhs + coef * (scaled_derivative(j, k) * scaled_derivative(l, m))
    rhs = math.factorial(s) * rhs

    lhs = series_derivative(f[s])
    return OdeResidualReport(s, N, lhs - rhs.truncate(N - 1))
