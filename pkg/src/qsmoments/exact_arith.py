"""Exact integer/rational primitives and truncated power series in one variable.

Rationals are :class:`fractions.Fraction`, which normalizes to lowest terms
with a positive denominator on construction.  Nothing in this module touches
floating point.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContractViolation

ExactRational = Fraction

__all__ = [
    "ExactRational",
    "TruncatedSeries",
    "binomial",
    "harmonic",
    "harmonic2",
    "series_mul",
    "series_derivative",
    "geometric_pow_series",
    "log_inv_series",
]


def binomial(n: int, k: int) -> int:
    """C(n, k) for naturals, with C(n, k) = 0 when k > n."""
    if n < 0 or k < 0:
        raise ContractViolation(f"binomial needs naturals, got ({n}, {k})")
    return math.comb(n, k)


class _PrefixSums:
    """Monotone table of partial sums sum_{k<=n} term(k), extended on demand.

    Entries are appended under a lock and never mutated, so readers only ever
    see complete values.
    """

    def __init__(self, power: int):
        self._power = power
        self._table = [Fraction(0)]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> Fraction:
        if n < 0:
            raise ContractViolation(f"harmonic numbers need n >= 0, got {n}")
        table = self._table
        if n < len(table):
            return table[n]
        with self._lock:
            last = table[-1]
            for k in range(len(table), n + 1):
                last = last + Fraction(1, k**self._power)
                table.append(last)
        return table[n]


_harmonic1 = _PrefixSums(1)
_harmonic2 = _PrefixSums(2)


def harmonic(n: int) -> Fraction:
    """H_n = 1 + 1/2 + ... + 1/n, with H_0 = 0."""
    return _harmonic1(n)


def harmonic2(n: int) -> Fraction:
    """Second-order harmonic number 1 + 1/4 + ... + 1/n**2."""
    return _harmonic2(n)


class TruncatedSeries:
    """Power series c_0 + c_1 u + ... + c_N u^N with exact rational coefficients.

    Binary operations require both operands to share the same order; terms
    beyond u^N are discarded.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if not coeffs:
            raise ContractViolation("a truncated series needs at least one coefficient")
        self._coeffs = coeffs

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls([0] * (order + 1))

    @classmethod
    def monomial(cls, power: int, order: int, coeff=1) -> "TruncatedSeries":
        c = [0] * (order + 1)
        if power <= order:
            c[power] = coeff
        return cls(c)

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    def __getitem__(self, i: int) -> Fraction:
        return self._coeffs[i]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ContractViolation(
                f"cannot extend a series of order {self.order} to order {order}"
            )
        return TruncatedSeries(self._coeffs[: order + 1])

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by u**k, keeping the order (low-order coefficients fill with 0)."""
        if k == 0:
            return self
        if k > self.order:
            return TruncatedSeries.zero(self.order)
        return TruncatedSeries([0] * k + list(self._coeffs[: len(self._coeffs) - k]))

    def _check(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise TypeError(f"expected TruncatedSeries, got {type(other).__name__}")
        if other.order != self.order:
            raise ContractViolation(
                f"series order mismatch: {self.order} vs {other.order}"
            )

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries(a + b for a, b in zip(self._coeffs, other._coeffs))

    def __sub__(self, other):
        self._check(other)
        return TruncatedSeries(a - b for a, b in zip(self._coeffs, other._coeffs))

    def __neg__(self):
        return TruncatedSeries(-a for a in self._coeffs)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(other * a for a in self._coeffs)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(other * a for a in self._coeffs)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        terms = ", ".join(str(c) for c in self._coeffs)
        return f"TruncatedSeries([{terms}])"


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product of two series of equal order, truncated to that order."""
    a._check(b)
    x, y = a.coeffs, b.coeffs
    # skip zero runs: the log-type series here all start with zeros
    nz_x = [(i, c) for i, c in enumerate(x) if c]
    nz_y = [(j, c) for j, c in enumerate(y) if c]
    out = [Fraction(0)] * len(x)
    top = len(x)
    for i, ci in nz_x:
        for j, cj in nz_y:
            if i + j >= top:
                break
            out[i + j] += ci * cj
    return TruncatedSeries(out)


def series_derivative(a: TruncatedSeries) -> TruncatedSeries:
    """d/du of a series of order N >= 1; the result has order N - 1."""
    if a.order < 1:
        raise ContractViolation("derivative needs a series of order >= 1")
    return TruncatedSeries(k * c for k, c in enumerate(a.coeffs) if k)


def geometric_pow_series(m: int, N: int) -> TruncatedSeries:
    """1/(1-u)**m to order N; coefficient of u**n is C(n+m-1, n)."""
    if m < 1 or N < 0:
        raise ContractViolation(f"geometric_pow_series needs m >= 1, N >= 0, got ({m}, {N})")
    return TruncatedSeries(binomial(n + m - 1, n) for n in range(N + 1))


def log_inv_series(N: int) -> TruncatedSeries:
    """log(1/(1-u)) = u + u**2/2 + u**3/3 + ... to order N."""
    if N < 0:
        raise ContractViolation(f"order must be >= 0, got {N}")
    return TruncatedSeries([0] + [Fraction(1, n) for n in range(1, N + 1)])


def series_from(coeff, N: int) -> TruncatedSeries:
    """Series of order N whose u**n coefficient is ``coeff(n)``."""
    return TruncatedSeries(coeff(n) for n in range(N + 1))


def is_lowest_terms(values: Sequence[Fraction]) -> bool:
    return all(math.gcd(v.numerator, v.denominator) == 1 and v.denominator > 0 for v in values)
