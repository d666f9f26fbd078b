"""Exact cost distributions of randomized quicksort and random BST path length.

Both statistics obey the same split recurrence over the rank k of the first
pivot (or root).  With A_n(z) = sum_s a_{n,s} z^s holding integer counts:

    A_n(z) = z**toll(n) * sum_{k=1..n} C(n-1, k-1) A_{k-1}(z) A_{n-k}(z),  A_0 = 1

where toll(n) = n + 1 for quicksort comparisons and n - 1 for BST internal
path length.  Dividing by n! recovers the probability generating function.

Polynomial products are done by Kronecker substitution: each count vector is
packed into one big integer with a fixed-width slot per coefficient, so a
convolution becomes a single integer multiplication.  Every coefficient of
every partial sum is bounded by n!, which fixes the slot width.
"""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ContractViolation, ResourceLimitError
from .exact_arith import binomial

DEFAULT_MAX_N = 64


@dataclass(frozen=True)
class CountPolynomial:
    """Counts of permutations of n keys by cost: ``counts[i]`` have cost ``min_cost + i``."""

    n: int
    min_cost: int
    counts: tuple

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if not counts or counts[0] == 0 or counts[-1] == 0:
            raise ContractViolation("counts must be non-empty with nonzero ends")
        if any(c < 0 for c in counts):
            raise ContractViolation("counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_histogram(cls, n: int, hist: dict) -> "CountPolynomial":
        costs = [c for c, v in hist.items() if v]
        lo, hi = min(costs), max(costs)
        return cls(n, lo, tuple(hist.get(c, 0) for c in range(lo, hi + 1)))

    @property
    def max_cost(self) -> int:
        return self.min_cost + len(self.counts) - 1

    @property
    def total(self) -> int:
        return sum(self.counts)

    def items(self):
        """(cost, count) pairs with nonzero count, in increasing cost."""
        return [(self.min_cost + i, c) for i, c in enumerate(self.counts) if c]

    def as_dict(self) -> dict:
        return dict(self.items())

    def shifted(self, offset: int) -> "CountPolynomial":
        return CountPolynomial(self.n, self.min_cost + offset, self.counts)

    def probability(self, cost: int) -> Fraction:
        i = cost - self.min_cost
        if 0 <= i < len(self.counts):
            return Fraction(self.counts[i], math.factorial(self.n))
        return Fraction(0)


class Source(enum.Enum):
    EXACT_DISTRIBUTION = "exact"
    CLOSED_FORM = "closed"


@dataclass(frozen=True)
class MomentReport:
    n: int
    betas: tuple  # betas[0] is the first factorial moment
    mean: Fraction
    variance: Fraction
    source: Source

    @property
    def max_order(self) -> int:
        return len(self.betas)

    def beta(self, s: int) -> Fraction:
        return self.betas[s - 1]


def _slot_bits(n: int) -> int:
    # one spare byte keeps the slot strictly wider than n!
    return (math.factorial(n).bit_length() // 8 + 1) * 8


def _pack(counts: Sequence[int], nbytes: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(nbytes, "little") for c in counts), "little")


def _unpack(x: int, length: int, nbytes: int) -> list:
    raw = x.to_bytes(length * nbytes, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(length)]


def _next_polynomial(n: int, lower: list, toll: int) -> CountPolynomial:
    slot = _slot_bits(n)
    nbytes = slot // 8
    packed = [_pack(p.counts, nbytes) for p in lower]
    lo = min(lower[k - 1].min_cost + lower[n - k].min_cost for k in range(1, n + 1))
    hi = max(lower[k - 1].max_cost + lower[n - k].max_cost for k in range(1, n + 1))

    acc = 0
    # ranks k and n+1-k produce the same product with the same binomial weight
    for k in range(1, (n + 1) // 2 + 1):
        a, b = k - 1, n - k
        weight = binomial(n - 1, k - 1) * (1 if a == b else 2)
        offset = lower[a].min_cost + lower[b].min_cost - lo
        acc += (weight * packed[a] * packed[b]) << (offset * slot)

    counts = _unpack(acc, hi - lo + 1, nbytes)
    return CountPolynomial(n, lo + toll, tuple(counts))


def naive_next_polynomial(n: int, lower: list, toll: int) -> CountPolynomial:
    """Unpaired, unpacked evaluation of the recurrence; used to cross-check the fast path."""
    hist: dict = {}
    for k in range(1, n + 1):
        w = binomial(n - 1, k - 1)
        for ca, va in lower[k - 1].items():
            for cb, vb in lower[n - k].items():
                s = ca + cb + toll
                hist[s] = hist.get(s, 0) + w * va * vb
    return CountPolynomial.from_histogram(n, hist)


class _RecurrenceTable:
    """Bottom-up memo of A_0, A_1, ... for one toll function.

    Entries are appended under a lock and are immutable once visible.
    """

    def __init__(self, toll: Callable[[int], int]):
        self._toll = toll
        self._table = [CountPolynomial(0, 0, (1,))]
        self._lock = threading.Lock()

    def get(self, n: int) -> CountPolynomial:
        table = self._table
        if n < len(table):
            return table[n]
        with self._lock:
            for m in range(len(table), n + 1):
                table.append(_next_polynomial(m, table, self._toll(m)))
        return table[n]


_comparisons = _RecurrenceTable(lambda n: n + 1)
_bst_paths = _RecurrenceTable(lambda n: n - 1)


def _check_size(n: int, max_n: int | None) -> None:
    cap = DEFAULT_MAX_N if max_n is None else max_n
    if n < 0:
        raise ContractViolation(f"n must be a natural number, got {n}")
    if n > cap:
        raise ResourceLimitError(f"n = {n} exceeds the configured maximum {cap}")


def comparison_counts(n: int, *, max_n: int | None = None) -> CountPolynomial:
    """Exact distribution a(n, .) of quicksort comparison counts over all n! inputs."""
    _check_size(n, max_n)
    return _comparisons.get(n)


def bst_path_counts(n: int, *, max_n: int | None = None) -> CountPolynomial:
    """Exact distribution of internal path length of the BST built from a random permutation."""
    _check_size(n, max_n)
    return _bst_paths.get(n)


def factorial_moment(dist: CountPolynomial, s: int) -> Fraction:
    """E[X (X-1) ... (X-s+1)] under the uniform distribution on permutations."""
    if s < 0:
        raise ContractViolation(f"moment order must be >= 0, got {s}")
    total = 0
    for cost, count in dist.items():
        total += count * math.perm(cost, s)
    return Fraction(total, math.factorial(dist.n))


def moments_report(n: int, max_order: int = 2, *, max_n: int | None = None) -> MomentReport:
    if max_order < 2:
        raise ContractViolation(f"max_order must be >= 2, got {max_order}")
    dist = comparison_counts(n, max_n=max_n)
    betas = tuple(factorial_moment(dist, s) for s in range(1, max_order + 1))
    b1, b2 = betas[0], betas[1]
    return MomentReport(n, betas, b1, b2 - b1 * b1 + b1, Source.EXACT_DISTRIBUTION)


def shift_identity_check(n: int, *, max_n: int | None = None) -> bool:
    """True iff the comparison distribution is the path-length distribution shifted by 2n."""
    return comparison_counts(n, max_n=max_n) == bst_path_counts(n, max_n=max_n).shifted(2 * n)
