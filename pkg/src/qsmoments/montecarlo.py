"""Seeded Monte Carlo estimates of quicksort comparison-count moments.

Randomness comes from SplitMix64 (Steele, Lea & Flood 2014), implemented here
so output is bit-identical on every platform:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    output z ^ (z >> 31)                       (all mod 2**64)

Seed derivation: ``derive_seed(seed, i) = mix(seed + (i + 1) * GOLDEN)``
where ``mix`` is the output finalizer above.  Trial t of a run seeded with s
starts from state ``derive_seed(s, t)``; row n of a convergence table is run
with seed ``derive_seed(s, n)``.

Shuffle: Fisher-Yates from the last index down, position i swapping with
j = (x * (i + 1)) >> 64 for a fresh 64-bit draw x.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .closed_form import mean_closed, variance_closed
from .errors import ContractViolation

PRNG_ID = "splitmix64"
SEED_DERIVATION_ID = "splitmix64-mix(seed + (index+1)*0x9E3779B97F4A7C15)"

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    return mix64((seed + (index + 1) * GOLDEN) & MASK64)


class SplitMix64:
    """Minimal SplitMix64 stream; ``state`` is the whole generator state."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def bounded(self, bound: int) -> int:
        """Integer in [0, bound) by widening multiply."""
        return (self.next_u64() * bound) >> 64


def shuffle(items: list, rng: SplitMix64) -> list:
    """Unbiased in-place Fisher-Yates shuffle; returns ``items``."""
    for i in range(len(items) - 1, 0, -1):
        j = rng.bounded(i + 1)
        items[i], items[j] = items[j], items[i]
    return items


def random_permutation(n: int, seed: int) -> list:
    return shuffle(list(range(1, n + 1)), SplitMix64(seed))


def _permutation_fast(n: int, state: int) -> list:
    # inlined copy of random_permutation for the trial loop; must stay in sync
    a = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):
        state = (state + GOLDEN) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * _M1) & MASK64
        z = ((z ^ (z >> 27)) * _M2) & MASK64
        j = ((z ^ (z >> 31)) * (i + 1)) >> 64
        a[i], a[j] = a[j], a[i]
    return a


def comparison_cost(seq: list) -> int:
    """Quicksort cost of ``seq`` (last-element pivot, m+1 per call) without building the output."""
    total = 0
    stack = [seq]
    while stack:
        s = stack.pop()
        m = len(s)
        if m == 0:
            continue
        total += m + 1
        if m == 1:
            continue
        p = s[-1]
        stack.append([x for x in s if x < p])
        stack.append([x for x in s if x > p])
    return total


@dataclass(frozen=True)
class SampleStats:
    n: int
    trials: int
    seed: int
    sample_mean: float
    sample_variance: float
    mean_z_score: float
    # exact sums of costs and squared costs, from which the floats are rounded
    sum_cost: int
    sum_cost_sq: int

    def to_dict(self) -> dict:
        return asdict(self)


def _accumulate(n: int, seed: int, start: int, stop: int) -> tuple:
    s1 = s2 = 0
    for t in range(start, stop):
        c = comparison_cost(_permutation_fast(n, derive_seed(seed, t)))
        s1 += c
        s2 += c * c
    return s1, s2


def sample_costs(n: int, trials: int, seed: int) -> SampleStats:
    """Estimate mean and variance of the comparison count for n keys.

    Costs are accumulated as exact integer sums, so the statistics do not
    depend on summation order and are rounded to float exactly once.
    """
    if n < 1:
        raise ContractViolation(f"n must be >= 1, got {n}")
    if trials < 2:
        raise ContractViolation(f"need at least 2 trials, got {trials}")
    seed &= MASK64
    s1, s2 = _accumulate(n, seed, 0, trials)

    mean = Fraction(s1, trials)
    var = Fraction(trials * s2 - s1 * s1, trials * (trials - 1))
    target_var = variance_closed(n)
    if target_var:
        # z = (mean - mu) / sqrt(var/trials); square in exact arithmetic first
        diff = mean - mean_closed(n)
        z2 = diff * diff * trials / target_var
        z = math.copysign(math.sqrt(z2), diff) if diff else 0.0
    else:
        z = 0.0 if mean == mean_closed(n) else math.copysign(math.inf, mean - mean_closed(n))
    return SampleStats(n, trials, seed, float(mean), float(var), z, s1, s2)


def convergence_table(n_values: list, trials: int, seed: int) -> list:
    """One SampleStats per n; row n uses seed ``derive_seed(seed, n)``."""
    for n in n_values:
        if n < 1:
            raise ContractViolation(f"every n must be >= 1, got {n}")
    return [sample_costs(n, trials, derive_seed(seed & MASK64, n)) for n in n_values]
