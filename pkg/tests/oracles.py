"""Independent reference computations used to freeze expected values."""
import itertools
import math
from collections import Counter
from fractions import Fraction


def naive_cauchy(a, b):
    """Full double-loop product, truncated afterwards."""
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out[: len(a)]


def recursive_quicksort_cost(seq):
    """Plain recursive textbook form of the cost model."""
    if not seq:
        return 0
    p = seq[-1]
    return (len(seq) + 1
            + recursive_quicksort_cost([x for x in seq if x < p])
            + recursive_quicksort_cost([x for x in seq if x > p]))


def enumerated_factorial_moment(n, s):
    """E[C (C-1) ... (C-s+1)] by direct enumeration of all permutations."""
    total = sum(math.perm(recursive_quicksort_cost(list(p)), s)
                for p in itertools.permutations(range(1, n + 1)))
    return Fraction(total, math.factorial(n))


def enumerated_histogram(n):
    return Counter(recursive_quicksort_cost(list(p)) for p in itertools.permutations(range(1, n + 1)))
