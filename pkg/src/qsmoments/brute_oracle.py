"""Ground truth by enumeration: run an instrumented quicksort and a BST builder
on every permutation of 1..n and tally the costs.

Quicksort model: a call on m >= 1 keys takes the last key as pivot, splits
the rest into smaller and larger keys (each side keeps its relative order),
charges ``partition_cost(m)`` and recurses on both sides.
"""
from __future__ import annotations

import itertools
from collections import Counter
from typing import Sequence

from .errors import ContractViolation, ResourceLimitError
from .pgf_engine import CountPolynomial

DEFAULT_BRUTE_CAP = 10


def partition_cost(m: int) -> int:
    """Comparisons charged to one partitioning call on m keys."""
    return m + 1


def validate_permutation(perm: Sequence[int]) -> None:
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise ContractViolation(f"not a permutation of 1..{len(perm)}: {list(perm)!r}")


def quicksort(perm: Sequence[int]) -> tuple:
    """Sort with last-element pivots; returns (sorted list, total cost)."""
    out = []
    cost = 0
    # explicit stack: worst-case recursion depth is n
    stack = [(False, list(perm))]
    while stack:
        emit, seq = stack.pop()
        if emit:
            out.append(seq)
            continue
        m = len(seq)
        if m == 0:
            continue
        cost += partition_cost(m)
        pivot = seq[-1]
        smaller = [x for x in seq if x < pivot]
        larger = [x for x in seq if x > pivot]
        stack.append((False, larger))
        stack.append((True, pivot))
        stack.append((False, smaller))
    return out, cost


def quicksort_count(perm: Sequence[int]) -> int:
    validate_permutation(perm)
    return quicksort(perm)[1]


def bst_path_length(perm: Sequence[int]) -> int:
    """Sum of node depths (root at 0) of the unbalanced BST built by inserting perm in order."""
    validate_permutation(perm)
    left: dict = {}
    right: dict = {}
    root = None
    total = 0
    for key in perm:
        if root is None:
            root = key
            continue
        node, depth = root, 1
        while True:
            side = left if key < node else right
            child = side.get(node)
            if child is None:
                side[node] = key
                break
            node, depth = child, depth + 1
        total += depth
    return total


def _check_cap(n: int, cap: int | None) -> None:
    limit = DEFAULT_BRUTE_CAP if cap is None else cap
    if n < 0:
        raise ContractViolation(f"n must be a natural number, got {n}")
    if n > limit:
        raise ResourceLimitError(f"brute-force enumeration of n = {n} exceeds the cap {limit}")


def histogram_quicksort(n: int, *, cap: int | None = None) -> CountPolynomial:
    """Tally quicksort costs over all n! permutations in lexicographic order.

    The sorted output of every run is checked.
    """
    _check_cap(n, cap)
    target = list(range(1, n + 1))
    hist: Counter = Counter()
    for perm in itertools.permutations(target):
        out, cost = quicksort(perm)
        if out != target:
            raise AssertionError(f"quicksort failed to sort {perm!r}: {out!r}")
        hist[cost] += 1
    return CountPolynomial.from_histogram(n, hist)


def histogram_bst(n: int, *, cap: int | None = None) -> CountPolynomial:
    _check_cap(n, cap)
    hist = Counter(bst_path_length(p) for p in itertools.permutations(range(1, n + 1)))
    return CountPolynomial.from_histogram(n, hist)
