"""Closed-form sizes of the word classes."""

import itertools
from functools import lru_cache
from math import comb, perm
from typing import Sequence


def alt_sign(n: int) -> int:
    return -1 if n % 2 else 1


def all_words(n: int, k: int) -> int:
    return k**n


def falling_factorial(k: int, n: int) -> int:
    """(k)_n = k(k-1)...(k-n+1); zero when n > k."""
    return perm(k, n)


@lru_cache
def surjections(n: int, k: int) -> int:
    """Onto functions [n] -> [k], by inclusion-exclusion over missed letters."""
    return sum(alt_sign(j) * comb(k, j) * (k - j) ** n for j in range(k + 1))


@lru_cache
def ordered_bell(n: int) -> int:
    """Competition rankings of n contestants (ordered set partitions)."""
    return sum(surjections(n, j) for j in range(n + 1))


def strong_passwords(n: int, sizes: Sequence[int]) -> int:
    """Words hitting every category, by inclusion-exclusion over missed ones."""
    k = sum(sizes)
    total = 0
    for r in range(len(sizes) + 1):
        for missed in itertools.combinations(sizes, r):
            total += alt_sign(r) * (k - sum(missed)) ** n
    return total


def alternating(n: int, kv: int, kc: int) -> int:
    """Class-alternating words, counting both starting categories."""
    long_half, short_half = (n + 1) // 2, n // 2
    return kv**long_half * kc**short_half + kc**long_half * kv**short_half
