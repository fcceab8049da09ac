"""Prime enumeration and arithmetic-function tables backed by numpy."""

from __future__ import annotations

from math import isqrt
from typing import Iterator

import numpy as np

SEGMENT = 1 << 20


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    is_prime[4::2] = False
    for p in range(3, isqrt(limit) + 1, 2):
        if is_prime[p]:
            is_prime[p * p :: 2 * p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def prime_segments(lo: int, hi: int, segment: int = SEGMENT) -> Iterator[np.ndarray]:
    """Yield ascending arrays of the primes in [lo, hi), one sieve segment at a time."""
    lo = max(lo, 2)
    if hi <= lo:
        return
    base = simple_sieve(isqrt(hi - 1) + 1)
    for start in range(lo, hi, segment):
        stop = min(start + segment, hi)
        mark = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            mark[first - start :: p] = False
        out = np.flatnonzero(mark) + start
        if out.size:
            yield out.astype(np.int64)


def primes_in_range(lo: int, hi: int) -> np.ndarray:
    parts = list(prime_segments(lo, hi))
    if not parts:
        return np.array([], dtype=np.int64)
    return np.concatenate(parts)


def prime_count(x: int) -> int:
    return sum(int(s.size) for s in prime_segments(2, x + 1))


def phi_table(n: int) -> np.ndarray:
    """Euler phi of 0..n (phi[0] is 0)."""
    phi = np.arange(n + 1, dtype=np.int64)
    for p in simple_sieve(n):
        p = int(p)
        phi[p::p] -= phi[p::p] // p
    return phi
