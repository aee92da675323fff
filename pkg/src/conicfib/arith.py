"""Small integer helpers: sieves and factorisation."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from sympy import factorint, isprime


def spf_sieve(limit: int) -> np.ndarray:
    """Smallest prime factor of every k <= limit (spf[0] = spf[1] = 0)."""
    limit = max(int(limit), 1)
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, int(limit ** 0.5) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.nonzero(spf == 0)[0]
    spf[rest] = rest
    spf[0] = spf[1] = 0
    return spf


def primes_upto(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.nonzero(flags)[0].astype(np.int64)


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of |n| as sorted (p, e) pairs."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    return tuple(sorted(factorint(n).items()))


def odd_prime_divisors(values) -> list[int]:
    ps: set[int] = set()
    for x in values:
        ps.update(p for p, _ in factorize(x) if p != 2)
    return sorted(ps)


def is_prime(n: int) -> bool:
    return bool(isprime(n))


def split_power(x: int, p: int) -> tuple[int, int]:
    """Return (v, u) with x = p**v * u and p not dividing u."""
    if x == 0:
        raise ValueError("valuation of 0")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x
