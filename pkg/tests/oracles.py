"""Brute-force reference implementations used only by the tests.

Nothing here imports from the package: each routine decides local
solubility by literally searching for solutions.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd

import numpy as np


def _val(x: int, p: int) -> tuple[int, int]:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def _normalise(coeffs, p):
    """Scale a diagonal form so every coefficient has p-valuation 0 or 1,
    with at most one of valuation 1.  Solubility over Q_p is unchanged."""
    out = []
    for c in coeffs:
        v, u = _val(c, p)
        out.append(u * p ** (v & 1))
    if sum(c % p == 0 for c in out) >= 2:
        out = [c // p if c % p == 0 else c * p for c in out]
    return out


@lru_cache(maxsize=256)
def _squares(M: int) -> np.ndarray:
    x = np.arange(M, dtype=np.int64)
    return (x * x) % M


def primitive_zero_mod(coeffs, p: int, k: int) -> bool:
    """Is there (x, y, z), not all divisible by p, with sum c x^2 = 0 mod p^k?

    Some coordinate is then a unit; dividing through by it makes that
    coordinate 1, so each case is a search over the other two.
    """
    M = p**k
    sq = _squares(M)
    for i in range(3):
        a, b = [coeffs[j] % M for j in range(3) if j != i]
        hit = np.zeros(M, dtype=bool)
        hit[(b * sq) % M] = True
        need = (-coeffs[i] - a * sq) % M
        if hit[need].any():
            return True
    return False


def conic_soluble(coeffs, p: int) -> bool:
    """Local solubility of A x^2 + B y^2 + C z^2 = 0; p = 0 means the reals."""
    A, B, C = coeffs
    if 0 in (A, B, C):
        raise ValueError("degenerate conic")
    if p == 0:
        return not (A > 0 and B > 0 and C > 0) and not (A < 0 and B < 0 and C < 0)
    form = _normalise([A, B, C], p)
    # p odd: a primitive zero mod p^2 lifts; p = 2: mod 2^8 is far past the Hensel bound
    return primitive_zero_mod(form, p, 8 if p == 2 else 2)


def hilbert(a: int, b: int, p: int) -> int:
    """(a, b)_p from solubility of z^2 = a x^2 + b y^2."""
    return 1 if conic_soluble((a, b, -1), p) else -1


def odd_primes_of(x: int) -> set[int]:
    x = abs(x)
    out = set()
    d = 3
    while x % 2 == 0:
        x //= 2
    while d * d <= x:
        while x % d == 0:
            out.add(d)
            x //= d
        d += 2
    if x > 1:
        out.add(x)
    return out


def fibre_soluble(coefficient_triples) -> bool:
    """Everywhere local solubility of a product of diagonal conics."""
    places = {0, 2}
    for tri in coefficient_triples:
        for c in tri:
            places |= odd_primes_of(c)
    return all(conic_soluble(tri, p) for tri in coefficient_triples for p in places)


def squarefree(x: int) -> bool:
    x = abs(x)
    d = 2
    while d * d <= x:
        if x % (d * d) == 0:
            return False
        d += 1
    return True


def redei_brute(B: int) -> int:
    """|S(B)| straight from the definition, using the search-based symbols."""
    vals = [x for x in range(-B, B + 1) if x and squarefree(x)]

    def disc(a):
        return a if a % 4 == 1 else 4 * a

    def ok(a, b):
        return all(hilbert(a, b, p) == 1 for p in {0, 2} | odd_primes_of(a) | odd_primes_of(b))

    total = 0
    for a in vals:
        for b in vals:
            if not ok(a, b):
                continue
            for c in vals:
                if not (a % 8 == 1 or b % 8 == 1 or c % 8 == 1):
                    continue
                if gcd(gcd(disc(a), disc(b)), disc(c)) != 1:
                    continue
                if ok(a, c) and ok(b, c):
                    total += 1
    return total
