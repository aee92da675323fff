"""Mean values of multiplicative weights over squarefree integers.

Used as a numerical check: direct sieve sums against their predicted
main terms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import primes_upto
from .errors import InputError

BRUTE_LIMIT = 10**7


@dataclass(frozen=True)
class MeanValueSpec:
    n: int
    r: int
    c: tuple
    d: tuple
    alpha: tuple

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.r <= self.n:
            raise InputError("need n >= 1 and 0 <= r <= n")
        if not len(self.c) == len(self.d) == len(self.alpha) == self.n:
            raise InputError("c, d and alpha need n entries")
        if any(x < 1 for x in self.c):
            raise InputError("c_i must be >= 1")
        if any(x <= 0 or x % 2 for x in self.d):
            raise InputError("d_i must be even and positive")
        for i, a in enumerate(self.alpha):
            if a % 2 == 0:
                raise InputError("alpha_i must be odd")
            if i < self.r and a % 4 != 1:
                raise InputError("alpha_i must be 1 mod 4 for i <= r")

    @property
    def gammas(self) -> list[Fraction]:
        return [
            Fraction(1, 2) / Fraction(c) if i < self.r else 1 / Fraction(c)
            for i, c in enumerate(self.c)
        ]

    @property
    def gamma(self) -> Fraction:
        return sum(self.gammas, Fraction(0))

    def h(self, i: int, p: int) -> int:
        """h_i at an odd prime p (i is 0-based)."""
        return 1 if p % 4 == 1 or i >= self.r else 0


@dataclass(frozen=True)
class MeanValueResult:
    main_term: float
    C: float
    F: Fraction


def f_factor(spec: MeanValueSpec) -> Fraction:
    bad = set()
    for d in spec.d:
        x = d
        p = 3
        while x % 2 == 0:
            x //= 2
        while x > 1:
            if x % p == 0:
                bad.add(p)
                while x % p == 0:
                    x //= p
            p += 2
    out = Fraction(1)
    for p in sorted(bad):
        full = sum((Fraction(spec.h(i, p)) / Fraction(spec.c[i]) for i in range(spec.n)), Fraction(0))
        part = sum(
            (Fraction(spec.h(i, p)) / Fraction(spec.c[i]) for i in range(spec.n) if spec.d[i] % p),
            Fraction(0),
        )
        out *= (1 + part / p) / (1 + full / p)
    return out


@lru_cache(maxsize=8)
def _odd_primes(P: int) -> np.ndarray:
    ps = primes_upto(P)
    return ps[ps > 2].astype(np.float64)


def constant_C(spec: MeanValueSpec, primes_bound: int = 10**6) -> float:
    ps = _odd_primes(primes_bound)
    one = (ps % 4 == 1)
    H = np.zeros(len(ps))
    for i in range(spec.n):
        hi = np.where(one, 1.0, 1.0 if i >= spec.r else 0.0)
        H += hi / float(spec.c[i])
    g = float(spec.gamma)
    logs = np.log1p(H / ps) + g * np.log1p(-1.0 / ps)
    euler = math.exp(math.fsum(logs))
    pref = 2.0 ** (-g - (2 * spec.n - spec.r)) / math.prod(math.gamma(float(x)) for x in spec.gammas)
    return pref * euler


def beta(c: float, primes_bound: int = 10**6) -> float:
    ps = _odd_primes(primes_bound)
    logs = np.log1p(1.0 / (c * (ps - 1))) + (1.0 / c) * np.log1p(-1.0 / ps)
    return 2.0 ** (-2 - 1.0 / c) / math.gamma(1.0 / c) * math.exp(math.fsum(logs))


def beta_tilde(c: float, primes_bound: int = 10**6) -> float:
    ps = _odd_primes(primes_bound)
    ind = (ps % 4 == 1).astype(np.float64)
    logs = np.log1p(ind / (c * (ps - 1))) + (1.0 / (2 * c)) * np.log1p(-1.0 / ps)
    return 2.0 ** (-1 - 1.0 / (2 * c)) / math.gamma(1.0 / (2 * c)) * math.exp(math.fsum(logs))


def beta_product_rhs(spec: MeanValueSpec, primes_bound: int = 10**6) -> float:
    """Closed form of prod_{i<=r} beta~_{c_i} prod_{i>r} beta_{c_i}."""
    ps = _odd_primes(primes_bound)
    one = ps % 4 == 1
    logs = float(spec.gamma) * np.log1p(-1.0 / ps)
    for i in range(spec.n):
        hi = np.where(one, 1.0, 1.0 if i >= spec.r else 0.0)
        logs = logs + np.log1p(hi / (float(spec.c[i]) * (ps - 1)))
    g = float(spec.gamma)
    pref = 2.0 ** (-(spec.r + 2 * (spec.n - spec.r)) - g)
    pref /= math.prod(math.gamma(float(x)) for x in spec.gammas)
    return pref * math.exp(math.fsum(logs))


def main_term(spec: MeanValueSpec, X, primes_bound: int = 10**6) -> MeanValueResult:
    X = tuple(X)
    if len(X) != spec.n or any(x < 2 for x in X):
        raise InputError("need one bound X_i >= 2 per variable")
    C = constant_C(spec, primes_bound)
    F = f_factor(spec)
    val = float(F) * C
    for x, g in zip(X, spec.gammas):
        val *= x / math.log(x) ** (1 - float(g))
    return MeanValueResult(val, C, F)


# direct evaluation


@lru_cache(maxsize=4)
def _sieve(limit: int):
    """omega, squarefree flag and 'has a prime 3 mod 4' flag for 0..limit."""
    omega = np.zeros(limit + 1, dtype=np.int8)
    sqf = np.ones(limit + 1, dtype=bool)
    has3 = np.zeros(limit + 1, dtype=bool)
    for p in primes_upto(limit).tolist():
        omega[p::p] += 1
        if p * p <= limit:
            sqf[p * p :: p * p] = False
        if p % 4 == 3:
            has3[p::p] = True
    return omega, sqf, has3


def _weights(spec: MeanValueSpec, i: int, X: int) -> np.ndarray:
    omega, sqf, has3 = _sieve(X)
    a = np.arange(X + 1)
    w = np.zeros(X + 1)
    ok = sqf & (a % 8 == spec.alpha[i] % 8) & (np.gcd(a, spec.d[i]) == 1)
    if i < spec.r:
        ok &= ~has3
    ok[0] = False
    w[ok] = float(spec.c[i]) ** (-omega[ok].astype(np.float64))
    return w


def _mobius(limit: int) -> np.ndarray:
    omega, sqf, _ = _sieve(limit)
    mu = np.where(sqf, np.where(omega % 2 == 0, 1, -1), 0).astype(np.int64)
    mu[0] = 0
    return mu


def brute_lhs(spec: MeanValueSpec, X) -> float:
    """Direct sum of mu^2(a_1...a_n) prod h_i(a_i)/c_i^omega(a_i) over the box."""
    X = tuple(int(x) for x in X)
    if len(X) != spec.n or any(x < 1 for x in X):
        raise InputError("need one bound X_i >= 1 per variable")
    if spec.n == 1:
        if X[0] > BRUTE_LIMIT:
            raise InputError("bound too large for direct summation")
        return float(math.fsum(_weights(spec, 0, X[0])))
    if spec.n == 2:
        if max(X) > BRUTE_LIMIT:
            raise InputError("bounds too large for direct summation")
        return _pair_sum(spec, X)
    if math.prod(X) > 10**7:
        raise InputError("bounds too large for direct summation")
    return _direct_sum(spec, X)


def _pair_sum(spec: MeanValueSpec, X) -> float:
    """Two variables: remove common factors with a Mobius sum over e | gcd."""
    top = max(X)
    _sieve(top)
    w1 = _weights(spec, 0, X[0])
    w2 = _weights(spec, 1, X[1])
    mu = _mobius(min(X))
    K = np.zeros(X[0] + 1)
    for e in np.nonzero(mu)[0].tolist():
        if e % 2 == 0:
            continue
        H = w2[e::e].sum()
        if H:
            K[e::e] += mu[e] * H
    return float(math.fsum(w1 * K))


def _direct_sum(spec: MeanValueSpec, X) -> float:
    lists = []
    for i, x in enumerate(X):
        w = _weights(spec, i, x)
        idx = np.nonzero(w)[0]
        lists.append([(int(a), float(w[a])) for a in idx])
    total = []

    def rec(i, prod_so_far, weight):
        if i == len(lists):
            total.append(weight)
            return
        for a, w in lists[i]:
            if math.gcd(a, prod_so_far) == 1:
                rec(i + 1, prod_so_far * a, weight * w)

    rec(0, 1, 1.0)
    return math.fsum(total)


def pair_sum_naive(spec: MeanValueSpec, X) -> float:
    """Quadratic double loop, for cross-checking the Mobius version."""
    w1 = _weights(spec, 0, X[0])
    w2 = _weights(spec, 1, X[1])
    acc = []
    for a in np.nonzero(w1)[0].tolist():
        for b in np.nonzero(w2)[0].tolist():
            if math.gcd(a, b) == 1:
                acc.append(w1[a] * w2[b])
    return math.fsum(acc)
