"""Quadratic symbols, Hilbert symbols and local solubility of diagonal conics."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arith import factorize, is_prime, odd_prime_divisors, split_power
from .errors import DegenerateConicError, DomainError


@dataclass(frozen=True, order=True)
class PlaceRef:
    """A place of Q: the real place (p = 0) or a prime p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")

    @classmethod
    def real(cls) -> "PlaceRef":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "PlaceRef":
        return cls(int(p))

    @classmethod
    def parse(cls, text: str) -> "PlaceRef":
        text = text.strip().lower()
        if text in ("inf", "real", "oo"):
            return cls(0)
        return cls(int(text))

    @property
    def is_real(self) -> bool:
        return self.p == 0

    def __str__(self) -> str:
        return "inf" if self.p == 0 else str(self.p)


REAL = PlaceRef(0)
TWO = PlaceRef(2)


def kronecker_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise DomainError("modulus must be odd and positive")
    a %= n
    sign = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


@lru_cache(maxsize=1 << 16)
def hilbert_symbol(a: int, b: int, v: PlaceRef) -> int:
    """(a, b)_v in {+1, -1} for nonzero integers a, b."""
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol of zero")
    if v.is_real:
        return -1 if a < 0 and b < 0 else 1
    p = v.p
    alpha, u = split_power(a, p)
    beta, w = split_power(b, p)
    if p == 2:
        e = ((u - 1) // 2) * ((w - 1) // 2)
        e += alpha * ((w * w - 1) // 8) + beta * ((u * u - 1) // 8)
        return -1 if e & 1 else 1
    s = -1 if (alpha * beta) & 1 and p % 4 == 3 else 1
    if beta & 1:
        s *= kronecker_symbol(u, p)
    if alpha & 1:
        s *= kronecker_symbol(w, p)
    return s


def conic_soluble_at(A: int, B: int, C: int, v: PlaceRef) -> bool:
    """Whether A x^2 + B y^2 + C z^2 = 0 has a nontrivial Q_v point."""
    if A == 0 or B == 0 or C == 0:
        raise DegenerateConicError("zero coefficient")
    return hilbert_symbol(-A * C, -B * C, v) == 1


def bad_places(coeffs) -> list[PlaceRef]:
    """Places where some conic with these coefficients might fail to have points."""
    return [REAL, TWO] + [PlaceRef(p) for p in odd_prime_divisors(coeffs)]


def everywhere_locally_soluble(fam, t) -> bool:
    """Whether every conic of the fibre of ``fam`` at ``t`` is soluble at every place.

    Only the real place, 2 and odd primes dividing some t_i can obstruct.
    """
    fibre = fam.evaluate(t)
    places = [REAL, TWO] + [PlaceRef(p) for p in odd_prime_divisors(t)]
    return all(
        conic_soluble_at(A, B, C, v) for (A, B, C) in fibre.coefficients for v in places
    )


_UNIT_CLASS = {1: 1, 3: 3, 5: -3, 7: -1}


@dataclass(frozen=True)
class SquarefreeDecomposition:
    """t = s * 2**lam * a * b**2 with a odd, squarefree and positive.

    ``nu2`` is the full 2-adic valuation and ``u`` the class of s*a mod 8
    written in {+-1, +-3}.
    """

    s: int
    lam: int
    a: int
    b: int
    nu2: int
    u: int


def squarefree_decompose(t: int) -> SquarefreeDecomposition:
    if t == 0:
        raise DomainError("cannot decompose 0")
    s = 1 if t > 0 else -1
    a = b = 1
    nu2 = 0
    for p, e in factorize(t):
        if p == 2:
            nu2 = e
            b *= 2 ** (e // 2)
            continue
        if e & 1:
            a *= p
        b *= p ** (e // 2)
    return SquarefreeDecomposition(s, nu2 & 1, a, b, nu2, _UNIT_CLASS[(s * a) % 8])


def unit_class(x: int) -> int:
    """Odd x mod 8 as an element of {1, 3, -3, -1}."""
    return _UNIT_CLASS[x % 8]
