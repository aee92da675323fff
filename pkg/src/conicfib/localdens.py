"""Local densities, Euler factors and the leading constant of the count."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from .arith import primes_upto
from .brgroup import BMSubElem, enumerate_bmsub, kappa, tw
from .errors import DomainError, FamilyError
from .f2res import MINUS, ResidueData, build_residue_data, members, pairing, singleton
from .family import degree
from .qlocal import REAL, TWO, conic_soluble_at, kronecker_symbol

UNITS = (1, 3, -3, -1)


def h_value(res: ResidueData, S: int, p: int) -> int:
    if S == 0 or p % 4 == 1:
        return 1
    return 0 if res.in_D(S) else 1


def br_exponent(f, S: int) -> int:
    """Exponent of (-1, a)_2 in the Brauer character of f at S."""
    if S == 0:
        return 0
    idx = members(S)
    e = f(S) & MINUS
    e += sum(f(singleton(i)) & MINUS for i in idx)
    for i, j in combinations(idx, 2):
        e += pairing(singleton(j), f(singleton(i)))
    return e & 1


def brm_exponent(g: BMSubElem, S: int) -> int:
    return (br_exponent(g.f, S) + (g.J & S).bit_count()) & 1


def _sign_at(exponent: int, p: int) -> int:
    return -1 if exponent and p % 4 == 3 else 1


# Euler factors as rational functions of x = 1/p, one per class of p mod 4.


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_add(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] += y
    return out


def _monomial(c, k):
    return [Fraction(0)] * k + [Fraction(c)]


def _one_minus_x2(k):
    """1 - x^(2k)."""
    return _poly_add([Fraction(1)], _monomial(-1, 2 * k))


@dataclass(frozen=True)
class RationalFactor:
    """num(x)/den(x) with x = 1/p; coefficient lists in increasing degree."""

    num: tuple[Fraction, ...]
    den: tuple[Fraction, ...]

    def exact(self, p: int) -> Fraction:
        x = Fraction(1, p)
        return sum(c * x**k for k, c in enumerate(self.num)) / sum(
            c * x**k for k, c in enumerate(self.den)
        )

    def evaluate(self, ps: np.ndarray) -> np.ndarray:
        x = 1.0 / ps.astype(np.float64)
        num = np.polyval([float(c) for c in reversed(self.num)], x)
        den = np.polyval([float(c) for c in reversed(self.den)], x)
        return num / den


def _full_factor(n: int, weights: dict[int, Fraction]) -> RationalFactor:
    num = [Fraction(0)]
    for S, w in weights.items():
        k = S.bit_count()
        num = _poly_add(num, _poly_mul(_monomial(w, k), _one_minus_x2(n - k)))
    den = [Fraction(1)]
    for _ in range(n):
        den = _poly_mul(den, [Fraction(1), Fraction(0), Fraction(-1)])
    return RationalFactor(tuple(num), tuple(den))


def _singleton_weight(res: ResidueData, r: int) -> Fraction:
    """sum_j h_j / c_j for p = r mod 4."""
    return sum(
        (Fraction(h_value(res, singleton(j), r), res.c(singleton(j))) for j in range(1, res.n + 1)),
        Fraction(0),
    )


def _sf_factor(res: ResidueData, weights: dict[int, Fraction], r: int) -> RationalFactor:
    num = [Fraction(1), _singleton_weight(res, r)]
    for S, w in weights.items():
        if S.bit_count() >= 2:
            num = _poly_add(num, _monomial(w, S.bit_count()))
    return RationalFactor(tuple(num), (Fraction(1),))


def _lambda_weights(g: BMSubElem, res: ResidueData, r: int) -> dict[int, Fraction]:
    weights = {0: Fraction(1)}
    for S in res.subsets:
        if g.f(S) in res.W(S):
            h = h_value(res, S, r)
            if h:
                weights[S] = Fraction(_sign_at(brm_exponent(g, S), r), res.c(S))
    return weights


def _sigma_weights(g: BMSubElem, res: ResidueData, r: int) -> dict[int, Fraction]:
    weights = {0: Fraction(1)}
    for S in res.subsets:
        V = res.V(S)
        if g(S) in V or g(S) ^ MINUS in V:
            h = h_value(res, S, r)
            if h:
                weights[S] = Fraction(_sign_at(kappa(g, S), r), len(res.W(S)))
    return weights


def lambda_factor(g: BMSubElem, res: ResidueData, r: int, mode: str = "full") -> RationalFactor:
    """Euler factor (without the (1 - 1/p)^gamma part) for primes p = r mod 4."""
    w = _lambda_weights(g, res, r)
    if mode == "full":
        return _full_factor(res.n, w)
    if mode == "squarefree":
        return _sf_factor(res, w, r)
    raise DomainError(f"unknown mode {mode!r}")


def sigma_factor(g: BMSubElem, res: ResidueData, r: int) -> RationalFactor:
    return _full_factor(res.n, _sigma_weights(g, res, r))


@dataclass(frozen=True)
class LocalFactor:
    """mantissa * (1 - 1/p)^gamma."""

    p: int
    mantissa: Fraction
    gamma: Fraction

    def value(self) -> float:
        return float(self.mantissa) * (1 - 1 / self.p) ** float(self.gamma)


def _check_odd_prime(p: int):
    if p < 3 or p % 2 == 0:
        raise DomainError("p must be an odd prime")


def lambda_p(g: BMSubElem, res: ResidueData, p: int, mode: str = "full") -> LocalFactor:
    _check_odd_prime(p)
    return LocalFactor(p, lambda_factor(g, res, p % 4, mode).exact(p), res.gamma)


def sigma_p(g: BMSubElem, res: ResidueData, p: int) -> LocalFactor:
    _check_odd_prime(p)
    if not g.is_pbm:
        raise DomainError("sigma_p is defined on the projective subgroup only")
    return LocalFactor(p, sigma_factor(g, res, p % 4).exact(p), res.gamma)


def lambda_p_direct(g: BMSubElem, res: ResidueData, p: int, mode: str = "full") -> Fraction:
    """The same mantissa summed term by term with exact rationals."""
    n = res.n
    total = Fraction(0)
    if mode == "squarefree":
        total = 1 / big_sigma(res, p)
    else:
        total = 1 - Fraction(1, p ** (2 * n))
    for S in res.subsets:
        k = S.bit_count()
        if mode == "squarefree" and k < 2:
            continue
        if g.f(S) not in res.W(S):
            continue
        term = Fraction(
            kronecker_symbol(-1, p) ** brm_exponent(g, S) * h_value(res, S, p), res.c(S) * p**k
        )
        if mode != "squarefree":
            term *= 1 - Fraction(1, p ** (2 * (n - k)))
        total += term
    if mode != "squarefree":
        total /= (1 - Fraction(1, p * p)) ** n
    return total


def big_sigma(res: ResidueData, p: int) -> Fraction:
    """Sigma(p) = (1 + (1/p) sum_j h_j(p)/c_j)^(-1)."""
    return 1 / (1 + _singleton_weight(res, p % 4) / p)


def big_sigma_m(res: ResidueData, p: int, m: int) -> Fraction:
    rest = sum(
        (
            Fraction(h_value(res, singleton(j), p), res.c(singleton(j)))
            for j in range(1, res.n + 1)
            if j != m
        ),
        Fraction(0),
    )
    return big_sigma(res, p) * (1 + rest / p)


# admissibility at the real place and at 2


@dataclass(frozen=True)
class Admissible:
    signs: tuple[tuple[int, ...], ...]
    two_adic: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]  # (u, lam)


def _fibre_soluble(fam, t, v) -> bool:
    fibre = fam.evaluate(t)
    return all(conic_soluble_at(A, B, C, v) for A, B, C in fibre.coefficients)


def side_ok(side, lam, u) -> bool:
    if side == "redei":
        return any(l == 0 and x == 1 for l, x in zip(lam, u))
    return True


@lru_cache(maxsize=64)
def admissible(fam) -> Admissible:
    n = fam.n
    signs = tuple(s for s in product((1, -1), repeat=n) if _fibre_soluble(fam, s, REAL))
    two = []
    for lam in product((0, 1), repeat=n):
        if all(lam):
            continue
        for u in product(UNITS, repeat=n):
            if not side_ok(fam.side, lam, u):
                continue
            t = tuple(x * 2**l for x, l in zip(u, lam))
            if _fibre_soluble(fam, t, TWO):
                two.append((u, lam))
    return Admissible(signs, tuple(two))


def chi4(J: int, a) -> int:
    """prod_{i in J} (-1, a_i)_2 for odd a_i."""
    s = 1
    for i in members(J):
        if a[i - 1] % 4 == 3:
            s = -s
    return s


def sign_sum(g: BMSubElem, adm: Admissible) -> int:
    return sum(tw(g.f, s, TWO) * chi4(g.J, s) for s in adm.signs)


def two_adic_sum(g: BMSubElem, adm: Admissible, n: int, mode: str = "full") -> Fraction:
    by_weight: dict[int, int] = {}
    for u, lam in adm.two_adic:
        k = sum(lam)
        a = tuple(x * 2**l for x, l in zip(u, lam))
        by_weight[k] = by_weight.get(k, 0) + tw(g.f, a, TWO) * chi4(g.J, u)
    total = Fraction(0)
    for k, c in by_weight.items():
        w = Fraction(c, 2**k)
        if mode == "full":
            w *= 1 - Fraction(1, 4 ** (n - k))
        total += w
    return total


def sigma_2_inf(g: BMSubElem, fam, adm: Admissible | None = None) -> tuple[Fraction, Fraction]:
    """(sigma_inf, m) with sigma_2 = 2^(-gamma) * m."""
    adm = adm or admissible(fam)
    n = fam.n
    s_inf = Fraction(n, 2) * sum(tw(g, s, TWO) for s in adm.signs)
    by_weight: dict[int, int] = {}
    for u, lam in adm.two_adic:
        k = sum(lam)
        a = tuple(x * 2**l for x, l in zip(u, lam))
        by_weight[k] = by_weight.get(k, 0) + tw(g, a, TWO)
    m = sum((Fraction(c, 2**k) * (1 - Fraction(1, 4 ** (n - k))) for k, c in by_weight.items()), Fraction(0))
    return s_inf, m / 3**n


# assembling the constant


@dataclass
class Prediction:
    mode: str
    n: int
    delta: Fraction
    log_exponent: Fraction
    constant: float
    per_f: dict = field(default_factory=dict)
    primes_bound: int = 0
    error_estimate: float = 0.0
    gamma_values: list = field(default_factory=list)

    def main_term(self, T: float) -> float:
        """Predicted count for the box max|t_i| <= T."""
        if self.mode == "projective":
            B = float(T) ** self.n
            return self.constant * B / math.log(B) ** float(self.delta)
        return self.constant * float(T) ** self.n / math.log(T) ** float(self.delta)


def _euler_logs(factors: dict[int, RationalFactor], gamma: Fraction, ps: np.ndarray) -> np.ndarray:
    """Per-prime log|factor| (cumulative), with a sign flag if any factor is <= 0."""
    vals = np.empty(len(ps))
    for r, fac in factors.items():
        sel = ps % 4 == r
        vals[sel] = fac.evaluate(ps[sel])
    if np.any(vals <= 0):
        return None
    return np.log(vals) + float(gamma) * np.log1p(-1.0 / ps)


def euler_product(factors, gamma, primes_bound: int) -> tuple[float, float]:
    """(product over 2 < p <= P, product over 2 < p <= P/2)."""
    ps = primes_upto(primes_bound)
    ps = ps[ps > 2]
    logs = _euler_logs(factors, gamma, ps)
    if logs is None:
        vals = np.ones(len(ps))
        for r, fac in factors.items():
            sel = ps % 4 == r
            vals[sel] = fac.evaluate(ps[sel]) * (1 - 1.0 / ps[sel]) ** float(gamma)
        full = float(np.prod(vals))
        half = float(np.prod(vals[ps <= primes_bound // 2]))
        return full, half
    full = math.exp(math.fsum(logs))
    half = math.exp(math.fsum(logs[ps <= primes_bound // 2]))
    return full, half


def gamma_product(gammas) -> float:
    return math.prod(math.gamma(float(x)) for x in gammas)


def _check_projective(fam):
    for c in fam.conics:
        if len({degree(x) for x in c}) != 1:
            raise FamilyError("projective prediction needs equal-degree monomials")


def leading_constant(fam, mode: str | None = None, primes_bound: int = 10**5, flip: bool = False) -> Prediction:
    mode = mode or fam.mode
    res = build_residue_data(fam)
    adm = admissible(fam)
    n = fam.n
    gamma = res.gamma
    delta = res.delta
    elems = enumerate_bmsub(res, flip)
    per_f = {}
    total = total_half = 0.0
    cache = {}
    if mode == "projective":
        _check_projective(fam)
        elems = [g for g in elems if g.is_pbm]
        pref = float(n) ** float(delta) / (2 ** (1 + float(gamma)) * 3**n * gamma_product(res.gamma_values))
    elif mode == "affine":
        pref = 1 / (2 ** float(gamma) * 3**n * gamma_product(res.gamma_values))
    elif mode == "squarefree":
        pref = 1 / (2 ** (2 * n + float(gamma)) * gamma_product(res.gamma_values))
    else:
        raise DomainError(f"unknown mode {mode!r}")
    for g in elems:
        if mode == "projective":
            s_inf, m2 = sigma_2_inf(g, fam, adm)
            local = float(s_inf * m2) * 3**n * 2 / n
            facs = {r: sigma_factor(g, res, r) for r in (1, 3)}
        else:
            A = sign_sum(g, adm)
            local = float(A * two_adic_sum(g, adm, n, "full" if mode == "affine" else "squarefree"))
            facs = {r: lambda_factor(g, res, r, "full" if mode == "affine" else "squarefree") for r in (1, 3)}
        if local == 0:
            per_f[g] = 0.0
            continue
        key = (facs[1], facs[3])
        if key not in cache:
            cache[key] = euler_product(facs, gamma, primes_bound)
        full, half = cache[key]
        per_f[g] = pref * local * full
        total += per_f[g]
        total_half += pref * local * half
    return Prediction(
        mode=mode,
        n=n,
        delta=delta,
        log_exponent=delta,
        constant=total,
        per_f=per_f,
        primes_bound=primes_bound,
        error_estimate=abs(total - total_half),
        gamma_values=res.gamma_values,
    )


def stratum_constants(fam, mode: str | None = None, primes_bound: int = 10**5) -> dict:
    """Leading constant of the vector count in each (s, u, lam) class.

    Keys are (s, u, lam) tuples; the values sum to the affine (or
    squarefree) constant.  Projective families are counted as vectors here.
    """
    mode = mode or fam.mode
    res = build_residue_data(fam)
    adm = admissible(fam)
    n = fam.n
    gamma = res.gamma
    sf = mode == "squarefree"
    kind = "squarefree" if sf else "full"
    base = 1 / (2 ** (2 * n + float(gamma)) * gamma_product(res.gamma_values))
    if not sf:
        base /= 0.75**n
    elems = enumerate_bmsub(res)
    euler = {}
    cache = {}
    for g in elems:
        facs = {r: lambda_factor(g, res, r, kind) for r in (1, 3)}
        key = (facs[1], facs[3])
        if key not in cache:
            cache[key] = euler_product(facs, gamma, primes_bound)[0]
        euler[g] = cache[key]
    out = {}
    for s in adm.signs:
        for u, lam in adm.two_adic:
            k = sum(lam)
            w = base / 2**k
            if not sf:
                w *= 1 - 4.0 ** (k - n)
            a = tuple(x * 2**l for x, l in zip(u, lam))
            acc = 0.0
            for g in elems:
                acc += tw(g.f, s, TWO) * chi4(g.J, s) * tw(g.f, a, TWO) * chi4(g.J, u) * euler[g]
            out[(s, u, lam)] = w * acc
    return out
