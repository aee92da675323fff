"""Invariant suites shared by the command line and the test-suite."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .analytic import MeanValueSpec, brute_lhs, main_term
from .arith import primes_upto, spf_sieve
from .brgroup import classify_blocking_sets, enumerate_bmsub, linked
from .f2res import build_residue_data, indicator_sides, singleton
from .family import MonomialConicFamily, builtin
from .localdens import lambda_p_direct, sigma_p
from .qlocal import PlaceRef, hilbert_symbol


@dataclass
class SuiteResult:
    name: str
    ok: bool
    lines: list[str] = field(default_factory=list)


def check_reciprocity(limit: int = 300) -> SuiteResult:
    spf = spf_sieve(limit)
    places = {}
    for x in range(1, limit + 1):
        ps = set()
        y = x
        while y > 1:
            p = int(spf[y])
            ps.add(p)
            y //= p
        ps.discard(2)
        places[x] = ps
    real, two = PlaceRef(0), PlaceRef(2)
    odd = {p: PlaceRef(p) for p in primes_upto(limit).tolist()}
    bad = []
    pairs = 0
    vals = [x for x in range(-limit, limit + 1) if x]
    for a in vals:
        for b in vals:
            s = hilbert_symbol(a, b, real) * hilbert_symbol(a, b, two)
            for p in places[abs(a)] | places[abs(b)]:
                s *= hilbert_symbol(a, b, odd[p])
            pairs += 1
            if s != 1:
                bad.append((a, b))
    lines = [f"pairs={pairs} failures={len(bad)}"] + [f"fail a={a} b={b}" for a, b in bad[:10]]
    return SuiteResult("reciprocity", not bad, lines)


def _odd_primes(pmax: int) -> list[int]:
    return [p for p in primes_upto(pmax).tolist() if p > 2]


def check_lexpand(fams=None, pmax: int = 37, samples: int = 10**4, seed: int = 0) -> SuiteResult:
    """Both sides of the indicator expansion agree; exhaustive when n <= 3."""
    fams = fams or [builtin(x) for x in ("planar", "redei", "example31")]
    rng = random.Random(seed)
    lines = []
    ok = True
    for fam in fams:
        res = build_residue_data(fam)
        checked = 0
        fails = 0
        if fam.n <= 3:
            for p in _odd_primes(pmax):
                for t in product(range(1, p), repeat=fam.n):
                    for S in res.subsets:
                        lhs, rhs = indicator_sides(res, S, t, p)
                        checked += 1
                        fails += lhs != rhs
        else:
            ps = _odd_primes(pmax)
            for _ in range(samples):
                p = rng.choice(ps)
                t = [rng.randrange(1, p) for _ in range(fam.n)]
                for S in res.subsets:
                    lhs, rhs = indicator_sides(res, S, t, p)
                    checked += 1
                    fails += lhs != rhs
        ok &= fails == 0
        lines.append(f"{fam.name or fam.digest()}: checked={checked} failures={fails}")
    return SuiteResult("lexpand", ok, lines)


def brute_blocking_sets(res) -> set[frozenset]:
    """Every blocking set, found by running through all subsets of the index set."""
    index = res.index_set()
    N = len(index)
    if N > 20:
        raise ValueError(f"index set too large for brute force ({N})")
    single = [S.bit_count() == 1 for S, _ in index]
    link = []
    for a in index:
        m = 0
        for k, b in enumerate(index):
            if linked(a, b):
                m |= 1 << k
        link.append(m)
    cover = []
    for i in range(1, res.n + 1):
        m = 0
        for k, (S, _) in enumerate(index):
            if S == singleton(i):
                m |= 1 << k
        cover.append(m)
    found = set()
    for B in range(1 << N):
        if any(B & c == 0 for c in cover):
            continue
        good = True
        x = B
        while x:
            k = (x & -x).bit_length() - 1
            x &= x - 1
            if single[k] and link[k] & B:
                good = False
                break
        if good:
            found.add(frozenset(index[k] for k in range(N) if B >> k & 1))
    return found


def sandwich_sets(res) -> dict[frozenset, list]:
    out: dict[frozenset, list] = {}
    for cls in classify_blocking_sets(res):
        extra = sorted(cls.maximal - cls.minimal)
        for mask in range(1 << len(extra)):
            B = cls.minimal | frozenset(extra[k] for k in range(len(extra)) if mask >> k & 1)
            out.setdefault(B, []).append(cls.f)
    return out


def random_family(rng: random.Random, n: int, m: int, projective: bool = True) -> MonomialConicFamily:
    conics = []
    for _ in range(m):
        if projective:
            deg = 1 if n >= 3 and rng.random() < 0.9 else 0
            vars_ = rng.sample(range(1, n + 1), 3 * deg)
            monos = [0, 0, 0]
            for k, v in enumerate(vars_):
                monos[k % 3] |= 1 << v
        else:
            monos = [0, 0, 0]
            for v in range(1, n + 1):
                slot = rng.randrange(4)
                if slot < 3:
                    monos[slot] |= 1 << v
        monos = [x | rng.randrange(2) for x in monos]
        conics.append(tuple(monos))
    return MonomialConicFamily(n, tuple(conics), "projective" if projective else "affine")


def blocking_families(count: int = 8, seed: int = 1, limit: int = 14) -> list[MonomialConicFamily]:
    rng = random.Random(seed)
    fams = [builtin("planar")]
    while len(fams) < count + 1:
        fam = random_family(rng, 3, rng.randint(1, 2), projective=False)
        if len(build_residue_data(fam).index_set()) <= limit:
            fams.append(fam)
    return fams


def check_blocking(fams=None) -> SuiteResult:
    fams = fams or blocking_families()
    ok = True
    lines = []
    for fam in fams:
        res = build_residue_data(fam)
        brute = brute_blocking_sets(res)
        sand = sandwich_sets(res)
        unique = all(len(v) == 1 for v in sand.values())
        same = brute == set(sand)
        ok &= same and unique
        lines.append(
            f"{fam.name or fam.digest()}: |I|={len(res.index_set())} blocking={len(brute)} "
            f"sandwich={len(sand)} equal={same} unique={unique}"
        )
    return SuiteResult("blocking", ok, lines)


def lambda_sigma_families(count: int = 20, seed: int = 2) -> list[MonomialConicFamily]:
    rng = random.Random(seed)
    fams = [builtin("planar")]
    for _ in range(count):
        fams.append(random_family(rng, rng.randint(3, 4), rng.randint(1, 3)))
    return fams


def check_lambda_sigma(fams=None, pmax: int = 100) -> SuiteResult:
    fams = fams or lambda_sigma_families()
    ok = True
    lines = []
    for fam in fams:
        res = build_residue_data(fam)
        pbm = [g for g in enumerate_bmsub(res) if g.is_pbm]
        fails = 0
        for g in pbm:
            for p in _odd_primes(pmax):
                s = sigma_p(g, res, p)
                if lambda_p_direct(g, res, p, "full") != s.mantissa or s.gamma != res.gamma:
                    fails += 1
        ok &= fails == 0
        lines.append(f"{fam.name or fam.digest()}: pbm={len(pbm)} failures={fails}")
    return SuiteResult("lambda-sigma", ok, lines)


MEANVALUE_SPECS = (
    MeanValueSpec(1, 0, (1,), (2,), (1,)),
    MeanValueSpec(1, 0, (2,), (2,), (3,)),
    MeanValueSpec(1, 1, (1,), (2,), (1,)),
    MeanValueSpec(1, 0, (2,), (6,), (5,)),
    MeanValueSpec(2, 1, (1, 2), (2, 6), (1, 3)),
)


def meanvalue_table(specs=MEANVALUE_SPECS, Xs=(10**4, 10**5, 10**6)) -> list[tuple]:
    rows = []
    for sp in specs:
        for X in Xs:
            lhs = brute_lhs(sp, (X,) * sp.n)
            mt = main_term(sp, (X,) * sp.n).main_term
            rows.append((sp, X, lhs, mt, lhs / mt))
    return rows


def check_meanvalue(specs=MEANVALUE_SPECS, Xs=(10**4, 10**5, 10**6), tol: float = 0.15) -> SuiteResult:
    rows = meanvalue_table(specs, Xs)
    ok = True
    lines = []
    for sp in specs:
        mine = [r for r in rows if r[0] is sp]
        errs = [abs(r[4] - 1) for r in mine]
        close = errs[-1] <= tol
        mono = all(b <= a for a, b in zip(errs, errs[1:]))
        ok &= close and mono
        for _, X, lhs, mt, ratio in mine:
            lines.append(f"{sp} X={X} lhs={lhs:.6g} main={mt:.6g} ratio={ratio:.5f}")
        lines.append(f"  within={close} monotone={mono}")
    return SuiteResult("meanvalue", ok, lines)


SUITES = {
    "reciprocity": check_reciprocity,
    "lexpand": check_lexpand,
    "blocking": check_blocking,
    "lambda-sigma": check_lambda_sigma,
    "meanvalue": check_meanvalue,
}
