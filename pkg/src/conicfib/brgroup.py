"""Residually alternating maps, the subordinate group and blocking sets."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .errors import DomainError
from .f2res import (
    MINUS,
    ResidueData,
    drop_minus,
    fmt,
    members,
    nullspace,
    pairing,
    singleton,
)
from .qlocal import PlaceRef, hilbert_symbol


@dataclass(frozen=True)
class RAltMap:
    """A residually alternating map, fixed by its values on singletons.

    ``values`` holds f(S) for every nonempty proper S, built by
    :func:`section_extend`.
    """

    singles: tuple[int, ...]
    values: tuple[tuple[int, int], ...] = ()

    @cached_property
    def _table(self) -> dict[int, int]:
        return dict(self.values)

    def __call__(self, S: int) -> int:
        if S == 0:
            return 0
        if S.bit_count() == 1:
            return self.singles[S.bit_length() - 2]
        return self._table[S]

    @property
    def n(self) -> int:
        return len(self.singles)

    def label(self) -> str:
        return "(" + ", ".join(fmt(x) for x in self.singles) + ")"


@dataclass(frozen=True)
class BMSubElem:
    """g = f + {-} on the singletons indexed by J."""

    J: int
    f: RAltMap
    is_pbm: bool

    @cached_property
    def singles(self) -> tuple[int, ...]:
        return tuple(
            x ^ (MINUS if self.J >> i & 1 else 0) for i, x in enumerate(self.f.singles, 1)
        )

    def __call__(self, S: int) -> int:
        if S.bit_count() == 1:
            return self.singles[S.bit_length() - 2]
        return self.f(S)

    @property
    def n(self) -> int:
        return len(self.singles)

    def label(self) -> str:
        return f"J={fmt(self.J)} f={self.f.label()}"


def section_extend(singles, res: ResidueData, flip: bool = False) -> RAltMap:
    """Extend singleton values to every proper S.

    The default prefers the lift of sum_{i in S} f({i}) without "-"; with
    ``flip`` the other lift is taken when neither lies in W_S.
    """
    singles = tuple(singles)
    values = []
    for S in res.subsets:
        if S.bit_count() == 1:
            values.append((S, singles[S.bit_length() - 2]))
            continue
        q = 0
        for i in members(S):
            q ^= drop_minus(singles[i - 1])
        W = res.W(S)
        if q in W:
            v = q
        elif q ^ MINUS in W:
            v = q ^ MINUS
        else:
            v = q ^ MINUS if flip else q
        values.append((S, v))
    return RAltMap(singles, tuple(values))


def alt_singletons(res: ResidueData) -> list[tuple[int, ...]]:
    """All singleton tuples of residually alternating maps, sorted."""
    n = res.n
    coords = []  # (i, basis vector of W_{i})
    for i in range(1, n + 1):
        coords += [(i, b) for b in res.W(singleton(i)).basis]
    rows = []
    for i, j in combinations(range(1, n + 1), 2):
        row = 0
        for k, (owner, b) in enumerate(coords):
            if owner == j and b >> i & 1:
                row ^= 1 << k
            if owner == i and b >> j & 1:
                row ^= 1 << k
        rows.append(row)
    kernel = nullspace(rows, len(coords))
    vecs = [0]
    for x in kernel:
        vecs += [v ^ x for v in vecs]
    out = []
    for x in vecs:
        singles = [0] * n
        for k, (owner, b) in enumerate(coords):
            if x >> k & 1:
                singles[owner - 1] ^= b
        out.append(tuple(singles))
    return sorted(out)


def enumerate_ralt(res: ResidueData, flip: bool = False) -> list[RAltMap]:
    return [section_extend(s, res, flip) for s in alt_singletons(res)]


def pbm_parity(singles) -> int:
    """The parity whose vanishing cuts the projective subgroup out of BM_Sub."""
    n = len(singles)
    e = sum(singles[k] & MINUS for k in range(n))
    for i, j in combinations(range(1, n + 1), 2):
        e += pairing(singleton(i), singles[j - 1])
    return e & 1


def enumerate_bmsub(res: ResidueData, flip: bool = False) -> list[BMSubElem]:
    D1 = 0
    for i in res.D_singletons:
        D1 |= singleton(i)
    Js = [J for J in range(0, D1 + 1) if J & ~D1 == 0 and not J & MINUS]
    out = []
    for f in enumerate_ralt(res, flip):
        for J in Js:
            g = BMSubElem(J, f, False)
            out.append(BMSubElem(J, f, pbm_parity(g.singles) == 0))
    return out


def kappa(g: BMSubElem, S: int) -> int:
    """The twisting exponent of g at S (mod 2)."""
    if S == 0:
        return 0
    idx = members(S)
    e = sum(g.singles[k - 1] & MINUS for k in idx)
    for i, j in combinations(idx, 2):
        e += pairing(singleton(i), g.singles[j - 1])
    e += g.f(S) & MINUS
    return e & 1


def tw(g, a, v: PlaceRef) -> int:
    """The local twist of g at the point a (a tuple of nonzero integers)."""
    singles = g.singles
    n = len(singles)
    s = 1
    for i in range(n):
        if singles[i] & MINUS:
            s *= hilbert_symbol(-1, a[i], v)
    for i, j in combinations(range(n), 2):
        if singles[j] >> (i + 1) & 1:
            s *= hilbert_symbol(a[i], a[j], v)
    return s


def brauer_invariant(g, t, v: PlaceRef) -> Fraction:
    if any(x == 0 for x in t):
        raise DomainError("degenerate point")
    return Fraction(0) if tw(g, t, v) == 1 else Fraction(1, 2)


# blocking sets


def linked(a: tuple[int, int], b: tuple[int, int]) -> bool:
    (S1, T1), (S2, T2) = a, b
    if min(S1.bit_count(), S2.bit_count()) != 1:
        return False
    return (pairing(S2, T1) + pairing(S1, T2)) % 2 == 1


def is_blocking_set(res: ResidueData, chosen) -> bool:
    chosen = list(chosen)
    for S, T in chosen:
        if T not in res.W(S):
            raise DomainError(f"({fmt(S)}, {fmt(T)}) is not in the index set")
    covered = {S for S, _ in chosen if S.bit_count() == 1}
    if len(covered) != res.n:
        return False
    singles = [x for x in chosen if x[0].bit_count() == 1]
    return not any(linked(a, b) for a in singles for b in chosen)


@dataclass(frozen=True)
class BlockingClass:
    f: RAltMap
    minimal: frozenset
    maximal: frozenset


def classify_blocking_sets(res: ResidueData) -> list[BlockingClass]:
    out = []
    for f in enumerate_ralt(res):
        lo = frozenset((singleton(i), f(singleton(i))) for i in range(1, res.n + 1))
        hi = frozenset((S, f(S)) for S in res.subsets if f(S) in res.W(S))
        out.append(BlockingClass(f, lo, hi))
    return out
