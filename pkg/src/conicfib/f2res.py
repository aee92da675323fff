"""Residue subspaces V_S and W_S over F_2.

Subsets of {-, 1, ..., n} are bitmasks (bit 0 is "-", bit k is k);
addition is symmetric difference.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DomainError, ResidueError
from .qlocal import kronecker_symbol

MINUS = 1


def subset(elements, minus: bool = False) -> int:
    mask = MINUS if minus else 0
    for k in elements:
        if k == "-":
            mask |= MINUS
        else:
            mask |= 1 << int(k)
    return mask


def members(mask: int) -> list[int]:
    """Variable indices in mask (the sign bit is ignored)."""
    return [k for k in range(1, mask.bit_length()) if mask >> k & 1]


def fmt(mask: int) -> str:
    items = (["-"] if mask & MINUS else []) + [str(k) for k in members(mask)]
    return "{" + ",".join(items) + "}"


def pairing(s: int, t: int) -> int:
    return (s & t).bit_count() & 1


def drop_minus(mask: int) -> int:
    return mask & ~MINUS


def full_set(n: int) -> int:
    return (1 << (n + 1)) - 2


def proper_subsets(n: int) -> list[int]:
    """Nonempty proper subsets of [n], by size then lexicographically."""
    out = []
    for size in range(1, n):
        for combo in combinations(range(1, n + 1), size):
            out.append(subset(combo))
    return out


def singleton(i: int) -> int:
    return 1 << i


class F2Space:
    """A subspace of F_2^N held as a reduced echelon basis."""

    __slots__ = ("basis",)

    def __init__(self, vectors=()):
        rows: list[int] = []
        for v in vectors:
            for r in rows:
                v = min(v, v ^ r)
            if v:
                rows = [min(r, r ^ v) for r in rows]
                rows.append(v)
        self.basis = tuple(sorted(rows, reverse=True))

    def reduce(self, v: int) -> int:
        for r in self.basis:
            v = min(v, v ^ r)
        return v

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return 1 << len(self.basis)

    def elements(self) -> list[int]:
        out = [0]
        for b in self.basis:
            out += [x ^ b for x in out]
        return sorted(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, F2Space) and self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    def __repr__(self) -> str:
        return "F2Space(" + ", ".join(fmt(x) for x in self.elements()) + ")"


def nullspace(rows: list[int], ncols: int) -> list[int]:
    """Basis of {x in F_2^ncols : <row, x> = 0 for every row}."""
    pivots: dict[int, int] = {}
    for r in rows:
        for col, pr in pivots.items():
            if r >> col & 1:
                r ^= pr
        if not r:
            continue
        col = r.bit_length() - 1
        for c2 in list(pivots):
            if pivots[c2] >> col & 1:
                pivots[c2] ^= r
        pivots[col] = r
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        x = 1 << free
        for col, pr in pivots.items():
            if pr >> free & 1:
                x |= 1 << col
        basis.append(x)
    return basis


def generator(fam, i: int, S: int) -> int:
    """g_{i,S} for conic i (0-based) and S a subset of [n]."""
    monos = fam.conics[i]
    par = [pairing(S, drop_minus(x)) for x in monos]
    if par[0] == par[1] == par[2]:
        return 0
    odd = 0 if par[1] == par[2] else (1 if par[0] == par[2] else 2)
    b, c = [monos[k] for k in range(3) if k != odd]
    return MINUS ^ b ^ c


@dataclass(frozen=True)
class ResidueInfo:
    S: int
    generators: tuple[int, ...]
    V: F2Space
    W: F2Space
    in_D: bool

    @property
    def c(self) -> int:
        return len(self.W)


@dataclass
class ResidueData:
    n: int
    info: dict[int, ResidueInfo]

    def __getitem__(self, S: int) -> ResidueInfo:
        try:
            return self.info[S]
        except KeyError:
            raise DomainError(f"{fmt(S)} is not a nonempty proper subset") from None

    def V(self, S: int) -> F2Space:
        return self[S].V

    def W(self, S: int) -> F2Space:
        return self[S].W

    def in_D(self, S: int) -> bool:
        return self[S].in_D

    def c(self, S: int) -> int:
        return self[S].c

    @property
    def subsets(self) -> list[int]:
        return list(self.info)

    @property
    def D_singletons(self) -> list[int]:
        return [i for i in range(1, self.n + 1) if self.in_D(singleton(i))]

    def index_set(self) -> list[tuple[int, int]]:
        """All pairs (S, T) with T in W_S."""
        return [(S, T) for S, r in self.info.items() for T in r.W.elements()]

    @property
    def gamma_values(self) -> list[Fraction]:
        return [Fraction(1, len(self.V(singleton(i)))) for i in range(1, self.n + 1)]

    @property
    def gamma(self) -> Fraction:
        return sum(self.gamma_values, Fraction(0))

    @property
    def delta(self) -> Fraction:
        return self.n - self.gamma


def _kernel_of_minus(V: F2Space) -> F2Space:
    with_minus = [b for b in V.basis if b & MINUS]
    rest = [b for b in V.basis if not b & MINUS]
    if with_minus:
        pivot = with_minus[0]
        rest += [b ^ pivot for b in with_minus[1:]]
    return F2Space(rest)


def build_residue_data(fam) -> ResidueData:
    info = {}
    for S in proper_subsets(fam.n):
        gens = tuple(generator(fam, i, S) for i in range(fam.m))
        V = F2Space(gens)
        in_D = MINUS in V
        W = _kernel_of_minus(V) if in_D else V
        if in_D and len(W) * 2 != len(V):
            raise ResidueError(f"bad complement at {fmt(S)}")
        info[S] = ResidueInfo(S, gens, V, W, in_D)
    return ResidueData(fam.n, info)


def _char(mask: int, chi: list[int]) -> int:
    """Legendre symbol of prod_{j in mask} t_j, with t_- = -1 at index 0."""
    s = 1
    k = 0
    while mask:
        if mask & 1:
            s *= chi[k]
        mask >>= 1
        k += 1
    return s


def indicator_sides(res: ResidueData, S: int, t, p: int) -> tuple[Fraction, Fraction]:
    """Both sides of the expansion of the fibre-solubility indicator at p.

    ``t`` holds residues of t_1..t_n mod p (all prime to p).
    """
    if p % 2 == 0:
        raise DomainError("p must be odd")
    chi = [kronecker_symbol(-1, p)] + [kronecker_symbol(x, p) for x in t]
    if 0 in chi:
        raise DomainError("residues must be prime to p")
    r = res[S]
    lhs = Fraction(1)
    for g in r.generators:
        lhs *= Fraction(1 + _char(g, chi), 2)
    if r.in_D and p % 4 == 3:
        rhs = Fraction(0)
    else:
        rhs = Fraction(sum(_char(T, chi) for T in r.W.elements()), len(r.W))
    return lhs, rhs


def expand_indicator(res: ResidueData, S: int, t, p: int) -> Fraction:
    lhs, rhs = indicator_sides(res, S, t, p)
    if lhs != rhs:
        raise AssertionError(f"expansion mismatch at {fmt(S)}, t={tuple(t)}, p={p}")
    return lhs
