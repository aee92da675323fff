import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conicfib.brgroup import (
    BMSubElem,
    alt_singletons,
    brauer_invariant,
    classify_blocking_sets,
    enumerate_bmsub,
    enumerate_ralt,
    is_blocking_set,
    kappa,
    linked,
    tw,
)
from conicfib.checks import brute_blocking_sets, random_family, sandwich_sets
from conicfib.errors import DomainError
from conicfib.f2res import F2Space, MINUS, build_residue_data, drop_minus, pairing, subset
from conicfib.family import builtin
from conicfib.qlocal import REAL, PlaceRef


def s(*items):
    return subset([k for k in items if k != "-"], minus="-" in items)


REDEI_SINGLES = {
    "0": (s(), s(), s()),
    "1": (s(), s(3), s(2)),
    "2": (s(3), s(), s(1)),
    "3": (s(2), s(1), s()),
    "23": (s(2, 3), s(1), s(1)),
    "13": (s(2), s(1, 3), s(2)),
    "12": (s(3), s(3), s(1, 2)),
    "123": (s(2, 3), s(1, 3), s(1, 2)),
}
# values on {2,3}, {1,3}, {1,2}
REDEI_PAIRS = {
    "0": (s(), s(), s()),
    "1": (s("-", 2, 3), s(2), s(3)),
    "2": (s(1), s("-", 1, 3), s(3)),
    "3": (s(1), s(2), s("-", 1, 2)),
    "23": (s(), s("-", 1, 2, 3), s("-", 1, 2, 3)),
    "13": (s("-", 1, 2, 3), s(), s("-", 1, 2, 3)),
    "12": (s("-", 1, 2, 3), s("-", 1, 2, 3), s()),
    "123": (s("-", 2, 3), s("-", 1, 3), s("-", 1, 2)),
}


@pytest.fixture(scope="module")
def redei():
    return build_residue_data(builtin("redei"))


@pytest.fixture(scope="module")
def planar():
    return build_residue_data(builtin("planar"))


def by_singles(maps):
    return {f.singles: f for f in maps}


def test_redei_ralt_table(redei):
    maps = by_singles(enumerate_ralt(redei))
    assert len(maps) == 8
    assert set(maps) == set(REDEI_SINGLES.values())
    for key, singles in REDEI_SINGLES.items():
        f = maps[singles]
        got = (f(s(2, 3)), f(s(1, 3)), f(s(1, 2)))
        assert got == REDEI_PAIRS[key], key


def test_example31_alt_span():
    res = build_residue_data(builtin("example31"))
    table = [
        (s(), s(), s(4, 5), s(3, 6), s(3, 6), s(4, 5)),
        (s(2, 3), s(1, 4), s(1, 4), s(2, 3), s(), s()),
        (s(3, 5), s(), s(1, 5), s(), s(1, 3), s()),
        (s(), s(4, 6), s(), s(2, 6), s(), s(2, 4)),
    ]

    def flat(singles):
        return sum(x << (8 * k) for k, x in enumerate(singles))

    ours = alt_singletons(res)
    assert len(ours) == 16
    assert F2Space(flat(x) for x in ours) == F2Space(flat(x) for x in table)
    f3 = by_singles(enumerate_ralt(res))[table[2]]
    assert drop_minus(f3(s(1, 2))) == s(3, 5)
    assert f3(s(1, 2)) not in res.V(s(1, 2))


def test_planar_bmsub(planar):
    elems = enumerate_bmsub(planar)
    assert len(elems) == 2 and all(g.is_pbm for g in elems)
    assert {g.singles for g in elems} == {(0, 0, 0), (s("-", 2, 3), s("-", 1, 3), s("-", 1, 2))}


def test_ralt_is_a_group(redei):
    singles = set(alt_singletons(redei))
    for a, b in product(singles, repeat=2):
        assert tuple(x ^ y for x, y in zip(a, b)) in singles


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_ralt_alternating_random(seed):
    rng = random.Random(seed)
    fam = random_family(rng, rng.randint(2, 4), rng.randint(1, 3), projective=False)
    res = build_residue_data(fam)
    maps = enumerate_ralt(res)
    assert len(maps) & (len(maps) - 1) == 0
    for f in maps:
        for i in range(1, res.n + 1):
            assert f(s(i)) in res.W(s(i))
            for j in range(i + 1, res.n + 1):
                assert pairing(s(i), f(s(j))) == pairing(s(j), f(s(i)))


def test_kappa_examples(redei):
    maps = by_singles(enumerate_ralt(redei))
    f1 = BMSubElem(0, maps[REDEI_SINGLES["1"]], False)
    assert kappa(f1, s(2, 3)) == 0
    assert kappa(f1, 0) == 0
    for f in maps.values():
        g = BMSubElem(0, f, False)
        for S in (s(1, 2), s(1, 3), s(2, 3)):
            assert kappa(g, S) == 0


def test_tw_examples(planar):
    trivial, star = sorted(enumerate_bmsub(planar), key=lambda g: g.singles)
    for a in product((1, -1, 2, -6), repeat=3):
        for v in (REAL, PlaceRef(2), PlaceRef(3)):
            assert tw(trivial, a, v) == 1
    assert tw(star, (-1, -1, -1), REAL) == 1


def _tw_oracle(g, a, p):
    val = 1
    n = len(a)
    for i in range(n):
        if g.singles[i] & MINUS:
            val *= oracles.hilbert(-1, a[i], p)
        for j in range(i + 1, n):
            if g.singles[j] >> (i + 1) & 1:
                val *= oracles.hilbert(a[i], a[j], p)
    return val


def test_brauer_invariant_planar_star(planar):
    star = max(enumerate_bmsub(planar), key=lambda g: g.singles)
    # (-1, -1) at the real place is -1, so the twist is nontrivial here
    assert _tw_oracle(star, (1, 1, -1), 0) == -1
    assert brauer_invariant(star, (1, 1, -1), REAL) == Fraction(1, 2)
    with pytest.raises(DomainError):
        brauer_invariant(star, (1, 0, 1), REAL)


@settings(max_examples=80, deadline=None)
@given(st.tuples(*[st.integers(-40, 40).filter(bool)] * 3))
def test_brauer_invariants_sum_to_zero(t):
    res = build_residue_data(builtin("redei"))
    places = {0, 2} | set().union(*(oracles.odd_primes_of(x) for x in t))
    for g in enumerate_bmsub(res):
        total = sum(brauer_invariant(g, t, PlaceRef(p)) for p in places)
        assert total.denominator == 1
        for p in places:
            assert tw(g, t, PlaceRef(p)) == _tw_oracle(g, t, p)


def test_blocking_examples(redei):
    assert is_blocking_set(redei, [(s(1), 0), (s(2), 0), (s(3), 0)])
    assert not is_blocking_set(redei, [])
    assert not is_blocking_set(redei, [(s(1), s(2)), (s(2), 0), (s(3), 0)])
    assert linked((s(1), s(2)), (s(2), 0))
    with pytest.raises(DomainError):
        is_blocking_set(redei, [(s(1), s(1))])


def test_blocking_classes_planar(planar):
    classes = classify_blocking_sets(planar)
    assert len(classes) == 2
    for cls in classes:
        assert cls.minimal <= cls.maximal
        assert is_blocking_set(planar, cls.minimal) and is_blocking_set(planar, cls.maximal)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_blocking_sandwich_random(seed):
    rng = random.Random(seed)
    fam = random_family(rng, rng.randint(2, 3), rng.randint(1, 2), projective=False)
    res = build_residue_data(fam)
    if len(res.index_set()) > 12:
        return
    sand = sandwich_sets(res)
    assert brute_blocking_sets(res) == set(sand)
    assert all(len(v) == 1 for v in sand.values())
