import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conicfib.checks import random_family
from conicfib.errors import DomainError
from conicfib.f2res import (
    MINUS,
    F2Space,
    build_residue_data,
    expand_indicator,
    fmt,
    generator,
    indicator_sides,
    nullspace,
    proper_subsets,
    subset,
)
from conicfib.family import builtin, parse_family


def space(*sets):
    return {subset([k for k in s if k != "-"], minus="-" in s) for s in sets}


def elems(V):
    return set(V.elements())


def test_formatting():
    assert fmt(0) == "{}"
    assert fmt(subset([2, 3], minus=True)) == "{-,2,3}"
    assert proper_subsets(3) == [subset(x) for x in ([1], [2], [3], [1, 2], [1, 3], [2, 3])]


def test_f2space_basics():
    V = F2Space([0b0110, 0b1100, 0b1010])
    assert V.dim == 2 and len(V) == 4
    assert 0b1010 in V and 0b0001 not in V
    assert V == F2Space([0b1010, 0b0110])
    assert elems(F2Space()) == {0}


@given(st.lists(st.integers(0, 255), max_size=8))
def test_f2space_is_span(vectors):
    V = F2Space(vectors)
    span = {0}
    for v in vectors:
        span |= {x ^ v for x in span}
    assert elems(V) == span


@given(st.lists(st.integers(0, 63), max_size=6))
def test_nullspace(rows):
    ker = nullspace(rows, 6)
    for x in ker:
        assert all(((r & x).bit_count() & 1) == 0 for r in rows)
    rank = F2Space(rows).dim
    assert len(ker) == 6 - rank


def test_generator_examples():
    redei = builtin("redei")
    assert generator(redei, 0, subset([1])) == subset([2])
    planar = builtin("planar")
    assert generator(planar, 0, subset([1, 2, 3])) == 0


def test_planar_table():
    res = build_residue_data(builtin("planar"))
    for i, (j, k) in {1: (2, 3), 2: (1, 3), 3: (1, 2)}.items():
        assert elems(res.V(subset([i]))) == space((), ("-", j, k))
    for i, j in ((1, 2), (1, 3), (2, 3)):
        assert elems(res.V(subset([i, j]))) == space((), ("-", i, j))
        assert res.W(subset([i, j])) == res.V(subset([i, j]))
    assert not any(res.in_D(S) for S in res.subsets)
    assert res.gamma == Fraction(3, 2) and res.delta == Fraction(3, 2)
    assert len(res.index_set()) == 12


def test_redei_table():
    res = build_residue_data(builtin("redei"))
    want = {
        (1,): space((), (2,), (3,), (2, 3)),
        (2,): space((), (1,), (3,), (1, 3)),
        (3,): space((), (1,), (2,), (1, 2)),
        (2, 3): space((), (1,), ("-", 2, 3), ("-", 1, 2, 3)),
        (1, 3): space((), (2,), ("-", 1, 3), ("-", 1, 2, 3)),
        (1, 2): space((), (3,), ("-", 1, 2), ("-", 1, 2, 3)),
    }
    for S, V in want.items():
        assert elems(res.V(subset(S))) == V
        assert res.W(subset(S)) == res.V(subset(S))
    assert res.D_singletons == [] and not any(res.in_D(S) for S in res.subsets)
    assert res.delta == Fraction(9, 4)


def test_example31_table():
    res = build_residue_data(builtin("example31"))
    want = {
        1: space((), (2, 3), (2, 5), (3, 5)),
        2: space((), (1, 4), (1, 6), (4, 6)),
        3: space((), (1, 4), (4, 5), (1, 5)),
        4: space((), (2, 3), (3, 6), (2, 6)),
        5: space((), (1, 6), (3, 6), (1, 3)),
        6: space((), (2, 5), (4, 5), (2, 4)),
    }
    for i, V in want.items():
        assert elems(res.V(subset([i]))) == V
    assert elems(res.V(subset([1, 2]))) == space((), ("-", 1, 2, 3, 4), ("-", 1, 2, 5, 6), (3, 4, 5, 6))


def test_minus_in_V_defines_D():
    res = build_residue_data(parse_family("vars = 2\nconic = 1 | 1 | t1"))
    S = subset([1])
    assert res.in_D(S)
    assert elems(res.V(S)) == {0, MINUS} and elems(res.W(S)) == {0}
    assert res.D_singletons == [1]
    assert expand_indicator(res, S, (2, 5), 7) == 0
    assert expand_indicator(res, S, (2, 3), 5) == 1


def test_indicator_examples():
    res = build_residue_data(builtin("redei"))
    S = subset([2, 3])
    lhs, rhs = indicator_sides(res, S, (3, 1, 1), 7)
    assert lhs == rhs
    assert lhs in {Fraction(k, len(res.W(S))) for k in range(len(res.W(S)) + 1)}
    for S in res.subsets:
        assert expand_indicator(res, S, (1, 1, 1), 13) == 1
    with pytest.raises(DomainError):
        indicator_sides(res, S, (0, 1, 1), 7)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 5), st.integers(1, 3), st.booleans())
def test_residue_spaces_shape(seed, n, m, proj):
    fam = random_family(random.Random(seed), n if not proj else max(n, 3), m, projective=proj)
    res = build_residue_data(fam)
    for S in res.subsets:
        r = res[S]
        assert all(g in r.V for g in r.generators)
        assert MINUS not in r.W
        assert all(w in r.V for w in r.W.elements())
        assert len(r.V) == len(r.W) * (2 if r.in_D else 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([3, 5, 7, 11, 13]), st.data())
def test_indicator_expansion_random(seed, p, data):
    rng = random.Random(seed)
    fam = random_family(rng, rng.randint(2, 4), rng.randint(1, 3), projective=False)
    res = build_residue_data(fam)
    t = data.draw(st.tuples(*[st.integers(1, p - 1)] * fam.n))
    for S in res.subsets:
        lhs, rhs = indicator_sides(res, S, t, p)
        assert lhs == rhs
