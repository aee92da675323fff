import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conicfib.analytic import (
    MeanValueSpec,
    beta,
    beta_product_rhs,
    beta_tilde,
    brute_lhs,
    f_factor,
    main_term,
    pair_sum_naive,
)
from conicfib.errors import InputError


def omega(a):
    return len(oracles.odd_primes_of(a)) + (a % 2 == 0)


def naive_one_var(spec, X):
    total = Fraction(0)
    for a in range(1, X + 1):
        if not oracles.squarefree(a) or a % 8 != spec.alpha[0] % 8 or math.gcd(a, spec.d[0]) != 1:
            continue
        if spec.r and any(p % 4 == 3 for p in oracles.odd_primes_of(a)):
            continue
        total += Fraction(1, spec.c[0] ** omega(a))
    return total


def test_small_sieve_count():
    spec = MeanValueSpec(1, 0, (1,), (2,), (1,))
    # squarefree a <= 100 with a = 1 mod 8: 1 17 33 41 57 65 73 89 97
    assert brute_lhs(spec, (100,)) == 9


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 3),
    st.sampled_from([2, 6, 10, 30]),
    st.sampled_from([1, 3, 5, 7]),
    st.integers(0, 1),
    st.integers(1, 400),
)
def test_one_variable_sum_matches_naive(c, d, alpha, r, X):
    if r and alpha % 4 != 1:
        alpha = 1
    spec = MeanValueSpec(1, r, (c,), (d,), (alpha,))
    assert brute_lhs(spec, (X,)) == pytest.approx(float(naive_one_var(spec, X)), rel=1e-12)


def test_r_equals_n_keeps_only_one_mod_four_primes():
    spec = MeanValueSpec(1, 1, (1,), (2,), (1,))
    want = sum(
        1 for a in range(1, 301)
        if oracles.squarefree(a) and a % 8 == 1 and all(p % 4 == 1 for p in oracles.odd_primes_of(a))
    )
    assert brute_lhs(spec, (300,)) == want


@pytest.mark.parametrize("X", [(50, 80), (200, 120)])
def test_pair_sum_matches_double_loop(X):
    spec = MeanValueSpec(2, 1, (1, 2), (2, 6), (1, 3))
    assert brute_lhs(spec, X) == pytest.approx(pair_sum_naive(spec, X), rel=1e-12)


def test_three_variables_direct():
    spec = MeanValueSpec(3, 0, (1, 1, 2), (2, 2, 2), (1, 3, 5))
    X = (40, 40, 40)
    odd = [[a for a in range(1, 41) if oracles.squarefree(a) and a % 8 == al] for al in (1, 3, 5)]
    want = 0.0
    for a in odd[0]:
        for b in odd[1]:
            if math.gcd(a, b) > 1:
                continue
            for c in odd[2]:
                if math.gcd(a * b, c) == 1:
                    want += 0.5 ** omega(c)
    assert brute_lhs(spec, X) == pytest.approx(want, rel=1e-12)


def test_f_factor():
    assert f_factor(MeanValueSpec(1, 0, (1,), (2,), (1,))) == 1
    assert f_factor(MeanValueSpec(2, 0, (1, 1), (2, 2), (1, 1))) == 1
    assert f_factor(MeanValueSpec(1, 0, (1,), (6,), (1,))) == Fraction(3, 4)


def test_beta_relation():
    for spec in (
        MeanValueSpec(1, 0, (2,), (2,), (1,)),
        MeanValueSpec(2, 1, (1, 3), (2, 2), (1, 3)),
        MeanValueSpec(3, 2, (1, 2, 4), (2, 2, 2), (1, 5, 7)),
    ):
        lhs = math.prod(beta_tilde(c, 10**5) for c in spec.c[: spec.r])
        lhs *= math.prod(beta(c, 10**5) for c in spec.c[spec.r:])
        assert lhs > 0
        assert lhs == pytest.approx(beta_product_rhs(spec, 10**5), rel=1e-10)


def test_main_term_shape():
    spec = MeanValueSpec(1, 1, (1,), (2,), (1,))
    a = main_term(spec, (10**4,)).main_term
    b = main_term(spec, (10**5,)).main_term
    assert b / a == pytest.approx(10 * (math.log(1e4) / math.log(1e5)) ** 0.5, rel=1e-12)


@pytest.mark.parametrize(
    "args",
    [(0, 0, (), (), ()), (1, 2, (1,), (2,), (1,)), (1, 0, (1,), (3,), (1,)),
     (1, 0, (1,), (2,), (2,)), (1, 1, (1,), (2,), (3,)), (1, 0, (0,), (2,), (1,))],
)
def test_bad_specs(args):
    with pytest.raises(InputError):
        MeanValueSpec(*args)


def test_bounds_checked():
    spec = MeanValueSpec(3, 0, (1, 1, 1), (2, 2, 2), (1, 1, 1))
    with pytest.raises(InputError):
        brute_lhs(spec, (10**3, 10**3, 10**3))
    with pytest.raises(InputError):
        main_term(spec, (1, 5, 5))
