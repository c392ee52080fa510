import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modn.congruences import (
    BoundViolation,
    brute_count,
    christ_multilinear,
    count_solutions,
    count_table,
    diagonal_count_check,
    diagonal_sweep,
    difference_gcd_product,
    elementary_symmetric,
    factorisation_count,
    gcd_weight_l1,
    gcd_weight_l1_direct,
    hensel_regime_bound,
    hensel_sweep,
    jacobian_invariance,
    multilinear_witnesses,
    multiplicativity_check,
    newton_girard_consistency,
    power_sum_map,
    solutions,
    triangular_root,
)


def oracle_counts(N, n):
    """Plain-Python histogram of power sums over every tuple."""
    key = lambda t: tuple(sum(pow(c, k, N) for c in t) % N for k in range(1, n + 1))  # noqa: E731
    hist = Counter(key(t) for t in itertools.product(range(N), repeat=n))
    return {t: hist[key(t)] for t in itertools.product(range(N), repeat=n)}


def test_power_sum_map():
    assert power_sum_map((1, 2), 5) == (3, 0)
    assert power_sum_map((0, 0, 0), 7) == (0, 0, 0)


@pytest.mark.parametrize("N, n", [(5, 2), (6, 2), (5, 3), (4, 3), (9, 2)])
def test_count_table_matches_oracle(N, n):
    table = count_table(N, n)
    for t, c in oracle_counts(N, n).items():
        assert table[t] == c


def test_count_examples():
    assert count_solutions((0, 0), 5).count == 1
    rep = count_solutions((0, 1), 25)
    assert rep.count == 2 and rep.hensel.applicable and rep.hensel.bound == 2
    assert sorted(map(tuple, solutions((0, 1), 25).tolist())) == [(0, 1), (1, 0)]


@given(st.integers(1, 30))
def test_one_variable_count_is_one(N):
    assert all(brute_count((y,), N) == 1 for y in range(N))


def test_hensel_bound_examples():
    b = hensel_regime_bound((0, 1), 5, 2)
    assert b.delta == 0 and b.applicable and b.bound == 2
    b = hensel_regime_bound((0, 5), 5, 2)
    assert b.delta == 1 and not b.applicable and b.bound is None and b.planar_bound == 10
    assert count_solutions((0, 5), 25).count <= 10
    assert not hensel_regime_bound((3, 3, 3), 5, 3).applicable
    with pytest.raises(ValueError):
        hensel_regime_bound((0, 1), 2, 3)


@pytest.mark.parametrize("p, alpha, n", [(5, 1, 2), (5, 2, 2), (7, 2, 2), (5, 1, 3), (5, 2, 3)])
def test_hensel_sweep(p, alpha, n):
    sweep = hensel_sweep(p, alpha, n)
    assert sweep.violations == 0 and sweep.planar_violations == 0
    assert sweep.attained == sweep.in_regime


@given(st.sampled_from([(2, 3), (2, 5), (3, 4), (3, 5), (4, 5)]), st.integers(2, 3))
def test_multiplicativity(pair, n):
    N1, N2 = pair
    if n == 3 and N1 * N2 > 15:
        return
    assert multiplicativity_check(N1, N2, n) == 0


@given(st.sampled_from([6, 10, 15, 21]), st.tuples(st.integers(0, 100), st.integers(0, 100)))
def test_crt_count_matches_brute(N, y):
    assert count_solutions(y, N, "crt").count == count_solutions(y, N, "brute").count


def test_bound_violation_is_raised_by_count_checks():
    assert issubclass(BoundViolation, AssertionError)
    with pytest.raises(ValueError):
        count_solutions((0, 1), 25, method="smart")


@given(st.lists(st.integers(0, 50), min_size=2, max_size=3))
def test_count_is_symmetric_and_at_least_orbit(y):
    N = 7
    counts = {count_solutions(perm, N).count for perm in itertools.permutations(y)}
    assert len(counts) == 1
    distinct_orderings = len(set(itertools.permutations([c % N for c in y])))
    assert counts.pop() >= distinct_orderings


def test_difference_gcd_product():
    assert difference_gcd_product((0, 5, 10), 25) == 5 * 5 * 5


def test_diagonal_counts():
    assert triangular_root(3) == 2 and triangular_root(6) == 3
    with pytest.raises(ValueError):
        triangular_root(4)
    row = diagonal_count_check(5, 1, 3)
    assert row.count == brute_count((0, 0, 0), 5) == sum(
        1 for t in itertools.product(range(5), repeat=3) if power_sum_map(t, 5) == (0, 0, 0))
    rows, constant = diagonal_sweep([5], [1, 2], 3)
    assert len(rows) == 2 and constant == max(r.ratio for r in rows)


def test_multilinear_form_examples():
    for p in (3, 5, 7):
        v = christ_multilinear(np.ones(p), 1.0, 2.0, 2, p)
        assert v.lhs == pytest.approx((2 * p - 1) / p) and v.rhs == pytest.approx(1)
    F = np.random.default_rng(0).random(6)
    v = christ_multilinear(F, 0.0, 2.0, 3, 6)
    assert v.lhs == pytest.approx(F.mean() ** 3)


def test_multilinear_witnesses_cover_balls():
    w = multilinear_witnesses(12, 1.0, 2.0)
    assert set(w) == {"constant"} | {f"ball_{d}" for d in (1, 2, 3, 4, 6, 12)}


@given(st.integers(1, 300))
def test_gcd_weight(N):
    assert gcd_weight_l1(N) == gcd_weight_l1_direct(N)


def test_gcd_weight_values():
    assert gcd_weight_l1(1) == 1
    assert gcd_weight_l1(7) == Fraction(13, 7)
    # along N = 2^M the weight grows linearly in M with slope 1 - 1/2
    assert [gcd_weight_l1(2**M) for M in range(1, 6)] == [1 + Fraction(M, 2) for M in range(1, 6)]


def test_elementary_symmetric():
    assert elementary_symmetric((1, 2, 3), 100) == (6, 11, 6)


def test_factorisation_examples():
    assert factorisation_count((0, 1), 25).power_sum_count == 2
    assert factorisation_count((0, 1), 25).consistent
    diag = factorisation_count((0, 0), 9)
    assert diag.power_sum_count == count_solutions((0, 0), 9).count and diag.consistent
    with pytest.raises(ValueError):
        factorisation_count((0, 1), 4)


@pytest.mark.parametrize("N, n", [(5, 2), (9, 2), (7, 3), (15, 2), (25, 2)])
def test_newton_girard_consistency(N, n):
    assert newton_girard_consistency(N, n)


@given(st.lists(st.integers(0, 24), min_size=2, max_size=2))
def test_discriminant_is_constant_on_fibres(y):
    assert jacobian_invariance(y, 25)
