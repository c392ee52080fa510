import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modn.exp_sums import (
    ball_multiplier_ft,
    check_hua_decay,
    condition_f_report,
    condition_f_supremum,
    gauss_closed_form_table,
    gauss_magnitude_squared,
    gauss_sum,
    gauss_table,
    gcd_count,
    gcd_count_prime_power,
    paraboloid_decay,
    paraboloid_gauss_product,
    partial_sum_SNd,
    surface_measure_ft,
)
from modn.surfaces import moment_curve, paraboloid

odd = st.integers(1, 60).map(lambda k: 2 * k + 1)


def test_gauss_values():
    assert math.isclose(abs(gauss_sum(0, 1, 5).value), 1 / math.sqrt(5))
    assert abs(gauss_sum(1, 3, 9).value) < 1e-12
    assert gauss_magnitude_squared(1, 3, 9) == 0
    for N in (1, 4, 9, 10):
        assert np.isclose(gauss_sum(0, 0, N).value, 1)


def test_gauss_closed_form_only_for_odd_moduli():
    assert gauss_sum(0, 1, 8).closed_form is None
    assert gauss_sum(0, 3, 9).magnitude_squared == Fraction(1, 3)


@given(odd)
def test_gauss_table_matches_closed_form(N):
    assert np.max(np.abs(np.abs(gauss_table(N)) - gauss_closed_form_table(N))) < 1e-9 * N


@given(st.integers(3, 25))
def test_gauss_table_methods_agree(N):
    assert np.allclose(gauss_table(N, "fft"), gauss_table(N, "direct"), atol=1e-10)


@given(odd, st.integers(0, 10**4), st.integers(0, 10**4))
def test_single_gauss_sum_matches_table(N, a, b):
    assert np.isclose(gauss_sum(a, b, N).value, gauss_table(N)[a % N, b % N], atol=1e-10)


@pytest.mark.parametrize("N, n", [(5, 2), (9, 3), (8, 2)])
def test_paraboloid_measure_is_gauss_product(N, n):
    assert np.allclose(surface_measure_ft(paraboloid(n), N).values, paraboloid_gauss_product(N, n), atol=1e-10)


def test_surface_measure_is_normalized():
    for surf in (paraboloid(2), paraboloid(3), moment_curve(3)):
        assert np.isclose(surface_measure_ft(surf, 7).values[(0,) * surf.n], 1)


@pytest.mark.parametrize("N", [9, 15, 25, 27, 45])
def test_paraboloid_decay(N):
    assert paraboloid_decay(N, 2).passed
    assert paraboloid_decay(N, 3).passed


def test_moment_curve_decay_constants():
    # exhaustive worst ratios, tabulated from this implementation's own search
    assert check_hua_decay(2, 9, 1.0).passed
    rep = check_hua_decay(3, 27, math.exp(12))
    assert rep.passed and math.isclose(rep.worst_ratio, 1.98647671548, rel_tol=1e-9)


def test_line_decay_is_a_delta():
    rep = check_hua_decay(1, 11, 1.0)
    assert rep.worst_point == (0,) and rep.worst_ratio == 1.0


def test_ball_multiplier_at_zero():
    assert np.isclose(ball_multiplier_ft(3, 12, 1).values[0], 4)


def test_condition_f_rows():
    rows = condition_f_report(3, 12, 1)
    assert [r.s for r in rows] == [Fraction(1, 3), Fraction(1, 2), Fraction(1)]
    assert [r.admissible for r in rows] == [6, 4, 0]
    assert all(r.dominated for r in rows)
    assert all(r.dominated for r in condition_f_supremum(3, 12, 1))


@pytest.mark.parametrize("N, rho, n", [(12, 2, 2), (18, 3, 1), (30, 5, 1)])
def test_condition_f_dominated_by_divisor_count(N, rho, n):
    assert all(r.dominated for r in condition_f_supremum(rho, N, n))


def test_partial_sums():
    assert partial_sum_SNd((0, 0), 7, 7) == 1
    assert abs(partial_sum_SNd((1,), 1, 9)) < 1e-12
    for xi in range(6):
        assert np.isclose(partial_sum_SNd((xi,), 2, 6), partial_sum_SNd((xi,), 1, 3))


@given(st.sampled_from([(2, 3), (3, 5), (4, 5), (5, 7), (4, 9)]), st.integers(0, 100))
def test_partial_sums_are_multiplicative(pair, xi):
    N1, N2 = pair
    whole = partial_sum_SNd((xi,), 1, N1 * N2)
    # x mod N1N2 with x = a N2 + b N1 splits the character
    assert np.isclose(whole, partial_sum_SNd((xi,), 1, N1) * partial_sum_SNd((xi,), 1, N2))


@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 2))
def test_gcd_counts_for_prime_powers(p, L, m):
    assert gcd_count(m, p**L) == gcd_count_prime_power(m, p, L)


def test_ball_multiplier_is_trivial_below_a_prime():
    assert np.allclose(ball_multiplier_ft(2, 7, 1).values, 1)
    assert np.allclose(ball_multiplier_ft(6, 7, 2).values, 1)
