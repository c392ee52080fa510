import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modn.fourier import GroupFunction
from modn.kakeya import sawyer_set
from modn.padic import (
    TruncatedFunction,
    cells_from_mask,
    dilate,
    fold,
    fractional_part,
    lift_down_F,
    lift_down_Fhat,
    lift_up_F,
    lift_up_Fhat,
    neighbourhood_measure,
    norm_identity_F,
    norm_identity_Fhat,
    padic_character,
    padic_digits,
    padic_fourier_transform,
    padic_inverse_transform,
    projection_image,
    quotient_restriction_equivalence,
    random_truncated,
    set_correspondence,
    valuation,
    verify_ft_commutation,
    verify_norm_identities,
)
from modn.surfaces import paraboloid

primes = st.sampled_from([2, 3, 5])


def test_digits_and_valuation():
    assert padic_digits(11, 3, 4) == [2, 0, 1, 0]
    assert valuation(Fraction(18, 5), 3) == 2
    assert valuation(Fraction(5, 27), 3) == -3
    assert valuation(0, 7) == math.inf


def test_fractional_part_examples():
    assert fractional_part(Fraction(1, 3), 3) == Fraction(1, 3)
    assert fractional_part(Fraction(7, 4), 2) == Fraction(3, 4)
    assert fractional_part(5, 5) == 0
    # 1/2 is a 3-adic unit, so it has no fractional part
    assert fractional_part(Fraction(1, 2), 3) == 0


@given(primes, st.integers(-500, 500), st.integers(0, 4), st.integers(1, 30))
def test_fractional_part_differs_from_q_by_a_p_adic_integer(p, a, J, b):
    if b % p == 0:
        b += 1
    q = Fraction(a, p**J * b)
    frac = fractional_part(q, p)
    assert 0 <= frac < 1
    assert valuation(q - frac, p) >= 0


@given(primes, st.integers(-100, 100), st.integers(-100, 100), st.integers(0, 3))
def test_character_is_additive(p, a, b, J):
    x, y = Fraction(a, p**J), Fraction(b, p ** (J + 1))
    assert np.isclose(padic_character(x + y, p), padic_character(x, p) * padic_character(y, p))


def test_truncated_function_validation():
    with pytest.raises(ValueError):
        TruncatedFunction(4, 1, 1, np.zeros((16,)))
    with pytest.raises(ValueError):
        TruncatedFunction(3, 1, 1, np.zeros((8,)))


def test_trivial_truncation_is_identity():
    f = TruncatedFunction(5, 0, 0, np.array([2.5]))
    assert np.allclose(lift_down_F(f).values, [2.5])
    assert np.allclose(padic_fourier_transform(f).values, [2.5])


def test_point_evaluation_and_refinement():
    rng = np.random.default_rng(0)
    f = random_truncated(3, 1, 1, 1, rng)
    g = f.refine(2, 2)
    for x in (Fraction(0), Fraction(1, 3), Fraction(4, 9), Fraction(2), Fraction(1, 27), Fraction(10)):
        assert np.isclose(f.at((x,)), g.at((x,)))
    assert np.isclose(f.at((Fraction(1, 9),)), 0)
    assert f.lp_norm(2) == pytest.approx(g.lp_norm(2))


def test_norm_identity_examples():
    f = TruncatedFunction(3, 0, 0, np.ones(1))
    a, b = verify_norm_identities(f, 1.0)
    assert a.quotient == pytest.approx(1) and a.predicted == pytest.approx(1)
    assert f.lp_norm(1) == pytest.approx(1)
    g = random_truncated(5, 1, 1, 1, np.random.default_rng(1))
    check = norm_identity_F(g, math.inf)
    assert check.passed and check.factor == pytest.approx(5**-1)
    h = random_truncated(3, 1, 1, 1, np.random.default_rng(2))
    assert all(c.passed for c in verify_norm_identities(h, 2.0))


@given(primes, st.integers(0, 2), st.integers(0, 2), st.integers(1, 2), st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf]),
       st.integers(0, 2**31))
def test_norm_identities(p, k, l, n, r, seed):
    f = random_truncated(p, k, l, n, np.random.default_rng(seed))
    a, b = verify_norm_identities(f, r)
    assert a.passed and b.passed
    assert norm_identity_Fhat(padic_fourier_transform(f), r, "normalized").passed


@given(primes, st.integers(0, 2), st.integers(0, 2), st.integers(1, 2), st.integers(0, 2**31))
def test_transform_commutes_with_lifting(p, k, l, n, seed):
    f = random_truncated(p, k, l, n, np.random.default_rng(seed))
    assert verify_ft_commutation(f) < 1e-9


def test_digit_character_path_agrees():
    f = random_truncated(3, 1, 1, 1, np.random.default_rng(5))
    assert verify_ft_commutation(f, method="digits") < 1e-9
    assert np.allclose(padic_fourier_transform(f, "digits").values, padic_fourier_transform(f).values)


def test_ball_indicator_transforms_to_dual_ball():
    p, k, l = 3, 1, 1
    M = p ** (k + l)
    vals = np.zeros(M)
    vals[0] = 1.0  # the cell 0 + B_{p^-k}
    fhat = padic_fourier_transform(TruncatedFunction(p, k, l, vals)).values
    assert np.allclose(fhat, 1 / p**k)


@given(primes, st.integers(0, 2), st.integers(0, 2), st.integers(0, 2**31))
def test_plancherel_and_inversion(p, k, l, seed):
    f = random_truncated(p, k, l, 1, np.random.default_rng(seed))
    fhat = padic_fourier_transform(f)
    assert f.lp_norm(2) == pytest.approx(fhat.lp_norm(2), rel=1e-10)
    assert np.allclose(padic_inverse_transform(fhat).values, f.values)


def test_lifting_roundtrips():
    rng = np.random.default_rng(3)
    F = GroupFunction(rng.standard_normal((9, 9)), 9)
    assert np.allclose(lift_down_F(lift_up_F(F, 3, 1, 1)).values, F.values)
    g = random_truncated(3, 1, 1, 2, rng, side="dual")
    assert np.allclose(lift_up_Fhat(lift_down_Fhat(g), 3, 1, 1).values, g.values)
    const = TruncatedFunction(3, 1, 1, np.full((9,), 2.0), side="dual")
    assert np.allclose(lift_down_Fhat(const).values, 2.0)


def test_set_correspondence_examples():
    whole = set_correspondence([((0, 0), 0)], 2, 3, 2)
    assert whole.haar == whole.counting == 1 and whole.passed
    cell = set_correspondence([((1, 2), 2)], 2, 3, 2)
    assert cell.haar == cell.counting == Fraction(1, 81) and cell.passed


def test_set_correspondence_for_digit_twisted_set():
    K = sawyer_set(2, 1)
    res = set_correspondence(cells_from_mask(K, 2), 2, 2, 2)
    assert res.passed and res.haar == Fraction(int(K.sum()), 16)


@given(primes, st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30), st.integers(0, 3)), min_size=1, max_size=5),
       st.integers(1, 3))
def test_set_correspondence_on_random_cells(p, raw, alpha):
    cells = [((a, b), lev) for a, b, lev in raw]
    res = set_correspondence(cells, alpha, p, 2)
    assert res.passed
    assert neighbourhood_measure(cells, alpha, p, 2) == Fraction(len(projection_image(cells, alpha, p, 2)),
                                                                 p ** (2 * alpha))


def test_fold_and_dilate():
    F = GroupFunction(np.arange(9, dtype=float), 9)
    assert np.allclose(fold(F, 3, 1).values, [0 + 3 + 6, 1 + 4 + 7, 2 + 5 + 8])
    single = np.zeros(9)
    single[4] = 2.0
    assert np.count_nonzero(fold(GroupFunction(single, 9), 3, 1).values) == 1
    assert dilate(np.array([[1, 2]]), 3, 1, 1).tolist() == [[3, 6]]


def test_quotient_reformulation_example():
    rng = np.random.default_rng(7)
    batch = [rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9)) for _ in range(3)]
    rep = quotient_restriction_equivalence(3, 1, 1, paraboloid(2), batch)
    assert rep.passed and rep.max_deviation < 1e-9
    for row in rep.rows:
        assert row.input_norm == pytest.approx(row.holder_bound)


def test_quotient_reformulation_single_coset_is_holder_equality():
    vals = np.zeros((9, 9))
    vals[0::3, 0::3] = 1.0  # one coset of p^l
    rep = quotient_restriction_equivalence(3, 1, 1, paraboloid(2), [vals], r=1.0)
    assert rep.rows[0].folded_norm == pytest.approx(rep.rows[0].holder_bound)


def test_unit_ball_lifts_to_constant():
    f = TruncatedFunction(3, 1, 0, np.ones(3))  # indicator of Z_3 in S(1, 0)
    F = lift_down_F(f)
    assert np.allclose(F.values, 1 / 3) and np.sum(np.abs(F.values)) == pytest.approx(1)


def test_unit_ball_is_self_dual():
    f = TruncatedFunction(3, 1, 1, np.array([1.0 if x % 3 == 0 else 0.0 for x in range(9)]))
    fhat = padic_fourier_transform(f)
    assert np.allclose(fhat.values, f.values)
    assert np.allclose(padic_fourier_transform(f, "digits").values, fhat.values)


@given(primes, st.integers(0, 2), st.integers(0, 2), st.integers(0, 2**31))
def test_dual_lift_preserves_sup_norm(p, k, l, seed):
    g = random_truncated(p, k, l, 1, np.random.default_rng(seed), side="dual")
    assert np.max(np.abs(lift_down_Fhat(g).values)) == np.max(np.abs(g.values))


@pytest.mark.parametrize("p, k, l", [(2, 1, 2), (3, 1, 1), (3, 0, 2), (5, 1, 1), (2, 2, 1)])
def test_dilation_bijects_surface_images(p, k, l):
    rep = quotient_restriction_equivalence(p, k, l, paraboloid(2), [np.ones((p ** (k + l),) * 2)])
    assert rep.dilation_bijective and rep.passed
