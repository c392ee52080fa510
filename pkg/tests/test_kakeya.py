import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modn.kakeya import (
    Direction,
    Line,
    angle,
    angle_by_representatives,
    angle_lemma_sweep,
    canonical,
    cordoba_l2,
    coverage,
    digit_twist,
    enumerate_directions,
    is_kakeya,
    kakeya_density_bound,
    line_intersection_count,
    maximal_functional,
    nonunit_count,
    projective_size,
    sawyer_construct,
    sawyer_set,
    separated_points_check,
    sphere_size,
    sphere_zero_size,
    translate_family,
    with_swapped_copy,
)
from modn.zmod import totient


def orbit_count(N, n):
    """Independent oracle: partition unimodular vectors into unit orbits with a set."""
    units = [u for u in range(N) if math.gcd(u, N) == 1]
    seen, orbits = set(), 0
    for v in itertools.product(range(N), repeat=n):
        if math.gcd(N, *v) != 1 or v in seen:
            continue
        orbits += 1
        seen |= {tuple(u * c % N for c in v) for u in units}
    return orbits


@pytest.mark.parametrize("N, n, expected", [(6, 2, 12), (4, 2, 6), (7, 2, 8), (2, 3, 7), (12, 2, 24)])
def test_direction_counts(N, n, expected):
    assert len(enumerate_directions(N, n)) == expected == projective_size(N, n)


@given(st.integers(1, 30), st.integers(1, 3))
def test_projective_cardinality(N, n):
    if N**n > 20000:
        return
    assert len(enumerate_directions(N, n)) == projective_size(N, n) == orbit_count(N, n)
    assert sphere_size(N, n) == projective_size(N, n) * totient(N)


@given(st.integers(1, 200))
def test_sphere_zero(N):
    assert sphere_zero_size(N) == totient(N)
    assert N - nonunit_count(N) == totient(N)


def test_canonical_representative_is_orbit_minimum():
    w = Direction.of((5, 3), 6)
    assert w.rep == canonical((5, 3), 6) == min(w.orbit())
    assert len(w.orbit()) == w.orbit_size == 2
    with pytest.raises(ValueError):
        Direction.of((2, 4), 6)


def test_angle_examples():
    assert angle((1, 0), (1, 0), 12) == 1
    assert angle((1, 0), (1, 6), 12) == 2
    assert angle((1, 0), (0, 1), 5) == 5


@given(st.sampled_from([4, 6, 8, 9, 10, 12, 15, 18, 20, 30]), st.data())
def test_angle_forms_agree(N, data):
    dirs = enumerate_directions(N, 2)
    a, b = data.draw(st.sampled_from(dirs)), data.draw(st.sampled_from(dirs))
    assert angle(a, b, N) == angle_by_representatives(a, b, N)
    assert angle(a, b, N) == angle(b, a, N)
    assert N % angle(a, b, N) == 0


def test_angle_forms_agree_in_three_dimensions():
    for N in (4, 6):
        dirs = enumerate_directions(N, 3)
        assert all(angle(a, b, N) == angle_by_representatives(a, b, N) for a in dirs for b in dirs)


def brute_intersection(l1, l2):
    return len({tuple(p) for p in l1.points().tolist()} & {tuple(p) for p in l2.points().tolist()})


def test_intersection_examples():
    N = 12
    l1, l2 = Line.through((1, 0), (0, 0), N), Line.through((1, 6), (0, 0), N)
    hit = line_intersection_count(l1, l2)
    assert hit.count == 6 == brute_intersection(l1, l2) and hit.bound == 6
    parallel = line_intersection_count(l1, Line.through((1, 0), (0, 1), N))
    assert parallel.count == 0


@given(st.sampled_from([5, 7, 11]), st.data())
def test_distinct_directions_meet_once_over_primes(p, data):
    dirs = enumerate_directions(p, 2)
    a, b = data.draw(st.sampled_from(dirs)), data.draw(st.sampled_from(dirs))
    v = (data.draw(st.integers(0, p - 1)), data.draw(st.integers(0, p - 1)))
    if a != b:
        assert line_intersection_count(Line.through(a, (0, 0), p), Line.through(b, v, p)).count <= 1


@given(st.sampled_from([6, 8, 9, 12, 18]), st.integers(2, 3), st.data())
def test_intersection_counts_match_brute_force(N, n, data):
    if n == 3 and N > 9:
        N = 6
    dirs = enumerate_directions(N, n)
    a, b = data.draw(st.sampled_from(dirs)), data.draw(st.sampled_from(dirs))
    v1 = tuple(data.draw(st.integers(0, N - 1)) for _ in range(n))
    v2 = tuple(data.draw(st.integers(0, N - 1)) for _ in range(n))
    l1, l2 = Line.through(a, v1, N), Line.through(b, v2, N)
    hit = line_intersection_count(l1, l2)
    assert hit.count == brute_intersection(l1, l2)
    assert hit.within_bound


@pytest.mark.parametrize("N", [5, 6, 8, 12])
def test_angle_bound_sweep(N):
    rep = angle_lemma_sweep(N, 2)
    assert rep.violations == 0 and rep.tight_pairs > 0


def test_angle_bound_sweep_three_dimensions():
    assert angle_lemma_sweep(6, 3).violations == 0


def test_translate_family_partitions_the_plane():
    w = Direction.of((1, 2), 6)
    family = translate_family(w, 2)
    assert len(family) == 6
    assert np.all(coverage(family, 6, 2) == 1)


def test_maximal_functional_equality_for_disjoint_lines():
    lines = translate_family(Direction.of((0, 1), 7), 2)
    lhs, rhs = maximal_functional(lines, 7, 2)
    assert lhs == pytest.approx(rhs)


def test_maximal_functional_envelope_on_random_families():
    worst = 0.0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        lines = [Line.through(w, tuple(rng.integers(0, 9, 2)), 9) for w in enumerate_directions(9, 2)]
        lhs, rhs = maximal_functional(lines, 9, 2)
        worst = max(worst, lhs / rhs)
    assert worst <= 3


def test_cordoba_concurrent_family():
    lines = [Line.through(w, (0, 0), 5) for w in enumerate_directions(5, 2)]
    rep = cordoba_l2(lines, 5, 2)
    assert rep.l2_squared == rep.pair_sum == 60
    assert rep.prime_bound == 60 and rep.consistent


def test_cordoba_single_line_and_full_family():
    single = cordoba_l2([Line.through((1, 1), (0, 0), 7)], 7, 2)
    assert single.l2_squared == 7
    lines = [ln for w in enumerate_directions(9, 2) for ln in translate_family(w, 2)]
    rep = cordoba_l2(lines, 9, 2)
    assert rep.l2_squared == 11664 and rep.consistent


def test_density_lower_bound():
    lines = [Line.through(w, (0, 0), 5) for w in enumerate_directions(5, 2)]
    union = int(coverage(lines, 5, 2).astype(bool).sum())
    assert kakeya_density_bound(lines, 5, 2) == Fraction(30 * 30, 60) <= union


def test_separated_points():
    assert separated_points_check(6, 2) == (True, 2556)
    assert separated_points_check(12, 2, samples=300)[0]
    # two lines through 0 and (1,1) with ||x - y|| = 4 coincide
    l1, l2 = Line.through((1, 1), (0, 0), 4), Line.through((3, 3), (1, 1), 4)
    assert l1 == l2


def test_kakeya_detection():
    assert is_kakeya(np.ones((6, 6), dtype=bool)).is_kakeya
    single = Line.through((1, 0), (0, 0), 6).mask(2)
    check = is_kakeya(single)
    assert not check.is_kakeya and check.failing is not None


def test_digit_twist():
    # p=2, s=1, alpha=2: c(w) = floor(1/1) * w_1 * 2
    assert digit_twist(2, 1, 2).tolist() == [0, 0, 2, 2]


@pytest.mark.parametrize("p, s, max_slice, size", [(2, 1, 2, 8), (3, 1, 9, 243), (2, 2, 64, 14592)])
def test_digit_twisted_sets(p, s, max_slice, size):
    rep = sawyer_construct(p, s)
    assert rep.passed
    assert rep.max_slice == max_slice and rep.size == size
    assert rep.density <= Fraction(1, p**s)


def test_digit_twisted_set_contains_its_lines():
    assert sawyer_construct(2, 1, verify_lines=True).lines_contained
    assert sawyer_construct(3, 1, verify_lines=True).lines_contained


def test_completed_digit_twisted_set_is_kakeya():
    K = with_swapped_copy(sawyer_set(2, 1))
    assert is_kakeya(K).is_kakeya
    assert not is_kakeya(sawyer_set(2, 1)).is_kakeya
