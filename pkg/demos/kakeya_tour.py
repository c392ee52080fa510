"""Lines over Z/NZ: counting directions, measuring angles, and a small
Kakeya set built from base-p digits."""

from fractions import Fraction

from modn.kakeya import (
    Line,
    angle,
    angle_lemma_sweep,
    cordoba_l2,
    enumerate_directions,
    is_kakeya,
    line_intersection_count,
    projective_size,
    sawyer_construct,
    sawyer_set,
    with_swapped_copy,
)


def main():
    for N in (5, 6, 12, 36):
        print(f"N={N:>2}: {len(enumerate_directions(N, 2)):>3} directions in the plane"
              f" (formula {projective_size(N, 2)}), {len(enumerate_directions(N, 3)):>5} in space")

    N = 12
    a, b = (1, 0), (1, 6)
    hit = line_intersection_count(Line.through(a, (0, 0), N), Line.through(b, (0, 0), N))
    print(f"\nmod {N}, directions {a} and {b}: angle {angle(a, b, N)}, the lines share {hit.count} points"
          f" (bound N/angle = {hit.bound})")
    for M in (12, 18, 24):
        sweep = angle_lemma_sweep(M, 2)
        print(f"  every line pair mod {M}: {sweep.violations} violations, {sweep.tight_pairs} direction pairs tight")

    lines = [Line.through(w, (0, 0), 5) for w in enumerate_directions(5, 2)]
    rep = cordoba_l2(lines, 5, 2)
    print(f"\nsix concurrent lines mod 5: ||sum chi||_2^2 = {rep.l2_squared}, prime bound {rep.prime_bound}")

    print("\ndigit-twisted sets (one line per slope t -> (t, t w + c(w))):")
    for p, s in ((2, 1), (3, 1), (2, 2)):
        r = sawyer_construct(p, s)
        print(f"  p={p} s={s}: N={r.N}, largest slice {r.max_slice} <= {r.slice_bound},"
              f" density {r.density} <= {Fraction(1, p**s)}")
    K = sawyer_set(2, 1)
    print(f"  p=2 s=1 alone is Kakeya: {is_kakeya(K).is_kakeya}; with its swapped copy: "
          f"{is_kakeya(with_swapped_copy(K)).is_kakeya}")


if __name__ == "__main__":
    main()
