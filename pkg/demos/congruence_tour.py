"""How many tuples share the power sums of y mod N? Exact counts, the
Hensel-regime bound and the CRT product."""

from modn.congruences import (
    count_solutions,
    factorisation_count,
    gcd_weight_l1,
    hensel_sweep,
    multiplicativity_check,
    solutions,
)


def main():
    rep = count_solutions((0, 1), 25)
    print(f"y=(0,1) mod 25: {rep.count} solutions {sorted(map(tuple, solutions((0, 1), 25).tolist()))},"
          f" bound {rep.hensel.bound} (delta={rep.hensel.delta})")
    rep = count_solutions((0, 5), 25)
    print(f"y=(0,5) mod 25: {rep.count} solutions; outside the regime, planar bound {rep.hensel.planar_bound}")

    for y, N in (((1, 2, 4), 35), ((0, 3), 15)):
        crt = count_solutions(y, N, "crt")
        print(f"y={y} mod {N}: {crt.count} = product of local counts {crt.local_counts}")
    print(f"multiplicativity mismatches for 15 = 3*5, n=2: {multiplicativity_check(3, 5, 2)}")

    print("\nHensel-regime sweep (count <= n! prod gcd(y_j - y_k, p^alpha)):")
    for p, alpha, n in ((5, 2, 2), (7, 2, 2), (5, 2, 3)):
        s = hensel_sweep(p, alpha, n)
        print(f"  p={p} alpha={alpha} n={n}: {s.in_regime} regime points, {s.violations} violations,"
              f" worst count/prod gcd = {s.worst_conjecture_ratio}")

    f = factorisation_count((0, 1), 25)
    print(f"\nX(X-1) mod 25 factors into linear terms in {f.coefficient_count} ordered ways")
    print("gcd weight N^-1 sum gcd(t, 2^M):", [str(gcd_weight_l1(2**M)) for M in range(1, 6)])


if __name__ == "__main__":
    main()
