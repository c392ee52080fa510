"""Restriction to the paraboloid mod N: Gauss sums, the constant function,
the Knapp box and a ratio scan at the l^2 endpoint."""

from fractions import Fraction

import numpy as np

from modn.exp_sums import gauss_closed_form_table, gauss_table, paraboloid_decay
from modn.extension import (
    conjugate_exponent,
    constant_closed_form,
    constant_test,
    knapp_function,
    tomas_endpoint,
    tomas_scan,
)


def main():
    N = 45
    G = np.abs(gauss_table(N))
    print(f"Gauss sums mod {N}: |G(a,b)| is sqrt(gcd(b,N)/N) or 0;"
          f" worst deviation {np.max(np.abs(G - gauss_closed_form_table(N))):.1e}")
    print(f"  e.g. |G(0,15)| = {G[0, 15]:.6f} = sqrt(15/45), |G(1,15)| = {G[1, 15]:.1e}")

    # E1 is a product of Gauss sums, so its size tracks the gcd-norm of x
    for n in (2, 3):
        rep = paraboloid_decay(N, n)
        print(f"decay n={n}: max |E1(x)| ||x||^{(n - 1) / 2} = {rep.worst_ratio:.6f}, attained at {rep.worst_point}")

    print("\nthe l^{r'} mass of E1 only sees the divisors of N:")
    for M in (15, 27, 45):
        t = constant_test(6, M)
        print(f"  N={M:>2}: sum phi(d) d^(-2) = {constant_closed_form(M, 2, 6)}, direct {t.direct:.12f}")

    print("\nKnapp box at N=81 (lhs = d^(-1/2), rhs = d^(-3/r'), r'=4 < 6 so the ratio grows like d^(1/4)):")
    r = float(conjugate_exponent(4))
    for d in (1, 3, 9):
        ex = knapp_function(d, 81, 2)
        print(f"  d={d}: lhs {ex.measured_lhs(2):.6f}  rhs {ex.measured_rhs(r):.6f}  ratio {ex.measured_lhs(2) / ex.measured_rhs(r):.4f}")

    Ns = [k * k for k in range(3, 16, 2)]
    r0 = tomas_endpoint(2)
    flat = tomas_scan(Ns, 2, r0, k_random=1)
    steep = tomas_scan(Ns, 2, float(r0) + 0.1, families=("knapp",))
    print(f"\nratio scan over N = {Ns}")
    print(f"  r = {Fraction(r0)}: log-log slope of the max ratio {flat.slope():+.4f}")
    print(f"  r = {float(r0) + 0.1:.1f}: Knapp slope {steep.slope():+.4f} (growth means the estimate fails)")


if __name__ == "__main__":
    main()
