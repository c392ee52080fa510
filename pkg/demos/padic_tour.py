"""Schwartz-Bruhat functions on Q_p^n as tables on [Z/p^{k+l}]^n, and the
identities that make the two pictures interchangeable."""

from fractions import Fraction

import numpy as np

from modn.kakeya import sawyer_set
from modn.padic import (
    cells_from_mask,
    fractional_part,
    padic_fourier_transform,
    quotient_restriction_equivalence,
    random_truncated,
    set_correspondence,
    verify_ft_commutation,
    verify_norm_identities,
)
from modn.surfaces import paraboloid


def main():
    print("{7/4}_2 =", fractional_part(Fraction(7, 4), 2), " {5/18}_3 =", fractional_part(Fraction(5, 18), 3))

    rng = np.random.default_rng(0)
    f = random_truncated(3, 1, 2, 2, rng)
    print(f"\nrandom f in S(Q_3^2; 1, 2), table {f.values.shape}")
    for r in (1.0, 2.0, np.inf):
        a, b = verify_norm_identities(f, r)
        print(f"  r={r}: group identity rel err {a.relative_error:.1e}, dual identity rel err {b.relative_error:.1e}")
    print(f"  lifting commutes with the transforms: max error {verify_ft_commutation(f):.1e}")
    fhat = padic_fourier_transform(f)
    print(f"  Plancherel: ||f||_2 = {f.lp_norm(2):.6f}, ||f^||_2 = {fhat.lp_norm(2):.6f}")

    K = sawyer_set(2, 1)
    res = set_correspondence(cells_from_mask(K, 2), 2, 2, 2)
    print(f"\nneighbourhood of the digit-twisted set: Haar {res.haar}, counting {res.counting}, match {res.passed}")

    batch = [rng.standard_normal((9, 9)) for _ in range(2)]
    rep = quotient_restriction_equivalence(3, 1, 1, paraboloid(2), batch)
    row = rep.rows[0]
    print(f"\nrestriction average four ways: {row.discrete:.10f} {row.folded:.10f} {row.padic:.10f} {row.parametrized:.10f}")
    print(f"folding obeys Hoelder: {row.folded_norm:.4f} <= {row.holder_bound:.4f}")


if __name__ == "__main__":
    main()
