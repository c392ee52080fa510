"""Exact arithmetic over Z/NZ: gcd-norms, balls, transversals, CRT and linear congruences.

Residues are plain ints in [0, N) and lattice points are tuples of ints.
A :class:`RingContext` carries the factorization and divisor lattice of N.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

DEFAULT_CAP = 10**8


class EnumerationCapError(ValueError):
    """Raised when an enumeration would materialize too many elements."""


class SingularModulusError(ValueError):
    """Raised when det A is a zero divisor of the worst kind: det A = 0 mod N."""


def enumeration_cap() -> int:
    """Current cap on materialized set sizes (env MODN_CAP overrides)."""
    raw = os.environ.get("MODN_CAP")
    if raw is None:
        return DEFAULT_CAP
    return int(float(raw))


def check_cap(size: int, what: str = "enumeration") -> None:
    cap = enumeration_cap()
    if size > cap:
        raise EnumerationCapError(f"{what} needs {size} elements, cap is {cap} (set MODN_CAP to raise it)")


def factorize(N: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, ascending primes."""
    if N < 1:
        raise ValueError("modulus must be positive")
    out = []
    m = N
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


@dataclass(frozen=True)
class RingContext:
    """The modulus N together with its factorization and sorted divisors."""

    N: int
    prime_factors: tuple[tuple[int, int], ...] = field(init=False)
    divisors: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        pf = tuple(factorize(self.N))
        divs = [1]
        for p, e in pf:
            divs = [d * p**j for d in divs for j in range(e + 1)]
        object.__setattr__(self, "prime_factors", pf)
        object.__setattr__(self, "divisors", tuple(sorted(divs)))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.prime_factors)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.prime_factors)

    def is_divisor(self, d: int) -> bool:
        return d >= 1 and self.N % d == 0

    def require_divisor(self, d: int) -> None:
        if not self.is_divisor(d):
            raise ValueError(f"{d} does not divide N={self.N}")

    def totient(self) -> int:
        return totient(self.N)

    def is_prime_power(self) -> bool:
        return len(self.prime_factors) == 1


@lru_cache(maxsize=4096)
def ring(N: int) -> RingContext:
    """Cached RingContext constructor."""
    return RingContext(N)


def divisors(N: int) -> tuple[int, ...]:
    return ring(N).divisors


def totient(N: int) -> int:
    out = N
    for p, _ in ring(N).prime_factors:
        out = out // p * (p - 1)
    return out


def norm(x: int | Sequence[int], N: int) -> int:
    """gcd-norm N/gcd(x, N); for a tuple the gcd runs over every coordinate and N."""
    if isinstance(x, (int, np.integer)):
        return N // math.gcd(int(x), N)
    g = N
    for c in x:
        g = math.gcd(g, int(c))
    return N // g


def norm_array(points: np.ndarray, N: int) -> np.ndarray:
    """Vectorized gcd-norm over the last axis of an integer array."""
    pts = np.asarray(points, dtype=np.int64)
    if pts.ndim == 0:
        return N // np.gcd(pts, N)
    g = np.gcd.reduce(np.concatenate([pts, np.full(pts.shape[:-1] + (1,), N, dtype=np.int64)], axis=-1), axis=-1)
    return N // g


def norm_table(N: int, n: int) -> np.ndarray:
    """Table of gcd-norms over [Z/NZ]^n, shape (N,)*n."""
    check_cap(N**n, "norm table")
    g = np.full((1,) * n, N, dtype=np.int64)
    axis = np.arange(N, dtype=np.int64)
    for j in range(n):
        shape = [1] * n
        shape[j] = N
        g = np.gcd(g, axis.reshape(shape))
    return N // g


def divides_order(a: int, b: int) -> bool:
    """The scale ordering a ⪯ b, i.e. a | b."""
    return b % a == 0


def in_ball(x: Sequence[int], d: int, N: int) -> bool:
    """True iff N/d divides every coordinate of x."""
    ring(N).require_divisor(d)
    step = N // d
    return all(int(c) % step == 0 for c in x)


def grid(N: int, n: int) -> np.ndarray:
    """All points of [Z/NZ]^n as an (N^n, n) array in row-major order."""
    check_cap(N**n, "lattice grid")
    axes = np.indices((N,) * n, dtype=np.int64)
    return axes.reshape(n, -1).T


def ball_members(d: int, N: int, n: int) -> set[tuple[int, ...]]:
    """The ball of scale d: multiples of N/d in every coordinate (d^n points)."""
    ring(N).require_divisor(d)
    check_cap(d**n, "ball")
    step = N // d
    return set(itertools.product(range(0, N, step), repeat=n))


def nested_ball_members(rho: Fraction | float | int, n: int, N: int, dual: bool = False) -> set[tuple[int, ...]]:
    """Union of balls of scale d <= rho, or for dual=True of scale N/d with d >= 1/rho."""
    rho = Fraction(rho)
    if rho <= 0:
        raise ValueError("rho must be positive")
    if dual:
        scales = [N // d for d in divisors(N) if d >= 1 / rho]
    else:
        scales = [d for d in divisors(N) if d <= rho]
    check_cap(sum(e**n for e in scales), "nested ball")
    out: set[tuple[int, ...]] = set()
    for e in scales:
        out |= ball_members(e, N, n)
    return out


def lambda_set(d: int, N: int) -> list[int]:
    """Coset representatives 0..N/d-1 of the scale-d ball in Z/NZ."""
    ring(N).require_divisor(d)
    return list(range(N // d))


def disentangled_norm_sum(N: int, r) -> Fraction | float:
    """Closed form of the sum over x mod N of |x|^(-r), namely sum over d | N of phi(d) d^(-r)."""
    exact = isinstance(r, (int, Fraction)) and Fraction(r).denominator == 1 and r >= 0
    if exact:
        r = int(r)
        return sum((Fraction(totient(d), d**r) for d in divisors(N)), Fraction(0))
    return float(sum(totient(d) * d ** (-float(r)) for d in divisors(N)))


def direct_norm_sum(N: int, r) -> Fraction | float:
    """Direct summation of |x|^(-r) over x mod N."""
    exact = isinstance(r, (int, Fraction)) and Fraction(r).denominator == 1 and r >= 0
    if exact:
        return sum((Fraction(1, norm(x, N) ** int(r)) for x in range(N)), Fraction(0))
    return float(sum(norm(x, N) ** (-float(r)) for x in range(N)))


# --- Chinese remainder theorem -------------------------------------------


def crt_split(x: int, N: int) -> tuple[int, ...]:
    """Residues of x modulo each prime power of N (ascending primes)."""
    return tuple(int(x) % q for q in ring(N).prime_powers)


def crt_combine(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """Inverse of crt_split for pairwise coprime moduli."""
    M = math.prod(moduli)
    x = 0
    for a, q in zip(residues, moduli):
        r = M // q
        x += a * r * pow(r, -1, q)
    return x % M


# --- Smith normal form and linear congruences -----------------------------


def smith_normal_form(A: Sequence[Sequence[int]], want_right: bool = False):
    """Smith normal form over Z.

    Returns (diag, U, V) with U @ A @ V diagonal, diag[i] | diag[i+1], U and V
    unimodular. V is None unless want_right.
    """
    D = [[int(v) for v in row] for row in A]
    m = len(D)
    k = len(D[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(k)] for i in range(k)] if want_right else None

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst -= q * row src
        D[dst] = [a - q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                row[dst] -= q * row[src]

    for t in range(min(m, k)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, k):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, D[i][t] // piv)
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, k):
                if D[t][j]:
                    add_col(j, t, D[t][j] // piv)
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, k) if D[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    diag = [D[i][i] for i in range(min(m, k))]
    return diag, U, V


def _solve_diagonal(diag, c, N, k):
    """Count (and one witness y) for diag[i] y_i = c_i mod N plus zero rows."""
    count = 1
    y = [0] * k
    for i, ci in enumerate(c):
        di = diag[i] if i < len(diag) else 0
        g = math.gcd(di, N)
        if ci % g:
            return 0, None
        if i < k:
            count *= g
            if g != N:
                y[i] = (ci // g) * pow(di // g, -1, N // g) % (N // g)
    count *= N ** max(0, k - len(c))
    return count, y


def count_congruence_solutions(A: Sequence[Sequence[int]], b: Sequence[int], N: int, witness: bool = False):
    """Number of x in [Z/NZ]^k with A x = b mod N for any m x k integer matrix A."""
    m = len(A)
    k = len(A[0])
    if len(b) != m:
        raise ValueError("shape mismatch between A and b")
    diag, U, V = smith_normal_form(A, want_right=witness)
    c = [sum(u * int(bj) for u, bj in zip(row, b)) % N for row in U]
    count, y = _solve_diagonal(diag, c, N, k)
    if not witness:
        return count
    if count == 0:
        return 0, None
    x = tuple(sum(V[i][j] * y[j] for j in range(k)) % N for i in range(k))
    return count, x


def integer_det(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free elimination (Bareiss)."""
    M = [[int(v) for v in row] for row in A]
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant needs a square matrix")
    sign, prev = 1, 1
    for t in range(n - 1):
        if M[t][t] == 0:
            swap = next((i for i in range(t + 1, n) if M[i][t]), None)
            if swap is None:
                return 0
            M[t], M[swap] = M[swap], M[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                M[i][j] = (M[i][j] * M[t][t] - M[i][t] * M[t][j]) // prev
        prev = M[t][t]
    return sign * M[-1][-1] if n else 1


def count_linear_solutions(A: Sequence[Sequence[int]], b: Sequence[int], N: int, witness: bool = False):
    """Solutions of a square system A x = b mod N via Smith normal form.

    Requires det A != 0 mod N. With witness=True returns (count, x) where x is
    one solution or None.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("count_linear_solutions needs a square matrix")
    if integer_det(A) % N == 0:
        raise SingularModulusError(f"det A = 0 mod {N}")
    return count_congruence_solutions(A, b, N, witness=witness)


def det_norm_prediction(A: Sequence[Sequence[int]], N: int) -> int:
    """The value N/|det A| (gcd-norm reading), the candidate nonzero count."""
    return N // norm(integer_det(A) % N, N)


def brute_force_congruence_count(A: Sequence[Sequence[int]], b: Iterable[int], N: int) -> int:
    """Oracle: enumerate every x in [Z/NZ]^k."""
    A = np.asarray(A, dtype=np.int64)
    pts = grid(N, A.shape[1])
    lhs = (pts @ A.T) % N
    return int(np.all(lhs == np.asarray(list(b), dtype=np.int64) % N, axis=1).sum())
