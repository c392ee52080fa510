"""Power-sum congruences: exact solution counts, Hensel-regime bounds, diagonal
counts, the gcd-weighted multilinear form and polynomial factorisations."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .zmod import check_cap, crt_split, divisors, grid, ring, totient


class BoundViolation(AssertionError):
    """An exact count exceeded a bound that is asserted to hold."""


def power_sum_map(t, N: int) -> tuple[int, ...]:
    """(sum t_i, sum t_i^2, ..., sum t_i^n) mod N."""
    t = [int(c) % N for c in t]
    return tuple(sum(pow(c, k, N) for c in t) % N for k in range(1, len(t) + 1))


def _power_sum_codes(N: int, n: int) -> np.ndarray:
    """Mixed-radix code of Phi(t) for every t in grid order."""
    check_cap(N**n, "power-sum enumeration")
    if n == 0:
        return np.zeros(1, dtype=np.int64)
    rest = grid(N, n - 1) if n > 1 else np.zeros((1, 0), dtype=np.int64)
    k = np.arange(1, n + 1, dtype=np.int64)
    rest_sums = np.zeros((len(rest), n), dtype=np.int64)
    for j in range(n - 1):
        rest_sums = (rest_sums + _powers(rest[:, j], k, N)) % N
    weights = N ** np.arange(n, dtype=np.int64)
    lead = _powers(np.arange(N, dtype=np.int64), k, N)
    out = np.empty(N**n, dtype=np.int64)
    block = len(rest)
    for a in range(N):
        sums = (rest_sums + lead[a]) % N
        out[a * block:(a + 1) * block] = sums @ weights
    return out


def _powers(x: np.ndarray, k: np.ndarray, N: int) -> np.ndarray:
    """x^k mod N as a (len(x), len(k)) table, without overflow."""
    out = np.empty((len(x), len(k)), dtype=np.int64)
    acc = np.ones(len(x), dtype=np.int64)
    x = x % N
    for j in range(int(k.max())):
        acc = (acc * x) % N
        if j + 1 in k:
            out[:, list(k).index(j + 1)] = acc
    return out


def count_table(N: int, n: int) -> np.ndarray:
    """N(y; N) for every y in [Z/NZ]^n at once, from a histogram of Phi."""
    codes = _power_sum_codes(N, n)
    hist = np.bincount(codes, minlength=N**n)
    return hist[codes].reshape((N,) * n)


def solutions(y, N: int) -> np.ndarray:
    """Every ordered t with Phi(t) = Phi(y), by enumeration."""
    n = len(y)
    target = np.asarray(power_sum_map(y, N), dtype=np.int64) @ (N ** np.arange(n, dtype=np.int64))
    codes = _power_sum_codes(N, n)
    return grid(N, n)[codes == target]


def brute_count(y, N: int) -> int:
    n = len(y)
    target = np.asarray(power_sum_map(y, N), dtype=np.int64) @ (N ** np.arange(n, dtype=np.int64))
    return int(np.count_nonzero(_power_sum_codes(N, n) == target))


def _valuation(x: int, p: int, cap: int) -> int:
    v = 0
    x = abs(x)
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v


def difference_gcd_product(y, N: int) -> int:
    """prod_{j<k} gcd(y_j - y_k, N)."""
    return math.prod(math.gcd(a - b, N) for a, b in itertools.combinations(y, 2))


@dataclass(frozen=True)
class HenselBound:
    p: int
    alpha: int
    n: int
    delta: int  # sum of capped valuations of y_j - y_k; >= alpha/2 means outside the regime
    applicable: bool
    bound: int | None  # n! prod gcd(y_j - y_k, p^alpha) when applicable
    planar_bound: int | None  # 2 gcd(y_1 - y_2, p^alpha) for n = 2


def hensel_regime_bound(y, p: int, alpha: int, n: int | None = None) -> HenselBound:
    """Bound from lifting non-degenerate roots; needs p > n."""
    n = len(y) if n is None else n
    if p <= n:
        raise ValueError(f"Hensel-regime bound needs p > n (p={p}, n={n})")
    N = p**alpha
    delta = sum(_valuation((a - b) % N, p, alpha) for a, b in itertools.combinations(y, 2))
    applicable = 2 * delta < alpha
    bound = math.factorial(n) * difference_gcd_product(y, N) if applicable else None
    planar = 2 * math.gcd(y[0] - y[1], N) if n == 2 else None
    return HenselBound(p, alpha, n, delta, applicable, bound, planar)


@dataclass(frozen=True)
class CountReport:
    y: tuple[int, ...]
    N: int
    count: int
    method: str
    hensel: HenselBound | None
    gcd_product: int
    local_counts: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def conjecture_ratio(self) -> Fraction:
        """count / prod gcd(y_j - y_k, N); its sweep maximum is the measured constant."""
        return Fraction(self.count, self.gcd_product)

    def bounds(self) -> dict:
        out = {}
        if self.hensel is not None:
            if self.hensel.bound is not None:
                out["hensel"] = self.hensel.bound
            if self.hensel.planar_bound is not None:
                out["planar"] = self.hensel.planar_bound
        return out


def count_solutions(y, N: int, method: str = "auto") -> CountReport:
    """Exact number of ordered t in [Z/NZ]^n with Phi(t) = Phi(y).

    method "brute" enumerates [Z/NZ]^n; "crt" multiplies prime-power counts;
    "auto" uses crt when N has several prime factors.
    """
    y = tuple(int(c) % N for c in y)
    n = len(y)
    ctx = ring(N)
    if method == "auto":
        method = "crt" if len(ctx.primes) > 1 else "brute"
    local = {}
    if method == "crt":
        count = 1
        for (p, a), r in zip(ctx.prime_factors, crt_split_vector(y, N)):
            q = p**a
            local[q] = brute_count(r, q)
            count *= local[q]
    elif method == "brute":
        count = brute_count(y, N)
    else:
        raise ValueError(f"unknown method {method!r}")
    hensel = None
    if ctx.is_prime_power():
        p, a = ctx.prime_factors[0]
        if p > n and n >= 2:
            hensel = hensel_regime_bound(y, p, a, n)
    report = CountReport(y, N, count, method, hensel, difference_gcd_product(y, N), local)
    for name, bound in report.bounds().items():
        if count > bound:
            raise BoundViolation(f"{name} bound {bound} < count {count} for y={y}, N={N}")
    return report


def crt_split_vector(y, N: int) -> list[tuple[int, ...]]:
    """Componentwise reduction of y modulo each prime-power factor of N."""
    parts = [crt_split(c, N) for c in y]
    return [tuple(p[i] for p in parts) for i in range(len(ring(N).prime_factors))]


def multiplicativity_check(N1: int, N2: int, n: int) -> int:
    """Number of y where N(y; N1 N2) differs from N(y mod N1; N1) N(y mod N2; N2)."""
    if math.gcd(N1, N2) != 1:
        raise ValueError("moduli must be coprime")
    N = N1 * N2
    full = count_table(N, n)
    t1, t2 = count_table(N1, n), count_table(N2, n)
    y = grid(N, n)
    prod = t1[tuple((y % N1).T)] * t2[tuple((y % N2).T)]
    return int(np.count_nonzero(full.reshape(-1) != prod))


@dataclass(frozen=True)
class HenselSweep:
    p: int
    alpha: int
    n: int
    points: int
    in_regime: int
    violations: int
    planar_violations: int
    attained: int
    worst_conjecture_ratio: Fraction


def hensel_sweep(p: int, alpha: int, n: int) -> HenselSweep:
    """Check count <= n! prod gcd over every y in the regime delta < alpha/2."""
    if p <= n:
        raise ValueError("needs p > n")
    N = p**alpha
    counts = count_table(N, n).reshape(-1)
    y = grid(N, n)
    gprod = np.ones(len(y), dtype=np.int64)
    delta = np.zeros(len(y), dtype=np.int64)
    for j, k in itertools.combinations(range(n), 2):
        g = np.gcd((y[:, j] - y[:, k]) % N, N)
        gprod *= g
        delta += np.round(np.log(g) / math.log(p)).astype(np.int64)
    regime = 2 * delta < alpha
    bound = math.factorial(n) * gprod
    violations = int(np.count_nonzero(regime & (counts > bound)))
    attained = int(np.count_nonzero(regime & (counts == bound)))
    planar = 0
    if n == 2:
        planar = int(np.count_nonzero(counts > 2 * gprod))
    ratios = counts / gprod
    k = int(np.argmax(ratios))
    return HenselSweep(p, alpha, n, len(y), int(regime.sum()), violations, planar, attained,
                       Fraction(int(counts[k]), int(gprod[k])))


def triangular_root(n: int) -> int:
    r = int((math.isqrt(8 * n + 1) - 1) // 2)
    if r * (r + 1) // 2 != n:
        raise ValueError(f"{n} is not triangular")
    return r


@dataclass(frozen=True)
class DiagonalCount:
    p: int
    alpha: int
    n: int
    count: int
    envelope: int  # alpha p^{alpha (n - r)}, with the constant left out

    @property
    def ratio(self) -> float:
        return self.count / self.envelope


def diagonal_count_check(p: int, alpha: int, n: int) -> DiagonalCount:
    """N(0; p^alpha) against alpha p^{alpha(n-r)} for triangular n = r(r+1)/2."""
    r = triangular_root(n)
    if p <= n:
        raise ValueError("needs p > n")
    return DiagonalCount(p, alpha, n, brute_count((0,) * n, p**alpha), alpha * p ** (alpha * (n - r)))


def diagonal_sweep(primes, alphas, n: int) -> tuple[list[DiagonalCount], float]:
    """Rows plus the calibrated constant max count/envelope."""
    rows = [diagonal_count_check(p, a, n) for p in primes for a in alphas]
    return rows, max(r.ratio for r in rows)


# --- gcd-weighted multilinear form ----------------------------------------


@dataclass(frozen=True)
class MultilinearValue:
    lhs: float
    rhs: float
    gamma: float
    alpha: float
    n: int
    in_range: bool

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs else math.inf


def christ_multilinear(F, gamma: float, alpha: float, n: int, N: int) -> MultilinearValue:
    """N^{-n} sum_t prod F(t_i) prod_{j<k} gcd(t_j - t_k, N)^gamma against ||F||_alpha^n (normalized)."""
    F = np.asarray(F, dtype=float).reshape(N)
    check_cap(N**n, "multilinear form")
    t = grid(N, n)
    weight = np.ones(len(t))
    for j, k in itertools.combinations(range(n), 2):
        weight *= np.gcd((t[:, j] - t[:, k]) % N, N).astype(float) ** gamma
    lhs = float(np.sum(np.prod(F[t], axis=1) * weight)) / N**n
    rhs = float(np.mean(np.abs(F) ** alpha)) ** (n / alpha)
    in_range = gamma <= 2 / n and 1 / alpha + gamma * (n - 1) / 2 <= 1
    return MultilinearValue(lhs, rhs, gamma, alpha, n, in_range)


def multilinear_witnesses(N: int, gamma: float, alpha: float, n: int = 2) -> dict:
    """F = 1 and F = indicator of each ball B_d, the scaling test functions."""
    out = {"constant": christ_multilinear(np.ones(N), gamma, alpha, n, N)}
    for d in divisors(N):
        F = (np.arange(N) % (N // d) == 0).astype(float)
        out[f"ball_{d}"] = christ_multilinear(F, gamma, alpha, n, N)
    return out


def gcd_weight_l1(N: int) -> Fraction:
    """N^{-1} sum_t gcd(t, N) = N^{-1} sum_{d | N} phi(N/d) d."""
    return Fraction(sum(totient(N // d) * d for d in divisors(N)), N)


def gcd_weight_l1_direct(N: int) -> Fraction:
    return Fraction(sum(math.gcd(t, N) for t in range(N)), N)


# --- factorisations --------------------------------------------------------


def elementary_symmetric(t, N: int) -> tuple[int, ...]:
    """Coefficients e_1..e_n of prod (X - t_i), up to sign, mod N."""
    e = [1]
    for c in t:
        e = [(a + c * b) % N for a, b in zip(e + [0], [0] + e)]
    return tuple(e[1:])


def _symmetric_codes(N: int, n: int) -> np.ndarray:
    check_cap(N**n, "factorisation enumeration")
    t = grid(N, n)
    e = np.zeros((len(t), n + 1), dtype=np.int64)
    e[:, 0] = 1
    for j in range(n):
        c = t[:, j:j + 1]
        shifted = np.concatenate([np.zeros((len(t), 1), dtype=np.int64), e[:, :-1]], axis=1)
        e = (e + c * shifted) % N
    return e[:, 1:] @ (N ** np.arange(n, dtype=np.int64))


@dataclass(frozen=True)
class FactorisationCount:
    y: tuple[int, ...]
    N: int
    power_sum_count: int
    coefficient_count: int | None

    @property
    def consistent(self) -> bool:
        return self.coefficient_count is None or self.coefficient_count == self.power_sum_count


def factorisation_count(y, N: int, cross_check: bool = True) -> FactorisationCount:
    """Linear factorisations of prod (X - y_i) mod N; needs every prime factor of N above n."""
    n = len(y)
    if any(p <= n for p in ring(N).primes):
        raise ValueError(f"every prime factor of N must exceed n={n}")
    y = tuple(int(c) % N for c in y)
    ps = count_solutions(y, N).count
    coeff = None
    if cross_check:
        target = np.asarray(elementary_symmetric(y, N), dtype=np.int64) @ (N ** np.arange(n, dtype=np.int64))
        coeff = int(np.count_nonzero(_symmetric_codes(N, n) == target))
    return FactorisationCount(y, N, ps, coeff)


def newton_girard_consistency(N: int, n: int) -> bool:
    """Power-sum fibres coincide with coefficient fibres over all of [Z/NZ]^n (p > n)."""
    a = _power_sum_codes(N, n)
    b = _symmetric_codes(N, n)
    # equal partitions iff the joint code has as many classes as each marginal
    joint = a * (N**n) + b
    return len(np.unique(a)) == len(np.unique(b)) == len(np.unique(joint))


def jacobian_invariance(y, N: int) -> bool:
    """prod (x_j - x_k)^2 agrees with prod (y_j - y_k)^2 mod N on every solution."""
    def disc(t):
        return math.prod((a - b) ** 2 for a, b in itertools.combinations(t, 2)) % N

    ref = disc([int(c) for c in y])
    return all(disc([int(c) for c in x]) == ref for x in solutions(y, N))
