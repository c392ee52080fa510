"""Gauss sums, surface-measure transforms, moment-curve decay and the ball multiplier."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .extension import extend
from .fourier import DUAL, GroupFunction, roots_of_unity
from .surfaces import Surface, moment_curve, paraboloid
from .zmod import check_cap, divisors, grid, nested_ball_members, norm_array, norm_table, ring


@dataclass(frozen=True)
class GaussSumValue:
    """G_N(a,b) with, for odd N, its closed-form magnitude squared as a fraction."""

    a: int
    b: int
    N: int
    value: complex
    magnitude_squared: Fraction | None

    @property
    def closed_form(self) -> float | None:
        if self.magnitude_squared is None:
            return None
        return math.sqrt(self.magnitude_squared)


def gauss_magnitude_squared(a: int, b: int, N: int) -> Fraction:
    """0 unless gcd(b,N) | a, else gcd(b,N)/N (valid for odd N)."""
    g = math.gcd(b, N)
    return Fraction(g, N) if a % g == 0 else Fraction(0)


def gauss_sum(a: int, b: int, N: int) -> GaussSumValue:
    """(1/N) sum_t e^{2 pi i (a t + b t^2)/N}."""
    t = np.arange(N, dtype=np.int64)
    idx = (a * t + b * ((t * t) % N)) % N
    value = complex(roots_of_unity(N)[idx].sum() / N)
    closed = gauss_magnitude_squared(a % N, b % N, N) if N % 2 else None
    return GaussSumValue(a % N, b % N, N, value, closed)


def gauss_table(N: int, method: str = "fft") -> np.ndarray:
    """G[a, b] for all residues; fft transforms each row t -> e^{2 pi i b t^2/N}."""
    check_cap(N * N, "Gauss table")
    t = np.arange(N, dtype=np.int64)
    quad = np.outer(np.arange(N, dtype=np.int64), (t * t) % N) % N  # [b, t]
    Q = roots_of_unity(N)[quad]
    if method == "fft":
        G = np.fft.ifft(Q, axis=1)  # [b, a]
    else:
        lin = np.outer(t, t) % N  # [t, a]
        G = Q @ roots_of_unity(N)[lin] / N
    return G.T


def gauss_closed_form_table(N: int) -> np.ndarray:
    """sqrt(gcd(b,N)/N) where gcd(b,N) | a, else 0; indexed [a, b]."""
    g = np.gcd(np.arange(N), N)
    a = np.arange(N)[:, None]
    return np.where(a % g[None, :] == 0, np.sqrt(g / N)[None, :], 0.0)


@dataclass(frozen=True)
class SurfaceMeasureFT:
    surface: Surface
    N: int
    values: np.ndarray


def surface_measure_ft(surface: Surface, N: int, method: str = "fft") -> SurfaceMeasureFT:
    """Normalized counting measure on the surface, inverse-transformed: E1."""
    H = GroupFunction(np.ones((N,) * surface.d), N, DUAL)
    return SurfaceMeasureFT(surface, N, extend(H, surface, method=method).values)


def paraboloid_gauss_product(N: int, n: int) -> np.ndarray:
    """prod_{j<n} G_N(x_j, x_n) as a table over [Z/NZ]^n."""
    G = gauss_table(N)
    out = np.ones((N,) * n, dtype=complex)
    for j in range(n - 1):
        shape = [1] * n
        shape[j] = N
        shape[-1] = N
        out = out * G.reshape(shape)
    return out


@dataclass(frozen=True)
class DecayReport:
    N: int
    n: int
    exponent: float
    worst_ratio: float
    worst_point: tuple[int, ...]
    bound: float
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _decay(values: np.ndarray, N: int, exponent: float, bound: float, tol: float) -> DecayReport:
    n = values.ndim
    norms = norm_table(N, n).astype(float)
    ratio = np.abs(values) * norms**exponent
    k = int(np.argmax(ratio))
    worst = float(ratio.reshape(-1)[k])
    violations = int(np.count_nonzero(ratio > bound * (1 + tol) + tol))
    return DecayReport(N, n, exponent, worst, tuple(int(c) for c in np.unravel_index(k, values.shape)), bound,
                       violations)


def paraboloid_decay(N: int, n: int, tol: float = 1e-9) -> DecayReport:
    """|E1(x)| <= ||x||^{-(n-1)/2} on the paraboloid; counts violations."""
    values = surface_measure_ft(paraboloid(n), N).values
    return _decay(values, N, (n - 1) / 2, 1.0, tol)


def check_hua_decay(n: int, N: int, B: float, tol: float = 1e-9) -> DecayReport:
    """Worst |mu-check(x)| ||x||^{1/n} for the moment curve; passes iff <= B."""
    if n == 1:
        values = np.zeros(N, dtype=complex)
        values[0] = 1.0
    else:
        values = surface_measure_ft(moment_curve(n), N).values
    return _decay(values, N, 1.0 / n, B, tol)


# --- ball multiplier and condition (F) -----------------------------------


@dataclass(frozen=True)
class ConditionFRow:
    s: Fraction
    admissible: int
    constant: float  # max |phi_hat| * s^n over the admissible frequencies
    divisor_count: int

    @property
    def dominated(self) -> bool:
        return self.constant <= self.divisor_count * (1 + 1e-9)


def ball_multiplier_ft(rho, N: int, n: int) -> GroupFunction:
    """Transform of the indicator of the nested ball B_rho, summed over its members."""
    members = np.array(sorted(nested_ball_members(rho, n, N)), dtype=np.int64).reshape(-1, n)
    check_cap(len(members) * N**n, "ball multiplier")
    xi = grid(N, n)
    vals = np.zeros(len(xi), dtype=complex)
    roots = roots_of_unity(N)
    for x in members:
        vals += roots[(-(xi @ x)) % N]
    return GroupFunction(vals.reshape((N,) * n), N, DUAL)


def condition_f_report(rho, N: int, n: int, s_values=None) -> list[ConditionFRow]:
    """For each s >= 1/rho: max |phi_hat_rho(xi)| s^n over xi with -xi outside the dual ball of radius s.

    By default s runs over the breakpoints 1/d (d | N) together with the suprema
    just below them, where the admissible set is constant on each interval.
    """
    rho = Fraction(rho)
    phi = np.abs(ball_multiplier_ft(rho, N, n).values).reshape(-1)
    xi = grid(N, n)
    neg = (-xi) % N
    tau = len(divisors(N))
    if s_values is None:
        s_values = sorted({Fraction(1, d) for d in divisors(N)} | {Fraction(1)})
    rows = []
    for s in map(Fraction, s_values):
        if s < 1 / rho:
            continue
        dual = nested_ball_members(s, n, N, dual=True)
        inside = np.array([tuple(p) in dual for p in neg.tolist()])
        adm = ~inside
        const = float(phi[adm].max() * float(s) ** n) if adm.any() else 0.0
        rows.append(ConditionFRow(s, int(adm.sum()), const, tau))
    return rows


def condition_f_supremum(rho, N: int, n: int) -> list[ConditionFRow]:
    """Supremum over each interval of constancy: the admissible set for s in [1/d_j, 1/d_{j-1})
    is fixed, so the sup of s^n is the open right endpoint 1/d_{j-1}."""
    rho = Fraction(rho)
    divs = divisors(N)
    phi = np.abs(ball_multiplier_ft(rho, N, n).values).reshape(-1)
    neg = (-grid(N, n)) % N
    tau = len(divs)
    rows = []
    for j in range(1, len(divs)):
        left, right = Fraction(1, divs[j]), Fraction(1, divs[j - 1])
        if right <= 1 / rho:
            continue
        dual = nested_ball_members(left, n, N, dual=True)
        adm = np.array([tuple(p) not in dual for p in neg.tolist()])
        const = float(phi[adm].max() * float(right) ** n) if adm.any() else 0.0
        rows.append(ConditionFRow(right, int(adm.sum()), const, tau))
    return rows


# --- partial sums over exact gcd -----------------------------------------


def partial_sum_SNd(xi, d: int, N: int) -> complex:
    """Sum of e^{2 pi i xi.x/N} over x with gcd(x_1..x_n, N) = d."""
    ring(N).require_divisor(d)
    xi = np.asarray(xi, dtype=np.int64).reshape(-1)
    n = len(xi)
    pts = grid(N, n)
    g = N // norm_array(pts, N)
    sel = pts[g == d]
    return complex(roots_of_unity(N)[(sel @ xi) % N].sum())


def gcd_count(m: int, N: int) -> int:
    """Brute count of x in [Z/NZ]^m with gcd(x_1..x_m, N) = 1."""
    pts = grid(N, m)
    return int(np.count_nonzero(norm_array(pts, N) == N))


def gcd_count_prime_power(m: int, p: int, L: int) -> int:
    """p^{Lm}(1 - p^{-m})."""
    return p ** (L * m) - p ** ((L - 1) * m)
