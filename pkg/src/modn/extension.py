"""Extension and restriction operators for polynomial surfaces mod N, Knapp
examples, the constant-function test and ratio scans."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .fourier import DUAL, GROUP, GroupFunction, _axiswise, character_matrix, dft, lp_norm, roots_of_unity
from .surfaces import Surface, moment_curve, paraboloid
from .zmod import check_cap, divisors, totient

BATCH = 1 << 21


def conjugate_exponent(r) -> Fraction | float:
    """r' with 1/r + 1/r' = 1; exact for rational r."""
    if r == 1:
        return math.inf
    if math.isinf(r):
        return Fraction(1)
    if isinstance(r, (int, Fraction)):
        r = Fraction(r)
        return r / (r - 1)
    return r / (r - 1)


def extend(H: GroupFunction, surface: Surface, method: str = "fft") -> GroupFunction:
    """EH(x) = N^{-d} sum_w H(w) e^{2 pi i (x'.w + x''.P(w))/N}."""
    N, d, n = H.N, surface.d, surface.n
    if H.n != d:
        raise ValueError(f"H lives on dimension {H.n}, surface has parameter dimension {d}")
    check_cap(N**n, "extension output")
    heights = surface.heights(N)  # (n-d, N^d)
    k = n - d
    out = np.empty((N**k,) + (N,) * d, dtype=complex)
    roots = roots_of_unity(N)
    outer = np.indices((N,) * k, dtype=np.int64).reshape(k, -1).T if k else np.zeros((1, 0), dtype=np.int64)
    step = max(1, BATCH // N**d)
    W = character_matrix(N, 1) if method != "fft" else None
    for lo in range(0, len(outer), step):
        xs = outer[lo:lo + step]
        phase = (xs @ heights) % N if k else np.zeros((len(xs), N**d), dtype=np.int64)
        g = H.values.reshape(1, -1) * roots[phase]
        g = g.reshape((len(xs),) + (N,) * d)
        if method == "fft":
            block = np.fft.ifftn(g, axes=tuple(range(1, d + 1)))
        else:
            block = np.stack([_axiswise(gi, W) for gi in g]) / float(N) ** d
        out[lo:lo + len(xs)] = block
    # out is indexed (x'', x'); reorder to (x', x'')
    vals = out.reshape((N,) * k + (N,) * d)
    vals = np.moveaxis(vals, tuple(range(k)), tuple(range(d, n)))
    return GroupFunction(vals, N, GROUP)


def extend_direct(H: GroupFunction, surface: Surface) -> GroupFunction:
    """Literal sum over parameters for every x; an oracle for tiny grids."""
    N, n = H.N, surface.n
    check_cap(N**n * N**surface.d, "direct extension")
    pts = np.indices((N,) * n, dtype=np.int64).reshape(n, -1).T
    gamma = surface.graph(N)
    phase = (pts @ gamma.T) % N
    vals = roots_of_unity(N)[phase] @ H.values.reshape(-1) / float(N) ** surface.d
    return GroupFunction(vals.reshape((N,) * n), N, GROUP)


def restrict(G: GroupFunction, surface: Surface) -> np.ndarray:
    """Values of a dual-side table at the surface points, one per parameter."""
    gamma = surface.graph(G.N)
    return G.values[tuple(gamma.T)]


@dataclass(frozen=True)
class RestrictionReport:
    lhs: float
    rhs: float
    r: float
    s: float
    N: int

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            raise ZeroDivisionError("rhs vanishes")
        return self.lhs / self.rhs


def restriction_ratio(F: GroupFunction, surface: Surface, r, s, method: str = "fft") -> RestrictionReport:
    """(avg over the surface of |F^|^s)^{1/s} against the counting l^r norm of F."""
    if F.side != GROUP:
        raise ValueError("restriction_ratio expects a group-side function")
    on_surface = restrict(dft(F, method=method), surface)
    lhs = lp_norm(on_surface, float(s), weight=1.0 / on_surface.size)
    rhs = lp_norm(F.values, float(r))
    if rhs == 0:
        raise ZeroDivisionError("F vanishes identically")
    return RestrictionReport(lhs, rhs, float(r), float(s), F.N)


def extension_ratio(H: GroupFunction, surface: Surface, rprime, sprime, method: str = "fft") -> RestrictionReport:
    """Dual form: counting l^{r'} norm of EH against the normalized L^{s'} norm of H."""
    EH = extend(H, surface, method=method)
    lhs = lp_norm(EH.values, float(rprime))
    rhs = H.norm(float(sprime))
    return RestrictionReport(lhs, rhs, float(rprime), float(sprime), H.N)


def pairing_identity(H: GroupFunction, F: GroupFunction, surface: Surface) -> tuple[complex, complex]:
    """Both sides of <EH, F> = <H, F^ restricted to the surface>."""
    left = complex(np.vdot(F.values, extend(H, surface).values))
    Fhat = restrict(dft(F), surface)
    right = complex(np.vdot(Fhat, H.values.reshape(-1))) / float(F.N) ** surface.d
    return left, right


# --- Knapp examples -------------------------------------------------------


@dataclass(frozen=True)
class KnappExample:
    """F with F^ = indicator of {d | w_j, d^2 | t}; F = d^{-(n+1)} on its dual box."""

    N: int
    n: int
    d: int
    F: GroupFunction
    theta: np.ndarray = field(repr=False)
    dual_box: np.ndarray = field(repr=False)
    max_deviation: float = 0.0

    @property
    def amplitude(self) -> Fraction:
        return Fraction(1, self.d ** (self.n + 1))

    @property
    def box_size(self) -> int:
        return int(self.dual_box.sum())

    def lhs_power(self) -> Fraction:
        """lhs^s exactly: the surface fraction hit by theta."""
        return Fraction(self.N // self.d, self.N) ** (self.n - 1)

    def predicted_lhs(self, s) -> float:
        return self.d ** (-(self.n - 1) / float(s))

    def predicted_rhs(self, rprime) -> float:
        return self.d ** (-(self.n + 1) / float(rprime))

    def rhs_exact(self, r) -> float:
        """Counting l^r norm of the exact Knapp function."""
        if math.isinf(float(r)):
            return float(self.amplitude)
        return float(self.amplitude) * self.box_size ** (1.0 / float(r))

    def measured_lhs(self, s, method: str = "fft") -> float:
        vals = restrict(dft(self.F, method=method), paraboloid(self.n))
        return lp_norm(vals, float(s), weight=1.0 / vals.size)

    def measured_rhs(self, r) -> float:
        return lp_norm(self.F.values, float(r))


def _box_mask(N: int, n: int, inner: int, last: int) -> np.ndarray:
    axes = [np.arange(N) % inner == 0] * (n - 1) + [np.arange(N) % last == 0]
    mask = axes[0]
    for a in axes[1:]:
        mask = np.multiply.outer(mask, a)
    return mask


def knapp_function(d: int, N: int, n: int = 2, method: str = "fft", tol: float = 1e-9) -> KnappExample:
    """Build the Knapp example at scale d (needs d^2 | N) and check its closed form."""
    if N % (d * d):
        raise ValueError(f"Knapp example needs d^2 | N, got d={d}, N={N}")
    theta = _box_mask(N, n, d, d * d)
    G = GroupFunction(theta.astype(complex), N, DUAL)
    from .fourier import inverse_dft

    F = inverse_dft(G, method=method)
    dual_box = _box_mask(N, n, N // d, N // (d * d))
    exact = dual_box / float(d ** (n + 1))
    dev = float(np.max(np.abs(F.values - exact)))
    if dev > tol * max(1, theta.sum()):
        raise ArithmeticError(f"Knapp transform deviates from closed form by {dev}")
    return KnappExample(N, n, d, F, theta, dual_box, dev)


def knapp_ratio_exponent(n: int, s, rprime) -> Fraction:
    """Growth exponent of the Knapp ratio in d: (n+1)/r' - (n-1)/s."""
    return Fraction(n + 1) / Fraction(rprime) - Fraction(n - 1) / Fraction(s)


# --- constant function ----------------------------------------------------


@dataclass(frozen=True)
class ConstantTest:
    N: int
    n: int
    rprime: float
    exact: Fraction | float
    direct: float

    @property
    def relative_error(self) -> float:
        return abs(self.direct - float(self.exact)) / float(self.exact)


def constant_closed_form(N: int, n: int, rprime) -> Fraction | float:
    """sum over d | N of phi(d) d^{-(n-1)(r'/2-1)}, exact when the exponent is an integer."""
    e = Fraction(rprime) * (n - 1) / 2 - (n - 1) if not isinstance(rprime, float) else (n - 1) * (rprime / 2 - 1)
    if isinstance(e, Fraction) and e.denominator == 1:
        e = int(e)
        return sum((Fraction(totient(d)) / Fraction(d) ** e for d in divisors(N)), Fraction(0))
    return float(sum(totient(d) * d ** (-float(e)) for d in divisors(N)))


def constant_test(rprime, N: int, n: int = 2, method: str = "fft") -> ConstantTest:
    """Compare the closed form with the direct l^{r'} mass of E1 on the paraboloid."""
    if N % 2 == 0:
        raise ValueError("constant test is stated for odd N")
    surf = paraboloid(n)
    E1 = extend(GroupFunction(np.ones((N,) * (n - 1)), N, DUAL), surf, method=method)
    direct = float(np.sum(np.abs(E1.values) ** float(rprime)))
    return ConstantTest(N, n, float(rprime), constant_closed_form(N, n, rprime), direct)


# --- scans ----------------------------------------------------------------


def critical_exponent(n: int, a, b) -> Fraction:
    """r0 = (4(n-a)+2b)/(4(n-a)+b)."""
    a, b = Fraction(a), Fraction(b)
    return (4 * (n - a) + 2 * b) / (4 * (n - a) + b)


def tomas_endpoint(n: int) -> Fraction:
    return Fraction(2 * (n + 1), n + 3)


def loglog_slope(Ns, values) -> float:
    x = np.log(np.asarray(Ns, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


@dataclass
class ScanRow:
    N: int
    family: str
    ratio: float
    detail: str = ""


@dataclass
class ScanResult:
    r: float
    rows: list[ScanRow]

    def max_by_N(self, families=None) -> dict[int, float]:
        out: dict[int, float] = {}
        for row in self.rows:
            if families is None or row.family in families:
                out[row.N] = max(out.get(row.N, 0.0), row.ratio)
        return out

    def slope(self, families=None) -> float:
        best = self.max_by_N(families)
        Ns = sorted(best)
        return loglog_slope(Ns, [best[N] for N in Ns])


def tomas_scan(N_list, n: int, r, families=("knapp", "constant", "delta", "random"),
               k_random: int = 4, seed: int = 0, measure_knapp: bool = False) -> ScanResult:
    """Max restriction ratio (s = 2) per modulus over the requested test families."""
    r = float(r)
    rprime = float(conjugate_exponent(r))
    surf = paraboloid(n)
    rng = np.random.default_rng(seed)
    rows: list[ScanRow] = []
    for N in N_list:
        if "knapp" in families:
            for d in divisors(N):
                if N % (d * d):
                    continue
                if measure_knapp:
                    ex = knapp_function(d, N, n)
                    ratio = ex.measured_lhs(2) / ex.measured_rhs(r)
                else:
                    ratio = d ** (-(n - 1) / 2) / d ** (-(n + 1) / rprime)
                rows.append(ScanRow(N, "knapp", ratio, f"d={d}"))
        if "constant" in families:
            E1 = extend(GroupFunction(np.ones((N,) * (n - 1)), N, DUAL), surf)
            rows.append(ScanRow(N, "constant", lp_norm(E1.values, rprime)))
        if "delta" in families:
            rep = restriction_ratio(GroupFunction(np.eye(1, N**n).reshape((N,) * n), N), surf, r, 2)
            rows.append(ScanRow(N, "delta", rep.ratio))
        if "random" in families:
            for i in range(k_random):
                vals = rng.standard_normal((N,) * n) + 1j * rng.standard_normal((N,) * n)
                rep = restriction_ratio(GroupFunction(vals, N), surf, r, 2)
                rows.append(ScanRow(N, "random", rep.ratio, f"draw={i}"))
    return ScanResult(r, rows)


# --- operator norms ---------------------------------------------------------


def operator_norm_22(surface: Surface, N: int, iters: int = 200, seed: int = 0) -> tuple[float, float]:
    """Power-iteration estimate of the (2,2) restriction norm and its exact value sqrt(N^n/N^d)."""
    n, d = surface.n, surface.d
    rng = np.random.default_rng(seed)
    F = rng.standard_normal((N,) * n) + 1j * rng.standard_normal((N,) * n)
    est = 0.0
    for _ in range(iters):
        F /= np.linalg.norm(F)
        RF = restrict(dft(GroupFunction(F, N), method="fft"), surface) / N ** (d / 2)
        est = float(np.linalg.norm(RF))
        back = extend(GroupFunction(RF.reshape((N,) * d), N, DUAL), surface).values * N ** (d / 2)
        F = back
    return est, math.sqrt(N**n / N**d)


def operator_norm_lower_bound(surface: Surface, N: int, r, s, starts: int = 4, iters: int = 60,
                              seed: int = 0) -> float:
    """Multi-start nonlinear power ascent for the (r, s) restriction ratio; a lower bound only."""
    r, s = float(r), float(s)
    rp = float(conjugate_exponent(r)) if r > 1 else math.inf
    rng = np.random.default_rng(seed)
    n, d = surface.n, surface.d
    best = 0.0

    def dual_map(z, q):
        a = np.abs(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            phase = np.where(a > 0, z / a, 0)
        return phase * a ** (q - 1)

    for _ in range(starts):
        F = rng.standard_normal((N,) * n) + 1j * rng.standard_normal((N,) * n)
        for _ in range(iters):
            rep = restriction_ratio(GroupFunction(F, N), surface, r, s)
            best = max(best, rep.ratio)
            RF = restrict(dft(GroupFunction(F, N), method="fft"), surface)
            G = dual_map(RF, s).reshape((N,) * d)
            back = extend(GroupFunction(G, N, DUAL), surface).values
            if not np.isfinite(rp) or np.allclose(back, 0):
                break
            F = dual_map(back, rp)
    return best


# --- moment curve ---------------------------------------------------------


def moment_extension_of_one(N: int, n: int, method: str = "fft") -> np.ndarray:
    """E1 for the moment curve: (1/N) sum_t e^{2 pi i sum_j x_j t^j / N}."""
    return extend(GroupFunction(np.ones(N), N, DUAL), moment_curve(n), method=method).values


def moment_lower_bound(p: int, n: int, L: int, rprime) -> float:
    """sum_{m<L} p^{(L-m)(n(n+1)/2 + 1 - r')}."""
    e = n * (n + 1) / 2 + 1 - float(rprime)
    return float(sum(p ** ((L - m) * e) for m in range(L)))


def restricted_moment_mass(p: int, n: int, M: int, rprime) -> float:
    """A(M): sum of |S|^{r'} over [Z/p^{nM}]^n with p not dividing x_n (empty, so 0, for M = 0)."""
    if M == 0:
        return 0.0
    N = p ** (n * M)
    S = np.abs(moment_extension_of_one(N, n)) ** float(rprime)
    keep = np.arange(N) % p != 0
    return float(S[..., keep].sum())


def moment_mass(p: int, n: int, L: int, rprime) -> float:
    """Full l^{r'} mass of E1 for the moment curve over Z/p^{nL}; equals 1 for L = 0."""
    N = p ** (n * L)
    check_cap(N**n, "moment curve table")
    return float(np.sum(np.abs(moment_extension_of_one(N, n)) ** float(rprime)))


@dataclass(frozen=True)
class MomentReport:
    p: int
    n: int
    L: int
    rprime: float
    direct: float
    lower_bound: float
    chain: tuple[float, ...]  # A(1), ..., A(L)

    @property
    def step_factor(self) -> float:
        return self.p ** (self.n * (self.n + 1) / 2 + 1 - self.rprime)

    @property
    def dominates(self) -> bool:
        return self.direct >= self.lower_bound * (1 - 1e-12)

    @property
    def chain_ok(self) -> bool:
        """A(M) >= p^{n(n+1)/2+1-r'} A(M-1) for 2 <= M <= L."""
        return all(self.chain[M - 1] >= self.step_factor * self.chain[M - 2] * (1 - 1e-9)
                   for M in range(2, self.L + 1))

    @property
    def base_ok(self) -> bool:
        """Whether A(1) reaches the first term p^{n(n+1)/2+1-r'} of the lower bound."""
        return self.chain[0] >= self.step_factor * (1 - 1e-9) if self.chain else True

    @property
    def blowup_regime(self) -> bool:
        return self.rprime <= self.n * (self.n + 1) / 2 + 1


def moment_lowerbound(p: int, n: int, L: int, rprime) -> MomentReport:
    """Full l^{r'} mass of E1 over Z/p^{nL} against the analytic lower bound, with the A-chain."""
    if p <= n:
        raise ValueError("need p > n")
    chain = tuple(restricted_moment_mass(p, n, M, rprime) for M in range(1, L + 1))
    return MomentReport(p, n, L, float(rprime), moment_mass(p, n, L, rprime),
                        moment_lower_bound(p, n, L, rprime), chain)


def moment_growth(p: int, n: int, rprime, levels=(0, 1, 2)) -> tuple[list[float], float]:
    """Masses at successive levels and the ratio of the last two increments
    (above 1: accelerating growth, 1: linear growth, below 1: saturating)."""
    masses = [moment_mass(p, n, L, rprime) for L in levels]
    inc = np.diff(masses)
    return masses, float(inc[-1] / inc[-2])


def moment_box_ratio(n: int, d: int, s, rprime) -> tuple[float, float]:
    """Box witness on the moment curve over Z/d^n: measured ratio restricted to the box, and
    the predicted d^{n(n+1)/(2r') - 1/s}."""
    N = d**n
    H = (np.arange(N) % d == 0).astype(complex)
    EH = extend(GroupFunction(H, N, DUAL), moment_curve(n)).values
    box = np.ones((1,) * 0, dtype=bool)
    for j in range(1, n + 1):
        box = np.multiply.outer(box, np.arange(N) % (N // d**j) == 0)
    lhs = lp_norm(EH[box], float(rprime))
    rhs = lp_norm(H, float(conjugate_exponent(s)), weight=1.0 / N)
    return lhs / rhs, float(d) ** (n * (n + 1) / (2 * float(rprime)) - 1 / float(s))
