"""Finite truncations of Schwartz-Bruhat functions on Q_p^n and the lifting maps
that trade them for functions on [Z/p^{k+l}Z]^n."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .extension import conjugate_exponent
from .fourier import DUAL, GROUP, GroupFunction, _axiswise, dft, lp_norm
from .surfaces import Surface
from .zmod import check_cap, grid, ring


def _require_prime(p: int) -> None:
    if p < 2 or ring(p).prime_factors != ((p, 1),):
        raise ValueError(f"{p} is not prime")


# --- digits and the additive character ------------------------------------


def padic_digits(m: int, p: int, count: int) -> list[int]:
    """First count base-p digits of the integer m (canonical digits in [0, p))."""
    out = []
    for _ in range(count):
        m, d = divmod(m, p)
        out.append(d)
    return out


def valuation(q: Fraction, p: int) -> int | float:
    q = Fraction(q)
    if q == 0:
        return math.inf
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def fractional_part(q, p: int) -> Fraction:
    """{q}_p: the sum of the negative-index digits of the p-adic expansion of q."""
    q = Fraction(q)
    v = valuation(q, p)
    if v == math.inf or v >= 0:
        return Fraction(0)
    J = -v
    # q = u / p^J with u a p-adic unit; the digits below p^0 come from u mod p^J
    u = q * p**J
    unit_mod = u.numerator * pow(u.denominator, -1, p**J) % p**J
    digits = padic_digits(unit_mod, p, J)
    return sum((Fraction(d) * Fraction(p) ** (j - J) for j, d in enumerate(digits)), Fraction(0))


def padic_character(q, p: int) -> complex:
    """e(q) = exp(2 pi i {q}_p)."""
    return complex(np.exp(2j * np.pi * float(fractional_part(q, p))))


# --- truncated functions -----------------------------------------------------


@dataclass(frozen=True)
class TruncatedFunction:
    """f in S(Q_p^n; k, l): supported on B_{p^l}(0), constant on cosets of B_{p^{-k}}(0).

    values[x] is f at p^{-l} y for any y reducing to x mod p^{k+l}. On the dual
    side (side="dual") the roles swap: g in S(Q_p^n; l, k) is supported on
    B_{p^k}(0), constant on cosets of B_{p^{-l}}(0) and values[xi] = g(p^{-k} eta).
    """

    p: int
    k: int
    l: int
    values: np.ndarray
    side: str = GROUP

    def __post_init__(self):
        _require_prime(self.p)
        if self.k < 0 or self.l < 0:
            raise ValueError("truncation parameters must be nonnegative")
        vals = np.asarray(self.values, dtype=complex)
        if any(s != self.modulus for s in vals.shape):
            raise ValueError(f"table shape {vals.shape} does not match p^(k+l) = {self.modulus}")
        object.__setattr__(self, "values", vals)

    @property
    def modulus(self) -> int:
        return self.p ** (self.k + self.l)

    @property
    def n(self) -> int:
        return self.values.ndim

    @property
    def cell_measure(self) -> Fraction:
        """Haar mass of one constancy cell."""
        fine = self.k if self.side == GROUP else self.l
        return Fraction(1, self.p ** (fine * self.n))

    def lp_norm(self, r: float) -> float:
        """L^r norm against Haar measure on Q_p^n."""
        return lp_norm(self.values, r, weight=float(self.cell_measure))

    def at(self, point) -> complex:
        """Evaluate at a point of Q_p^n given as rationals with p-power denominators."""
        scale = self.l if self.side == GROUP else self.k
        fine = self.k if self.side == GROUP else self.l
        idx = []
        for c in point:
            y = Fraction(c) * self.p**scale
            if valuation(y, self.p) < 0:
                return 0j  # outside the support ball
            m = self.p ** (fine + scale)
            idx.append(y.numerator * pow(y.denominator, -1, m) % m)
        return complex(self.values[tuple(idx)])

    def refine(self, k2: int, l2: int) -> "TruncatedFunction":
        """The same function viewed in the finer space S(k2, l2), k2 >= k, l2 >= l."""
        a, b = (self.k, self.l) if self.side == GROUP else (self.l, self.k)
        a2, b2 = (k2, l2) if self.side == GROUP else (l2, k2)
        if a2 < a or b2 < b:
            raise ValueError("refinement must not coarsen")
        M, M2 = self.modulus, self.p ** (k2 + l2)
        shift = self.p ** (b2 - b)
        check_cap(M2**self.n, "refined table")
        pts = grid(M2, self.n)
        inside = np.all(pts % shift == 0, axis=1)
        vals = np.zeros(len(pts), dtype=complex)
        coarse = (pts[inside] // shift) % M
        vals[inside] = self.values[tuple(coarse.T)]
        return TruncatedFunction(self.p, k2, l2, vals.reshape((M2,) * self.n), self.side)


def random_truncated(p: int, k: int, l: int, n: int, rng: np.random.Generator, side: str = GROUP):
    M = p ** (k + l)
    vals = rng.standard_normal((M,) * n) + 1j * rng.standard_normal((M,) * n)
    return TruncatedFunction(p, k, l, vals, side)


def lift_down_F(f: TruncatedFunction) -> GroupFunction:
    """F_{k,l}[f](x) = p^{-kn} f(p^{-l} y), y reducing to x."""
    if f.side != GROUP:
        raise ValueError("F_{k,l} acts on the group side")
    return GroupFunction(f.values * float(f.p) ** (-f.k * f.n), f.modulus, GROUP)


def lift_up_F(F: GroupFunction, p: int, k: int, l: int) -> TruncatedFunction:
    """Inverse of lift_down_F."""
    return TruncatedFunction(p, k, l, F.values * float(p) ** (k * F.n), GROUP)


def lift_down_Fhat(g: TruncatedFunction) -> GroupFunction:
    """F-hat_{l,k}[g](xi) = g(p^{-k} eta), eta reducing to xi; no amplitude factor."""
    if g.side != DUAL:
        raise ValueError("F-hat_{l,k} acts on the dual side")
    return GroupFunction(g.values.copy(), g.modulus, DUAL)


def lift_up_Fhat(G: GroupFunction, p: int, k: int, l: int) -> TruncatedFunction:
    return TruncatedFunction(p, k, l, G.values.copy(), DUAL)


# --- Fourier transform ---------------------------------------------------------


def _padic_character_matrix(p: int, k: int, l: int, sign: int, method: str) -> np.ndarray:
    """W[x, xi] = e(sign * (p^{-l} x)(p^{-k} xi)) along one axis."""
    M = p ** (k + l)
    if method == "digits":
        check_cap(M * M, "digit-based character table")
        return np.array([[padic_character(Fraction(sign * x * xi, M), p) for xi in range(M)] for x in range(M)])
    # {m / p^{k+l}}_p = (m mod p^{k+l}) / p^{k+l} for an integer m
    phase = (sign * np.outer(np.arange(M), np.arange(M))) % M
    return np.exp(2j * np.pi * phase / M)


def padic_fourier_transform(f: TruncatedFunction, method: str = "integer") -> TruncatedFunction:
    """f-hat(xi) = int f(x) e(-x.xi) dx, returned as an element of S(Q_p^n; l, k) on the dual side.

    method "digits" evaluates the character through explicit p-adic digit
    expansions; "integer" uses the equivalent reduced-fraction formula.
    """
    if f.side != GROUP:
        raise ValueError("expects a group-side function")
    W = _padic_character_matrix(f.p, f.k, f.l, -1, method)
    vals = _axiswise(f.values, W) * float(f.cell_measure)
    return TruncatedFunction(f.p, f.k, f.l, vals, DUAL)


def padic_inverse_transform(g: TruncatedFunction, method: str = "integer") -> TruncatedFunction:
    if g.side != DUAL:
        raise ValueError("expects a dual-side function")
    W = _padic_character_matrix(g.p, g.k, g.l, 1, method)
    vals = _axiswise(g.values, W) * float(g.cell_measure)
    return TruncatedFunction(g.p, g.k, g.l, vals, GROUP)


# --- identities -----------------------------------------------------------------


@dataclass(frozen=True)
class NormCheck:
    r: float
    quotient: float
    predicted: float
    factor: float

    @property
    def relative_error(self) -> float:
        scale = max(abs(self.quotient), abs(self.predicted), 1e-300)
        return abs(self.quotient - self.predicted) / scale

    @property
    def passed(self) -> bool:
        return self.relative_error < 1e-10


def norm_identity_F(f: TruncatedFunction, r: float) -> NormCheck:
    """||F_{k,l}[f]||_{l^r} (counting) = p^{-kn/r'} ||f||_{L^r}."""
    rp = conjugate_exponent(r)
    factor = float(f.p) ** (-f.k * f.n / float(rp)) if not math.isinf(float(rp)) else 1.0
    if math.isinf(r):
        factor = float(f.p) ** (-f.k * f.n)
    F = lift_down_F(f)
    return NormCheck(r, lp_norm(F.values, r), factor * f.lp_norm(r), factor)


def norm_identity_Fhat(g: TruncatedFunction, r: float, dual_measure: str = "counting") -> NormCheck:
    """||F-hat_{l,k}[g]||_{l^r} = p^{ln/r} ||g||_{L^r} with counting measure on the quotient.

    With normalized counting measure on the dual quotient the factor is p^{-kn/r}.
    """
    G = lift_down_Fhat(g)
    n = g.n
    if dual_measure == "counting":
        weight, factor = 1.0, (1.0 if math.isinf(r) else float(g.p) ** (g.l * n / r))
    elif dual_measure == "normalized":
        weight, factor = G.measure(), (1.0 if math.isinf(r) else float(g.p) ** (-g.k * n / r))
    else:
        raise ValueError("dual_measure is 'counting' or 'normalized'")
    return NormCheck(r, lp_norm(G.values, r, weight=weight), factor * g.lp_norm(r), factor)


def verify_norm_identities(f: TruncatedFunction, r: float, dual_measure: str = "counting") -> tuple[NormCheck, NormCheck]:
    """Both lifting identities, the second applied to the p-adic transform of f."""
    return norm_identity_F(f, r), norm_identity_Fhat(padic_fourier_transform(f), r, dual_measure)


def verify_ft_commutation(f: TruncatedFunction, method: str = "integer") -> float:
    """max |dft(F_{k,l}[f]) - F-hat_{l,k}[f-hat]|."""
    lhs = dft(lift_down_F(f)).values
    rhs = lift_down_Fhat(padic_fourier_transform(f, method)).values
    return float(np.max(np.abs(lhs - rhs)))


# --- sets ----------------------------------------------------------------------


Cell = tuple[tuple[int, ...], int]  # (center, level): center + p^level Z_p^n


def _ball_contains(outer: Cell, inner: Cell, p: int) -> bool:
    (c1, a1), (c2, a2) = outer, inner
    return a2 >= a1 and all((x - y) % p**a1 == 0 for x, y in zip(c1, c2))


def neighbourhood_balls(cells, alpha: int, p: int) -> list[Cell]:
    """Maximal disjoint balls making up N_{p^-alpha}(E) for E a union of cells."""
    balls = {(tuple(int(c) % p ** min(a, alpha) for c in center), min(a, alpha)) for center, a in cells}
    ordered = sorted(balls, key=lambda b: b[1])
    kept: list[Cell] = []
    for b in ordered:
        if not any(_ball_contains(k, b, p) for k in kept):
            kept.append(b)
    return kept


def neighbourhood_measure(cells, alpha: int, p: int, n: int) -> Fraction:
    """Haar measure of N_{p^-alpha}(E); balls in Q_p are nested or disjoint."""
    return sum((Fraction(1, p ** (a * n)) for _, a in neighbourhood_balls(cells, alpha, p)), Fraction(0))


def projection_image(cells, alpha: int, p: int, n: int) -> set[tuple[int, ...]]:
    """pi_alpha(E) by enumeration of residues."""
    M = p**alpha
    out = set()
    for center, a in cells:
        if a >= alpha:
            out.add(tuple(int(c) % M for c in center))
            continue
        step = p**a
        free = p ** (alpha - a)
        check_cap(free**n, "projection image")
        for offs in itertools.product(range(free), repeat=n):
            out.add(tuple((int(c) + step * o) % M for c, o in zip(center, offs)))
    return out


@dataclass(frozen=True)
class SetCorrespondence:
    haar: Fraction
    counting: Fraction
    indicator_match: bool

    @property
    def passed(self) -> bool:
        return self.haar == self.counting and self.indicator_match


def set_correspondence(cells, alpha: int, p: int, n: int) -> SetCorrespondence:
    """|N_{p^-alpha}(E)| against |pi_alpha(E)| / p^{alpha n}, plus the indicator identity."""
    cells = [(tuple(int(c) for c in center), int(a)) for center, a in cells]
    haar = neighbourhood_measure(cells, alpha, p, n)
    image = projection_image(cells, alpha, p, n)
    counting = Fraction(len(image), p ** (alpha * n))
    # F-hat_{alpha,0} of the neighbourhood indicator, cell by cell
    M = p**alpha
    pts = grid(M, n)
    table = np.zeros(len(pts), dtype=bool)
    for center, a in neighbourhood_balls(cells, alpha, p):
        table |= np.all((pts - np.asarray(center)) % p**a == 0, axis=1)
    expected = np.zeros(len(pts), dtype=bool)
    if image:
        idx = np.asarray(sorted(image)) @ (M ** np.arange(n - 1, -1, -1))
        expected[idx] = True
    return SetCorrespondence(haar, counting, bool(np.array_equal(table, expected)))


def cells_from_mask(mask: np.ndarray, p: int) -> list[Cell]:
    """Each point of a membership table over [Z/p^alpha]^n as a level-alpha cell."""
    M = mask.shape[0]
    alpha = round(math.log(M, p))
    if p**alpha != M:
        raise ValueError("table side is not a power of p")
    return [(tuple(int(c) for c in x), alpha) for x in np.argwhere(mask)]


# --- the quotient reformulation of restriction ---------------------------------


def fold(F: GroupFunction, p: int, l: int) -> GroupFunction:
    """F_l(z) = sum of F(x) over x = z mod p^l."""
    M, n = F.N, F.n
    m = p**l
    vals = F.values
    for axis in range(n):
        shape = vals.shape[:axis] + (M // m, m) + vals.shape[axis + 1:]
        vals = vals.reshape(shape).sum(axis=axis)
    return GroupFunction(vals, m, GROUP)


def dilate(points: np.ndarray, p: int, k: int, l: int) -> np.ndarray:
    """delta_k: [Z/p^l]^n -> [Z/p^{k+l}]^n, xi -> p^k xi."""
    return (np.asarray(points, dtype=np.int64) * p**k) % p ** (k + l)


def surface_image(surface: Surface, modulus: int, scale: int = 1) -> np.ndarray:
    """pi(scale * Sigma) at the given modulus, as sorted unique rows."""
    pts = (surface.graph(modulus) * scale) % modulus
    return np.unique(pts, axis=0)


@dataclass(frozen=True)
class ReformulationRow:
    discrete: float  # average over pi_{k+l}(p^k Sigma) of |F-hat|^s, to the 1/s
    folded: float  # same average for F_l over pi_l(Sigma)
    padic: float  # average of |f-hat|^s over N_{p^-l}(Sigma), via the p-adic transform
    parametrized: float  # integral over Sigma of the ball average of |f-hat|^s
    folded_norm: float  # ||F_l||_r
    holder_bound: float  # p^{kn/r'} ||F||_r
    input_norm: float  # ||f||_{L^r} = p^{kn/r'} ||F||_r by the norm identity

    @property
    def deviation(self) -> float:
        vals = (self.discrete, self.folded, self.padic, self.parametrized)
        return max(vals) - min(vals)

    @property
    def holder_ok(self) -> bool:
        return self.folded_norm <= self.holder_bound * (1 + 1e-12)


@dataclass(frozen=True)
class ReformulationReport:
    p: int
    k: int
    l: int
    dilation_bijective: bool
    rows: list

    @property
    def max_deviation(self) -> float:
        return max(r.deviation for r in self.rows) if self.rows else 0.0

    @property
    def passed(self) -> bool:
        return self.dilation_bijective and self.max_deviation < 1e-9 and all(r.holder_ok for r in self.rows)


def quotient_restriction_equivalence(p: int, k: int, l: int, surface: Surface, batch, r: float = 2.0,
                                     s: float = 2.0) -> ReformulationReport:
    """Four computations of the same restriction average for each F in batch.

    F lives on [Z/p^{k+l}]^n and corresponds to f = F_{k,l}^{-1}[F] in S(Q_p^n; k, l).
    """
    _require_prime(p)
    M, m = p ** (k + l), p**l
    n = surface.n
    base = surface_image(surface, m)
    scaled = surface_image(surface, M, scale=p**k)
    image = np.unique(dilate(base, p, k, l), axis=0)
    bijective = len(image) == len(base) and np.array_equal(image, scaled)
    rp = float(conjugate_exponent(r))
    holder_factor = 1.0 if math.isinf(rp) else float(p) ** (k * n / rp)
    # Haar measure on the parameters, discretized finely enough that f-hat is constant on each piece
    gamma = (surface.graph(M) * p**k) % M
    rows = []
    for values in batch:
        F = GroupFunction(np.asarray(values, dtype=complex), M, GROUP)
        Fhat = dft(F).values
        discrete = float(np.mean(np.abs(Fhat[tuple(scaled.T)]) ** s)) ** (1 / s)
        Fl = fold(F, p, l)
        folded = float(np.mean(np.abs(dft(Fl).values[tuple(base.T)]) ** s)) ** (1 / s)
        f = lift_up_F(F, p, k, l)
        fhat = padic_fourier_transform(f).values
        # cells of N_{p^-l}(Sigma) sit at xi = p^k z with z mod p^l in pi_l(Sigma)
        padic = float(np.mean(np.abs(fhat[tuple(((base * p**k) % M).T)]) ** s)) ** (1 / s)
        param = float(np.mean(np.abs(fhat[tuple(gamma.T)]) ** s)) ** (1 / s)
        rows.append(ReformulationRow(discrete, folded, padic, param, lp_norm(Fl.values, r),
                                     holder_factor * lp_norm(F.values, r), f.lp_norm(r)))
    return ReformulationReport(p, k, l, bool(bijective), rows)
