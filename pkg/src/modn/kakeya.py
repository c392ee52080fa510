"""Projective geometry over Z/NZ: directions, lines, angles, Kakeya maximal
functionals, Cordoba's L^2 argument and the digit-twisted small Kakeya sets."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .zmod import check_cap, count_congruence_solutions, grid, norm, ring, totient


def units(N: int) -> list[int]:
    return [u for u in range(N) if math.gcd(u, N) == 1]


def projective_size(N: int, n: int) -> Fraction:
    """N^{n-1} prod_{p | N} sum_{j<n} p^{-j}."""
    out = Fraction(N ** (n - 1))
    for p in ring(N).primes:
        out *= sum(Fraction(1, p**j) for j in range(n))
    return out


def sphere_zero_size(N: int) -> Fraction:
    """N prod_{p | N} (1 - 1/p)."""
    out = Fraction(N)
    for p in ring(N).primes:
        out *= 1 - Fraction(1, p)
    return out


def canonical(vec, N: int) -> tuple[int, ...]:
    """Lexicographically smallest element of the unit orbit of vec."""
    return min(tuple(u * int(c) % N for c in vec) for u in units(N))


def is_unimodular(vec, N: int) -> bool:
    """gcd(x_1, ..., x_n, N) = 1."""
    return math.gcd(N, *map(int, vec)) == 1


@dataclass(frozen=True)
class Direction:
    """A point of projective space, stored by its canonical representative."""

    rep: tuple[int, ...]
    N: int

    @classmethod
    def of(cls, vec, N: int) -> "Direction":
        if not is_unimodular(vec, N):
            raise ValueError(f"{tuple(vec)} is not unimodular mod {N}")
        return cls(canonical(vec, N), N)

    @property
    def orbit_size(self) -> int:
        return totient(self.N)

    def orbit(self) -> set[tuple[int, ...]]:
        return {tuple(u * c % self.N for c in self.rep) for u in units(self.N)}


def enumerate_directions(N: int, n: int) -> list[Direction]:
    """Canonical representatives of every unit orbit in the unimodular sphere."""
    check_cap(N**n * max(1, totient(N)), "direction enumeration")
    V = grid(N, n)
    unimodular = np.gcd.reduce(np.concatenate([V, np.full((len(V), 1), N)], axis=1), axis=1) == 1
    V = V[unimodular]
    weights = N ** np.arange(n - 1, -1, -1, dtype=np.int64)
    code = V @ weights
    best = code.copy()
    for u in units(N):
        best = np.minimum(best, ((u * V) % N) @ weights)
    reps = V[code == best]
    return [Direction(tuple(int(c) for c in r), N) for r in reps]


def sphere_size(N: int, n: int) -> int:
    """Brute count of unimodular vectors."""
    V = grid(N, n)
    return int(np.count_nonzero(np.gcd.reduce(np.concatenate([V, np.full((len(V), 1), N)], axis=1), axis=1) == 1))


def nonunit_count(N: int) -> int:
    """|{t : |t| < N}| by direct count."""
    return sum(1 for t in range(N) if norm(t, N) < N)


def _rep(w) -> tuple[int, ...]:
    return w.rep if isinstance(w, Direction) else tuple(int(c) for c in w)


def norm_join(values) -> int:
    """Maximum in the divisibility order on norms (lcm); the usual max for prime powers."""
    return math.lcm(*values)


def angle(w, w2, N: int, join=norm_join) -> int:
    """Join of the gcd-norms of the 2x2 minors of the two representatives."""
    a, b = _rep(w), _rep(w2)
    return join([norm((a[i] * b[j] - a[j] * b[i]) % N, N) for i, j in itertools.combinations(range(len(a)), 2)])


def angle_by_representatives(w, w2, N: int, join=norm_join) -> int:
    """min over representative pairs of the join of |w_j - w'_j|."""
    a, b = _rep(w), _rep(w2)
    best = N
    for u in units(N):
        best = min(best, join([norm((u * x - y) % N, N) for x, y in zip(a, b)]))
    return best


# --- lines ----------------------------------------------------------------


@dataclass(frozen=True)
class Line:
    """{t w + v}; v is the smallest lexicographic point so equality is structural."""

    direction: Direction
    base: tuple[int, ...]

    @classmethod
    def through(cls, w, v, N: int) -> "Line":
        d = w if isinstance(w, Direction) else Direction.of(w, N)
        pts = line_points(d.rep, v, N)
        return cls(d, tuple(int(c) for c in min(map(tuple, pts.tolist()))))

    @property
    def N(self) -> int:
        return self.direction.N

    def points(self) -> np.ndarray:
        return line_points(self.direction.rep, self.base, self.N)

    def mask(self, n: int | None = None) -> np.ndarray:
        n = len(self.base) if n is None else n
        m = np.zeros((self.N,) * n, dtype=bool)
        m[tuple(self.points().T)] = True
        return m


def line_points(w, v, N: int) -> np.ndarray:
    t = np.arange(N, dtype=np.int64)[:, None]
    return (t * np.asarray(w, dtype=np.int64) + np.asarray(v, dtype=np.int64)) % N


@dataclass(frozen=True)
class Intersection:
    count: int
    angle: int
    method: str
    N: int

    @property
    def bound(self) -> Fraction:
        return Fraction(self.N, self.angle)

    @property
    def within_bound(self) -> bool:
        return self.count * self.angle <= self.N


def line_intersection_count(l1: Line, l2: Line) -> Intersection:
    """|l1 ∩ l2| from the system t w - t' w' = v' - v."""
    N = l1.N
    ang = angle(l1.direction, l2.direction, N)
    a, b = l1.direction.rep, l2.direction.rep
    rhs = [(y - x) % N for x, y in zip(l1.base, l2.base)]
    if ang > 1:
        A = [[a[j], -b[j]] for j in range(len(a))]
        count = count_congruence_solutions(A, rhs, N)
        method = "smith"
    else:
        P1 = {tuple(p) for p in l1.points().tolist()}
        count = sum(1 for p in l2.points().tolist() if tuple(p) in P1)
        method = "brute"
    return Intersection(count, ang, method, N)


def translate_family(w: Direction, n: int) -> list[Line]:
    """All distinct lines in one direction (N^{n-1} of them)."""
    N = w.N
    seen = set()
    out = []
    for v in itertools.product(range(N), repeat=n):
        line = Line.through(w, v, N)
        if line.base not in seen:
            seen.add(line.base)
            out.append(line)
    return out


@dataclass(frozen=True)
class AngleSweep:
    N: int
    n: int
    line_pairs: int
    violations: int
    tight_pairs: int


def angle_lemma_sweep(N: int, n: int = 2) -> AngleSweep:
    """Check |l ∩ l'| <= N/angle over every pair of lines.

    For a direction pair the intersection of l_{w,v} and l_{w',v'} is the
    number of (t,t') with t w - t' w' = v' - v, so a histogram over (t,t')
    gives the intersection count for all translate pairs at once.
    """
    dirs = enumerate_directions(N, n)
    weights = N ** np.arange(n - 1, -1, -1, dtype=np.int64)
    t = np.arange(N, dtype=np.int64)
    translates = N ** (n - 1)
    pairs = violations = tight = 0
    for a in dirs:
        A = np.asarray(a.rep, dtype=np.int64)
        for b in dirs:
            B = np.asarray(b.rep, dtype=np.int64)
            diff = (t[:, None, None] * A - t[None, :, None] * B) % N
            hist = np.bincount((diff @ weights).reshape(-1), minlength=N**n)
            ang = angle(a, b, N)
            worst = int(hist.max())
            pairs += translates * translates
            if worst * ang > N:
                violations += 1
            if worst * ang == N:
                tight += 1
    return AngleSweep(N, n, pairs, violations, tight)


# --- maximal functionals --------------------------------------------------


def coverage(lines, N: int, n: int) -> np.ndarray:
    """S(x) = number of lines through x."""
    S = np.zeros((N,) * n, dtype=np.int64)
    for line in lines:
        S[tuple(line.points().T)] += 1
    return S


def maximal_functional(lines, N: int, n: int, q=None) -> tuple[float, float]:
    """(||sum chi_l||_q, (sum |l|)^{(n-1)/n}) with q = n/(n-1) by default."""
    q = n / (n - 1) if q is None else float(q)
    S = coverage(lines, N, n)
    lhs = float(np.sum(S.astype(float) ** q) ** (1 / q))
    rhs = float((len(lines) * N) ** ((n - 1) / n))
    return lhs, rhs


@dataclass(frozen=True)
class CordobaReport:
    N: int
    n: int
    l2_squared: int
    pair_sum: int
    angle_bound: int  # sum over pairs of N / angle
    prime_bound: int | None
    cap_ratio: float  # max over w, d of #{w' : angle = d} / (N^{n-2} d)
    class_counts: dict = field(repr=False, default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.l2_squared == self.pair_sum and self.pair_sum <= self.angle_bound


def cordoba_l2(lines, N: int, n: int) -> CordobaReport:
    """Exact ||sum chi_l||_2^2, its pairwise form and the angle-class bound."""
    S = coverage(lines, N, n)
    l2 = int(np.sum(S * S))
    masks = np.stack([ln.mask(n).reshape(-1) for ln in lines]).astype(np.int64)
    pair_sum = int((masks @ masks.T).sum())
    angle_bound = 0
    counts: dict[tuple, int] = {}
    for a in lines:
        for b in lines:
            ang = angle(a.direction, b.direction, N)
            angle_bound += N // ang
            key = (a.direction.rep, ang)
            counts[key] = counts.get(key, 0) + 1
    cap = max(c / (N ** (n - 2) * d) for (_, d), c in counts.items())
    prime_bound = None
    if ring(N).prime_factors == ((N, 1),):
        P = int(projective_size(N, n))
        prime_bound = P * (P + N - 1)
    return CordobaReport(N, n, l2, pair_sum, angle_bound, prime_bound, cap, counts)


def angle_class_profile(N: int, n: int) -> float:
    """max over w and d | N of #{w' : angle(w, w') = d} / (N^{n-2} d) over all directions."""
    dirs = enumerate_directions(N, n)
    worst = 0.0
    for a in dirs:
        counts: dict[int, int] = {}
        for b in dirs:
            d = angle(a, b, N)
            counts[d] = counts.get(d, 0) + 1
        worst = max(worst, max(c / (N ** (n - 2) * d) for d, c in counts.items()))
    return worst


# --- Kakeya sets ----------------------------------------------------------


@dataclass(frozen=True)
class KakeyaCheck:
    is_kakeya: bool
    witnesses: dict
    failing: Direction | None


def is_kakeya(K: np.ndarray) -> KakeyaCheck:
    """Does K contain a full line in every direction?"""
    K = np.asarray(K, dtype=bool)
    N, n = K.shape[0], K.ndim
    check_cap(int(projective_size(N, n)) * N ** (n + 1), "Kakeya check")
    witnesses = {}
    for w in enumerate_directions(N, n):
        inside = np.ones_like(K)
        for t in range(N):
            shift = tuple(-(t * c) % N for c in w.rep)
            inside &= np.roll(K, shift, axis=tuple(range(n)))
        hits = np.argwhere(inside)
        if len(hits) == 0:
            return KakeyaCheck(False, witnesses, w)
        witnesses[w.rep] = Line.through(w, tuple(int(c) for c in hits[0]), N)
    return KakeyaCheck(True, witnesses, None)


def kakeya_density_bound(lines, N: int, n: int) -> Fraction:
    """(sum |l|)^2 / ||sum chi_l||_2^2, a lower bound for |union of lines| by Cauchy-Schwarz."""
    S = coverage(lines, N, n)
    total = len(lines) * N
    return Fraction(total * total, int(np.sum(S * S)))


def separated_points_check(N: int, n: int = 2, samples: int | None = None, seed: int = 0) -> tuple[bool, int]:
    """Two lines sharing points x, y with ||x - y|| = N must coincide.

    Exhaustive over all line pairs unless samples is given. Returns (passed, pairs checked).
    """
    lines = [ln for w in enumerate_directions(N, n) for ln in translate_family(w, n)]
    masks = np.stack([ln.mask(n).reshape(-1) for ln in lines])
    pts = grid(N, n)
    if samples is None:
        pairs = itertools.combinations(range(len(lines)), 2)
    else:
        rng = np.random.default_rng(seed)
        pairs = (tuple(rng.choice(len(lines), 2, replace=False)) for _ in range(samples))
    checked = 0
    for i, j in pairs:
        checked += 1
        common = pts[masks[i] & masks[j]]
        if len(common) < 2 or lines[i] == lines[j]:
            continue
        diffs = (common[:, None, :] - common[None, :, :]) % N
        g = np.gcd.reduce(np.concatenate([diffs, np.full(diffs.shape[:2] + (1,), N)], axis=2), axis=2)
        if np.any(g == 1):
            return False, checked
    return True, checked


# --- digit-twisted construction --------------------------------------------


def digit_twist(p: int, s: int, alpha: int) -> np.ndarray:
    """c(w) = sum_j floor(j/s) w_j p^j mod p^alpha, w_j the base-p digits of w."""
    N = p**alpha
    w = np.arange(N, dtype=np.int64)
    out = np.zeros(N, dtype=np.int64)
    rest = w.copy()
    for j in range(alpha):
        digit = rest % p
        rest //= p
        out = (out + (j // s) * digit * p**j) % N
    return out


@dataclass(frozen=True)
class SawyerReport:
    p: int
    s: int
    alpha: int
    slice_counts: np.ndarray = field(repr=False)
    lines_contained: bool | None

    @property
    def N(self) -> int:
        return self.p**self.alpha

    @property
    def slice_bound(self) -> int:
        return self.p ** (self.alpha - self.s)

    @property
    def max_slice(self) -> int:
        return int(self.slice_counts.max())

    @property
    def size(self) -> int:
        return int(self.slice_counts.sum())

    @property
    def density(self) -> Fraction:
        return Fraction(self.size, self.N**2)

    @property
    def density_bound(self) -> Fraction:
        return Fraction(1, self.p**self.s)

    @property
    def passed(self) -> bool:
        return self.max_slice <= self.slice_bound and self.density <= self.density_bound and \
            self.lines_contained is not False


def sawyer_construct(p: int, s: int, verify_lines: bool = False) -> SawyerReport:
    """Slice images |{phi_w(t) : w}| with phi_w(t) = t w + sum_j floor(j/s) w_j p^j."""
    alpha = s * p**s
    N = p**alpha
    check_cap(N * N, "digit-twisted construction")
    w = np.arange(N, dtype=np.int64)
    c = digit_twist(p, s, alpha)
    counts = np.empty(N, dtype=np.int64)
    seen = np.zeros(N, dtype=bool)
    for t in range(N):
        seen[:] = False
        seen[(t * w + c) % N] = True
        counts[t] = int(seen.sum())
    contained = None
    if verify_lines:
        K = sawyer_set(p, s)
        t = np.arange(N, dtype=np.int64)
        contained = all(K[t, (t * om + c[om]) % N].all() for om in range(N))
    return SawyerReport(p, s, alpha, counts, contained)


def sawyer_set(p: int, s: int) -> np.ndarray:
    """Membership table of K_s = {(t, phi_w(t))} in [Z/p^alpha]^2."""
    alpha = s * p**s
    N = p**alpha
    check_cap(N * N, "digit-twisted construction")
    w = np.arange(N, dtype=np.int64)
    c = digit_twist(p, s, alpha)
    K = np.zeros((N, N), dtype=bool)
    for t in range(N):
        K[t, (t * w + c) % N] = True
    return K


def with_swapped_copy(K: np.ndarray) -> np.ndarray:
    """K together with its coordinate-swapped copy."""
    return K | K.T
