"""Wave packets on the dual parameter space, their extensions as tubes, and the
random-sign experiment behind the Kakeya maximal bound."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .extension import extend
from .fourier import DUAL, GroupFunction, lp_norm, roots_of_unity
from .surfaces import Surface, paraboloid
from .zmod import check_cap, grid, norm_table, ring


@dataclass(frozen=True)
class PacketIndex:
    """theta is stored by its representative in {0..d-1}^{n-1}; v lies in {0..N/d-1}^{n-1}."""

    theta: tuple[int, ...]
    v: tuple[int, ...]
    d: int
    N: int

    def __post_init__(self):
        ring(self.N).require_divisor(self.d)
        if len(self.theta) != len(self.v):
            raise ValueError("theta and v must have the same length")
        if any(not 0 <= t < self.d for t in self.theta):
            raise ValueError("theta representative must lie in {0..d-1}")
        if any(not 0 <= c < self.N // self.d for c in self.v):
            raise ValueError("v must lie in {0..N/d-1}")

    @property
    def dim(self) -> int:
        return len(self.theta)


def packet_indices(d: int, N: int, dim: int):
    """All (theta, v) pairs at scale d; N^{dim} of them."""
    for theta in itertools.product(range(d), repeat=dim):
        for v in itertools.product(range(N // d), repeat=dim):
            yield PacketIndex(theta, v, d, N)


def theta_mask(theta, d: int, N: int) -> np.ndarray:
    """Indicator of the coset {w : w = theta mod d}."""
    mask = np.ones((), dtype=bool)
    for t in theta:
        mask = np.multiply.outer(mask, np.arange(N) % d == t)
    return mask


def packet(idx: PacketIndex) -> GroupFunction:
    """d^{n-1} e^{-2 pi i v.w/N} on theta, zero elsewhere."""
    N, m = idx.N, idx.dim
    w = grid(N, m)
    phase = roots_of_unity(N)[(-(w @ np.asarray(idx.v, dtype=np.int64))) % N].reshape((N,) * m)
    return GroupFunction(idx.d**m * phase * theta_mask(idx.theta, idx.d, N), N, DUAL)


def _coset_slices(theta, d):
    return tuple(slice(t, None, d) for t in theta)


def _coset_kernels(theta, d: int, N: int, sign: int):
    """Per-axis matrices K[m, v] = e^{sign 2 pi i v (theta_j + d m)/N}."""
    roots = roots_of_unity(N)
    mm = np.arange(N // d)
    out = []
    for t in theta:
        idx = np.outer(t + d * mm, np.arange(N // d)) % N
        out.append(roots[(sign * idx) % N])
    return out


def decompose(H: GroupFunction, d: int) -> np.ndarray:
    """Coefficients (chi_theta H)-check(v), indexed [theta..., v...]."""
    if H.side != DUAL:
        raise ValueError("packets live on the dual side")
    N, m = H.N, H.n
    ring(N).require_divisor(d)
    out = np.empty((d,) * m + (N // d,) * m, dtype=complex)
    for theta in itertools.product(range(d), repeat=m):
        sub = H.values[_coset_slices(theta, d)]
        for axis, K in enumerate(_coset_kernels(theta, d, N, +1)):
            sub = np.moveaxis(np.tensordot(sub, K, axes=([axis], [0])), -1, axis)
        out[theta] = sub / float(N) ** m
    return out


def reconstruct(coeffs: np.ndarray, d: int, N: int) -> GroupFunction:
    """sum over (theta, v) of coeff * psi_{theta, v}."""
    m = coeffs.ndim // 2
    vals = np.zeros((N,) * m, dtype=complex)
    for theta in itertools.product(range(d), repeat=m):
        sub = coeffs[theta]
        for axis, K in enumerate(_coset_kernels(theta, d, N, -1)):
            sub = np.moveaxis(np.tensordot(sub, K.T, axes=([axis], [0])), -1, axis)
        vals[_coset_slices(theta, d)] = d**m * sub
    return GroupFunction(vals, N, DUAL)


def reconstruct_from_packets(coeffs: np.ndarray, d: int, N: int) -> GroupFunction:
    """Reference path: materialize every packet table and sum."""
    m = coeffs.ndim // 2
    check_cap(N ** (2 * m), "packet-by-packet reconstruction")
    vals = np.zeros((N,) * m, dtype=complex)
    for idx in packet_indices(d, N, m):
        c = coeffs[idx.theta + idx.v]
        if c != 0:
            vals += c * packet(idx).values
    return GroupFunction(vals, N, DUAL)


# --- tubes ----------------------------------------------------------------


@dataclass(frozen=True)
class Tube:
    """{x : ||x' + x_n grad h(w_theta) - v|| divides d}."""

    index: PacketIndex
    surface: Surface

    @property
    def direction(self) -> tuple[int, ...]:
        return self.surface.gradient(self.index.theta, self.index.N)

    def mask(self) -> np.ndarray:
        N, d, n = self.index.N, self.index.d, self.surface.n
        step = N // d
        pts = grid(N, n)
        shifted = pts[:, :-1] + np.outer(pts[:, -1], self.direction) - np.asarray(self.index.v)
        return np.all(shifted % step == 0, axis=1).reshape((N,) * n)

    def cardinality(self) -> int:
        return int(self.mask().sum())

    def expected_cardinality(self) -> int:
        return self.index.N * self.index.d ** (self.surface.n - 1)


def tube_character_sum(idx: PacketIndex, surface: Surface) -> np.ndarray:
    """(d')^{-(n-1)} sum over w in [Z/d']^{n-1} of e^{2 pi i (x' + x_n grad - v).w/d'}, d' = N/d."""
    N, n = idx.N, surface.n
    dp = N // idx.d
    grad = np.asarray(surface.gradient(idx.theta, N), dtype=np.int64)
    pts = grid(N, n)
    y = (pts[:, :-1] + np.outer(pts[:, -1], grad) - np.asarray(idx.v)) % dp
    total = np.ones(len(pts), dtype=complex)
    roots = roots_of_unity(dp)
    for j in range(n - 1):
        w = np.arange(dp)
        total *= roots[np.outer(y[:, j], w) % dp].sum(axis=1) / dp
    return total.reshape((N,) * n)


@dataclass(frozen=True)
class PacketImage:
    index: PacketIndex
    tube: Tube
    phase: np.ndarray  # e^{2 pi i (phi(x; w_theta) - v.w_theta)/N}

    @property
    def predicted(self) -> np.ndarray:
        return self.phase * self.tube.mask()


def packet_extension_image(idx: PacketIndex, surface: Surface | None = None) -> PacketImage:
    """Closed-form extension of a packet, valid when d | N and N | d^2."""
    N, d = idx.N, idx.d
    if surface is None:
        surface = paraboloid(idx.dim + 1)
    if (d * d) % N:
        raise ValueError(f"packet image identity needs N | d^2 (N={N}, d={d})")
    n = surface.n
    w = np.asarray([idx.theta], dtype=np.int64)
    h = int(surface.heights(N, w)[0, 0])
    pts = grid(N, n)
    phi = pts[:, :-1] @ np.asarray(idx.theta) + pts[:, -1] * h - int(np.dot(idx.v, idx.theta))
    phase = roots_of_unity(N)[phi % N].reshape((N,) * n)
    return PacketImage(idx, Tube(idx, surface), phase)


def packet_image_deviation(idx: PacketIndex, surface: Surface | None = None) -> float:
    """max |E psi - predicted| by pointwise comparison against the extension operator."""
    img = packet_extension_image(idx, surface)
    return float(np.max(np.abs(extend(packet(idx), img.tube.surface).values - img.predicted)))


def full_norm_tube_overlap(N: int, d: int, n: int = 2) -> int:
    """Max number of tubes T_{theta,0} meeting a point of full norm."""
    surf = paraboloid(n)
    cover = np.zeros((N,) * n, dtype=np.int64)
    for theta in itertools.product(range(d), repeat=n - 1):
        cover += Tube(PacketIndex(theta, (0,) * (n - 1), d, N), surf).mask()
    full = norm_table(N, n) == N
    return int(cover[full].max()) if full.any() else 0


# --- random signs ---------------------------------------------------------


@dataclass(frozen=True)
class KhintchineReport:
    N: int
    d: int
    n: int
    thetas: int
    norm_closed: float
    norm_direct: float
    min_slack: float  # min over x of E|EH(x)| - 2^{-1/2} (sum chi_T(x))^{1/2}
    min_ratio: float  # min over covered x of E|EH(x)| / (sum chi_T(x))^{1/2}
    exhaustive: bool
    patterns: int

    @property
    def passed(self) -> bool:
        return self.min_slack >= -1e-9 and math.isclose(self.norm_closed, self.norm_direct, rel_tol=1e-9)


def khintchine_experiment(d: int, n: int = 2, thetas=None, v_of=None, distribution: str = "rademacher",
                          trials: int = 4096, seed: int = 0) -> KhintchineReport:
    """Random-sign sums of packets at scale d over N = d^2."""
    N = d * d
    if N % 2 == 0:
        raise ValueError("the experiment is stated for odd N = d^2")
    m = n - 1
    surf = paraboloid(n)
    if thetas is None:
        thetas = list(itertools.product(range(d), repeat=m))
    thetas = [tuple(t) for t in thetas]
    idxs = [PacketIndex(t, tuple(v_of(t)) if v_of else (0,) * m, d, N) for t in thetas]
    images = np.stack([extend(packet(i), surf).values.reshape(-1) for i in idxs])
    tube_count = np.stack([Tube(i, surf).mask().reshape(-1) for i in idxs]).sum(axis=0)
    k = len(idxs)
    exhaustive = distribution == "rademacher" and k <= 12
    if exhaustive:
        signs = np.array(list(itertools.product((1.0, -1.0), repeat=k)))
    else:
        rng = np.random.default_rng(seed)
        if distribution == "rademacher":
            signs = rng.choice((1.0, -1.0), size=(trials, k))
        else:
            signs = np.exp(2j * np.pi * rng.random((trials, k)))
    expect = np.zeros(images.shape[1])
    for lo in range(0, len(signs), 512):
        expect += np.abs(signs[lo:lo + 512] @ images).sum(axis=0)
    expect /= len(signs)
    slack = float(np.min(expect - np.sqrt(tube_count) / math.sqrt(2)))
    covered = tube_count > 0
    ratio = float(np.min(expect[covered] / np.sqrt(tube_count[covered])))
    q = 2 * n / (n - 1)
    H = sum(packet(i).values for i in idxs)
    direct = lp_norm(H, q, weight=float(N) ** (-m))
    closed = (d ** (n + 1) * k) ** ((n - 1) / (2 * n))
    return KhintchineReport(N, d, n, k, closed, direct, slack, ratio, exhaustive, len(signs))
