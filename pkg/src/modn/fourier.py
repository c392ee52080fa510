"""Discrete Fourier analysis on [Z/NZ]^n with counting measure on the group
and normalized counting measure on the dual.

The reference transform sums over a root-of-unity table indexed by x*xi mod N,
one axis at a time; ``method="fft"`` is the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .zmod import check_cap

GROUP = "group"
DUAL = "dual"


@lru_cache(maxsize=256)
def roots_of_unity(N: int) -> np.ndarray:
    """Table of e^{2 pi i j/N}, j = 0..N-1."""
    j = np.arange(N)
    table = np.exp(2j * np.pi * j / N)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=64)
def character_matrix(N: int, sign: int) -> np.ndarray:
    """W[x, xi] = e^{sign 2 pi i x xi / N} built by exact index arithmetic."""
    idx = np.outer(np.arange(N), np.arange(N)) % N
    if sign < 0:
        idx = (-idx) % N
    W = roots_of_unity(N)[idx]
    W.setflags(write=False)
    return W


@dataclass(frozen=True)
class GroupFunction:
    """Complex table on [Z/NZ]^n tagged with its measure convention."""

    values: np.ndarray
    N: int
    side: str = GROUP

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if any(s != self.N for s in vals.shape):
            raise ValueError(f"table shape {vals.shape} is not (N,)*n with N={self.N}")
        if self.side not in (GROUP, DUAL):
            raise ValueError("side must be 'group' or 'dual'")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.ndim

    def measure(self) -> float:
        """Mass of a single point."""
        return 1.0 if self.side == GROUP else float(self.N) ** (-self.n)

    def norm(self, r: float) -> float:
        return lp_norm(self.values, r, weight=self.measure())

    def __call__(self, point) -> complex:
        return complex(self.values[tuple(int(c) % self.N for c in point)])


def lp_norm(values: np.ndarray, r: float, weight: float = 1.0) -> float:
    """(weight * sum |v|^r)^{1/r}, or max |v| for r = inf."""
    a = np.abs(np.asarray(values))
    if np.isinf(r):
        return float(a.max()) if a.size else 0.0
    return float((weight * np.sum(a**r)) ** (1.0 / r))


def _axiswise(values: np.ndarray, W: np.ndarray) -> np.ndarray:
    out = values
    for axis in range(values.ndim):
        out = np.moveaxis(np.tensordot(out, W, axes=([axis], [0])), -1, axis)
    return out


def dft(F: GroupFunction, method: str = "direct") -> GroupFunction:
    """F^(xi) = sum_x F(x) e^{-2 pi i x.xi/N}."""
    if F.side != GROUP:
        raise ValueError("dft expects a group-side function")
    if method == "fft":
        vals = np.fft.fftn(F.values)
    else:
        check_cap(F.values.size, "direct transform")
        vals = _axiswise(F.values, character_matrix(F.N, -1))
    return GroupFunction(vals, F.N, DUAL)


def inverse_dft(G: GroupFunction, method: str = "direct") -> GroupFunction:
    """G-check(x) = N^{-n} sum_xi G(xi) e^{2 pi i x.xi/N}."""
    if G.side != DUAL:
        raise ValueError("inverse_dft expects a dual-side function")
    if method == "fft":
        vals = np.fft.ifftn(G.values)
    else:
        check_cap(G.values.size, "direct transform")
        vals = _axiswise(G.values, character_matrix(G.N, 1)) / float(G.N) ** G.n
    return GroupFunction(vals, G.N, GROUP)


def naive_dft(F: GroupFunction) -> GroupFunction:
    """Literal double sum over (x, xi); only for tiny grids."""
    N, n = F.N, F.n
    check_cap(N ** (2 * n), "naive transform")
    pts = np.indices((N,) * n).reshape(n, -1).T
    phase = (pts @ pts.T) % N
    vals = roots_of_unity(N)[(-phase) % N] @ F.values.reshape(-1)
    return GroupFunction(vals.reshape((N,) * n), N, DUAL)


def convolve(F: GroupFunction, G: GroupFunction) -> GroupFunction:
    """Cyclic convolution with the measure of the common side."""
    if F.side != G.side or F.values.shape != G.values.shape or F.N != G.N:
        raise ValueError("convolution needs matching side and shape")
    check_cap(F.values.size**2, "direct convolution")
    out = np.zeros_like(F.values)
    for y in np.ndindex(F.values.shape):
        if F.values[y] != 0:
            out += F.values[y] * np.roll(G.values, shift=y, axis=tuple(range(F.n)))
    return GroupFunction(out * F.measure(), F.N, F.side)


def delta(N: int, n: int, side: str = GROUP, at=None) -> GroupFunction:
    vals = np.zeros((N,) * n, dtype=complex)
    vals[tuple(at) if at is not None else (0,) * n] = 1.0
    return GroupFunction(vals, N, side)


def constant(N: int, n: int, side: str = GROUP, value: complex = 1.0) -> GroupFunction:
    return GroupFunction(np.full((N,) * n, value, dtype=complex), N, side)


def ball_indicator(d: int, N: int, n: int, side: str = GROUP) -> GroupFunction:
    """Indicator of the scale-d ball: all coordinates divisible by N/d."""
    if N % d:
        raise ValueError(f"{d} does not divide {N}")
    axis = (np.arange(N) % (N // d) == 0).astype(complex)
    vals = axis
    for _ in range(n - 1):
        vals = np.multiply.outer(vals, axis)
    return GroupFunction(vals, N, side)


def modulate(F: GroupFunction, a) -> GroupFunction:
    """x -> F(x) e^{2 pi i x.a/N}."""
    pts = np.indices(F.values.shape)
    phase = sum(int(ai) * pts[j] for j, ai in enumerate(a)) % F.N
    return GroupFunction(F.values * roots_of_unity(F.N)[phase], F.N, F.side)
