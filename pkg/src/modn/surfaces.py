"""Integer polynomial graphs Gamma(w) = (w, P_1(w), ..., P_{n-d}(w)) reduced mod N."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .zmod import check_cap

# A polynomial in d variables: tuple of (exponent tuple, integer coefficient).
Polynomial = tuple[tuple[tuple[int, ...], int], ...]


def poly(terms: dict[tuple[int, ...], int]) -> Polynomial:
    return tuple(sorted((tuple(e), int(c)) for e, c in terms.items() if c))


def eval_poly(P: Polynomial, omega: np.ndarray, N: int) -> np.ndarray:
    """Evaluate P mod N at every row of omega (shape (M, d))."""
    omega = np.asarray(omega, dtype=np.int64) % N
    out = np.zeros(omega.shape[0], dtype=np.int64)
    for exps, c in P:
        term = np.full(omega.shape[0], c % N, dtype=np.int64)
        for j, e in enumerate(exps):
            for _ in range(e):
                term = (term * omega[:, j]) % N
        out = (out + term) % N
    return out


def derivative(P: Polynomial, j: int) -> Polynomial:
    """Formal partial derivative in variable j."""
    out: dict[tuple[int, ...], int] = {}
    for exps, c in P:
        if exps[j]:
            e = list(exps)
            e[j] -= 1
            out[tuple(e)] = out.get(tuple(e), 0) + c * exps[j]
    return poly(out)


@dataclass(frozen=True)
class Surface:
    """Graph of a polynomial map from [Z/NZ]^d into [Z/NZ]^n."""

    n: int
    d: int
    polys: tuple[Polynomial, ...]
    name: str = "surface"

    def __post_init__(self):
        if not 1 <= self.d <= self.n:
            raise ValueError("need 1 <= d <= n")
        if len(self.polys) != self.n - self.d:
            raise ValueError("need n - d polynomials")

    def parameters(self, N: int) -> np.ndarray:
        """All parameter points, row-major, shape (N^d, d)."""
        check_cap(N**self.d, "surface parameters")
        return np.indices((N,) * self.d, dtype=np.int64).reshape(self.d, -1).T

    def heights(self, N: int, omega: np.ndarray | None = None) -> np.ndarray:
        """P(omega) mod N, shape (n - d, M)."""
        if omega is None:
            omega = self.parameters(N)
        if not self.polys:
            return np.zeros((0, len(omega)), dtype=np.int64)
        return np.stack([eval_poly(P, omega, N) for P in self.polys])

    def graph(self, N: int) -> np.ndarray:
        """Surface points Gamma(omega), shape (N^d, n)."""
        omega = self.parameters(N)
        return np.concatenate([omega, self.heights(N, omega).T], axis=1)

    def gradient(self, omega, N: int) -> tuple[int, ...]:
        """Formal gradient of the single height function at omega, mod N."""
        if self.n - self.d != 1:
            raise ValueError("gradient is defined for hypersurfaces")
        pt = np.asarray([omega], dtype=np.int64)
        return tuple(int(eval_poly(derivative(self.polys[0], j), pt, N)[0]) for j in range(self.d))


def paraboloid(n: int) -> Surface:
    """h(w) = w_1^2 + ... + w_{n-1}^2."""
    d = n - 1
    terms = {tuple(2 if i == j else 0 for i in range(d)): 1 for j in range(d)}
    return Surface(n, d, (poly(terms),), name="paraboloid")


def hypersurface(terms: dict[tuple[int, ...], int], n: int, name: str = "hypersurface") -> Surface:
    return Surface(n, n - 1, (poly(terms),), name=name)


def moment_curve(n: int) -> Surface:
    """t -> (t, t^2, ..., t^n)."""
    return Surface(n, 1, tuple(poly({(j,): 1}) for j in range(2, n + 1)), name="moment curve")
