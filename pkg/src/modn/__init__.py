"""Discrete harmonic analysis over Z/NZ.

Exact Fourier analysis on [Z/NZ]^n, extension and restriction for polynomial
surfaces, Gauss sums, wave packets, Kakeya geometry over residue rings,
power-sum congruence counts and the p-adic lifting maps.
"""

from . import congruences, exp_sums, extension, fourier, kakeya, padic, surfaces, wave_packets, zmod
from .fourier import DUAL, GROUP, GroupFunction, dft, inverse_dft
from .surfaces import Surface, hypersurface, moment_curve, paraboloid
from .zmod import (
    EnumerationCapError,
    SingularModulusError,
    count_linear_solutions,
    norm,
    ring,
)

__version__ = "0.1.0"

__all__ = [
    "DUAL",
    "GROUP",
    "EnumerationCapError",
    "GroupFunction",
    "SingularModulusError",
    "Surface",
    "congruences",
    "count_linear_solutions",
    "dft",
    "exp_sums",
    "extension",
    "fourier",
    "hypersurface",
    "inverse_dft",
    "kakeya",
    "moment_curve",
    "norm",
    "padic",
    "paraboloid",
    "ring",
    "surfaces",
    "wave_packets",
    "zmod",
]
