"""Workbench for quartic residue symbols, Gauss sums over Z[i], and the
Hecke L-functions attached to quartic characters of prime modulus.

The package is organized in layers: exact ring arithmetic (`zi`), residue
symbols and reciprocity (`symbols`), the ray class group modulo 16
(`ray_class`), Gauss sums (`gauss_sums`), L-function evaluation and zero
finding (`lfun`), truncated character-sum probes (`series`), and the
experiment harness with its closed-form main terms (`experiments`).
"""

from .errors import ConvergenceError, DomainError
from .zi import (
    GInt,
    LAMBDA,
    PrimaryFactorization,
    UNITS,
    div_rem,
    enumerate_primary_primes,
    euler_phi,
    factor,
    gcd,
    is_primary,
    is_prime,
    mangoldt,
    moebius,
    primary_associate,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "GInt",
    "LAMBDA",
    "PrimaryFactorization",
    "UNITS",
    "div_rem",
    "enumerate_primary_primes",
    "euler_phi",
    "factor",
    "gcd",
    "is_primary",
    "is_prime",
    "mangoldt",
    "moebius",
    "primary_associate",
    "__version__",
]
