"""Partial sums and Dirichlet series built from normalized quartic Gauss sums.

Central object: the normalized twisted sum gt(r,c) = g(r,c) psi(c) / sqrt(N(c))
with g the field-variant quartic Gauss sum; |gt| <= 1 whenever (r,c) = 1.
From it we build

* prime sums H_Z(r;psi) = sum over primary primes of norm <= Z, coprime to r,
  of Lambda(pi) gt(r,pi), and the s-weighted truncation H(r,s;psi);
* divisor-constrained sums F_a(z,r,psi) over primary multiples of a;
* a Vaughan-style six-term decomposition of H_{2Z} - H_Z over triples of
  squarefree primary elements with coefficients Lambda * moebius, bucketed by
  ray class mod 16 so one enumeration serves all 32 characters.  Triples
  whose members share a prime make the product non-squarefree, and the Gauss
  sum to a non-squarefree modulus coprime to the numerator vanishes, so only
  pairwise-coprime triples are enumerated;
* truncated checks of the three Euler-factor recursions satisfied by
  h(r,s,psi;alpha) = sum over primary n coprime to alpha of
  psi(n) g(r,n) N(n)^{-s} in its absolute-convergence region Re s > 3/2,
  including the symmetrized quartic pair product attached to squarefree
  kernels and the sign character rho_a(b) = (-1)^{C(a,b)} built from the
  reciprocity exponent;
* least-squares growth-exponent fits of log max-partial-sum against log Z,
  as diagnostics for the conjectured cancellation exponents (7/8 for the
  prime sums, 3/4 for the divisor-constrained sums) -- empirical slopes,
  never proofs.

Every enumeration runs in the fixed (norm, -re, -im) order, so repeated runs
accumulate floating point in the same order and reproduce byte-identical
results.
"""

from __future__ import annotations

import bisect
import functools
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError
from .gauss_sums import gauss_atom, gauss_sum_fast
from .ray_class import RayClassCharacter, build_group
from .symbols import quartic_symbol
from .zi import (
    GInt,
    factor,
    gcd,
    is_primary,
    primary_elements_upto,
    primary_primes_upto,
)

__all__ = [
    "SeriesSample",
    "VaughanDecomposition",
    "BoundFit",
    "RelationReport",
    "GaussSumTable",
    "squarefree_primary_upto",
    "h_partial",
    "h_partial_by_class",
    "h_truncated",
    "f_partial",
    "vaughan_by_class",
    "vaughan_decompose",
    "h_restricted_sum",
    "h_series_tail_bound",
    "h_relations_check",
    "pair_symbol_product",
    "rho_sign",
    "exponent_fit",
    "h_sample",
    "f_sample",
]

_FEASIBLE_NORM_CAP = 220_000


def rho_sign(a: GInt, b: GInt) -> int:
    """(-1)^{C(a,b)} with C the product of (N-1)/4 values; as a function of
    b this is a real ray class character mod 16."""
    return -1 if (((a.norm - 1) // 4) * ((b.norm - 1) // 4)) % 2 else 1


# ---------------------------------------------------------------------------
# squarefree enumeration and per-numerator tables


@functools.lru_cache(maxsize=8)
def squarefree_primary_upto(norm_cap: int) -> tuple[tuple[GInt, tuple[GInt, ...]], ...]:
    """All squarefree primary elements of norm <= cap with their prime
    factors, sorted by (norm, -re, -im).  Includes 1 (empty factor set)."""
    primes = primary_primes_upto(norm_cap)
    norms = [p.norm for p in primes]
    found: list[tuple[GInt, tuple[GInt, ...]]] = []

    def extend(start: int, prod: GInt, nn: int, parts: tuple[GInt, ...]):
        found.append((prod, parts))
        for i in range(start, len(primes)):
            nn2 = nn * norms[i]
            if nn2 > norm_cap:  # norms ascend, so no later prime fits either
                break
            extend(i + 1, prod * primes[i], nn2, parts + (primes[i],))

    extend(0, GInt(1), 1, ())
    found.sort(key=lambda t: (t[0].norm, -t[0].re, -t[0].im))
    return tuple(found)


class GaussSumTable:
    """Normalized Gauss sums g(r,m)/sqrt(N(m)) and ray class indices for
    every squarefree primary m of norm <= cap coprime to r, keyed by
    element."""

    def __init__(self, r: GInt, norm_cap: int):
        if not is_primary(r):
            raise DomainError("twist numerator must be primary")
        norm_cap = int(norm_cap)
        if norm_cap > _FEASIBLE_NORM_CAP:
            raise DomainError(
                f"norm cap {norm_cap} infeasible: ~{0.4 * norm_cap:.0f} "
                f"Gauss-sum evaluations (limit {_FEASIBLE_NORM_CAP})"
            )
        self.r = r
        self.norm_cap = norm_cap
        group = build_group()
        entries: dict[GInt, tuple[complex, int]] = {}
        for m, _ in squarefree_primary_upto(norm_cap):
            if gcd(m, r).norm != 1:
                continue
            g = complex(gauss_sum_fast(r, m)) / math.sqrt(m.norm)
            entries[m] = (g, group.class_of(m))
        self.entries = entries

    def gtilde(self, m: GInt, psi: RayClassCharacter) -> complex:
        ent = self.entries.get(m)
        if ent is None:
            return 0j
        return ent[0] * psi.value_of_class(ent[1])


@functools.lru_cache(maxsize=32)
def _prime_gtilde(r: GInt, norm_cap: int):
    """(prime, norm, log-norm, normalized Gauss sum, class index) rows in
    canonical order, for primary primes coprime to r."""
    group = build_group()
    rows = []
    for p in primary_primes_upto(norm_cap):
        if gcd(p, r).norm != 1:
            continue
        g = complex(gauss_sum_fast(r, p)) / math.sqrt(p.norm)
        rows.append((p, p.norm, math.log(p.norm), g, group.class_of(p)))
    return tuple(rows)


# ---------------------------------------------------------------------------
# prime sums


def h_partial_by_class(r: GInt, big_z: float) -> np.ndarray:
    """H_Z contributions bucketed by ray class: entry c sums Lambda(pi) *
    g(r,pi)/sqrt(N(pi)) over primes in class c, so H_Z(r;psi) is the
    psi-weighted sum of the buckets."""
    if big_z < 2:
        raise DomainError("Z must be at least 2")
    buckets = np.zeros(32, dtype=np.complex128)
    for _, nn, ln, g, ci in _prime_gtilde(r, int(big_z)):
        if nn > big_z:
            break
        buckets[ci] += ln * g
    return buckets


def h_partial(r: GInt, psi: RayClassCharacter, big_z: float) -> complex:
    """H_Z(r;psi): Lambda-weighted normalized Gauss sums over primary primes
    of norm <= Z coprime to r."""
    if big_z < 2:
        raise DomainError("Z must be at least 2")
    total = 0j
    for p, nn, ln, g, _ in _prime_gtilde(r, int(big_z)):
        if nn > big_z:
            break
        total += ln * psi(p) * g
    return total


def h_truncated(r: GInt, s: complex, psi: RayClassCharacter, norm_cap: int) -> complex:
    """Truncation of sum_pi Lambda(pi) psi(pi) g(r,pi) N(pi)^{-s} over
    primary primes coprime to r."""
    if norm_cap < 2:
        raise DomainError("norm cap must be at least 2")
    s = complex(s)
    total = 0j
    for p, nn, ln, g, _ in _prime_gtilde(r, int(norm_cap)):
        total += ln * psi(p) * g * nn ** (0.5 - s)
    return total


# ---------------------------------------------------------------------------
# divisor-constrained sums


def f_partial(
    a: GInt,
    z: float,
    r: GInt,
    psi: RayClassCharacter,
    table: GaussSumTable | None = None,
) -> complex:
    """F_a(z,r,psi): sum of psi(b) g(r,b)/sqrt(N(b)) over primary b of norm
    <= z divisible by a and coprime to r.  Non-squarefree multiples
    contribute zero and are skipped."""
    if not is_primary(a) or not factor(a).is_squarefree:
        raise DomainError("divisor constraint must be a squarefree primary element")
    if not is_primary(r):
        raise DomainError("twist numerator must be primary")
    if gcd(a, r).norm != 1:
        raise DomainError("divisor constraint must be coprime to the twist")
    if z < a.norm:
        return 0j
    if table is None:
        table = GaussSumTable(r, int(z))
    if table.norm_cap < z or table.r != r:
        raise DomainError("table does not cover the requested range")
    total = 0j
    for m in primary_elements_upto(int(z) // a.norm):
        total += table.gtilde(a * m, psi)
    return total


# ---------------------------------------------------------------------------
# Vaughan-style decomposition


@dataclass(frozen=True)
class VaughanDecomposition:
    sigma0: complex
    sigma1: complex
    sigma2_prime: complex
    sigma2_dprime: complex
    sigma3: complex
    sigma4: complex
    big_z: float
    u: float
    r: GInt
    psi_index: int

    @property
    def identity_residual(self) -> float:
        """Relative defect of sigma0 = sigma1 - sigma2' - sigma2'' - sigma3
        + sigma4."""
        rhs = (
            self.sigma1
            - self.sigma2_prime
            - self.sigma2_dprime
            - self.sigma3
            + self.sigma4
        )
        scale = max(abs(self.sigma0), abs(rhs), 1e-30)
        return abs(self.sigma0 - rhs) / scale


@functools.lru_cache(maxsize=16)
def _vaughan_buckets(r: GInt, big_z: int, u: float, norm_cap: int):
    table = GaussSumTable(r, norm_cap)
    sf = [mp_ for mp_ in squarefree_primary_upto(norm_cap) if mp_[0] in table.entries]
    sf_norms = [m.norm for m, _ in sf]
    primes = [
        (p, p.norm, math.log(p.norm))
        for p in primary_primes_upto(norm_cap)
        if gcd(p, r).norm == 1
    ]
    buckets = np.zeros((6, 32), dtype=np.complex128)
    two_z = 2 * big_z
    for a, na, la in primes:
        if na > two_z:
            break
        hi_b = bisect.bisect_right(sf_norms, two_z // na)
        for bi in range(hi_b):
            b, b_parts = sf[bi]
            nb = sf_norms[bi]
            if gcd(a, b).norm != 1:
                continue
            mu_b = -1 if len(b_parts) % 2 else 1
            nab = na * nb
            lo_c = bisect.bisect_right(sf_norms, big_z // nab)
            hi_c = bisect.bisect_right(sf_norms, two_z // nab)
            for ci in range(lo_c, hi_c):
                c, _ = sf[ci]
                nc = sf_norms[ci]
                nabc = nab * nc
                if nabc <= big_z or nabc > two_z:
                    continue
                if gcd(a, c).norm != 1 or gcd(b, c).norm != 1:
                    continue
                ent = table.entries.get(a * b * c)
                if ent is None:  # pragma: no cover - product is squarefree
                    continue
                term = la * mu_b * ent[0]
                cls = ent[1]
                nbc = nb * nc
                if nbc <= u:
                    buckets[0, cls] += term
                if nb <= u:
                    buckets[1, cls] += term
                if nab <= u:
                    buckets[2, cls] += term
                if na <= u and nb <= u < nab:
                    buckets[3, cls] += term
                if nb <= u < na and nbc > u:
                    buckets[4, cls] += term
                if na < nbc <= u:
                    buckets[5, cls] += term
    return buckets


def vaughan_by_class(r: GInt, big_z: float, u: float) -> np.ndarray:
    """The six decomposition sums bucketed by ray class, shape (6, 32); rows
    are sigma0, sigma1, sigma2', sigma2'', sigma3, sigma4."""
    if u < 1:
        raise DomainError("cut parameter u must be at least 1")
    if big_z < 2:
        raise DomainError("Z must be at least 2")
    if not is_primary(r):
        raise DomainError("twist numerator must be primary")
    norm_cap = 2 * int(big_z)
    if norm_cap > _FEASIBLE_NORM_CAP:
        raise DomainError(
            f"Z = {big_z:g} infeasible: ~{0.8 * big_z:.0f} table entries and "
            f"~{big_z * math.log(big_z + 2) * 0.7:.0f} enumerated triples"
        )
    return _vaughan_buckets(r, int(big_z), float(u), norm_cap)


def vaughan_decompose(
    r: GInt, big_z: float, u: float, psi: RayClassCharacter
) -> VaughanDecomposition:
    """Specialize the bucketed decomposition to one ray class character."""
    buckets = vaughan_by_class(r, big_z, u)
    weights = np.array([psi.value_of_class(j) for j in range(32)])
    sums = buckets @ weights
    return VaughanDecomposition(
        sigma0=complex(sums[0]),
        sigma1=complex(sums[1]),
        sigma2_prime=complex(sums[2]),
        sigma2_dprime=complex(sums[3]),
        sigma3=complex(sums[4]),
        sigma4=complex(sums[5]),
        big_z=float(big_z),
        u=float(u),
        r=r,
        psi_index=psi.index,
    )


# ---------------------------------------------------------------------------
# Euler-factor recursions for the unrestricted series


def pair_symbol_product(a: GInt) -> complex:
    """Symmetrized quartic cross product over unordered pairs of distinct
    prime factors of a squarefree primary element: each pair {p, q}
    contributes (p/q)_4 (q/p)_4.  By reciprocity this equals the quadratic
    symbol (p/q)_2 times (-1)^{C(p,q)}, a sign; the symmetric form makes
    order-independence manifest.  Validated against the restriction-removal
    recursion, which this sign convention alone satisfies."""
    f = factor(a)
    if not is_primary(a) or not f.is_squarefree or f.lambda_exp:
        raise DomainError("expected an odd squarefree primary element")
    primes = [p for p, _ in f.primes]
    out = 1.0 + 0j
    for i, p in enumerate(primes):
        for q in primes[i + 1 :]:
            out *= (quartic_symbol(p, q) * quartic_symbol(q, p)).value
    return out


def h_restricted_sum(
    r: GInt,
    s: complex,
    char: Callable[[GInt], complex],
    alpha: GInt,
    norm_cap: int,
) -> complex:
    """Truncation of sum over primary n coprime to alpha of
    char(n) g(r,n) N(n)^{-s}.  n sharing factors with r is included: the
    Gauss sum need not vanish there."""
    s = complex(s)
    total = 0j
    check = alpha.norm != 1
    for n in primary_elements_upto(int(norm_cap)):
        if check and gcd(n, alpha).norm != 1:
            continue
        g = complex(gauss_sum_fast(r, n))
        if g == 0:
            continue
        total += char(n) * g * n.norm ** (-s)
    return total


def h_series_tail_bound(s: complex, norm_cap: int) -> float:
    """Bound on the discarded terms of the restricted series, via |g(r,n)|
    <= sqrt(N(n)) for (n,r)=1 and the count of primary elements of norm <=
    t being at most (pi/8) t + 5 sqrt(t) + 8."""
    sigma = complex(s).real
    if sigma <= 1.5:
        raise DomainError("series converges absolutely only for Re s > 3/2")
    return (math.pi / 8) * norm_cap ** (1.5 - sigma) / (sigma - 1.5) + 3.0 * norm_cap ** (
        1.0 - sigma
    ) / (sigma - 1.0)


@dataclass(frozen=True)
class RelationReport:
    relation: str
    lhs: complex
    rhs: complex
    discrepancy: float
    tolerance: float
    ok: bool


def _report(name: str, lhs: complex, rhs: complex, tol: float) -> RelationReport:
    disc = abs(lhs - rhs)
    return RelationReport(
        relation=name, lhs=lhs, rhs=rhs, discrepancy=disc, tolerance=tol, ok=disc <= tol
    )


def _subset_products(primes: Sequence[GInt]):
    """(product, subset) over all subsets of a squarefree prime list."""
    out = []
    for mask in range(1 << len(primes)):
        sel = tuple(p for i, p in enumerate(primes) if mask >> i & 1)
        prod = GInt(1)
        for p in sel:
            prod = prod * p
        out.append((prod, sel))
    return out


def h_relations_check(
    r1: GInt,
    r2: GInt,
    r3: GInt,
    psi: RayClassCharacter,
    s: complex = 1.75,
    norm_cap: int = 20000,
    target: float | None = None,
) -> tuple[RelationReport, ...]:
    """Check the three restriction-removal recursions for the restricted
    series h(r,s,psi;alpha) at r = r1 r2^2 r3^3 by truncated evaluation.

    * cube-part: dropping the coprimality restriction at primes dividing r3
      costs one geometric Euler factor per prime;
    * square-part: dropping it at primes dividing r2 brings in a
      moebius-kernel sum over divisors a | r2, each summand evaluating the
      series at numerator r/a^2 with the character twisted by the sign
      rho(a^3, .), weighted by conjugate symbols, the pair product, and
      conjugate Gauss-sum atoms;
    * prime-part: dropping it at primes dividing r1 costs one Euler factor
      per prime built from the quadratic Gauss-sum atom.

    Tolerances add both truncation tails, amplified by prefactor sizes.
    With target set, an unreachable tolerance raises instead of reporting.
    """
    s = complex(s)
    if s.real < 1.6:
        raise DomainError("relation checks need Re s >= 1.6 for usable tail bounds")
    parts: dict[str, list[GInt]] = {}
    for name, val in (("r1", r1), ("r2", r2), ("r3", r3)):
        f = factor(val)
        if not is_primary(val) or not f.is_squarefree or f.lambda_exp:
            raise DomainError(f"{name} must be an odd squarefree primary element")
        parts[name] = [p for p, _ in f.primes]
    if gcd(r1, r2).norm != 1 or gcd(r1, r3).norm != 1 or gcd(r2, r3).norm != 1:
        raise DomainError("r1, r2, r3 must be pairwise coprime")
    tail = h_series_tail_bound(s, norm_cap)
    if target is not None and 2 * tail > target:
        raise ConvergenceError(
            f"truncation tail {2 * tail:.3e} exceeds target {target:.3e}; raise the cap"
        )
    r = r1 * r2 * r2 * r3 * r3 * r3

    def h(alpha: GInt, char: Callable[[GInt], complex] = psi, rr: GInt = r) -> complex:
        return h_restricted_sum(rr, s, char, alpha, norm_cap)

    reports = []

    # cube-part removal
    pref = 1.0 + 0j
    for p in parts["r3"]:
        pref /= 1 - psi(p) ** 4 * p.norm ** (3 - 4 * s)
    lhs = h(r1 * r2 * r3)
    rhs = pref * h(r1 * r2)
    reports.append(_report("cube-part", lhs, rhs, tail * (1 + abs(pref))))

    # square-part removal
    pref = 1.0 + 0j
    for p in parts["r2"]:
        minus_over_cube = quartic_symbol(GInt(-1), p * p * p).conj().value
        pref /= (
            1
            - rho_sign(p * p * p, p)
            * psi(p) ** 4
            * p.norm ** (2 - 4 * s)
            * abs(gauss_atom(p, 4)) ** 2
            * minus_over_cube
        )
    star = 0j
    amp = 0.0
    for adiv, aparts in _subset_products(parts["r2"]):
        mu = -1 if len(aparts) % 2 else 1
        r2_over_a = GInt(1)
        for p in parts["r2"]:
            if p not in aparts:
                r2_over_a = r2_over_a * p
        acube = adiv * adiv * adiv
        sym_num = GInt(-1) * r1 * r2_over_a * r2_over_a * r3 * r3 * r3
        coeff = (
            mu
            * psi(adiv) ** 3
            * adiv.norm ** (2 - 3 * s)
            * quartic_symbol(sym_num, acube).conj().value
            * pair_symbol_product(adiv)
        )
        for p in aparts:
            coeff = coeff * gauss_atom(p, 4).conjugate()
        rr = r1 * r2_over_a * r2_over_a * r3 * r3 * r3

        def twisted(n: GInt, _a=acube) -> complex:
            return rho_sign(_a, n) * psi(n)

        star += coeff * h(r1, char=twisted, rr=rr)
        amp += abs(coeff)
    lhs = h(r1 * r2)
    rhs = pref * star
    reports.append(_report("square-part", lhs, rhs, tail * (1 + abs(pref) * max(amp, 1.0))))

    # prime-part removal
    pref = 1.0 + 0j
    for p in parts["r1"]:
        quot = (r1 // p) * r2 * r2 * r3 * r3 * r3
        pref /= (
            1
            + psi(p) ** 2
            * p.norm ** (1 - 2 * s)
            * gauss_atom(p, 2)
            * quartic_symbol(quot, p * p).conj().value
        )
    lhs = h(r1)
    rhs = pref * h(GInt(1))
    reports.append(_report("prime-part", lhs, rhs, tail * (1 + abs(pref))))

    return tuple(reports)


# ---------------------------------------------------------------------------
# samples and exponent fits


@dataclass(frozen=True)
class SeriesSample:
    grid: tuple[float, ...]
    values: tuple[complex, ...]
    context: Mapping[str, str]

    def __post_init__(self):
        if len(self.grid) != len(self.values):
            raise DomainError("grid and values must align")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise DomainError("grid must be strictly increasing")
        if not all(math.isfinite(abs(v)) for v in self.values):
            raise DomainError("partial sums must be finite")

    def to_csv(self, fh) -> None:
        fh.write("grid,re,im\n")
        for g, v in zip(self.grid, self.values):
            fh.write(f"{g:.6f},{v.real:.12e},{v.imag:.12e}\n")


@dataclass(frozen=True)
class BoundFit:
    slope: float
    intercept: float
    residuals: tuple[float, ...]
    reference: float
    within_reference: bool
    degenerate: bool


def exponent_fit(sample: SeriesSample, reference: float) -> BoundFit:
    """Least-squares slope of log(running max |partial sum|) against
    log(grid).  The verdict compares the slope against reference + 0.1
    slack; it is an empirical diagnostic, not a bound."""
    if len(sample.grid) < 6:
        raise DomainError("need at least 6 sample points for a fit")
    envelope = np.maximum.accumulate(np.abs(np.array(sample.values)))
    if envelope[-1] == 0:
        return BoundFit(
            slope=math.nan,
            intercept=math.nan,
            residuals=(),
            reference=float(reference),
            within_reference=False,
            degenerate=True,
        )
    keep = envelope > 0
    xs = np.log(np.array(sample.grid)[keep])
    ys = np.log(envelope[keep])
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = tuple(float(v) for v in ys - (slope * xs + intercept))
    return BoundFit(
        slope=float(slope),
        intercept=float(intercept),
        residuals=resid,
        reference=float(reference),
        within_reference=bool(slope < reference + 0.1),
        degenerate=False,
    )


def h_sample(r: GInt, psi: RayClassCharacter, grid: Sequence[float]) -> SeriesSample:
    """Prime-sum partial sums H_Z over a grid of Z values."""
    values = tuple(h_partial(r, psi, z) for z in grid)
    return SeriesSample(
        grid=tuple(float(z) for z in grid),
        values=values,
        context={"kind": "prime-sum", "r": str(r), "psi": str(psi.index)},
    )


def f_sample(
    a: GInt, r: GInt, psi: RayClassCharacter, grid: Sequence[float]
) -> SeriesSample:
    """Divisor-constrained partial sums F_a(z) over a grid of z values."""
    table = GaussSumTable(r, int(max(grid)))
    values = tuple(f_partial(a, z, r, psi, table=table) for z in grid)
    return SeriesSample(
        grid=tuple(float(z) for z in grid),
        values=values,
        context={
            "kind": "divisor-sum",
            "a": str(a),
            "r": str(r),
            "psi": str(psi.index),
        },
    )
