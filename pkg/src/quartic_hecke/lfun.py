"""Zeta and L-function evaluation for the quartic Hecke family.

Dedekind zeta of Q(i) factors as zeta(s) * beta(s) with beta the L-function
of the quadratic character mod 4; both are evaluated through mpmath, with a
direct ideal-lattice partial sum (plus tail bound) kept as an independent
oracle.  Superscript-(j) variants divide out the Euler factor at the ramified
prime of norm 2, i.e. multiply by (1 - 2^{-s}).

L(s, chi) for the quartic residue character chi = (./pi)_4 with pi a primary
prime = 1 mod 16 is completed by Lambda(s) = Q^s Gamma(s) L(s),
Q = sqrt(|D_K| N(pi))/(2 pi), with root number eps = g(pi) N(pi)^{-1/2}
(the field-normalized quartic Gauss sum).  Evaluation uses the exact
two-sided smoothed approximate functional equation

    Lambda(s) = sum_n a_n (Q/n)^s Gamma(s, A n/Q)
              + eps * sum_n conj(a_n) (Q/n)^{1-s} Gamma(1-s, n/(A Q)),

valid for every splitting parameter A > 0 because Lambda is entire; running
it at two values of A is the built-in accuracy check.  Coefficients a_n sum
chi over ideals of norm n; since pi = 1 mod 16 kills the unit and (1+i)
symbols, chi is well-defined on ideals and a_n needs only primary odd
generators.

On the critical line, Lambda(1/2 + it) times e^{-i arg(eps)/2} is real, which
gives a Hardy-style real function for certified sign-change zero location.

A rational-integer variant (the same symbol restricted to Z, an even
primitive Dirichlet character mod p for split pi) is provided for the
experiments that compare against classical moment predictions; its completed
form uses Gamma(s/2) and Gaussian-kernel incomplete gammas.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.special

from .errors import ConvergenceError, DomainError
from .gauss_sums import gauss_atom
from .incomplete_gamma import upper_gamma_array
from .symbols import quartic_symbol
from .zi import GInt, enumerate_primary_primes, is_primary, is_prime, primary_elements_upto

__all__ = [
    "dedekind_zeta",
    "riemann_zeta_value",
    "zeta_k_ideal_sum",
    "zeta_kj_log_derivative",
    "family_conductors",
    "root_number",
    "HeckeLFunction",
    "RationalQuarticL",
    "ZeroList",
    "hecke_l",
]

TWO_PI = 2.0 * math.pi


def _rotation(t: float) -> tuple[complex, float]:
    """Saddle-ray rotation for a Gamma(s, .) kernel with Im s = t.

    Returns (e^{i theta}, x_cut): kernel arguments are turned onto the ray
    arg x = theta so every term keeps the exponential scale of Gamma(s)
    (plain real arguments lose ~0.68|t| digits to cancellation), and the
    sums are truncated once |x| exceeds x_cut (tail factor ~ e^{-48}).
    """
    at = abs(t)
    delta = math.pi / 2 if at < 12.0 else max(0.3, min(math.pi / 2, 19.0 / at))
    theta = math.copysign(math.pi / 2 - delta, t)
    return cmath.exp(1j * theta), (at * delta + 48.0) / math.sin(delta)


# ---------------------------------------------------------------------------
# zeta functions


def dedekind_zeta(s: complex, omit_lambda_factor: bool = False) -> complex:
    """zeta_K(s) = zeta(s) * beta(s); optionally with the norm-2 Euler factor
    removed (multiplication by 1 - 2^{-s})."""
    import mpmath as mp

    s = complex(s)
    if s == 1:
        raise DomainError("zeta_K has a pole at s = 1")
    with mp.workdps(30):
        ms = mp.mpc(s)
        beta = mp.power(4, -ms) * (mp.zeta(ms, mp.mpf(1) / 4) - mp.zeta(ms, mp.mpf(3) / 4))
        val = mp.zeta(ms) * beta
        if omit_lambda_factor:
            val *= 1 - mp.power(2, -ms)
        return complex(val)


def riemann_zeta_value(s: complex, omit_lambda_factor: bool = False) -> complex:
    import mpmath as mp

    s = complex(s)
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    with mp.workdps(30):
        ms = mp.mpc(s)
        val = mp.zeta(ms)
        if omit_lambda_factor:
            val *= 1 - mp.power(2, -ms)
        return complex(val)


def zeta_k_ideal_sum(s: float, norm_cap: int) -> tuple[float, float]:
    """Direct oracle: sum of N(a)^{-s} over ideals with N(a) <= norm_cap,
    plus a tail bound from the ideal-count partial sums.  Real s > 1 only."""
    if not (s > 1):
        raise DomainError("the ideal-sum oracle needs real s > 1")
    counts = np.zeros(norm_cap + 1, dtype=np.int64)
    for d in range(1, norm_cap + 1, 2):
        if d % 4 == 1:
            counts[d::d] += 1
        else:
            counts[d::d] -= 1
    ns = np.arange(1, norm_cap + 1, dtype=np.float64)
    value = float(np.dot(counts[1:], ns**-s))
    # ideal counts up to t are pi t/4 + E(t) with |E| <= 5 sqrt(t) + 8 in
    # this range; partial summation gives the bound below
    tail = (math.pi / 4) * (s / (s - 1)) * norm_cap ** (1 - s) + (5 * math.sqrt(norm_cap) + 8) * (
        s + 1
    ) * norm_cap**-s
    return value, tail


def zeta_kj_log_derivative(s: complex) -> complex:
    """(zeta_K^{(j)})'(s) / zeta_K^{(j)}(s) via high-precision differentiation."""
    import mpmath as mp

    s = complex(s)
    if s == 1:
        raise DomainError("pole at s = 1")
    with mp.workdps(40):

        def f(z):
            beta = mp.power(4, -z) * (mp.zeta(z, mp.mpf(1) / 4) - mp.zeta(z, mp.mpf(3) / 4))
            return mp.log(mp.zeta(z) * beta * (1 - mp.power(2, -z)))

        return complex(mp.diff(f, mp.mpc(s)))


# ---------------------------------------------------------------------------
# the quartic Hecke family


def _is_family_prime(pi: GInt) -> bool:
    return (
        (pi.re - 1) % 16 == 0
        and pi.im % 16 == 0
        and is_primary(pi)
        and is_prime(pi)
    )


def _require_family(pi: GInt) -> None:
    if not _is_family_prime(pi):
        raise DomainError(f"{pi} is not a primary prime = 1 mod 16")


def family_conductors(max_norm: int, min_norm: int = 2) -> list[GInt]:
    """Primary primes = 1 mod 16 with norm in [min_norm, max_norm]."""
    return [
        p
        for p in enumerate_primary_primes(max_norm, GInt(1), GInt(16))
        if p.norm >= min_norm
    ]


def root_number(pi: GInt) -> complex:
    _require_family(pi)
    return gauss_atom(pi, 4, "K") / math.sqrt(pi.norm)


@dataclass(frozen=True)
class ZeroList:
    conductor_norm: int
    generator: GInt
    ordinates: tuple[float, ...]
    brackets: tuple[tuple[float, float], ...]
    search_height: float
    suspected_missing: bool

    def to_csv(self, fh) -> None:
        fh.write("conductor,gamma\n")
        for g in self.ordinates:
            fh.write(f"{self.conductor_norm},{g:.12f}\n")


class HeckeLFunction:
    """L(s, (./pi)_4) for a primary prime pi = 1 mod 16, AFE-based."""

    def __init__(self, pi: GInt):
        _require_family(pi)
        self.pi = pi
        self.norm = pi.norm
        self.q_param = math.sqrt(4 * self.norm) / TWO_PI
        self.eps = root_number(pi)
        self._coeff_ns: np.ndarray | None = None
        self._coeff_vals: np.ndarray | None = None
        self._coeff_cap = 0

    # -- Dirichlet coefficients ----------------------------------------
    def coefficients(self, max_norm: int) -> tuple[np.ndarray, np.ndarray]:
        """Nonzero a_n = sum over ideals of norm n of chi, for n <= max_norm."""
        max_norm = int(max_norm)
        if max_norm > self._coeff_cap:
            # every ideal is (1+i)^e times a unique primary odd generator,
            # and both the unit and (1+i) symbols are 1 for this family, so
            # chi on ideals reduces to the symbol at primary generators
            acc = np.zeros(max_norm + 1, dtype=np.complex128)
            for z in primary_elements_upto(max_norm):
                e = quartic_symbol(z, self.pi).exponent
                if e is None:
                    continue
                v = (1j) ** e
                n = z.norm
                while n <= max_norm:
                    acc[n] += v
                    n *= 2
            ns = np.nonzero(acc)[0]
            self._coeff_ns = ns
            self._coeff_vals = acc[ns]
            self._coeff_cap = max_norm
        hi = int(np.searchsorted(self._coeff_ns, max_norm, side="right"))
        return self._coeff_ns[:hi], self._coeff_vals[:hi]

    # -- completed function and L-values -------------------------------
    def _principal_sum(self, s: complex, split: float) -> complex:
        """sum_n a_n (Q/n)^s Gamma(s, rotated split point * n / Q)."""
        q = self.q_param
        rot, x_cut = _rotation(s.imag)
        self.coefficients(int(q * x_cut * max(split, 1.0 / split)) + 1)
        hi = int(np.searchsorted(self._coeff_ns, q * x_cut / split, side="right"))
        n1 = self._coeff_ns[:hi].astype(np.float64)
        if hi == 0:
            return 0j
        g1 = upper_gamma_array(s, (split / q) * n1 * rot)
        return complex(np.dot(self._coeff_vals[:hi] * np.exp(s * np.log(q / n1)), g1))

    def completed(self, s: complex, split: float = 1.0) -> complex:
        """Lambda(s) by the two-sided smoothed functional equation."""
        s = complex(s)
        if split <= 0:
            raise DomainError("splitting parameter must be positive")
        # the reflected piece is the principal sum of the dual function at
        # 1 - s, whose coefficients and root number are the conjugates
        direct = self._principal_sum(s, split)
        reflected = self._principal_sum((1 - s).conjugate(), 1.0 / split)
        return direct + self.eps * reflected.conjugate()

    def value(self, s: complex, split: float = 1.0) -> complex:
        """L(s) from the completed function."""
        s = complex(s)
        lam = self.completed(s, split=split)
        denom = cmath.exp(s * math.log(self.q_param)) * scipy.special.gamma(s)
        return lam / denom

    def series_value(self, s: complex, norm_cap: int) -> complex:
        """Sharply truncated Dirichlet series (absolute region Re s > 1)."""
        s = complex(s)
        if s.real <= 1:
            raise DomainError("plain series requires Re s > 1")
        ns, avals = self.coefficients(norm_cap)
        nsf = ns.astype(np.float64)
        return complex(np.dot(avals, np.exp(-s * np.log(nsf))))

    def self_check(self, s: complex, splits: tuple[float, float] = (1.0, 1.25)) -> float:
        """|AFE(split_a) - AFE(split_b)| for L(s) — parameter independence."""
        a = self.value(s, split=splits[0])
        b = self.value(s, split=splits[1])
        return abs(a - b)

    # -- critical line -------------------------------------------------
    def z_value(self, t: float) -> float:
        """Rotated completed value: real on the critical line.

        At split 1 the reflected sum is exactly the conjugate of the
        principal sum, so Z(t) = 2 Re(e^{-i arg(eps)/2} S(1/2+it)).
        """
        phase = cmath.exp(-0.5j * cmath.phase(self.eps))
        return 2.0 * (phase * self._principal_sum(complex(0.5, t), 1.0)).real

    def _z_many(self, ts: Iterable[float]) -> np.ndarray:
        return np.array([self.z_value(t) for t in ts])

    def find_zeros(self, height: float, grid_step: float | None = None) -> ZeroList:
        """Certified sign-change zeros of Lambda(1/2 + it), |t| <= height."""
        if height <= 0:
            raise DomainError("search height must be positive")
        if grid_step is None:
            # roughly four samples per mean zero gap
            grid_step = 0.9 / max(2.0, math.log(self.q_param * (1 + height)))
        ts = np.arange(-height, height + grid_step, grid_step)
        zs = self._z_many(ts)
        zs[zs == 0.0] = 1e-300  # keep strict sign-change logic well-defined
        roots: list[float] = []
        brackets: list[tuple[float, float]] = []

        def refine(a, b, fa, fb):
            # bisection keeps an explicit sign-changing bracket at all times
            while b - a > 1e-5:
                m = 0.5 * (a + b)
                fm = self.z_value(m) or 1e-300
                if fa * fm < 0:
                    b, fb = m, fm
                else:
                    a, fa = m, fm
            roots.append(0.5 * (a + b))
            brackets.append((a, b))

        for i in range(len(ts) - 1):
            if zs[i] * zs[i + 1] < 0:
                refine(ts[i], ts[i + 1], zs[i], zs[i + 1])
        # dip scan: a local |Z| minimum well below its neighbors may hide a
        # close pair of zeros between grid sign changes
        absz = np.abs(zs)
        for i in range(1, len(ts) - 2):
            if absz[i] < 0.05 * (absz[i - 1] + absz[i + 1]) and zs[i] * zs[i + 1] > 0:
                fine = np.arange(ts[i - 1], ts[i + 1], grid_step / 16)
                fz = self._z_many(fine)
                for j in range(len(fine) - 1):
                    if fz[j] * fz[j + 1] < 0 and not any(
                        fine[j] <= r <= fine[j + 1] for r in roots
                    ):
                        refine(fine[j], fine[j + 1], fz[j] or 1e-300, fz[j + 1] or 1e-300)
        order = np.argsort(roots)
        roots_sorted = tuple(float(roots[int(i)]) for i in order)
        brackets_sorted = tuple(brackets[int(i)] for i in order)
        expected = (2 * height / math.pi) * math.log(self.q_param * max(height, 2.0) / math.e)
        missing = abs(len(roots_sorted) - expected) > max(4.0, 0.15 * expected)
        return ZeroList(
            conductor_norm=self.norm,
            generator=self.pi,
            ordinates=roots_sorted,
            brackets=brackets_sorted,
            search_height=float(height),
            suspected_missing=bool(missing),
        )


def hecke_l(pi: GInt, s: complex, method: str = "afe", **kw) -> complex:
    lf = HeckeLFunction(pi)
    if method == "afe":
        return lf.value(s, **kw)
    if method == "series":
        return lf.series_value(s, kw.get("norm_cap", 200000))
    raise DomainError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# the rational-integer restriction (even Dirichlet character mod p)


class RationalQuarticL:
    """L(s, chi) for chi(n) = (n/pi)_4 on Z, split pi = 1 mod 16 (so chi is
    an even primitive quartic character mod p = N(pi))."""

    def __init__(self, pi: GInt):
        _require_family(pi)
        if pi.im == 0:
            raise DomainError("rational restriction needs a split prime")
        self.pi = pi
        self.p = pi.norm
        self.q_param = math.sqrt(self.p / math.pi)
        self.eps = gauss_atom(pi, 4, "rational") / math.sqrt(self.p)
        self._chi: np.ndarray | None = None

    def chi_table(self, cap: int) -> np.ndarray:
        """chi(0..cap) as complex values."""
        if self._chi is None or len(self._chi) <= cap:
            p = self.p
            a, b = self.pi.re, self.pi.im
            u = (-a * pow(b, -1, p)) % p  # the residue representing i
            images = {1: 1 + 0j, u: 1j, p - 1: -1 + 0j, (p - u) % p: -1j}
            e = (p - 1) // 4
            out = np.zeros(cap + 1, dtype=np.complex128)
            for n in range(1, cap + 1):
                r = n % p
                if r:
                    out[n] = images[pow(r, e, p)]
            self._chi = out
        return self._chi[: cap + 1]

    def completed(self, s: complex, split: float = 1.0) -> complex:
        s = complex(s)
        if split <= 0:
            raise DomainError("splitting parameter must be positive")
        q = self.q_param
        rot, x_cut = _rotation(s.imag / 2)
        n_max = q * math.sqrt(x_cut)
        cap = int(n_max * max(split, 1.0 / split)) + 1
        chi = self.chi_table(cap)
        ns = np.nonzero(chi)[0]
        vals = chi[ns]
        nsf = ns.astype(np.float64)
        total = 0j
        m1 = nsf <= n_max / split
        if m1.any():
            g1 = upper_gamma_array(s / 2, (split * nsf[m1] / q) ** 2 * rot)
            total += np.dot(vals[m1] * np.exp(s * np.log(q / nsf[m1])), g1)
        m2 = nsf <= n_max * split
        if m2.any():
            g2 = upper_gamma_array((1 - s) / 2, (nsf[m2] / (split * q)) ** 2 * rot.conjugate())
            total += self.eps * np.dot(
                np.conj(vals[m2]) * np.exp((1 - s) * np.log(q / nsf[m2])), g2
            )
        return complex(total)

    def value(self, s: complex, split: float = 1.0) -> complex:
        s = complex(s)
        lam = self.completed(s, split=split)
        denom = cmath.exp(s * math.log(self.q_param)) * scipy.special.gamma(s / 2)
        return lam / denom

    def series_value(self, s: complex, cap: int) -> complex:
        s = complex(s)
        if s.real <= 1:
            raise DomainError("plain series requires Re s > 1")
        chi = self.chi_table(cap)
        idx = np.nonzero(chi)[0]
        return complex(np.dot(chi[idx], np.exp(-s * np.log(idx.astype(np.float64)))))

    def self_check(self, s: complex, splits: tuple[float, float] = (1.0, 1.25)) -> float:
        return abs(self.value(s, split=splits[0]) - self.value(s, split=splits[1]))
