"""Exact arithmetic in the ring of Gaussian integers Z[i].

Conventions used throughout the package:

* the ramified prime is lam = 1 + i (norm 2); an element is *odd* when it is
  coprime to lam, i.e. when re + im is odd;
* an odd element a + bi is *primary* when (a = 1 mod 4 and b = 0 mod 4) or
  (a = 3 mod 4 and b = 2 mod 4).  Every odd element has exactly one primary
  associate, which makes primary elements canonical generators for odd ideals;
* quotients in `div_rem` round each coordinate to the nearest integer with
  ties broken toward minus infinity, so the remainder norm is at most half
  the divisor norm and all reductions are reproducible bit for bit;
* factorizations list primary primes sorted by (norm, -re, -im), with the
  leftover unit and the exponent of lam carried separately.

Rational-integer legwork (primality, factoring norms, square roots mod p)
is delegated to sympy; everything Gaussian is done here with exact ints.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import sympy
from sympy.ntheory.residue_ntheory import sqrt_mod

from .errors import DomainError

__all__ = [
    "GInt",
    "PrimaryFactorization",
    "ZERO",
    "ONE",
    "I",
    "LAMBDA",
    "UNITS",
    "div_rem",
    "gcd",
    "is_primary",
    "primary_associate",
    "is_prime",
    "factor",
    "euler_phi",
    "moebius",
    "mangoldt",
    "enumerate_primary_primes",
    "primary_primes_upto",
    "primary_elements_upto",
    "ideal_generators_upto",
]


def _round_half_down(p: int, n: int) -> int:
    """Nearest integer to p/n (n > 0), ties toward minus infinity."""
    return -((n - 2 * p) // (2 * n))


class GInt:
    """An immutable Gaussian integer re + im*i."""

    __slots__ = ("re", "im")

    def __init__(self, re: int, im: int = 0):
        object.__setattr__(self, "re", int(re))
        object.__setattr__(self, "im", int(im))

    def __setattr__(self, *a):  # pragma: no cover - guard
        raise AttributeError("GInt is immutable")

    # -- basic structure -------------------------------------------------
    @property
    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conj(self) -> "GInt":
        return GInt(self.re, -self.im)

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_unit(self) -> bool:
        return self.norm == 1

    @property
    def is_odd(self) -> bool:
        return (self.re + self.im) % 2 == 1

    @property
    def is_even(self) -> bool:
        return (self.re + self.im) % 2 == 0

    @property
    def is_primary(self) -> bool:
        return is_primary(self)

    # -- arithmetic ------------------------------------------------------
    def _coerce(other):
        if isinstance(other, GInt):
            return other
        if isinstance(other, int):
            return GInt(other, 0)
        return None

    def __add__(self, other):
        o = GInt._coerce(other)
        if o is None:
            return NotImplemented
        return GInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GInt._coerce(other)
        if o is None:
            return NotImplemented
        return GInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = GInt._coerce(other)
        if o is None:
            return NotImplemented
        return GInt(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = GInt._coerce(other)
        if o is None:
            return NotImplemented
        return GInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GInt(-self.re, -self.im)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        r, b = GInt(1), self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __divmod__(self, other):
        o = GInt._coerce(other)
        if o is None:
            return NotImplemented
        return div_rem(self, o)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "GInt") -> bool:
        return (other % self).is_zero

    # -- identity --------------------------------------------------------
    def __eq__(self, other):
        o = GInt._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(self.re, self.im)

    def __repr__(self):
        return f"GInt({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    @staticmethod
    def parse(text: str) -> "GInt":
        """Parse strings like '3-2i', '-5', 'i', '4i', '1+i'."""
        s = text.strip().replace(" ", "")
        if not s:
            raise DomainError("empty Gaussian integer literal")
        if s[-1] in "iIjJ":
            body = s[:-1]
            # split off the real part, scanning for an interior +/- sign
            cut = 0
            for k in range(len(body) - 1, 0, -1):
                if body[k] in "+-" and body[k - 1] not in "eE+-":
                    cut = k
                    break
            re_part, im_part = body[:cut], body[cut:]
            if im_part in ("", "+"):
                im_part = "1"
            elif im_part == "-":
                im_part = "-1"
            try:
                return GInt(int(re_part) if re_part else 0, int(im_part))
            except ValueError as exc:
                raise DomainError(f"bad Gaussian integer literal {text!r}") from exc
        try:
            return GInt(int(s), 0)
        except ValueError as exc:
            raise DomainError(f"bad Gaussian integer literal {text!r}") from exc


ZERO = GInt(0)
ONE = GInt(1)
I = GInt(0, 1)
LAMBDA = GInt(1, 1)
UNITS = (GInt(1), GInt(0, 1), GInt(-1), GInt(0, -1))


def div_rem(a: GInt, b: GInt) -> tuple[GInt, GInt]:
    """Euclidean division a = q*b + r with norm(r) <= norm(b)/2.

    Both quotient coordinates are rounded to nearest, ties toward -inf.
    """
    if b.is_zero:
        raise DomainError("division by zero")
    n = b.norm
    p = a.re * b.re + a.im * b.im
    q = a.im * b.re - a.re * b.im
    qr = _round_half_down(p, n)
    qi = _round_half_down(q, n)
    quot = GInt(qr, qi)
    rem = a - quot * b
    return quot, rem


def gcd(a: GInt, b: GInt) -> GInt:
    """Greatest common divisor, normalized as lam^t * (primary odd part).

    The result is zero only when both inputs are zero.
    """
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    t = 0
    while a.is_even:
        # divide by lam = 1+i:  (x+yi)/(1+i) = ((x+y) + (y-x)i)/2
        a = GInt((a.re + a.im) // 2, (a.im - a.re) // 2)
        t += 1
    if not a.is_unit:
        _, a = primary_associate(a)
    else:
        a = ONE
    return LAMBDA**t * a


def is_primary(z: GInt) -> bool:
    a, b = z.re % 4, z.im % 4
    return (a == 1 and b == 0) or (a == 3 and b == 2)


def primary_associate(z: GInt) -> tuple[GInt, GInt]:
    """Return (u, p) with u a unit, p = u*z primary.  Requires z odd."""
    if not z.is_odd:
        raise DomainError(f"{z} is not odd; only odd elements have a primary associate")
    for u in UNITS:
        p = u * z
        if is_primary(p):
            return u, p
    raise AssertionError(f"no primary associate found for {z}")  # unreachable


def is_prime(z: GInt) -> bool:
    """Primality in Z[i]; deterministic for every norm below 2^64."""
    n = z.norm
    if n <= 1:
        return False
    if sympy.isprime(n):
        return True
    # inert case: associate of a rational prime p = 3 mod 4, norm p^2
    r = math.isqrt(n)
    if r * r != n:
        return False
    if (z.re != 0 and z.im != 0) or not sympy.isprime(r):
        return False
    return r % 4 == 3


@dataclass(frozen=True)
class PrimaryFactorization:
    """unit * lam^lambda_exp * prod(prime^exp) with primary primes."""

    unit: GInt
    lambda_exp: int
    primes: tuple[tuple[GInt, int], ...]

    @property
    def value(self) -> GInt:
        z = self.unit * LAMBDA**self.lambda_exp
        for p, e in self.primes:
            z = z * p**e
        return z

    @property
    def is_squarefree(self) -> bool:
        return self.lambda_exp <= 1 and all(e == 1 for _, e in self.primes)

    @property
    def num_prime_factors(self) -> int:
        return sum(e for _, e in self.primes) + self.lambda_exp


@functools.lru_cache(maxsize=1 << 18)
def _norm_factorization(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(sympy.factorint(n).items()))


@functools.lru_cache(maxsize=1 << 17)
def split_prime(p: int) -> GInt:
    """The primary prime above a rational prime p = 1 mod 4 with positive
    imaginary part of its non-primary core fixed by sqrt_mod determinism."""
    x = int(sqrt_mod(-1, p))
    g = gcd(GInt(p), GInt(x, 1))
    # gcd already returns the primary associate (g is odd since p is odd)
    return g


@functools.lru_cache(maxsize=1 << 16)
def factor(z: GInt) -> PrimaryFactorization:
    """Factor a nonzero Gaussian integer into primary primes."""
    if z.is_zero:
        raise DomainError("cannot factor zero")
    t = 0
    w = z
    while w.is_even and not w.is_zero and not w.is_unit:
        w = GInt((w.re + w.im) // 2, (w.im - w.re) // 2)
        t += 1
    # now w is odd (possibly a unit)
    primes: list[tuple[GInt, int]] = []
    n = w.norm
    for p, e in _norm_factorization(n):
        if p == 2:  # cannot happen for odd w
            raise AssertionError("lam power left in odd part")
        if p % 4 == 3:
            primes.append((GInt(-p), e // 2))
        else:
            pi = split_prime(p)
            e1 = 0
            v = w
            while True:
                q, r = div_rem(v, pi)
                if not r.is_zero:
                    break
                v, e1 = q, e1 + 1
            if e1:
                primes.append((pi, e1))
            if e - e1:
                primes.append((primary_associate(pi.conj())[1], e - e1))
    primes.sort(key=lambda pe: (pe[0].norm, -pe[0].re, -pe[0].im))
    # recover the unit exactly from the recomposition
    prod = LAMBDA**t
    for p, e in primes:
        prod = prod * p**e
    unit = None
    for u in UNITS:
        if u * prod == z:
            unit = u
            break
    if unit is None:
        raise AssertionError(f"factorization of {z} failed to recompose")
    return PrimaryFactorization(unit=unit, lambda_exp=t, primes=tuple(primes))


def euler_phi(z: GInt) -> int:
    """The Euler function of the ideal (z): #(Z[i]/z)^x."""
    if z.is_zero:
        raise DomainError("euler_phi of zero")
    f = factor(z)
    out = 1
    if f.lambda_exp:
        out *= 2 ** (f.lambda_exp - 1)
    for p, e in f.primes:
        n = p.norm
        out *= n ** (e - 1) * (n - 1)
    return out


def moebius(z: GInt) -> int:
    """Moebius function on odd primary arguments."""
    if not (z.is_odd and is_primary(z)):
        raise DomainError("moebius expects an odd primary argument")
    f = factor(z)
    if not f.is_squarefree:
        return 0
    return -1 if len(f.primes) % 2 else 1


def mangoldt(z: GInt) -> float:
    """von Mangoldt function on odd primary arguments: log N(pi) at prime
    powers pi^k, else 0."""
    if not (z.is_odd and is_primary(z)):
        raise DomainError("mangoldt expects an odd primary argument")
    f = factor(z)
    if len(f.primes) == 1 and f.lambda_exp == 0:
        return math.log(f.primes[0][0].norm)
    return 0.0


# ---------------------------------------------------------------------------
# enumeration


@functools.lru_cache(maxsize=32)
def primary_primes_upto(norm_limit: int) -> tuple[GInt, ...]:
    """All primary primes with norm <= norm_limit, sorted by
    (norm, -re, -im).  lam is even, hence never primary, hence absent."""
    out: list[GInt] = []
    for p in sympy.primerange(2, norm_limit + 1):
        if p % 4 == 1:
            pi = split_prime(p)
            out.append(pi)
            out.append(primary_associate(pi.conj())[1])
        elif p % 4 == 3 and p * p <= norm_limit:
            out.append(GInt(-p))
    out.sort(key=lambda z: (z.norm, -z.re, -z.im))
    return tuple(out)


def enumerate_primary_primes(norm_limit: int, residue: GInt | None = None,
                             modulus: GInt = GInt(16)):
    """Yield primary primes by increasing norm, optionally filtered by a
    residue class (componentwise congruence modulo `modulus`)."""
    m = modulus.re
    if modulus.im != 0 or m <= 0:
        raise DomainError("modulus must be a positive rational integer")
    for z in primary_primes_upto(norm_limit):
        if residue is None or (
            (z.re - residue.re) % m == 0 and (z.im - residue.im) % m == 0
        ):
            yield z


@functools.lru_cache(maxsize=16)
def primary_elements_upto(norm_limit: int) -> tuple[GInt, ...]:
    """All primary (odd) elements with norm <= norm_limit, sorted by
    (norm, -re, -im). Includes 1."""
    out: list[GInt] = []
    r = math.isqrt(norm_limit)
    for a in range(-r, r + 1):
        rem = norm_limit - a * a
        if rem < 0:
            continue
        s = math.isqrt(rem)
        am = a % 4
        if am == 1:
            bs = range(-(s // 4) * 4, s + 1, 4)
        elif am == 3:
            start = -s + ((2 + s) % 4)  # smallest b >= -s with b = 2 mod 4
            bs = range(start, s + 1, 4)
        else:
            continue
        for b in bs:
            out.append(GInt(a, b))
    out.sort(key=lambda z: (z.norm, -z.re, -z.im))
    return tuple(out)


@functools.lru_cache(maxsize=16)
def ideal_generators_upto(norm_limit: int) -> tuple[GInt, ...]:
    """One canonical generator lam^e * (primary odd) per nonzero ideal of
    norm <= norm_limit, sorted by (norm, -re, -im)."""
    out: list[GInt] = []
    for z in primary_elements_upto(norm_limit):
        n = z.norm
        w = z
        while n <= norm_limit:
            out.append(w)
            w = w * LAMBDA
            n *= 2
    out.sort(key=lambda z: (z.norm, -z.re, -z.im))
    return tuple(out)
