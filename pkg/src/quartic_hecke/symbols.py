"""Quartic and quadratic residue symbols on Z[i].

The fast path is a binary-Jacobi style loop: reduce the numerator modulo the
denominator, strip the unit and lam = 1+i parts with the supplementary laws

    (i / n)_4     = i^((1 - a)/2)
    (lam / n)_4   = i^((a - b - 1 - b^2)/4)         for primary n = a + bi,

then swap numerator and denominator through quartic reciprocity

    (alpha / gamma)_4 = (-1)^C(alpha, gamma) (gamma / alpha)_4,
    C(alpha, gamma)   = ((N(alpha) - 1)/4) * ((N(gamma) - 1)/4),

for coprime primary alpha, gamma.  No factorization is ever needed, so a
symbol costs about as much as a gcd.

`brute_force_symbol` is the independent oracle: factor the denominator and
evaluate a^((N(pi) - 1)/4) mod pi at every prime, matching the result against
the four units.  Small primes get a memoized table of residue exponents,
still built by modular exponentiation.

Symbols with a non-primary odd denominator are defined through the primary
associate (units in the denominator contribute a factor 1), so values depend
only on the denominator's ideal.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import DomainError
from .zi import GInt, div_rem, factor, is_primary, primary_associate

__all__ = [
    "SymbolValue",
    "quartic_symbol",
    "quadratic_symbol",
    "brute_force_symbol",
    "reciprocity_exponent",
    "rho",
    "large_sieve_ratio",
]

_UNIT_VALUES = (1 + 0j, 1j, -1 + 0j, -1j)


@dataclass(frozen=True)
class SymbolValue:
    """A residue-symbol value: zero, or i^exponent with exponent mod 4."""

    exponent: int | None  # None encodes the value 0

    @staticmethod
    def zero() -> "SymbolValue":
        return SymbolValue(None)

    @staticmethod
    def from_exponent(e: int) -> "SymbolValue":
        return SymbolValue(e % 4)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    @property
    def value(self) -> complex:
        if self.exponent is None:
            return 0j
        return _UNIT_VALUES[self.exponent]

    def conj(self) -> "SymbolValue":
        if self.exponent is None:
            return self
        return SymbolValue((-self.exponent) % 4)

    def __mul__(self, other):
        if isinstance(other, SymbolValue):
            if self.exponent is None or other.exponent is None:
                return SymbolValue(None)
            return SymbolValue((self.exponent + other.exponent) % 4)
        if isinstance(other, (int, float, complex)):
            return self.value * other
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if self.exponent is None:
            if k == 0:
                return SymbolValue(0)
            return self
        return SymbolValue((self.exponent * k) % 4)

    def __eq__(self, other):
        if isinstance(other, SymbolValue):
            return self.exponent == other.exponent
        if isinstance(other, (int, float, complex)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.exponent)

    def __repr__(self):
        if self.exponent is None:
            return "SymbolValue(0)"
        return f"SymbolValue({ {0: '1', 1: 'i', 2: '-1', 3: '-i'}[self.exponent] })"


# how many i-rotations carry an odd (re mod 4, im mod 4) class to a primary one
_ROTATIONS = {}
for _r in range(4):
    for _i in range(4):
        if (_r + _i) & 1:
            _a, _b, _k = _r, _i, 0
            while not ((_a & 3) == 1 and (_b & 3) == 0 or (_a & 3) == 3 and (_b & 3) == 2):
                _a, _b, _k = -_b & 3, _a, _k + 1
            _ROTATIONS[(_r, _i)] = _k
del _r, _i, _a, _b, _k


def _quartic_exponent(ar: int, ai: int, nr: int, ni: int):
    """Exponent e with (a/n)_4 = i^e for primary n, or None when the symbol
    vanishes.  Pure-integer inner loop; n = nr + ni*i must be primary."""
    acc = 0
    rot = _ROTATIONS
    nn = nr * nr + ni * ni
    while nn != 1:
        # a mod n, nearest rounding with ties toward -inf
        t2 = nn << 1
        qr = -((nn - ((ar * nr + ai * ni) << 1)) // t2)
        qi = -((nn - ((ai * nr - ar * ni) << 1)) // t2)
        ar -= qr * nr - qi * ni
        ai -= qr * ni + qi * nr
        if ar == 0:
            if ai == 0:
                return None
        # strip lam = 1+i
        t = 0
        while (ar + ai) & 1 == 0:
            ar, ai = (ar + ai) >> 1, (ai - ar) >> 1
            t += 1
        # rotate by i to the primary associate, k applications
        k = rot[(ar & 3, ai & 3)]
        if k == 1:
            ar, ai = -ai, ar
        elif k == 2:
            ar, ai = -ar, -ai
        elif k == 3:
            ar, ai = ai, -ar
        # a_odd = i^(4-k) * a0; supplementary laws at the current denominator
        if k:
            acc += (4 - k) * ((1 - nr) >> 1)
        if t:
            acc += t * ((nr - ni - 1 - ni * ni) >> 2)
        # reciprocity flip
        na = ar * ar + ai * ai
        if (na & 4) and (nn & 4):
            acc += 2
        ar, ai, nr, ni, nn = nr, ni, ar, ai, na
    return acc & 3


def quartic_symbol(a: GInt, n: GInt) -> SymbolValue:
    """The quartic residue symbol (a/n)_4; n must be odd and nonzero."""
    if n.is_zero or not n.is_odd:
        raise DomainError(f"denominator {n} must be odd and nonzero")
    if n.is_unit:
        return SymbolValue(0)
    if not is_primary(n):
        n = primary_associate(n)[1]
    e = _quartic_exponent(a.re, a.im, n.re, n.im)
    return SymbolValue(None) if e is None else SymbolValue(e)


def quadratic_symbol(a: GInt, n: GInt) -> SymbolValue:
    """(a/n)_2 = (a/n)_4^2, with values in {0, 1, -1}."""
    return quartic_symbol(a, n) ** 2


def reciprocity_exponent(alpha: GInt, gamma: GInt) -> int:
    """C(alpha, gamma) = ((N(alpha)-1)/4) ((N(gamma)-1)/4) for primary
    arguments; only its parity enters reciprocity."""
    if not (is_primary(alpha) and is_primary(gamma)):
        raise DomainError("reciprocity exponent expects primary arguments")
    return ((alpha.norm - 1) // 4) * ((gamma.norm - 1) // 4)


def rho(a: GInt, b: GInt) -> int:
    """rho_a(b) = (-1)^C(a,b), a quadratic character of b mod 16."""
    return -1 if reciprocity_exponent(a, b) & 1 else 1


# ---------------------------------------------------------------------------
# brute-force oracle


@functools.lru_cache(maxsize=4096)
def _split_prime_table(pi: GInt) -> tuple[int, bytes]:
    """For a split primary prime pi of norm p: (u, table) where i = u mod pi
    and table[x] is the symbol exponent of x (4 marks the zero class)."""
    p = pi.norm
    a, b = pi.re, pi.im
    u = (-a * pow(b, -1, p)) % p
    unit_images = [1 % p, u, (p - 1) % p, (p - u) % p]
    expo = (p - 1) // 4
    table = bytearray(p)
    table[0] = 4
    for x in range(1, p):
        v = pow(x, expo, p)
        table[x] = unit_images.index(v)
    return u, bytes(table)


_TABLE_NORM_LIMIT = 260000


def _prime_symbol_exponent(a: GInt, pi: GInt):
    """(a/pi)_4 exponent via modular exponentiation at a single primary
    prime pi.  None when pi divides a."""
    p = pi.norm
    if pi.im != 0:  # split (or the table-friendly) case: Z[i]/pi = F_p
        if p <= _TABLE_NORM_LIMIT:
            u, table = _split_prime_table(pi)
            x = (a.re + a.im * u) % p
            e = table[x]
            return None if e == 4 else e
        u = (-pi.re * pow(pi.im, -1, p)) % p
        x = (a.re + a.im * u) % p
        if x == 0:
            return None
        v = pow(x, (p - 1) // 4, p)
        for e, img in enumerate((1 % p, u, (p - 1) % p, (p - u) % p)):
            if v == img:
                return e
        raise AssertionError("quartic power is not a unit image")
    # inert case: pi = -q for a rational prime q = 3 mod 4, norm q^2
    q = -pi.re
    r, s = a.re % q, a.im % q
    if r == 0 and s == 0:
        return None
    # compute (r + s i)^((q^2-1)/4) mod q by square and multiply in F_{q^2}
    er, es = 1, 0
    br, bs = r, s
    k = (q * q - 1) // 4
    while k:
        if k & 1:
            er, es = (er * br - es * bs) % q, (er * bs + es * br) % q
        br, bs = (br * br - bs * bs) % q, (2 * br * bs) % q
        k >>= 1
    for e, (ir, is_) in enumerate(((1, 0), (0, 1), (q - 1, 0), (0, q - 1))):
        if er == ir % q and es == is_ % q:
            return e
    raise AssertionError("quartic power is not a unit image")


def brute_force_symbol(a: GInt, n: GInt) -> SymbolValue:
    """Oracle evaluation of (a/n)_4 by factoring n and doing modular
    exponentiation at each prime."""
    if n.is_zero or not n.is_odd:
        raise DomainError(f"denominator {n} must be odd and nonzero")
    f = factor(n)
    acc = 0
    for pi, e in f.primes:
        ee = _prime_symbol_exponent(a, pi)
        if ee is None:
            return SymbolValue(None)
        acc += ee * e
    return SymbolValue(acc % 4)


# ---------------------------------------------------------------------------
# quadratic large-sieve diagnostic


def large_sieve_ratio(m_limit: int, n_limit: int, trials: int = 20,
                      seed: int = 1) -> dict:
    """Empirical check of the quadratic large sieve over Z[i].

    For random coefficient vectors a_n, compares

        sum_{m odd squarefree, N(m) <= M} |sum_n a_n mu^2(n) (n/m)_2|^2

    against (M + N) * sum |a_n|^2 mu^2(n), where m, n run over elements
    = 1 mod 2 (odd re, even im).  Returns the worst and mean ratio.
    """
    import numpy as np

    from .zi import moebius

    def one_mod_two(limit):
        out = []
        import math

        r = math.isqrt(limit)
        for x in range(-r, r + 1):
            if x % 2 == 0:
                continue
            rem = limit - x * x
            if rem < 0:
                continue
            s = math.isqrt(rem)
            for y in range(-s - (s % 2), s + 1, 2):
                if x * x + y * y <= limit:
                    out.append(GInt(x, y))
        out.sort(key=lambda z: (z.norm, -z.re, -z.im))
        return out

    def squarefree(zs):
        keep = []
        for z in zs:
            _, pz = primary_associate(z)
            if moebius(pz) != 0:
                keep.append(z)
        return keep

    ms = squarefree(one_mod_two(m_limit))
    ns = squarefree(one_mod_two(n_limit))
    mat = np.zeros((len(ms), len(ns)))
    for im_, m in enumerate(ms):
        for in_, n in enumerate(ns):
            mat[im_, in_] = quadratic_symbol(n, m).value.real
    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(trials):
        a = rng.normal(size=len(ns)) + 1j * rng.normal(size=len(ns))
        lhs = float(np.sum(np.abs(mat @ a) ** 2))
        rhs = (m_limit + n_limit) * float(np.sum(np.abs(a) ** 2))
        ratios.append(lhs / rhs)
    return {
        "m_limit": m_limit,
        "n_limit": n_limit,
        "num_m": len(ms),
        "num_n": len(ns),
        "trials": trials,
        "seed": seed,
        "max_ratio": max(ratios),
        "mean_ratio": sum(ratios) / len(ratios),
    }
