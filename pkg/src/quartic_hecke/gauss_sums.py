"""Gauss sums of quartic and quadratic residue symbols over Z[i].

Two normalizations are supported: the field-normalized sum with additive
phase e~(kx/(c*sqrt(D_K))) and the plain sum with phase e~(kx/c), where
e~(z) = e(z + conj z) and sqrt(D_K) is frozen to 2i.  For odd c the two
differ by the character (2i/c)_l, which is checked in the tests rather than
assumed.

Direct summation runs over a Hermite-normal-form residue system mod c with
exact integer phase numerators: each term is a root of unity whose index is
an integer mod N(c), so terms are histogrammed exactly by (symbol exponent,
phase numerator) and the transcendental work is a single pass over at most
N(c) roots of unity in 80-bit extended precision (or mpmath with
precision="high").

The fast path factors the modulus, splits it into prime-power blocks via
twisted multiplicativity (cross factors (c/c')_l (c'/c)_l), strips the
coprime part of the numerator by character conjugation, and evaluates each
block from the prime-power table.  The only transcendental inputs are the
prime atoms g(1, pi), computed by a multiplicative-group walk: baby-step /
giant-step over F_p for split primes, a sequential generator walk over
F_{p^2} for inert ones.  Atoms are cached.

Note the prime-power table case with modulus pi^l, l = 2 mod 4: there the
block character is the quadratic symbol, and the value involves the
quadratic atom g_2(1, pi) (real, of modulus sqrt(N)); substituting the
quartic atom fails direct-summation checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
import sympy

from .errors import DomainError
from .symbols import quadratic_symbol, quartic_symbol
from .zi import GInt, factor, primary_associate

__all__ = [
    "SQRT_DK",
    "GaussSumValue",
    "e_tilde",
    "residue_system",
    "gauss_sum_direct",
    "gauss_sum_fast",
    "prime_power_gauss",
    "gauss_atom",
    "clear_atom_cache",
    "atom_cache_snapshot",
    "preload_atoms",
    "evict_atoms",
]

SQRT_DK = GInt(0, 2)  # frozen square root of D_K = -4

_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)
# pi to more digits than an 80-bit longdouble can hold
_PI_L = np.longdouble("3.14159265358979323846264338327950288")


@dataclass(frozen=True)
class GaussSumValue:
    value: complex
    modulus_norm: int
    method: str

    def __complex__(self) -> complex:
        # value may arrive as np.complex128 from the vectorised direct path;
        # complex() keeps downstream arithmetic free of numpy scalar types.
        return complex(self.value)

    @property
    def normalized(self) -> complex:
        """value / N(c)^(1/2)."""
        return self.value / math.sqrt(self.modulus_norm)


def e_tilde(z: complex) -> complex:
    """e(z + conj(z)) = exp(4*pi*i*Re z)."""
    return cmath.exp(4j * cmath.pi * complex(z).real)


def residue_system(c: GInt) -> Iterator[GInt]:
    """A complete residue system mod c: the HNF box {m + ni}, 0 <= m < N/g,
    0 <= n < g with g = gcd(|Re c|, |Im c|)."""
    if c == GInt(0):
        raise DomainError("no residue system mod 0")
    g = math.gcd(abs(c.re), abs(c.im))
    rows = c.norm // g
    for n in range(g):
        for m in range(rows):
            yield GInt(m, n)


def _check_modulus(c: GInt, l: int) -> None:
    if c == GInt(0) or not c.is_odd:
        raise DomainError(f"Gauss sum modulus must be odd and nonzero, got {c}")
    if l not in (2, 4):
        raise DomainError(f"symbol order must be 2 or 4, got {l}")


# ---------------------------------------------------------------------------
# direct summation


def gauss_sum_direct(
    k: GInt, c: GInt, l: int = 4, variant: str = "K", precision: str = "fast"
) -> GaussSumValue:
    _check_modulus(c, l)
    n_norm = c.norm
    if c.is_unit:
        return GaussSumValue(1 + 0j, 1, "direct")
    sym = quartic_symbol if l == 4 else quadratic_symbol
    w = k * c.conj()
    if variant == "K":
        wa, wb, kind = w.re, w.im, 0
    elif variant == "plain":
        wa, wb, kind = w.re, w.im, 1
    else:
        raise DomainError(f"unknown Gauss sum variant {variant!r}")
    hist_re = [0] * n_norm
    hist_im = [0] * n_norm
    for x in residue_system(c):
        e = sym(x, c).exponent
        if e is None:
            continue
        if kind == 0:
            ph = (wa * x.im + wb * x.re) % n_norm  # Im(w x)
        else:
            ph = (2 * (wa * x.re - wb * x.im)) % n_norm  # 2 Re(w x)
        if e == 0:
            hist_re[ph] += 1
        elif e == 1:
            hist_im[ph] += 1
        elif e == 2:
            hist_re[ph] -= 1
        else:
            hist_im[ph] -= 1
    if precision == "fast":
        value = _eval_histogram(hist_re, hist_im, n_norm)
    elif precision == "high":
        value = _eval_histogram_mp(hist_re, hist_im, n_norm)
    else:
        raise DomainError(f"unknown precision {precision!r}")
    return GaussSumValue(value, n_norm, "direct")


def _eval_histogram(hist_re, hist_im, n) -> complex:
    coef = np.array(hist_re, dtype=np.clongdouble)
    coef += 1j * np.array(hist_im, dtype=np.clongdouble)
    roots = np.exp((2j * _PI_L / n) * np.arange(n, dtype=np.longdouble))
    return complex(np.dot(coef, roots))


def _eval_histogram_mp(hist_re, hist_im, n) -> complex:
    import mpmath as mp

    with mp.workdps(50):
        total = mp.mpc(0)
        for ph in range(n):
            a, b = hist_re[ph], hist_im[ph]
            if a or b:
                total += mp.mpc(a, b) * mp.expjpi(mp.mpf(2 * ph) / n)
        return complex(total)


# ---------------------------------------------------------------------------
# prime atoms g(1, pi) via multiplicative-group walks

_ATOM_CACHE: dict[tuple[int, int, int, str], complex] = {}


def clear_atom_cache() -> None:
    _ATOM_CACHE.clear()


def atom_cache_snapshot() -> dict[tuple[int, int, int, str], complex]:
    return dict(_ATOM_CACHE)


def preload_atoms(entries: dict[tuple[int, int, int, str], complex]) -> None:
    _ATOM_CACHE.update(entries)


def evict_atoms(keys) -> None:
    """Drop specific atoms so the next request recomputes them (used by the
    disk cache to spot-check stored values against fresh evaluations)."""
    for key in keys:
        _ATOM_CACHE.pop(key, None)


def _bsgs_phase_buckets(p: int, mult: int) -> tuple[list[complex], int]:
    """Bucket sums S_t = sum_{j = t mod 4} e(mult * g^j / p) over j in
    [0, p-1), for the smallest primitive root g mod p."""
    g = sympy.ntheory.primitive_root(p)
    m = (math.isqrt(p - 1) // 4 + 1) * 4
    baby = np.empty(m, dtype=np.int64)
    x = 1
    for r in range(m):
        baby[r] = x
        x = x * g % p
    rows = (p - 2) // m + 1
    giant = np.empty(rows, dtype=np.int64)
    y = 1
    for i in range(rows):
        giant[i] = y
        y = y * x % p  # x = g^m here
    num = giant[:, None] * baby[None, :] % p
    num *= mult % p
    num %= p
    phases = np.exp((2j * np.pi / p) * num)
    jmat = np.arange(rows, dtype=np.int64)[:, None] * m + np.arange(m, dtype=np.int64)
    phases[jmat >= p - 1] = 0
    sums = [complex(phases[:, t::4].sum()) for t in range(4)]
    return sums, g


def _split_atoms(pi: GInt, variant: str) -> dict[tuple[int, int, int, str], complex]:
    a, b = pi.re, pi.im
    p = pi.norm
    if variant == "K":
        mult = (-b) % p
    elif variant == "plain":
        mult = (2 * a) % p
    elif variant == "rational":
        mult = 1
    else:
        raise DomainError(f"unknown Gauss sum variant {variant!r}")
    sums, g = _bsgs_phase_buckets(p, mult)
    c4 = quartic_symbol(GInt(g), pi).exponent
    if c4 not in (1, 3):  # pragma: no cover
        raise AssertionError("primitive root must have a primitive symbol value")
    a4 = sum(_I_POWERS[(c4 * t) % 4] * sums[t] for t in range(4))
    a2 = sum(sums[t] if t % 2 == 0 else -sums[t] for t in range(4))
    key = (pi.re, pi.im)
    return {key + (4, variant): a4, key + (2, variant): a2}


def _fq2_pow(x: tuple[int, int], e: int, p: int) -> tuple[int, int]:
    ra, rb = 1, 0
    xa, xb = x
    while e:
        if e & 1:
            ra, rb = (ra * xa - rb * xb) % p, (ra * xb + rb * xa) % p
        xa, xb = (xa * xa - xb * xb) % p, (2 * xa * xb) % p
        e >>= 1
    return ra, rb


def _fq2_generator(p: int) -> tuple[int, int]:
    order = p * p - 1
    checks = [order // r for r in sorted(sympy.factorint(order))]
    for a in range(1, p):
        for b in range(1, p):
            if all(_fq2_pow((a, b), e, p) != (1, 0) for e in checks):
                return a, b
    raise AssertionError(f"no generator of F_{p}^2 found")  # pragma: no cover


def _inert_atoms(p: int) -> dict[tuple[int, int, int, str], complex]:
    pi = GInt(-p)
    ga, gb = _fq2_generator(p)
    c4 = quartic_symbol(GInt(ga, gb), pi).exponent
    if c4 not in (1, 3):  # pragma: no cover
        raise AssertionError("generator must have a primitive symbol value")
    # K phase at x = m + ni is e(-2 pi i n / p); plain is e(-4 pi i m / p)
    ph_k = np.exp((-2j * np.pi / p) * np.arange(p))
    ph_p = np.exp((-4j * np.pi / p) * np.arange(p))
    sums_k = [0j] * 4
    sums_p = [0j] * 4
    xa, xb = 1, 0
    for j in range(p * p - 1):
        t = j & 3
        sums_k[t] += ph_k[xb]
        sums_p[t] += ph_p[xa]
        xa, xb = (xa * ga - xb * gb) % p, (xa * gb + xb * ga) % p
    out = {}
    for variant, sums in (("K", sums_k), ("plain", sums_p)):
        a4 = sum(_I_POWERS[(c4 * t) % 4] * sums[t] for t in range(4))
        a2 = sum(sums[t] if t % 2 == 0 else -sums[t] for t in range(4))
        out[(-p, 0, 4, variant)] = a4
        out[(-p, 0, 2, variant)] = a2
    return out


def gauss_atom(pi: GInt, l: int = 4, variant: str = "K") -> complex:
    """g_{K,l}(1, pi) (or the plain/rational analogue) for a primary prime."""
    key = (pi.re, pi.im, l, variant)
    hit = _ATOM_CACHE.get(key)
    if hit is not None:
        return hit
    from .zi import is_primary, is_prime

    if not (pi.is_odd and is_primary(pi) and is_prime(pi)):
        raise DomainError(f"{pi} is not an odd primary prime")
    if pi.im == 0:
        if variant == "rational":
            raise DomainError("rational-phase atoms are defined at split primes only")
        found = _inert_atoms(-pi.re)
    else:
        found = _split_atoms(pi, variant)
    # the vectorised walks can hand back numpy scalars; cache plain complex
    _ATOM_CACHE.update({k: complex(v) for k, v in found.items()})
    return _ATOM_CACHE[key]


# ---------------------------------------------------------------------------
# prime-power table and the factored fast path


def prime_power_gauss(
    pi: GInt, k_exp: int | None, l_exp: int, l: int = 4, variant: str = "K"
) -> complex:
    """Gauss sum with numerator pi^k_exp and modulus pi^l_exp, six-case
    closed form.  k_exp None encodes an identically zero numerator."""
    from .zi import is_primary, is_prime

    if not (pi.is_odd and is_primary(pi) and is_prime(pi)):
        raise DomainError(f"{pi} is not an odd primary prime")
    if l_exp < 0 or (k_exp is not None and k_exp < 0):
        raise DomainError("exponents must be non-negative")
    if l_exp == 0:
        return 1 + 0j
    n = pi.norm
    m = (l_exp * (1 if l == 4 else 2)) % 4
    if m == 0:
        # principal block character: Ramanujan-type evaluation
        if k_exp is None or k_exp >= l_exp:
            return complex(n ** (l_exp - 1) * (n - 1))
        if k_exp == l_exp - 1:
            return complex(-(n**k_exp))
        return 0j
    if k_exp is None or k_exp != l_exp - 1:
        return 0j
    scale = float(n) ** k_exp
    if m == 1:
        return scale * gauss_atom(pi, 4, variant)
    if m == 2:
        return scale * gauss_atom(pi, 2, variant)
    sign = quartic_symbol(GInt(-1), pi).value
    return scale * sign * gauss_atom(pi, 4, variant).conjugate()


def _valuation(k: GInt, pi: GInt) -> tuple[int, GInt]:
    v = 0
    while pi.divides(k):
        k = k // pi
        v += 1
    return v, k


def gauss_sum_fast(k: GInt, c: GInt, l: int = 4, variant: str = "K") -> GaussSumValue:
    _check_modulus(c, l)
    if variant not in ("K", "plain"):
        raise DomainError(f"unknown Gauss sum variant {variant!r}")
    n_norm = c.norm
    if c.is_unit:
        return GaussSumValue(1 + 0j, 1, "fast")
    sym = quartic_symbol if l == 4 else quadratic_symbol
    u, c0 = primary_associate(c)
    total = 1 + 0j
    if u != GInt(1):
        # c = conj(u) * c0, and the unit pulls out as a symbol twist
        total *= sym(u.conj(), c0).value
    blocks = factor(c0).primes
    for i in range(len(blocks)):
        pa, ea = blocks[i]
        for j in range(i + 1, len(blocks)):
            pb, eb = blocks[j]
            ex = (quartic_symbol(pa, pb).exponent + quartic_symbol(pb, pa).exponent) * ea * eb
            if l == 2:
                ex *= 2
            total *= _I_POWERS[ex % 4]
    zero = k == GInt(0)
    for pi, ell in blocks:
        if zero:
            block = prime_power_gauss(pi, None, ell, l=l, variant=variant)
        else:
            v, rest = _valuation(k, pi)
            block = prime_power_gauss(pi, v, ell, l=l, variant=variant)
            if block != 0:
                # strip the coprime part of the numerator (conjugate twist)
                e = quartic_symbol(rest, pi).exponent
                ex = -e * ell * (1 if l == 4 else 2)
                total *= _I_POWERS[ex % 4]
        if block == 0:
            return GaussSumValue(0j, n_norm, "fast")
        total *= block
    return GaussSumValue(total, n_norm, "fast")
