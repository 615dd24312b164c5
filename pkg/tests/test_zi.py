"""Tests for exact Gaussian-integer arithmetic.

Oracles here are deliberately dumb: exhaustive divisor scans, lattice walks
and unit-by-unit checks, so the fast paths in zi.py are validated against
independent computations.
"""

from __future__ import annotations

import math
import random

import pytest

from quartic_hecke.errors import DomainError
from quartic_hecke.zi import (
    GInt,
    LAMBDA,
    UNITS,
    div_rem,
    enumerate_primary_primes,
    euler_phi,
    factor,
    gcd,
    ideal_generators_upto,
    is_primary,
    is_prime,
    mangoldt,
    moebius,
    primary_associate,
    primary_elements_upto,
    primary_primes_upto,
)


def small_elements(limit):
    r = math.isqrt(limit)
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            if 0 < a * a + b * b <= limit:
                yield GInt(a, b)


# ---------------------------------------------------------------------------
# division


def test_div_rem_contract_exhaustive():
    for a in small_elements(90):
        for b in small_elements(40):
            q, r = div_rem(a, b)
            assert a == q * b + r
            assert 2 * r.norm <= b.norm


def test_div_rem_rounding_example():
    # 13/5 rounds up, 1/5 rounds down; frozen from the nearest-tie-down rule
    q, r = div_rem(GInt(5, 3), GInt(2, 1))
    assert (q, r) == (GInt(3, 0), GInt(-1, 0))


def test_div_rem_tie_goes_down():
    # (1+i)/2 has both coordinates exactly at 1/2
    q, _ = div_rem(GInt(1, 1), GInt(2, 0))
    assert q == GInt(0, 0)
    q, _ = div_rem(GInt(-1, -1), GInt(2, 0))
    assert q == GInt(-1, -1)
    q2, r2 = div_rem(GInt(3, 3), GInt(2, 0))
    assert q2 == GInt(1, 1) and r2 == GInt(1, 1)


def test_div_rem_exact():
    q, r = div_rem(GInt(13), GInt(3, -2))
    assert r.is_zero and q == GInt(3, 2)


def test_div_by_zero():
    with pytest.raises(DomainError):
        div_rem(GInt(1), GInt(0))


# ---------------------------------------------------------------------------
# gcd


def brute_gcd_norm(a: GInt, b: GInt) -> int:
    """Largest norm of a common divisor, found by scanning the lattice."""
    best = 1
    lim = min(a.norm, b.norm)
    for d in small_elements(lim):
        if d.divides(a) and d.divides(b):
            best = max(best, d.norm)
    return best


def test_gcd_against_divisor_scan():
    rng = random.Random(11)
    for _ in range(60):
        a = GInt(rng.randint(-9, 9), rng.randint(-9, 9))
        b = GInt(rng.randint(-9, 9), rng.randint(-9, 9))
        if a.is_zero or b.is_zero:
            continue
        g = gcd(a, b)
        assert g.divides(a) and g.divides(b)
        assert g.norm == brute_gcd_norm(a, b)


def test_gcd_normal_form():
    assert gcd(GInt(6, 2), GInt(4)) == GInt(-2, 2)  # lam^3
    assert gcd(GInt(0), GInt(0)) == GInt(0)
    assert gcd(GInt(5), GInt(0)) == GInt(5)
    assert gcd(GInt(0, 7), GInt(0)) == GInt(-7)  # primary-normalized
    # odd part comes back primary
    g = gcd(GInt(3, 2) * GInt(2, 3), GInt(3, 2) * GInt(7, 0))
    assert g == GInt(3, 2)


# ---------------------------------------------------------------------------
# primary structure


def test_exactly_one_primary_associate():
    for z in small_elements(200):
        if not z.is_odd:
            continue
        flags = [is_primary(u * z) for u in UNITS]
        assert sum(flags) == 1
        u, p = primary_associate(z)
        assert p == u * z and is_primary(p)


def test_primary_associate_example():
    assert primary_associate(GInt(2, 3)) == (GInt(0, -1), GInt(3, -2))


def test_primary_rejects_even():
    with pytest.raises(DomainError):
        primary_associate(GInt(1, 1))


def test_primary_products_stay_primary():
    els = [z for z in small_elements(80) if is_primary(z)]
    for a in els[:12]:
        for b in els[:12]:
            assert is_primary(a * b)


# ---------------------------------------------------------------------------
# primality and factorization


def brute_is_prime(z: GInt) -> bool:
    n = z.norm
    if n <= 1:
        return False
    for d in small_elements(n - 1):
        if d.norm > 1 and d.divides(z):
            return False
    return True


def test_is_prime_small_exhaustive():
    for z in small_elements(150):
        assert is_prime(z) == brute_is_prime(z), z


def test_factor_worked_examples():
    f = factor(GInt(13))
    assert f.unit == GInt(1) and f.lambda_exp == 0
    assert f.primes == ((GInt(3, 2), 1), (GInt(3, -2), 1))
    f = factor(GInt(0, 8))
    assert f.lambda_exp == 6 and f.primes == () and f.value == GInt(0, 8)


def test_factor_recomposition_random():
    rng = random.Random(23)
    for _ in range(120):
        z = GInt(rng.randint(-600, 600), rng.randint(-600, 600))
        if z.is_zero:
            continue
        f = factor(z)
        assert f.value == z
        assert f.unit in UNITS
        for p, e in f.primes:
            assert e >= 1 and is_primary(p) and is_prime(p)
        norms = [p.norm for p, _ in f.primes]
        assert norms == sorted(norms)


def test_factor_units():
    for u in UNITS:
        f = factor(u)
        assert f.primes == () and f.lambda_exp == 0 and f.unit == u


# ---------------------------------------------------------------------------
# multiplicative functions


def residue_system(c: GInt):
    """A complete residue system mod c by scanning a bounding box."""
    seen = {}
    n = c.norm
    for a in range(-2 * n, 2 * n + 1):
        for b in range(-2 * n, 2 * n + 1):
            r = GInt(a, b) % c
            key = (r.re, r.im)
            if key not in seen:
                seen[key] = r
            if len(seen) == n:
                return list(seen.values())
    return list(seen.values())


@pytest.mark.parametrize("c", [GInt(3, 0), GInt(1, 2) * GInt(0, -1), GInt(16), GInt(3, -2), GInt(-5, 0)])
def test_euler_phi_counts_units(c):
    res = residue_system(c)
    assert len(res) == c.norm
    count = sum(1 for r in res if gcd(r, c).is_unit)
    assert euler_phi(c) == count


def test_euler_phi_examples():
    assert euler_phi(GInt(16)) == 128
    assert euler_phi(GInt(3, -2)) == 12


def test_moebius_mangoldt():
    assert moebius(GInt(1)) == 1
    assert moebius(GInt(3, 2)) == -1
    assert moebius(GInt(3, 2) * GInt(3, -2)) == 1
    assert moebius(GInt(-3) ** 2 * GInt(1)) == 0
    assert mangoldt(GInt(-3)) == pytest.approx(math.log(9))
    assert mangoldt(GInt(-3) ** 2) == pytest.approx(math.log(9))
    assert mangoldt(GInt(3, 2) * GInt(3, -2)) == 0.0
    with pytest.raises(DomainError):
        moebius(GInt(2, 3))  # odd but not primary
    with pytest.raises(DomainError):
        mangoldt(GInt(1, 1))


# ---------------------------------------------------------------------------
# enumeration


def test_primary_primes_against_brute_scan():
    lim = 3000
    brute = sorted(
        (z for z in small_elements(lim) if is_primary(z) and brute_is_prime(z)
         and z.norm <= 150),
        key=lambda z: (z.norm, -z.re, -z.im),
    )
    fast = [z for z in primary_primes_upto(lim) if z.norm <= 150]
    assert fast == brute


def test_prime_stream_examples():
    first = list(enumerate_primary_primes(20))
    assert GInt(-3) in first and GInt(-1, 2) in first
    norms = [z.norm for z in first]
    assert norms == sorted(norms) and set(norms) == {5, 9, 13, 17}


def test_prime_stream_residue_filter():
    fam = list(enumerate_primary_primes(2000, residue=GInt(1)))
    assert all((z.re - 1) % 16 == 0 and z.im % 16 == 0 for z in fam)
    # smallest few family primes
    assert fam[0].norm == 257 and set(f.norm for f in fam[:2]) == {257}


def test_primary_elements_enumeration():
    lim = 400
    brute = sorted(
        (z for z in small_elements(lim) if is_primary(z)),
        key=lambda z: (z.norm, -z.re, -z.im),
    )
    got = list(primary_elements_upto(lim))
    assert got == brute


def test_ideal_generator_counts():
    # number of ideals of norm m is sum of chi_{-4}(d) over d | m
    gens = ideal_generators_upto(60)
    by_norm = {}
    for z in gens:
        by_norm[z.norm] = by_norm.get(z.norm, 0) + 1
    import sympy

    for m in range(1, 61):
        expected = sum({1: 1, 3: -1}.get(d % 4, 0) for d in sympy.divisors(m))
        assert by_norm.get(m, 0) == expected, m


def test_parse():
    assert GInt.parse("3-2i") == GInt(3, -2)
    assert GInt.parse("-5") == GInt(-5, 0)
    assert GInt.parse("i") == GInt(0, 1)
    assert GInt.parse("-i") == GInt(0, -1)
    assert GInt.parse("4i") == GInt(0, 4)
    assert GInt.parse("1+i") == GInt(1, 1)
    assert str(GInt(3, -2)) == "3-2i" and GInt.parse(str(GInt(-7, 11))) == GInt(-7, 11)
    with pytest.raises(DomainError):
        GInt.parse("2.5")
