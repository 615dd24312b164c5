import cmath
import math
import random

import pytest

from quartic_hecke.errors import DomainError
from quartic_hecke.gauss_sums import (
    SQRT_DK,
    clear_atom_cache,
    e_tilde,
    gauss_atom,
    gauss_sum_direct,
    gauss_sum_fast,
    prime_power_gauss,
    residue_system,
)
from quartic_hecke.symbols import quadratic_symbol, quartic_symbol
from quartic_hecke.zi import GInt, gcd, primary_primes_upto

ONE = GInt(1)


def all_odd_moduli(limit):
    out = []
    s = int(math.isqrt(limit))
    for a in range(-s, s + 1):
        for b in range(-s, s + 1):
            c = GInt(a, b)
            if c != GInt(0) and c.is_odd and c.norm <= limit:
                out.append(c)
    return out


def test_nine_term_oracle_value():
    # frozen output of the independent 9-term summation below
    got = gauss_sum_direct(ONE, GInt(-3), l=4, variant="plain")
    assert got.modulus_norm == 9
    assert abs(got.value - (-3)) < 1e-12
    assert abs(gauss_sum_direct(ONE, GInt(-3)).value - 3) < 1e-12
    manual = 0
    count = 0
    for x in residue_system(GInt(-3)):
        count += 1
        s = quartic_symbol(x, GInt(-3))
        if s.exponent is None:
            continue
        manual += s.value * e_tilde(complex(x) / (-3))
    assert count == 9
    assert abs(manual - got.value) < 1e-12


def test_unit_modulus_convention():
    for u in (GInt(1), GInt(-1), GInt(0, 1), GInt(0, -1)):
        assert gauss_sum_direct(GInt(7, 2), u).value == 1
        assert gauss_sum_fast(GInt(7, 2), u).value == 1


def test_residue_system_is_complete():
    for c in (GInt(-3), GInt(3, 2), GInt(-3, -4), GInt(5, 12), GInt(7, 4)):
        reps = list(residue_system(c))
        assert len(reps) == c.norm
        seen = {r % c for r in reps}
        assert len(seen) == c.norm  # pairwise distinct mod c


def test_direct_rejects_bad_inputs():
    with pytest.raises(DomainError):
        gauss_sum_direct(ONE, GInt(1, 1))
    with pytest.raises(DomainError):
        gauss_sum_direct(ONE, GInt(0))
    with pytest.raises(DomainError):
        gauss_sum_direct(ONE, GInt(3), l=3)
    with pytest.raises(DomainError):
        gauss_sum_direct(ONE, GInt(3), variant="??")
    with pytest.raises(DomainError):
        gauss_sum_direct(ONE, GInt(3), precision="??")


def test_atoms_match_direct_summation():
    for pi in primary_primes_upto(300):
        for l in (2, 4):
            for variant in ("K", "plain"):
                direct = gauss_sum_direct(ONE, pi, l=l, variant=variant).value
                atom = gauss_atom(pi, l, variant)
                assert abs(direct - atom) <= 1e-11 * max(1.0, abs(direct))


def test_fast_equals_direct_small_moduli():
    rng = random.Random(1723)
    combos = [(4, "K"), (2, "K"), (4, "plain"), (2, "plain")]
    for idx, c in enumerate(all_odd_moduli(200)):
        k = GInt(rng.randrange(-40, 41), rng.randrange(-40, 41))
        l, variant = combos[idx % 4]
        d = gauss_sum_direct(k, c, l=l, variant=variant).value
        f = gauss_sum_fast(k, c, l=l, variant=variant).value
        assert abs(d - f) <= 1e-9 * max(1.0, abs(d))


def test_fast_equals_direct_composite_moduli():
    cases = [
        (GInt(3, 2) ** 2 * GInt(-1, 2), GInt(4, 1)),
        (GInt(-3) * GInt(3, 2), GInt(0)),
        (GInt(-1, 2) ** 3, GInt(-1, 2) * GInt(7)),
        (GInt(0, 1) * GInt(3, 2) * GInt(-3), GInt(2, 3)),
        (GInt(-1) * GInt(-1, 2) ** 2, GInt(-1, 2)),
    ]
    for c, k in cases:
        for l in (4, 2):
            d = gauss_sum_direct(k, c, l=l).value
            f = gauss_sum_fast(k, c, l=l).value
            assert abs(d - f) <= 1e-9 * max(1.0, abs(d))


def test_prime_power_table_against_direct():
    for pi in primary_primes_upto(130):
        n = pi.norm
        ell = 1
        while n**ell <= 1500:
            mod = pi**ell
            for k in range(0, ell + 2):
                d = gauss_sum_direct(pi**k, mod).value
                t = prime_power_gauss(pi, k, ell)
                assert abs(d - t) <= 1e-9 * max(1.0, abs(d)), (pi, k, ell)
            # zero numerator matches the None convention
            d0 = gauss_sum_direct(GInt(0), mod).value
            t0 = prime_power_gauss(pi, None, ell)
            assert abs(d0 - t0) <= 1e-9 * max(1.0, abs(d0))
            ell += 1


def test_prime_power_closed_form_cases():
    pi = GInt(3, 2)
    n = pi.norm
    assert prime_power_gauss(pi, 3, 4) == -(n**3)
    assert prime_power_gauss(pi, 4, 4) == n**3 * (n - 1)  # phi_K(pi^4)
    assert prime_power_gauss(pi, 0, 2) == 0
    assert prime_power_gauss(pi, 7, 3) == 0
    assert abs(prime_power_gauss(pi, 0, 1) - gauss_atom(pi)) == 0


def test_prime_power_quadratic_block_is_real():
    # modulus pi^2: the block character is quadratic and the value real
    for pi in (GInt(-1, 2), GInt(3, 2), GInt(1, 4)):
        v = prime_power_gauss(pi, 1, 2)
        assert abs(v.imag) < 1e-10
        assert abs(abs(v) - pi.norm ** 1.5) < 1e-8


def test_rel1_numerator_twist():
    rng = random.Random(405)
    c = GInt(3, 2) * GInt(-3)
    for _ in range(25):
        r = GInt(rng.randrange(-30, 31), rng.randrange(-30, 31))
        s = GInt(rng.randrange(-30, 31), rng.randrange(-30, 31))
        if s == GInt(0) or not gcd(s, c).is_unit:
            continue
        lhs = gauss_sum_direct(r * s, c).value
        rhs = quartic_symbol(s, c).value.conjugate() * gauss_sum_direct(r, c).value
        assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs))


def test_rel2_twisted_multiplicativity():
    rng = random.Random(406)
    pairs = [
        (GInt(3, 2), GInt(-1, 2)),
        (GInt(-3), GInt(1, 4)),
        (GInt(-1, 2) ** 2, GInt(3, 2)),
        (GInt(5, 2), GInt(-3, 2)),
    ]
    for c, cp in pairs:
        r = GInt(rng.randrange(-20, 21), rng.randrange(-20, 21))
        lhs = gauss_sum_direct(r, c * cp).value
        cross = (quartic_symbol(c, cp) * quartic_symbol(cp, c)).value
        rhs = cross * gauss_sum_direct(r, c).value * gauss_sum_direct(r, cp).value
        assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs))


def test_rel3_reciprocity_form():
    from quartic_hecke.symbols import reciprocity_exponent

    for c, cp in [(GInt(3, 2), GInt(-1, 2)), (GInt(-3), GInt(3, 2)), (GInt(1, 4), GInt(-3))]:
        r = GInt(2, 1)
        lhs = gauss_sum_direct(r, c * cp).value
        sign = (-1) ** reciprocity_exponent(cp, c)
        rhs = sign * gauss_sum_direct(r * cp * cp, c).value * gauss_sum_direct(r, cp).value
        assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs))


def test_field_vs_plain_twist():
    for c in (GInt(3, 2), GInt(-3), GInt(5, 4), GInt(-7, 2), GInt(-3, -4)):
        for l in (4, 2):
            sym = quartic_symbol if l == 4 else quadratic_symbol
            gK = gauss_sum_direct(ONE, c, l=l).value
            gp = gauss_sum_direct(ONE, c, l=l, variant="plain").value
            assert abs(gK - sym(SQRT_DK, c).value * gp) < 1e-9


def test_modulus_bounds():
    from quartic_hecke.zi import factor, primary_associate

    rng = random.Random(77)
    for c in all_odd_moduli(150):
        r = GInt(rng.randrange(-10, 11), rng.randrange(-10, 11))
        v = gauss_sum_direct(r, c)
        root = math.sqrt(c.norm)
        if c.is_unit or gcd(r, c).is_unit:
            # the sqrt(N) bound requires a coprime numerator
            assert abs(v.value) <= root + 1e-9
            assert abs(v.normalized) <= 1 + 1e-12
            if factor(primary_associate(c)[1]).is_squarefree:
                assert abs(abs(v.value) - root) < 1e-9 * root


def test_associate_modulus_twist():
    c0 = GInt(3, 2) * GInt(-3)
    k = GInt(5, 1)
    base = gauss_sum_direct(k, c0).value
    for u in (GInt(0, 1), GInt(-1), GInt(0, -1)):
        lhs = gauss_sum_direct(k, u * c0).value
        assert abs(lhs - quartic_symbol(u, c0).value * base) < 1e-9


def test_numerator_associate_twist():
    c = GInt(3, 2) * GInt(-1, 2)
    k = GInt(4, 1)
    base = gauss_sum_direct(k, c).value
    i_twist = quartic_symbol(GInt(0, 1), c).value.conjugate()
    assert abs(gauss_sum_direct(k * GInt(0, 1), c).value - i_twist * base) < 1e-9


def test_high_precision_agrees():
    c = GInt(3, 2) ** 2 * GInt(-1, 2)
    fast = gauss_sum_direct(GInt(2), c).value
    high = gauss_sum_direct(GInt(2), c, precision="high").value
    assert abs(fast - high) < 1e-12 * max(1.0, abs(high))


def test_prime_power_rejects_non_primes():
    with pytest.raises(DomainError):
        prime_power_gauss(GInt(9), 0, 1)
    with pytest.raises(DomainError):
        prime_power_gauss(GInt(2, 3), 0, 1)  # prime but not primary
    with pytest.raises(DomainError):
        gauss_atom(GInt(3))  # associate of a prime, not primary


def test_atom_cache_stability():
    pi = GInt(3, 2)
    first = gauss_atom(pi)
    again = gauss_atom(pi)
    assert first == again
    clear_atom_cache()
    assert gauss_atom(pi) == first
