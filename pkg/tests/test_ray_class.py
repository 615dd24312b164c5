import cmath
import collections
import random

import pytest

from quartic_hecke.errors import DomainError
from quartic_hecke.ray_class import build_group, exact_root_sum_is_zero
from quartic_hecke.symbols import reciprocity_exponent, rho
from quartic_hecke.zi import GInt, euler_phi, is_primary, primary_associate

G = build_group()


def test_order_two_ways():
    # direct count of primary residues mod 16
    direct = sum(
        1
        for a in range(16)
        for b in range(16)
        if (a % 4 == 1 and b % 4 == 0) or (a % 4 == 3 and b % 4 == 2)
    )
    assert direct == 32
    # invertible residues mod 16, one primary associate per unit orbit
    assert euler_phi(GInt(16)) // 4 == 32
    assert G.order == 32


def test_group_axioms_and_inverses():
    n = G.order
    e = G.identity
    assert all(G.class_mul(e, j) == j for j in range(n))
    for j in range(n):
        assert any(G.class_mul(j, k) == e for k in range(n))
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (rng.randrange(n) for _ in range(3))
        assert G.class_mul(G.class_mul(a, b), c) == G.class_mul(a, G.class_mul(b, c))


def test_cyclic_decomposition():
    prod = 1
    for m in G.orders:
        prod *= m
    assert prod == 32
    assert sorted(G.orders, reverse=True) == [8, 4]
    assert G.exponent == 8
    # discrete logs are a bijection onto the exponent box
    assert len(set(G._dlogs)) == 32


def test_character_count_and_distinctness():
    assert len(G.characters) == 32
    tables = {tuple(ch.exponent_of_class(c) for c in range(32)) for ch in G.characters}
    assert len(tables) == 32


def test_characters_are_homomorphisms():
    rng = random.Random(11)
    for ch in G.characters:
        for _ in range(40):
            j, k = rng.randrange(32), rng.randrange(32)
            lhs = (ch.exponent_of_class(j) + ch.exponent_of_class(k)) % G.exponent
            assert lhs == ch.exponent_of_class(G.class_mul(j, k))


def test_row_orthogonality_exact():
    for ch in G.characters:
        counts = collections.Counter(ch.exponent_of_class(c) for c in range(32))
        if ch.is_principal:
            assert counts == {0: 32}
        else:
            assert exact_root_sum_is_zero(counts, G.exponent)


def test_column_orthogonality_exact():
    for c in range(32):
        counts = collections.Counter(ch.exponent_of_class(c) for ch in G.characters)
        if c == G.identity:
            assert counts == {0: 32}
        else:
            assert exact_root_sum_is_zero(counts, G.exponent)


def test_principal_indicator():
    principal = G.principal_character()
    assert all(principal.value_of_class(c) == 1 for c in range(32))
    # averaging all characters picks out the trivial class
    for c in [G.identity, 3, 17, 30]:
        s = sum(ch.value_of_class(c) for ch in G.characters)
        if c == G.identity:
            assert s == 32
        else:
            assert abs(s) < 1e-12


def test_char_order_histogram():
    hist = collections.Counter(ch.order for ch in G.characters)
    assert hist == {1: 1, 2: 3, 4: 12, 8: 16}


def test_conjugate_character():
    for ch in G.characters:
        cc = ch.conjugate()
        for c in range(32):
            assert cmath.isclose(
                cc.value_of_class(c), ch.value_of_class(c).conjugate(), abs_tol=1e-12
            )


def test_class_of_unit_and_primary_invariance():
    rng = random.Random(23)
    for _ in range(100):
        z = GInt(2 * rng.randrange(-30, 31) + 1, 2 * rng.randrange(-30, 31))
        base = G.class_of(z)
        for u in (GInt(1), GInt(-1), GInt(0, 1), GInt(0, -1)):
            assert G.class_of(z * u) == base
        assert G.class_of(primary_associate(z)[1]) == base


def test_class_of_rejects_even():
    with pytest.raises(DomainError):
        G.class_of(GInt(1, 1))
    with pytest.raises(DomainError):
        G.class_of(GInt(2))


def test_values_are_roots_of_unity():
    for ch in G.characters:
        for c in range(32):
            v = ch.value_of_class(c)
            k = ch.exponent_of_class(c)
            assert cmath.isclose(v, cmath.exp(2j * cmath.pi * k / G.exponent), abs_tol=1e-12)


def test_reciprocity_sign_is_a_character():
    # b |-> (-1)^C(a,b) for fixed primary a must coincide with one of the
    # 32 characters (a real one of order dividing 2)
    for a in (GInt(3, 2), GInt(1, 4), GInt(-1, 2), GInt(5)):
        table = {}
        for c, (x, y) in enumerate(G.reps):
            table[c] = rho(a, GInt(x, y))
        matches = [
            ch
            for ch in G.characters
            if all(abs(ch.value_of_class(c) - table[c]) < 1e-12 for c in range(32))
        ]
        assert len(matches) == 1
        assert matches[0].order in (1, 2)
        # the parity only depends on the mod-16 class of both arguments
        for c in (0, 5, 20):
            x, y = G.reps[c]
            assert rho(a, GInt(x + 16, y)) == table[c]
            assert rho(a, GInt(x, y + 16)) == table[c]


def test_reciprocity_parity_from_norms():
    rng = random.Random(31)
    picks = []
    while len(picks) < 60:
        z = GInt(rng.randrange(-40, 41), rng.randrange(-40, 41))
        if z.is_odd and is_primary(z):
            picks.append(z)
    for _ in range(120):
        a, b = rng.choice(picks), rng.choice(picks)
        c = reciprocity_exponent(a, b)
        assert c == ((a.norm - 1) // 4) * ((b.norm - 1) // 4)
        assert rho(a, b) == (-1) ** c


def test_exact_root_sum_guard():
    with pytest.raises(DomainError):
        exact_root_sum_is_zero({0: 1}, 3)
    assert exact_root_sum_is_zero({0: 1, 4: 1}, 8)  # 1 + zeta_8^4 = 0
    assert not exact_root_sum_is_zero({0: 2, 4: 1}, 8)
