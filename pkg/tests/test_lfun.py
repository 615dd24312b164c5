"""Zeta evaluators, the quartic Hecke L-functions, and their zeros."""

import cmath
import io
import math

import mpmath as mp
import numpy as np
import pytest

from quartic_hecke.errors import DomainError
from quartic_hecke.gauss_sums import residue_system
from quartic_hecke.lfun import (
    HeckeLFunction,
    RationalQuarticL,
    dedekind_zeta,
    family_conductors,
    hecke_l,
    riemann_zeta_value,
    root_number,
    zeta_k_ideal_sum,
    zeta_kj_log_derivative,
)
from quartic_hecke.symbols import quartic_symbol
from quartic_hecke.zi import GInt


# ---------------------------------------------------------------------------
# zeta


def test_dedekind_zeta_at_two_against_ideal_sum():
    fast = dedekind_zeta(2.0)
    oracle, tail = zeta_k_ideal_sum(2.0, 400000)
    assert abs(fast - oracle) <= tail
    assert abs(fast - 1.5067030099) < 1e-6


def test_dedekind_zeta_oracle_other_exponent():
    fast = dedekind_zeta(1.7)
    oracle, tail = zeta_k_ideal_sum(1.7, 400000)
    assert abs(fast - oracle) <= tail


def test_ramified_factor_removal():
    s = complex(1.8, -0.6)
    z = dedekind_zeta(s)
    zj = dedekind_zeta(s, omit_lambda_factor=True)
    assert abs(zj - z * (1 - 2**-s)) < 1e-12 * abs(z)
    r = riemann_zeta_value(2.0, omit_lambda_factor=True)
    assert abs(r - math.pi**2 / 8) < 1e-12


def test_zeta_pole_guards():
    for fn in (dedekind_zeta, riemann_zeta_value, zeta_kj_log_derivative):
        with pytest.raises(DomainError):
            fn(1)
    with pytest.raises(DomainError):
        zeta_k_ideal_sum(1.0, 100)
    with pytest.raises(DomainError):
        zeta_k_ideal_sum(0.9, 100)


def test_log_derivative_matches_finite_difference():
    s = 2.0
    h = 1e-6

    def f(z):
        return dedekind_zeta(z, omit_lambda_factor=True)

    fd = (f(s + h) - f(s - h)) / (2 * h * f(s))
    assert abs(zeta_kj_log_derivative(s) - fd) < 1e-7


# ---------------------------------------------------------------------------
# family bookkeeping


def test_family_conductors_small():
    fam = family_conductors(1200)
    assert fam == [GInt(1, 16), GInt(1, -16), GInt(-31, 0)]
    for p in fam:
        assert (p.re - 1) % 16 == 0 and p.im % 16 == 0


def test_family_rejects_outsiders():
    for bad in (GInt(3, 2), GInt(1, 4), GInt(5, 16), GInt(9, 4)):
        with pytest.raises(DomainError):
            HeckeLFunction(bad)
    with pytest.raises(DomainError):
        root_number(GInt(7, 2))
    with pytest.raises(DomainError):
        RationalQuarticL(GInt(-31))  # inert: no rational restriction


def test_root_numbers_unit_modulus_and_conjugation():
    for pi in family_conductors(4000):
        eps = root_number(pi)
        assert abs(abs(eps) - 1) < 1e-10
        assert abs(root_number(pi.conj()) - eps.conjugate()) < 1e-12


# ---------------------------------------------------------------------------
# Dirichlet coefficients


def test_coefficients_small_norms_by_hand():
    pi = GInt(1, 16)
    L = HeckeLFunction(pi)
    ns, vals = L.coefficients(100)
    a = dict(zip(ns.tolist(), vals.tolist()))
    assert a[1] == 1.0
    # norm 5: the two primary elements above 5
    expect5 = sum(
        1j ** quartic_symbol(z, pi).exponent for z in (GInt(-1, 2), GInt(-1, -2))
    )
    assert abs(a[5] - expect5) < 1e-14
    # norm 9: only the inert prime ideal (3)
    expect9 = 1j ** quartic_symbol(GInt(-3), pi).exponent
    assert abs(a[9] - expect9) < 1e-14
    # multiplicativity across coprime norms (a_5 and a_9 are both nonzero)
    assert abs(a[45] - a[5] * a[9]) < 1e-13
    assert abs(a.get(65, 0j) - a[5] * a.get(13, 0j)) < 1e-13


def test_coefficients_ramified_doubling():
    L = HeckeLFunction(GInt(1, 16))
    ns, vals = L.coefficients(200)
    a = dict(zip(ns.tolist(), vals.tolist()))
    for n in range(1, 100, 2):
        lhs = a.get(2 * n, 0.0)
        rhs = a.get(n, 0.0)
        assert abs(lhs - rhs) < 1e-14


def test_coefficient_magnitude_vs_divisor_count():
    L = HeckeLFunction(GInt(1, 16))
    ns, vals = L.coefficients(120)
    counts = np.zeros(121)
    for d in range(1, 121, 2):
        counts[d::d] += 1 if d % 4 == 1 else -1
    # b_K(n): ideal counts; extend by the ramified prime
    b = np.zeros(121)
    for n in range(1, 121):
        m = n
        while m % 2 == 0:
            m //= 2
        b[n] = counts[m]
    for n, v in zip(ns.tolist(), vals.tolist()):
        assert abs(v) <= b[n] + 1e-12


# ---------------------------------------------------------------------------
# L-values


def test_afe_matches_plain_series_in_absolute_region():
    L = HeckeLFunction(GInt(1, 16))
    assert abs(L.value(2.0) - L.series_value(2.0, 300000)) < 1e-8


def test_series_rejects_critical_strip():
    L = HeckeLFunction(GInt(1, 16))
    with pytest.raises(DomainError):
        L.series_value(0.8, 1000)


def test_afe_split_independence():
    L = HeckeLFunction(GInt(1, 16))
    assert L.self_check(0.5) < 1e-10
    assert L.self_check(2.0) < 1e-8
    assert L.self_check(complex(0.5, 14.2)) < 1e-6


def test_completed_reality_on_critical_line():
    L = HeckeLFunction(GInt(1, 16))
    phase = cmath.exp(-0.5j * cmath.phase(L.eps))
    for t in (0.0, 0.7, 5.3):
        v = phase * L.completed(complex(0.5, t))
        assert abs(v.imag) < 1e-10 * abs(v)
        assert abs(v.real - L.z_value(t)) < 1e-12 * abs(v)


def test_hecke_l_wrapper_dispatch():
    pi = GInt(1, 16)
    a = hecke_l(pi, 2.0)
    b = hecke_l(pi, 2.0, method="series", norm_cap=300000)
    assert abs(a - b) < 1e-8
    with pytest.raises(DomainError):
        hecke_l(pi, 2.0, method="nope")


def _high_precision_completed(L, s, dps):
    """Real-split smoothed identity at elevated precision, with the root
    number rebuilt from an exact integer phase histogram."""
    pi, N = L.pi, L.norm
    hist: dict[int, tuple[int, int]] = {}
    w = pi.conj()
    for x in residue_system(pi):
        e = quartic_symbol(x, pi).exponent
        if e is None:
            continue
        num = (w.re * x.im + w.im * x.re) % N
        cr, ci = hist.get(num, (0, 0))
        dr, di = [(1, 0), (0, 1), (-1, 0), (0, -1)][e]
        hist[num] = (cr + dr, ci + di)
    with mp.workdps(dps):
        eps = mp.mpc(0)
        for num, (cr, ci) in hist.items():
            eps += mp.mpc(cr, ci) * mp.expjpi(mp.mpf(2 * num) / N)
        eps /= mp.sqrt(N)
        q = mp.sqrt(4 * N) / (2 * mp.pi)
        t = abs(complex(s).imag)
        cap = int(float(q) * (60 + 1.6 * t)) + 1
        ns, av = L.coefficients(cap)
        tot = mp.mpc(0)
        ms = mp.mpc(s)
        for n, aval in zip(ns.tolist(), av.tolist()):
            am = mp.mpc(aval)
            tot += am * mp.power(q / n, ms) * mp.gammainc(ms, a=n / q, b=mp.inf)
            tot += (
                eps
                * mp.conj(am)
                * mp.power(q / n, 1 - ms)
                * mp.gammainc(1 - ms, a=n / q, b=mp.inf)
            )
        return complex(tot)


@pytest.mark.parametrize("t,dps", [(14.2, 60), (33.3, 85)])
def test_completed_against_high_precision_reference(t, dps):
    # the rotated kernels must reproduce the (cancellation-heavy) real-split
    # value; at t = 33.3 the plain double route would have no digits left
    L = HeckeLFunction(GInt(1, 16))
    s = complex(0.5, t)
    ref = _high_precision_completed(L, s, dps)
    assert abs(L.completed(s) - ref) < 1e-6 * abs(ref)


# ---------------------------------------------------------------------------
# zeros


def test_zero_scan_certified():
    L = HeckeLFunction(GInt(1, 16))
    zl = L.find_zeros(10.0)
    assert zl.conductor_norm == 257
    assert zl.search_height == 10.0
    assert not zl.suspected_missing
    assert list(zl.ordinates) == sorted(zl.ordinates)
    assert len(zl.ordinates) == len(set(zl.ordinates)) == len(zl.brackets)
    for g, (a, b) in zip(zl.ordinates, zl.brackets):
        assert a <= g <= b and b - a <= 1e-4
        assert L.z_value(a) * L.z_value(b) < 0
        local = max(abs(L.z_value(g + d)) for d in (-0.3, 0.3))
        assert abs(L.z_value(g)) < 1e-4 * local


def test_zero_mirror_under_conjugation():
    quartic = HeckeLFunction(GInt(1, 16))
    dual = HeckeLFunction(GInt(1, -16))
    a = np.array(quartic.find_zeros(10.0).ordinates)
    b = -np.array(dual.find_zeros(10.0).ordinates)[::-1]
    assert len(a) == len(b)
    assert np.max(np.abs(a - b)) < 1e-4


def test_zero_csv_export():
    L = HeckeLFunction(GInt(1, 16))
    zl = L.find_zeros(4.0)
    buf = io.StringIO()
    zl.to_csv(buf)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "conductor,gamma"
    assert len(lines) == len(zl.ordinates) + 1
    got = [float(ln.split(",")[1]) for ln in lines[1:]]
    assert np.allclose(got, zl.ordinates, atol=1e-9)
    assert all(ln.split(",")[0] == "257" for ln in lines[1:])


def test_find_zeros_rejects_bad_height():
    with pytest.raises(DomainError):
        HeckeLFunction(GInt(1, 16)).find_zeros(-2.0)


# ---------------------------------------------------------------------------
# rational restriction


def test_rational_character_table():
    R = RationalQuarticL(GInt(1, 16))
    chi = R.chi_table(2 * R.p + 10)
    assert chi[R.p] == 0
    assert chi[R.p - 1] == 1  # even character
    ref = chi[1 : R.p]
    assert np.allclose(chi[R.p + 1 : 2 * R.p], ref)  # period p
    for m, n in [(2, 3), (5, 7), (4, 9), (10, 11)]:
        assert abs(chi[m * n] - chi[m] * chi[n]) < 1e-13
    assert any(abs(v - 1j) < 1e-12 for v in chi[1:50])  # genuinely quartic
    assert abs(abs(R.eps) - 1) < 1e-12


def test_rational_afe_against_hurwitz_zeta():
    R = RationalQuarticL(GInt(1, 16))
    chi = R.chi_table(R.p)

    def hurwitz(s):
        with mp.workdps(30):
            tot = mp.mpc(0)
            for r in range(1, R.p):
                if chi[r]:
                    tot += mp.mpc(chi[r]) * mp.zeta(mp.mpc(s), mp.mpf(r) / R.p)
            return complex(mp.power(R.p, -mp.mpc(s)) * tot)

    for s in (0.5, 2.0, complex(0.5, 9.0)):
        assert abs(R.value(s) - hurwitz(s)) < 1e-10


def test_rational_split_independence_and_series():
    R = RationalQuarticL(GInt(1, 16))
    assert R.self_check(0.5) < 1e-10
    assert R.self_check(complex(0.5, 9.0)) < 1e-8
    assert abs(R.value(2.0) - R.series_value(2.0, 400000)) < 1e-10
    with pytest.raises(DomainError):
        R.series_value(0.5, 100)
