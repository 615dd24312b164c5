"""Weight/test-function library checks.

The Mellin values below were derived once with mpmath's tanh-sinh
quadrature at 30 digits (an engine independent of the QUADPACK path used by
the library) and frozen; agreement is required to 1e-12.
"""

import math

import pytest

from quartic_hecke.errors import ConvergenceError, DomainError
from quartic_hecke.weights import (
    DensityTestFunction,
    WeightFunction,
    bump_weight,
    fejer_density,
    validated_derivative,
)

# independently derived (mpmath tanh-sinh, 30 digits) and frozen
MELLIN_ORACLE = {
    (1.0, 0.0): 0.60345016121893809 + 0.0j,
    (2.5, 0.0): 1.1159295663317779 + 0.0j,
    (1.0, 2.0): 0.40798783344273356 + 0.41488376544607114j,
}
LOG_MOMENT_ORACLE = 0.23927522343676617


def test_bump_mellin_matches_frozen_oracle():
    w = bump_weight()
    for (sr, si), expected in MELLIN_ORACLE.items():
        got = w.mellin(complex(sr, si))
        assert abs(got - expected) < 1e-12


def test_bump_log_moment_matches_frozen_oracle():
    assert abs(bump_weight().log_moment() - LOG_MOMENT_ORACLE) < 1e-12


def test_bump_peak_and_support():
    w = bump_weight()
    assert w(1.5) == 1.0  # exp(1 - 1/1) at the midpoint
    assert w(1.0) == 0.0 and w(2.0) == 0.0 and w(0.5) == 0.0 and w(7.0) == 0.0
    assert w.integral() == w.mellin(1).real


def test_scaling_is_exact_and_guarded():
    w = bump_weight()
    w2 = w.scaled(2.0)
    assert w2.mellin(1) == 2 * w.mellin(1)
    assert w2(1.25) == 2 * w(1.25)
    with pytest.raises(DomainError):
        w.scaled(0.0)


def test_negative_weight_rejected():
    with pytest.raises(DomainError):
        WeightFunction("bad", lambda t: math.sin(20 * t), (1.0, 2.0))


def test_bad_support_rejected():
    for support in ((0.0, 1.0), (2.0, 1.0), (-1.0, 1.0), (1.0, math.inf)):
        with pytest.raises(DomainError):
            WeightFunction("bad", lambda t: 1.0, support)


def test_density_pointwise_values():
    d = fejer_density(0.8)
    assert d.a == 0.8
    assert d.h(0.0) == pytest.approx(0.8)  # a * sinc(0)^2
    for x in (0.3, 1.7, 12.5):
        assert d.h(x) == pytest.approx(d.h(-x))
        assert d.h(x) >= 0.0
    # transform: unit-height triangle on [-a, a]
    assert d.hhat(0.0) == 1.0
    assert d.hhat(0.4) == 0.5
    assert d.hhat(0.8) == 0.0
    assert d.hhat(1.0) == 0.0 and d.hhat(-1.0) == 0.0
    assert d.integral() == 1.0


def test_density_transform_numeric_crosscheck():
    # oscillatory quadrature against the closed-form triangle; the x^-2
    # tail limits the window-400 check to ~5e-4
    d = fejer_density(0.8)
    assert abs(d.hhat_numeric(0.0) - 1.0) < 5e-4
    assert abs(d.hhat_numeric(0.4) - 0.5) < 5e-4


def test_density_guard():
    with pytest.raises(DomainError):
        DensityTestFunction(0.0)
    with pytest.raises(DomainError):
        DensityTestFunction(-1.0)


def test_validated_derivative_analytic():
    import cmath

    got = validated_derivative(lambda z: cmath.exp(2 * z), 0.3)
    assert abs(got - 2 * cmath.exp(0.6)) < 1e-9
    got2 = validated_derivative(lambda z: z**3, 2.0)
    assert abs(got2 - 12.0) < 1e-8


def test_validated_derivative_refuses_noise():
    # oscillation far below the smallest step the halving ladder reaches:
    # the sequence never stabilises and the rule must refuse to answer
    import cmath

    with pytest.raises(ConvergenceError):
        validated_derivative(lambda z: cmath.sin(1e12 * z), 0.3)
