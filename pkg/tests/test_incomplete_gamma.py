import numpy as np
import pytest

from quartic_hecke.errors import DomainError
from quartic_hecke.incomplete_gamma import mp_upper_gamma, upper_gamma, upper_gamma_array

GRID_SIGMA = (-1.0, -0.3, 0.5, 1.2, 3.0)
GRID_T = (0.0, 3.7, 15.0, 45.0)
GRID_X = (0.01, 0.5, 3.9, 4.1, 12.0, 36.0, 50.0)


@pytest.mark.parametrize("sigma", GRID_SIGMA)
@pytest.mark.parametrize("t", GRID_T)
def test_against_mpmath_grid(sigma, t):
    s = complex(sigma, t)
    xs = np.array(GRID_X)
    got = upper_gamma_array(s, xs)
    for x, g in zip(xs, got):
        ref = mp_upper_gamma(s, float(x))
        assert abs(g - ref) <= 1e-11 * max(1e-300, abs(ref))


def test_scalar_matches_array():
    s = 0.5 + 9.3j
    xs = np.array([0.2, 5.0, 33.0])
    arr = upper_gamma_array(s, xs)
    for x, v in zip(xs, arr):
        assert upper_gamma(s, float(x)) == v


def test_recurrence_identity():
    # Gamma(s+1, x) = s Gamma(s, x) + x^s e^{-x}
    rng = np.random.default_rng(5)
    for _ in range(40):
        s = complex(rng.uniform(-0.5, 2.5), rng.uniform(-20, 20))
        x = float(rng.uniform(0.05, 45.0))
        lhs = upper_gamma(s + 1, x)
        rhs = s * upper_gamma(s, x) + np.exp(s * np.log(x) - x)
        assert abs(lhs - rhs) <= 1e-10 * max(1e-300, abs(lhs))


def test_zero_argument_is_gamma():
    import scipy.special

    s = 1.7 + 2.2j
    assert abs(upper_gamma(s, 0.0) - scipy.special.gamma(s)) < 1e-12
    with pytest.raises(DomainError):
        upper_gamma(-0.5 + 0.3j, 0.0)


def test_negative_argument_rejected():
    with pytest.raises(DomainError):
        upper_gamma(1.0, -1.0)


def test_near_pole_fallback():
    for s in (complex(-1.0 + 1e-3, 0.0), complex(0.0, 1e-4), complex(-2.0, 2e-2)):
        for x in (0.3, 2.0):
            ref = mp_upper_gamma(s, x)
            assert abs(upper_gamma(s, x) - ref) <= 1e-11 * max(1e-300, abs(ref))


def test_decay_for_large_x():
    s = 0.5 + 3j
    vals = np.abs(upper_gamma_array(s, np.array([10.0, 20.0, 30.0, 40.0])))
    assert all(vals[i + 1] < vals[i] for i in range(3))
    assert vals[-1] < 1e-15


def test_empty_array():
    assert upper_gamma_array(1.0, np.array([])).size == 0
