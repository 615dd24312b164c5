"""Smooth weights and density test functions, with their transforms.

Two small families of real test functions feed every averaged experiment:

* ``WeightFunction`` — a nonnegative smooth bump ``w`` with compact support
  in (0, oo), together with its Mellin transform
  ``w_hat(s) = int_0^oo w(t) t^{s-1} dt`` computed by adaptive quadrature,
  and the logarithmic moment ``int w(u) log u du`` needed by the density
  closed form.  The default is the C-infinity bump
  ``exp(1 - 1/(1 - (2t-3)^2))`` supported on (1, 2).

* ``DensityTestFunction`` — the Fejer-type even function
  ``h(x) = a (sin(pi a x)/(pi a x))^2`` whose Fourier transform (in the
  convention ``h_hat(xi) = int h(x) e^{-2 pi i x xi} dx``) is exactly the
  triangle ``(1 - |xi|/a)_+`` supported on [-a, a].  The triangle is used in
  closed form; a slow oscillatory quadrature cross-check is kept around for
  the test suite only.

The module also houses ``validated_derivative``, a step-halved Richardson
central-difference rule used wherever a zeta derivative is needed: the
halving sequence must stabilise to the requested relative tolerance or the
call refuses to return a number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.integrate

from .errors import ConvergenceError, DomainError

__all__ = [
    "WeightFunction",
    "DensityTestFunction",
    "bump_weight",
    "fejer_density",
    "validated_derivative",
]


def _quad(fn: Callable[[float], float], lo: float, hi: float) -> float:
    val, err = scipy.integrate.quad(fn, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=300)
    if not math.isfinite(val) or err > 1e-9 * max(1.0, abs(val)):
        raise ConvergenceError(f"quadrature error estimate {err:.2e} too large")
    return val


@dataclass(frozen=True)
class WeightFunction:
    """Nonnegative smooth weight with compact support in (0, oo)."""

    name: str
    fn: Callable[[float], float]
    support: tuple[float, float]
    _mellin_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        t0, t1 = self.support
        if not (0.0 < t0 < t1 < math.inf):
            raise DomainError("support must satisfy 0 < t0 < t1 < oo")
        # spot-check nonnegativity on a fixed grid (a proof is the caller's
        # burden; a negative sample is always a bug)
        for t in np.linspace(t0, t1, 257):
            v = self.fn(float(t))
            if not math.isfinite(v) or v < -1e-12:
                raise DomainError(f"weight {self.name} is negative at t = {t}")

    def __call__(self, t: float) -> float:
        t0, t1 = self.support
        if not (t0 < t < t1):
            return 0.0
        return max(self.fn(t), 0.0)

    def mellin(self, s: complex) -> complex:
        """w_hat(s) = int w(t) t^{s-1} dt over the support."""
        s = complex(s)
        cached = self._mellin_cache.get(s)
        if cached is not None:
            return cached
        t0, t1 = self.support
        re = _quad(lambda t: self(t) * (t ** (s.real - 1.0)) * math.cos(s.imag * math.log(t)), t0, t1)
        im = _quad(lambda t: self(t) * (t ** (s.real - 1.0)) * math.sin(s.imag * math.log(t)), t0, t1)
        out = complex(re, im)
        self._mellin_cache[s] = out
        return out

    def integral(self) -> float:
        """int w(t) dt = w_hat(1)."""
        return self.mellin(1).real

    def log_moment(self) -> float:
        """int w(u) log u du (enters the one-level-density closed form)."""
        t0, t1 = self.support
        return _quad(lambda t: self(t) * math.log(t), t0, t1)

    def scaled(self, c: float) -> "WeightFunction":
        """The weight c*w — used to check that averaged ratios are scale-free."""
        if not (c > 0):
            raise DomainError("scale factor must be positive")
        base = self.fn
        return WeightFunction(f"{self.name}x{c:g}", lambda t: c * base(t), self.support)


def bump_weight() -> WeightFunction:
    """The default C-infinity bump on (1, 2), peak value 1 at t = 3/2."""

    def fn(t: float) -> float:
        u = 2.0 * t - 3.0
        if abs(u) >= 1.0:
            return 0.0
        return math.exp(1.0 - 1.0 / (1.0 - u * u))

    return WeightFunction("bump12", fn, (1.0, 2.0))


@dataclass(frozen=True)
class DensityTestFunction:
    """h(x) = a sinc^2(a x) with triangle Fourier transform on [-a, a]."""

    a: float

    def __post_init__(self) -> None:
        if not (0.0 < self.a < math.inf):
            raise DomainError("support parameter a must be positive and finite")

    def h(self, x):
        # np.sinc(z) = sin(pi z)/(pi z), so this is a (sin(pi a x)/(pi a x))^2;
        # accepts scalars or arrays alike
        s = np.sinc(self.a * np.asarray(x, dtype=np.float64))
        out = self.a * s * s
        return float(out) if out.ndim == 0 else out

    def hhat(self, xi: float) -> float:
        """Exact transform: the unit-height triangle supported on [-a, a]."""
        return max(0.0, 1.0 - abs(xi) / self.a)

    def hhat_numeric(self, xi: float, window: float = 400.0) -> float:
        """Oscillatory-quadrature cross-check of hhat (slow, test use only).

        h decays only like x^-2, so the truncation tail is ~ 1/(pi^2 a T);
        callers must budget tolerance accordingly.
        """
        import warnings

        with warnings.catch_warnings():
            # the x^-2 tail makes QUADPACK grumble about roundoff long after
            # the answer is good to the ~1/(pi^2 a T) truncation level
            warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
            val, _ = scipy.integrate.quad(
                self.h, 0.0, window, weight="cos", wvar=2.0 * math.pi * xi, limit=2000
            )
        return 2.0 * val

    def integral(self) -> float:
        """int h(x) dx = hhat(0) = 1 by construction."""
        return self.hhat(0.0)


def fejer_density(a: float = 0.8) -> DensityTestFunction:
    return DensityTestFunction(a)


def validated_derivative(
    f: Callable[[complex], complex],
    s: complex,
    rel_tol: float = 1e-8,
    h0: float = 1e-3,
    max_halvings: int = 12,
) -> complex:
    """f'(s) by Richardson-extrapolated central differences.

    The step is halved until two successive extrapolated values agree to
    rel_tol; a sequence that never stabilises raises instead of returning a
    number of unknown quality.
    """
    s = complex(s)
    h = float(h0)
    prev_r: complex | None = None
    d_prev = (f(s + h) - f(s - h)) / (2.0 * h)
    for _ in range(max_halvings):
        h *= 0.5
        d = (f(s + h) - f(s - h)) / (2.0 * h)
        r = (4.0 * d - d_prev) / 3.0
        if prev_r is not None and abs(r - prev_r) <= rel_tol * max(abs(r), 1e-300):
            return r
        prev_r = r
        d_prev = d
    raise ConvergenceError(
        f"derivative at {s} did not stabilise to {rel_tol:g} in {max_halvings} halvings"
    )
