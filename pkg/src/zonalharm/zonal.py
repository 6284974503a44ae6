"""Spherical-harmonic expansion of zonal functions from Taylor data.

A zonal function ``f(xi) = phi((xi|eta))`` with absolutely convergent Taylor
series ``phi(t) = sum_n a_n t^n`` on ``[-1, 1]`` expands as

    f(xi) = Gamma(a+1) sum_m f_m dim H^m Z^m_eta(xi),
    f_m   = sum_k phi^{(m+2k)}(0) / (2^{m+2k} k! Gamma(a+m+k+1)),

with ``phi^{(n)}(0) = n! a_n``.  The plane wave ``e^{i r t}`` is the
built-in instance whose coefficients are spherical Bessel functions.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from ._gamma import gamma_float, rising
from .bessel import spherical_j
from .gegenbauer import gegenbauer_at_one, gegenbauer_values
from .harmonic import check_alpha, dim_for_alpha, harmonic_dim
from .polyalg import UnitVector, to_rational

__all__ = [
    "InsufficientTaylorData",
    "ZonalProfile",
    "ZonalExpansion",
    "expand",
    "evaluate_expansion",
    "plane_wave_coefficients",
    "gegenbauer_integral_coefficient",
]

INNER_RTOL = 1e-16
EXACT_WEIGHT_LIMIT = 30
MAX_TAYLOR_INDEX = 20_000


class InsufficientTaylorData(ValueError):
    def __init__(self, message: str, achievable_m: int):
        super().__init__(f"{message} (largest achievable M is {achievable_m})")
        self.achievable_m = achievable_m


@dataclass(frozen=True)
class ZonalProfile:
    """Truncated Taylor data ``taylor[n] = phi^{(n)}(0) / n!`` of a profile.

    ``terminating`` marks polynomial profiles whose coefficients past the end
    are exactly zero.  ``tail_bound`` bounds ``sum_{n >= len(taylor)} |a_n|``.
    Profiles known in closed form carry ``coefficient_fn(n) -> a_n`` so that
    :func:`expand` can read past the stored data.
    """

    taylor: tuple[complex, ...]
    evaluator: Callable[[float], complex] | None = field(default=None, compare=False)
    terminating: bool = False
    tail_bound: float = math.inf
    name: str = "custom"
    coefficient_fn: Callable[[int], complex] | None = field(default=None, compare=False)

    def coefficient(self, n: int) -> complex | None:
        """``a_n``, or None when the data does not reach ``n``."""
        if n < len(self.taylor):
            return self.taylor[n]
        if self.terminating:
            return 0j
        if self.coefficient_fn is not None and n <= MAX_TAYLOR_INDEX:
            return complex(self.coefficient_fn(n))
        return None

    def __post_init__(self):
        object.__setattr__(self, "taylor", tuple(complex(c) for c in self.taylor))
        if not self.taylor:
            raise ValueError("profile needs at least one Taylor coefficient")
        if self.terminating:
            object.__setattr__(self, "tail_bound", 0.0)
        if not all(math.isfinite(abs(c)) for c in self.taylor):
            raise ValueError("Taylor coefficients must be finite")

    @property
    def absolute_sum(self) -> float:
        """``sum |a_n|`` over the stored data plus the tail bound."""
        return math.fsum(abs(c) for c in self.taylor) + self.tail_bound

    def __call__(self, t: float) -> complex:
        if self.evaluator is not None:
            return complex(self.evaluator(t))
        acc = 0j
        for c in reversed(self.taylor):
            acc = acc * t + c
        return acc

    # ---- builtin profiles ------------------------------------------------

    @classmethod
    def constant(cls, value: complex) -> "ZonalProfile":
        return cls((complex(value),), lambda t: complex(value), terminating=True, name="constant")

    @classmethod
    def polynomial(cls, coefficients: Sequence[complex]) -> "ZonalProfile":
        return cls(tuple(coefficients), terminating=True, name="polynomial")

    @classmethod
    def monomial(cls, l: int) -> "ZonalProfile":
        return cls.polynomial([0] * l + [1])

    @classmethod
    def plane_wave(cls, r: float, n_terms: int | None = None) -> "ZonalProfile":
        """``phi(t) = e^{i r t}``, ``a_n = (i r)^n / n!``."""
        r = float(r)
        if n_terms is None:
            n_terms = _terms_for_exponential(abs(r))
        coeffs = []
        c = 1 + 0j
        for n in range(n_terms):
            coeffs.append(c)
            c = c * 1j * r / (n + 1)
        tail = abs(c) * math.exp(abs(r))

        def coefficient_fn(n: int) -> complex:
            if r == 0.0:
                return 0j
            mag = math.exp(n * math.log(abs(r)) - math.lgamma(n + 1))
            return mag * (1j if r > 0 else -1j) ** (n % 4)

        return cls(
            tuple(coeffs),
            lambda t: cmath.exp(1j * r * t),
            tail_bound=tail,
            name=f"planewave(r={r!r})",
            coefficient_fn=coefficient_fn,
        )

    @classmethod
    def generating(cls, alpha, r: float, n_terms: int = 400) -> "ZonalProfile":
        """``phi(t) = (1 - 2 r t + r^2)^{-alpha}`` for ``|r| < 1``."""
        a = float(to_rational(alpha))
        r = float(r)
        if not abs(r) < 1:
            raise ValueError(f"need |r| < 1, got {r}")
        scale = (1.0 + r * r) ** (-a)
        u = 2.0 * r / (1.0 + r * r)
        coeffs = []
        c = scale
        for n in range(n_terms):
            coeffs.append(c)
            c = c * (a + n) * u / (n + 1)
        # (a)_n u^n / n! is eventually dominated by a geometric series of ratio |u|
        ratio = abs(u) * (a + n_terms) / (n_terms + 1)
        tail = abs(c) / (1 - ratio) if ratio < 1 else math.inf

        def coefficient_fn(n: int) -> complex:
            if u == 0.0:
                return 0j
            mag = math.exp(math.lgamma(a + n) - math.lgamma(a) - math.lgamma(n + 1) + n * math.log(abs(u)))
            return scale * mag * (1 if u > 0 or n % 2 == 0 else -1)

        return cls(
            tuple(coeffs),
            lambda t: (1.0 - 2.0 * r * t + r * r) ** (-a),
            tail_bound=tail,
            name=f"generating(alpha={alpha}, r={r!r})",
            coefficient_fn=coefficient_fn,
        )

    @classmethod
    def from_taylor_lines(cls, lines: Sequence[str], terminating: bool = True) -> "ZonalProfile":
        """One coefficient per line as ``re im`` (``im`` optional)."""
        coeffs = []
        for i, line in enumerate(lines):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) > 2:
                raise ValueError(f"line {i + 1}: expected 're im', got {line!r}")
            re_ = float(parts[0])
            im_ = float(parts[1]) if len(parts) == 2 else 0.0
            coeffs.append(complex(re_, im_))
        return cls(tuple(coeffs), terminating=terminating, name="taylor-file")

    def __add__(self, other: "ZonalProfile") -> "ZonalProfile":
        n = max(len(self.taylor), len(other.taylor))
        a = self.taylor + (0j,) * (n - len(self.taylor))
        b = other.taylor + (0j,) * (n - len(other.taylor))
        ev = None
        if self.evaluator is not None and other.evaluator is not None:
            f, g = self.evaluator, other.evaluator
            ev = lambda t: f(t) + g(t)  # noqa: E731
        return ZonalProfile(
            tuple(x + y for x, y in zip(a, b)),
            ev,
            terminating=self.terminating and other.terminating,
            tail_bound=self.tail_bound + other.tail_bound,
        )

    def scale(self, c: complex) -> "ZonalProfile":
        ev = None
        if self.evaluator is not None:
            f = self.evaluator
            ev = lambda t: c * f(t)  # noqa: E731
        return ZonalProfile(
            tuple(c * x for x in self.taylor), ev, terminating=self.terminating, tail_bound=abs(c) * self.tail_bound
        )


def _terms_for_exponential(r: float) -> int:
    # r^n / n! below 1e-30 and well past the peak
    n = 1
    term = 1.0
    while n < 10 * r + 40 and not (n > 2 * r and term < 1e-30):
        term *= r / n
        n += 1
    return n + 8


@dataclass(frozen=True)
class ZonalExpansion:
    """Coefficients ``f_m`` for ``m = 0..M`` and the weights ``Gamma(a+1) dim H^m``."""

    alpha: Fraction
    coefficients: tuple[complex, ...]
    weights: tuple[float, ...]
    tail_bound: float

    @property
    def M(self) -> int:
        return len(self.coefficients) - 1

    def series_coefficients(self) -> list[complex]:
        """``Gamma(a+1) f_m dim H^m``, the multipliers of ``Z^m_eta``."""
        return [f * w for f, w in zip(self.coefficients, self.weights)]

    def to_rows(self) -> list[dict]:
        return [
            {"m": m, "re": f.real, "im": f.imag, "weight": w}
            for m, (f, w) in enumerate(zip(self.coefficients, self.weights))
        ]


def _csum(values: Sequence[complex]) -> complex:
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def _inner_weight(a: Fraction, m: int, k: int, gamma_a1: float) -> float:
    """``(m+2k)! / (2^{m+2k} k! Gamma(a+m+k+1))``."""
    n = m + 2 * k
    if m + k <= EXACT_WEIGHT_LIMIT:
        exact = Fraction(factorial(n), 2**n * factorial(k)) / rising(a + 1, m + k)
        return float(exact) / gamma_a1
    return math.exp(math.lgamma(n + 1) - n * math.log(2.0) - math.lgamma(k + 1) - math.lgamma(float(a) + m + k + 1))


def _tail_estimate(magnitudes: Sequence[float]) -> float:
    """Geometric tail ``sum_{m > M}`` guessed from the last five magnitudes."""
    last = list(magnitudes[-5:])
    nonzero = [(i, x) for i, x in enumerate(last) if x > 0.0]
    if not nonzero:
        return 0.0
    if len(nonzero) < 2:
        return math.inf
    # per-step ratio, skipping parity zeros
    (i0, x0), (i1, x1) = nonzero[0], nonzero[-1]
    q = (x1 / x0) ** (1.0 / (i1 - i0))
    if q >= 1.0:
        return math.inf
    return x1 * q / (1.0 - q)


def expand(profile: ZonalProfile, alpha, M: int) -> ZonalExpansion:
    a = check_alpha(alpha)
    if M < 0:
        raise ValueError(f"M must be nonnegative, got {M}")
    gamma_a1 = gamma_float(a + 1)
    coeffs: list[complex] = []
    for m in range(M + 1):
        terms: list[complex] = []
        converged = False
        k = 0
        while True:
            c = profile.coefficient(m + 2 * k)
            if c is None:
                break
            if profile.terminating and m + 2 * k >= len(profile.taylor):
                converged = True
                break
            term = c * _inner_weight(a, m, k, gamma_a1) if c else 0j
            terms.append(term)
            if term and abs(term) <= INNER_RTOL * abs(_csum(terms)):
                converged = True
                break
            k += 1
        if not converged:
            # data ran out: accept only if what is missing cannot matter
            n_next = m + 2 * k
            bound = profile.tail_bound * max(_inner_weight(a, m, k, gamma_a1), 1.0)
            converged = bound == 0.0 or bound <= INNER_RTOL * abs(_csum(terms))
            if not converged:
                raise InsufficientTaylorData(
                    f"Taylor data ends at index {n_next - 1}, which does not determine f_{m} "
                    f"to relative tolerance {INNER_RTOL}",
                    m - 1,
                )
        coeffs.append(_csum(terms))
    weights = tuple(gamma_a1 * harmonic_dim(a, m) for m in range(M + 1))
    mags = [abs(f) * w for f, w in zip(coeffs, weights)]
    tail = 0.0 if profile.terminating and M + 1 >= len(profile.taylor) else _tail_estimate(mags)
    return ZonalExpansion(a, tuple(coeffs), weights, tail)


def _kernel_values(a: Fraction, M: int, t: float) -> np.ndarray:
    t = min(1.0, max(-1.0, t))
    vals = gegenbauer_values(a, M, t)
    norms = np.array([float(gegenbauer_at_one(a, m)) for m in range(M + 1)])
    return vals / norms


def evaluate_expansion(exp: ZonalExpansion, pole: UnitVector, xi: UnitVector) -> complex:
    """Partial sum through ``exp.M``; ``exp.tail_bound`` bounds what is left out."""
    d = dim_for_alpha(exp.alpha)
    if pole.dim != d or len(xi) != d:
        raise ValueError(f"expansion lives in dimension {d}")
    z = _kernel_values(exp.alpha, exp.M, pole.dot(xi))
    series = exp.series_coefficients()
    re = math.fsum(c.real * zv for c, zv in zip(series, z))
    im = math.fsum(c.imag * zv for c, zv in zip(series, z))
    return complex(re, im)


def plane_wave_coefficients(alpha, r: float, M: int) -> list[complex]:
    """``i^m dim H^m Gamma(a+1)/Gamma(a+m+1) (r/2)^m j_{a+m}(r)`` for ``m <= M``."""
    a = check_alpha(alpha)
    r = float(r)
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    out = []
    scale = 1.0  # Gamma(a+1)/Gamma(a+m+1) (r/2)^m, built up one factor at a time
    for m in range(M + 1):
        if m:
            scale *= (r / 2.0) / float(a + m)
        value = harmonic_dim(a, m) * scale * spherical_j(a + m, r) if scale else 0.0
        out.append((1j) ** m * value)
    return out


def gegenbauer_integral_coefficient(profile: ZonalProfile, alpha, m: int, epsabs: float = 1e-15, epsrel: float = 1e-13) -> complex:
    """Coefficient of ``Z^m_eta`` by direct quadrature of the profile.

    ``(a+m) Gamma(a) / (sqrt(pi) Gamma(a+1/2)) int_{-1}^{1} phi(t) C^a_m(t) (1-t^2)^{a-1/2} dt``,
    integrated with QUADPACK's algebraic-weight rule.  Used as an independent
    check on :func:`expand`.
    """
    a = check_alpha(alpha)
    w = float(a - Fraction(1, 2))
    pref = float(a + m) * gamma_float(a) / (math.sqrt(math.pi) * gamma_float(a + Fraction(1, 2)))

    def part(fn):
        with warnings.catch_warnings():
            # an identically zero real or imaginary part trips QUADPACK's roundoff test
            warnings.simplefilter("ignore", IntegrationWarning)
            val, _ = quad(
                lambda t: fn(profile(t)) * gegenbauer_values(a, m, t)[m],
                -1.0,
                1.0,
                weight="alg",
                wvar=(w, w),
                epsabs=epsabs,
                epsrel=epsrel,
                limit=200,
            )
        return val

    return pref * complex(part(lambda v: v.real), part(lambda v: v.imag))
