"""Bessel functions of the first kind from their power series, plus identities.

Scalar evaluation sums the series exactly: for rational order ``nu`` and a
float argument ``t`` (itself a dyadic rational) the normalized series

    j_nu(t) = sum_k (-1)^k (t/2)^{2k} / (k! (nu+1)_k)

is a rational number, rounded once.  That removes the cancellation that
ruins naive double-precision summation for ``t`` beyond about 10.  The series
is only used up to ``t = MAX_ARGUMENT``.

:func:`spherical_j_array` is the vectorized double-precision variant used by
the quadrature code, where a few lost digits are damped by the integrand.
"""
from __future__ import annotations

import math
from fractions import Fraction
from math import factorial

import numpy as np
from scipy.special import jv

from ._gamma import gamma_float, rising
from .polyalg import to_rational

__all__ = [
    "MAX_ARGUMENT",
    "BesselOrder",
    "bessel_j",
    "spherical_j",
    "spherical_j_exact",
    "spherical_j_array",
    "multistep_coefficient",
    "multistep_coefficient_J",
    "multistep_difference",
    "multistep_difference_J",
    "multistep_residual",
    "multistep_residual_J",
    "j_to_J_factor",
    "halfodd_closed_form",
    "finite_expansion_integer_residual",
    "finite_expansion_halfodd_residual",
]

MAX_ARGUMENT = 30.0

# series terms are dropped once below 2**-_TAIL_BITS (|j_nu| <= 1 for nu >= -1/2)
_TAIL_BITS = 80


def BesselOrder(nu) -> Fraction:
    """Validate an order ``nu > -1`` and return it as an exact rational."""
    v = to_rational(nu)
    if v <= -1:
        raise ValueError(f"Bessel order must exceed -1, got {v}")
    return v


def _check_argument(t: float) -> float:
    t = float(t)
    if t < 0 or math.isnan(t):
        raise ValueError(f"argument must be nonnegative, got {t}")
    if t > MAX_ARGUMENT:
        raise ValueError(
            f"argument {t} exceeds the power-series cap {MAX_ARGUMENT}; "
            "an asymptotic evaluation regime would be needed there"
        )
    return t


def _series_terms(v: float, umax: float, cutoff: float) -> int:
    """Number of series terms after which every further term is below ``cutoff``."""
    n = 1
    term = 1.0
    while n < 2000:
        term *= umax / (n * (v + n))
        if n > umax and term < cutoff:
            return n
        n += 1
    raise ArithmeticError("series term count exceeded")


def _nested_sum(v: Fraction, t) -> tuple[int, int]:
    """Exact ``(A, B)`` with ``A / B`` equal to the truncated series of ``j_v(t)``.

    Backward nesting ``1 - u/(k(v+k)) * (...)`` in pure integer arithmetic,
    no gcd reductions along the way.
    """
    u = to_rational(t) ** 2 / 4
    if u == 0:
        return 1, 1
    p, q = u.numerator, u.denominator
    a, b = v.numerator, v.denominator
    n = _series_terms(float(v), float(u), 2.0**-_TAIL_BITS)
    num, den = 1, 1
    for k in range(n, 0, -1):
        # 1 - (p/q) * b / (k (a + b k)) * num/den
        step = q * k * (a + b * k)
        num, den = step * den - p * b * num, step * den
    return num, den


def spherical_j_exact(nu, t) -> Fraction:
    """Rational value of the truncated series for ``j_nu(t)``.

    The truncation error is below ``2**-80`` in absolute terms.
    """
    v = BesselOrder(nu)
    num, den = _nested_sum(v, t)
    return Fraction(num, den)


def spherical_j(nu, t: float) -> float:
    """``j_nu(t) = Gamma(nu+1) (t/2)^{-nu} J_nu(t)``, with ``j_nu(0) = 1``."""
    t = _check_argument(t)
    num, den = _nested_sum(BesselOrder(nu), t)
    return num / den  # int / int is correctly rounded


def bessel_j(nu, t: float) -> float:
    """``J_nu(t)`` for real ``t >= 0`` from the defining power series."""
    v = BesselOrder(nu)
    t = _check_argument(t)
    if t == 0.0:
        if v == 0:
            return 1.0
        if v > 0:
            return 0.0
        raise ValueError(f"J_{v} is unbounded at 0")
    return _half_power(t, v) / gamma_float(v + 1) * spherical_j(v, t)


def _half_power(t: float, v: Fraction) -> float:
    """``(t/2)**v`` with integer and half-integer powers done by multiplication."""
    x = t / 2.0
    if v.denominator == 1:
        return x ** int(v)
    if v.denominator == 2:
        n = int(v - Fraction(1, 2))  # floor for v > -1
        return x**n * math.sqrt(x)
    return x ** float(v)


# below this the nested double-precision series stays within a few ulps
_ARRAY_SERIES_LIMIT = 4.0


def spherical_j_array(nu, z) -> np.ndarray:
    """Vectorized ``j_nu(z)`` in double precision.

    Nested series for ``|z| <= 4``, where it is accurate to a few ulps;
    beyond that the series cancels badly and scipy's ``jv`` is rescaled instead.
    """
    v = BesselOrder(nu)
    fv = float(v)
    z = np.asarray(z, dtype=float)
    zmax = float(np.max(np.abs(z))) if z.size else 0.0
    if zmax > MAX_ARGUMENT:
        raise ValueError(f"argument {zmax} exceeds the power-series cap {MAX_ARGUMENT}")
    small = np.abs(z) <= _ARRAY_SERIES_LIMIT
    zs = np.where(small, z, 0.0)
    u = 0.25 * zs * zs
    n = _series_terms(fv, 0.25 * min(zmax, _ARRAY_SERIES_LIMIT) ** 2, 1e-18)
    acc = np.ones_like(u)
    for k in range(n, 0, -1):
        acc = 1.0 - u / (k * (fv + k)) * acc
    if small.all():
        return acc
    zl = np.where(small, 1.0, np.abs(z))
    log_scale = math.lgamma(fv + 1.0) - fv * np.log(0.5 * zl)
    large = np.exp(log_scale) * jv(fv, zl)
    return np.where(small, acc, large)


# ---- multi-step recurrence -------------------------------------------------


def _check_multistep(alpha, l: int, s: int) -> Fraction:
    a = to_rational(alpha)
    if a < 0 or (2 * a).denominator != 1:
        raise ValueError(f"alpha must be a nonnegative integer or half-odd integer, got {a}")
    if not 1 <= s <= l // 2:
        raise ValueError(f"s must lie in 1..{l // 2}, got {s}")
    # smallest Gamma arguments occurring in the identity
    for arg in (a + l + 1 - s, a + l - 2 * s, a + l - s, a + l - 2 * s):
        if arg <= 0:
            raise ValueError(f"Gamma argument {arg} <= 0: identity not valid for alpha={a}, l={l}, s={s}")
    return a


def multistep_coefficient(alpha, l: int, s: int, k: int) -> Fraction:
    """Coefficient of ``(r/2)^{2(s-k)} j_{a+l-2k}(r)`` in the expansion of ``j_{a+l-s}``.

    ``s! Gamma(a+l+1-s) Gamma(a+l-k-s) / (k! (s-k)! Gamma(a+l+1-k) Gamma(a+l-2k))``
    """
    a = _check_multistep(alpha, l, s)
    if not 0 <= k <= s:
        raise ValueError(f"k must lie in 0..{s}, got {k}")
    binom = Fraction(factorial(s), factorial(k) * factorial(s - k))
    return binom / (rising(a + l + 1 - s, s - k) * rising(a + l - k - s, s - k))


def multistep_coefficient_J(alpha, l: int, s: int, k: int) -> Fraction:
    """Coefficient of ``J_{a+l-2k}`` in the expansion of ``(1/s!) (2/r)^s J_{a+l-s}``.

    ``Gamma(a+l-k-s) Gamma(a+l+1-2k) / (k! (s-k)! Gamma(a+l+1-k) Gamma(a+l-2k))``
    """
    a = _check_multistep(alpha, l, s)
    if not 0 <= k <= s:
        raise ValueError(f"k must lie in 0..{s}, got {k}")
    return (a + l - 2 * k) / (factorial(k) * factorial(s - k) * rising(a + l - k - s, s + 1))


def multistep_difference(alpha, l: int, s: int, r: float) -> float:
    """Signed ``LHS - RHS`` of the spherical-Bessel multi-step relation."""
    a = _check_multistep(alpha, l, s)
    r = _check_argument(r)
    half_sq = (r / 2.0) ** 2
    rhs = [
        float(multistep_coefficient(a, l, s, k)) * half_sq ** (s - k) * spherical_j(a + l - 2 * k, r)
        for k in range(s + 1)
    ]
    return spherical_j(a + l - s, r) - math.fsum(rhs)


def multistep_residual(alpha, l: int, s: int, r: float) -> float:
    return abs(multistep_difference(alpha, l, s, r))


def multistep_difference_J(alpha, l: int, s: int, r: float) -> float:
    a = _check_multistep(alpha, l, s)
    r = _check_argument(r)
    if r == 0.0:
        raise ValueError("the J form needs r > 0")
    lhs = (2.0 / r) ** s / factorial(s) * bessel_j(a + l - s, r)
    rhs = [float(multistep_coefficient_J(a, l, s, k)) * bessel_j(a + l - 2 * k, r) for k in range(s + 1)]
    return lhs - math.fsum(rhs)


def multistep_residual_J(alpha, l: int, s: int, r: float) -> float:
    return abs(multistep_difference_J(alpha, l, s, r))


def j_to_J_factor(alpha, l: int, s: int, r: float) -> float:
    """Factor turning :func:`multistep_difference` into :func:`multistep_difference_J`."""
    a = to_rational(alpha)
    return _half_power(r, a + l - 2 * s) / (gamma_float(a + l + 1 - s) * factorial(s))


# ---- finite expansions -----------------------------------------------------


def finite_expansion_integer_residual(n: int, t: float) -> float:
    """``|(1/n!)(2/t)^n J_n(t) - sum_k eps_k J_{2k}(t) / ((n+k)! (n-k)!)|``."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    t = _check_argument(t)
    if t == 0.0:
        raise ValueError("t must be positive")
    lhs = (2.0 / t) ** n / factorial(n) * bessel_j(n, t)
    rhs = [
        (1 if k == 0 else 2) / (factorial(n + k) * factorial(n - k)) * bessel_j(2 * k, t)
        for k in range(n + 1)
    ]
    return abs(lhs - math.fsum(rhs))


def _sin_cos_exact(t) -> tuple[Fraction, Fraction]:
    """``sin t`` and ``cos t`` as rationals, truncation error below ``2**-100``."""
    x = to_rational(t)
    x2 = x * x
    sin_acc, cos_acc = Fraction(0), Fraction(0)
    term = Fraction(1)  # x^n / n!
    n = 0
    while True:
        if n % 4 == 0:
            cos_acc += term
        elif n % 4 == 1:
            sin_acc += term
        elif n % 4 == 2:
            cos_acc -= term
        else:
            sin_acc -= term
        n += 1
        term = term * x / n
        if n > abs(x) and abs(term) < Fraction(1, 2**100):
            return sin_acc, cos_acc


def halfodd_closed_form(n: int, t: float) -> float:
    """``J_{n+1/2}(t)`` as the finite sin/cos sum.

    The two bracketed sums nearly cancel for small ``t``, so the bracket is
    formed exactly in rational arithmetic and rounded once.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    x = to_rational(t)
    if x <= 0:
        raise ValueError("t must be positive")
    sin_t, cos_t = _sin_cos_exact(x)
    # sin/cos of t - n pi/2
    sin_ph, cos_ph = [(sin_t, cos_t), (-cos_t, sin_t), (-sin_t, -cos_t), (cos_t, -sin_t)][n % 4]
    sin_part = sum(
        Fraction((-1) ** k * factorial(n + 2 * k), factorial(2 * k) * factorial(n - 2 * k)) / (2 * x) ** (2 * k)
        for k in range(n // 2 + 1)
    )
    cos_part = sum(
        (
            Fraction((-1) ** k * factorial(n + 2 * k + 1), factorial(2 * k + 1) * factorial(n - 2 * k - 1))
            / (2 * x) ** (2 * k + 1)
            for k in range((n - 1) // 2 + 1)
        ),
        Fraction(0),
    )
    bracket = sin_ph * sin_part + cos_ph * cos_part
    return math.sqrt(2.0 / (math.pi * float(t))) * float(bracket)


def finite_expansion_halfodd_residual(n: int, t: float) -> float:
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    t = _check_argument(t)
    if t == 0.0:
        raise ValueError("t must be positive")
    return abs(bessel_j(Fraction(2 * n + 1, 2), t) - halfodd_closed_form(n, t))

