"""Exact Gamma-function bookkeeping for integer and half-integer arguments.

Every Gamma ratio in this package has arguments differing by an integer, so
it collapses to a finite product of rationals.  ``sqrt(pi)`` is the only
transcendental constant and enters once, at float conversion.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .polyalg import to_rational

SQRT_PI = math.sqrt(math.pi)


def rising(a, n: int) -> Fraction:
    """Pochhammer symbol ``(a)_n = a (a+1) ... (a+n-1)``, exact."""
    if n < 0:
        raise ValueError(f"rising factorial needs n >= 0, got {n}")
    a = to_rational(a)
    out = Fraction(1)
    for i in range(n):
        out *= a + i
    return out


def gamma_ratio(a, b) -> Fraction:
    """``Gamma(a) / Gamma(b)`` for ``a - b`` an integer, both arguments positive."""
    a, b = to_rational(a), to_rational(b)
    n = a - b
    if n.denominator != 1:
        raise ValueError(f"Gamma ratio needs integer-spaced arguments, got {a} and {b}")
    if a <= 0 or b <= 0:
        raise ValueError(f"Gamma argument must be positive, got {a} and {b}")
    n = int(n)
    return rising(b, n) if n >= 0 else 1 / rising(a, -n)


def gamma_exact(x) -> tuple[Fraction, bool]:
    """``Gamma(x) = q * sqrt(pi)**h`` for integer or half-integer ``x > 0``.

    Returns ``(q, h)`` with ``h`` True for half-integers.
    """
    x = to_rational(x)
    if x <= 0:
        raise ValueError(f"Gamma argument must be positive, got {x}")
    if x.denominator == 1:
        return Fraction(math.factorial(int(x) - 1)), False
    if x.denominator == 2:
        return rising(Fraction(1, 2), int(x - Fraction(1, 2))), True
    raise ValueError(f"only integer or half-integer arguments are exact, got {x}")


def gamma_float(x) -> float:
    x = to_rational(x)
    if x > 0 and x.denominator in (1, 2):
        q, h = gamma_exact(x)
        if q.numerator.bit_length() - q.denominator.bit_length() < 1000:
            return float(q) * SQRT_PI if h else float(q)
    return math.gamma(float(x))


def log_gamma(x) -> float:
    return math.lgamma(float(x))
