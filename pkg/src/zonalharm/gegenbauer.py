"""Gegenbauer polynomials, zonal reproducing kernels and related identities."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from ._gamma import rising
from .harmonic import check_alpha, dim_for_alpha
from .polyalg import HomogeneousPolynomial, UnitVector, linear_form, r2_power, to_rational

__all__ = [
    "GegenbauerPoly",
    "ZonalKernel",
    "gegenbauer",
    "gegenbauer_eval",
    "gegenbauer_values",
    "gegenbauer_at_one",
    "zonal_kernel_eval",
    "zonal_polynomial",
    "expand_power",
    "generating_function_residuals",
    "generating_function_check",
]


@dataclass(frozen=True)
class GegenbauerPoly:
    """``C^alpha_l`` with exact coefficients; ``coefficients[i]`` multiplies ``t**i``."""

    alpha: Fraction
    degree: int
    coefficients: tuple[Fraction, ...]

    def __call__(self, t: float) -> float:
        return gegenbauer_eval(self.alpha, self.degree, t)

    def at_exact(self, t) -> Fraction:
        t = to_rational(t)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc


def gegenbauer(alpha, l: int) -> GegenbauerPoly:
    """Coefficients from the explicit alternating sum.

    ``C^a_l(t) = sum_j (-1)^j Gamma(a+l-j) / (Gamma(a) j! (l-2j)!) (2t)^{l-2j}``
    """
    a = to_rational(alpha)
    if l < 0:
        raise ValueError(f"degree must be nonnegative, got {l}")
    coeffs = [Fraction(0)] * (l + 1)
    for j in range(l // 2 + 1):
        c = rising(a, l - j) * 2 ** (l - 2 * j) / (factorial(j) * factorial(l - 2 * j))
        coeffs[l - 2 * j] = -c if j % 2 else c
    return GegenbauerPoly(a, l, tuple(coeffs))


def gegenbauer_values(alpha, l_max: int, t):
    """``[C^a_0(t), ..., C^a_{l_max}(t)]`` by the upward three-term recurrence.

    ``t`` may be a float or an ndarray; the result stacks along a new first axis.
    """
    a = float(to_rational(alpha))
    t = np.asarray(t, dtype=float)
    out = np.empty((l_max + 1,) + t.shape)
    out[0] = 1.0
    if l_max >= 1:
        out[1] = 2.0 * a * t
    for n in range(1, l_max):
        out[n + 1] = (2.0 * (n + a) * t * out[n] - (n + 2.0 * a - 1.0) * out[n - 1]) / (n + 1)
    return out


def gegenbauer_eval(alpha, l: int, t: float) -> float:
    if l < 0:
        raise ValueError(f"degree must be nonnegative, got {l}")
    return float(gegenbauer_values(alpha, l, float(t))[l])


def gegenbauer_at_one(alpha, l: int) -> Fraction:
    """``C^a_l(1) = Gamma(2a+l) / (Gamma(2a) l!)`` as a finite product."""
    a = to_rational(alpha)
    if l < 0:
        raise ValueError(f"degree must be nonnegative, got {l}")
    return rising(2 * a, l) / factorial(l)


@dataclass(frozen=True)
class ZonalKernel:
    """Normalized zonal harmonic ``Z^l_eta(xi) = C^a_l((xi|eta)) / C^a_l(1)``."""

    alpha: Fraction
    degree: int
    pole: UnitVector

    def __post_init__(self):
        a = check_alpha(self.alpha)
        object.__setattr__(self, "alpha", a)
        if self.pole.dim != dim_for_alpha(a):
            raise ValueError(f"pole has dimension {self.pole.dim}, alpha={a} needs {dim_for_alpha(a)}")

    def __call__(self, xi: UnitVector | Sequence[float]) -> float:
        return zonal_kernel_eval(self, xi)


def zonal_kernel_eval(kernel: ZonalKernel, xi: UnitVector | Sequence[float]) -> float:
    t = kernel.pole.dot(xi)
    t = min(1.0, max(-1.0, t))
    return gegenbauer_eval(kernel.alpha, kernel.degree, t) / float(gegenbauer_at_one(kernel.alpha, kernel.degree))


def zonal_polynomial(alpha, l: int, eta: Sequence) -> HomogeneousPolynomial:
    """Homogeneous degree-``l`` extension of ``Z^l_eta`` to R^d, exact.

    ``sum_i c_i (x|eta)^i |x|^{l-i}``; only ``i`` of the parity of ``l`` occur,
    so this is a polynomial.  ``eta`` entries are taken as exact rationals and
    should form a unit vector for the result to be the kernel.
    """
    a = check_alpha(alpha)
    d = dim_for_alpha(a)
    if len(eta) != d:
        raise ValueError(f"eta has dimension {len(eta)}, alpha={a} needs {d}")
    g = gegenbauer(a, l)
    norm = gegenbauer_at_one(a, l)
    lin = linear_form(eta)
    total = HomogeneousPolynomial.zero(d, l)
    power = HomogeneousPolynomial.constant(d)
    for i in range(l + 1):
        if i:
            power = power * lin
        c = g.coefficients[i]
        if c:
            total = total + (r2_power(d, (l - i) // 2) * power).scale(c / norm)
    return total


def expand_power(alpha, l: int) -> list[tuple[int, Fraction]]:
    """Weights ``w_k`` with ``(x|eta)^l = |x|^l sum_k w_k C^a_{l-2k}((xi|eta))``.

    ``w_k = 2^{-l} Gamma(a) l! (a+l-2k) / (k! Gamma(a+l+1-k))``.
    """
    a = to_rational(alpha)
    if l < 0:
        raise ValueError(f"degree must be nonnegative, got {l}")
    out = []
    for k in range(l // 2 + 1):
        w = Fraction(factorial(l), 2**l) * (a + l - 2 * k) / (factorial(k) * rising(a, l + 1 - k))
        out.append((k, w))
    return out


def generating_function_residuals(alpha, r: float, t: float, M: int) -> list[float]:
    """``|sum_{m<=n} r^m C^a_m(t) - (1-2rt+r^2)^{-a}|`` for ``n = 0 .. M``."""
    if not abs(r) < 1 or abs(t) > 1:
        raise ValueError(f"need |r| < 1 and |t| <= 1, got r={r}, t={t}")
    a = float(to_rational(alpha))
    exact = (1.0 - 2.0 * r * t + r * r) ** (-a)
    vals = gegenbauer_values(alpha, M, t)
    out = []
    terms = []
    for m in range(M + 1):
        terms.append(r**m * vals[m])
        out.append(abs(math.fsum(terms) - exact))
    return out


def generating_function_check(alpha, r: float, t: float, M: int) -> float:
    return generating_function_residuals(alpha, r, t, M)[-1]
