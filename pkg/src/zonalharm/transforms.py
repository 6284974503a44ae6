"""Fourier transforms of polynomial densities on the sphere, and Hankel transforms.

Conventions (fixed, no knobs):

* the sphere transform is ``F(P)(x) = int e^{i(x|eta)} P(eta) dsigma(eta)``
  with the normalized surface measure and no ``(2 pi)^{-d/2}``;
* the Euclidean transform in the Bochner identities is
  ``(2 pi)^{-d/2} int_{R^d} e^{i(y|x)} g(x) dx``;
* ``H_nu(phi)(t) = 2^{-nu} / Gamma(nu+1) int_0^inf phi(s) j_nu(s t) s^{2nu+1} ds``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss

from ._gamma import gamma_float, rising
from .bessel import MAX_ARGUMENT, BesselOrder, spherical_j, spherical_j_array
from .harmonic import alpha_for_dim, decompose
from .polyalg import HomogeneousPolynomial, _odd_double_factorial, evaluate_exact, laplacian_powers, to_rational

__all__ = [
    "SphereFTResult",
    "RadialProfile",
    "HankelResult",
    "HankelConvergenceError",
    "sphere_ft_components",
    "sphere_ft_laplacian",
    "sphere_ft_oracle",
    "hankel",
    "gaussian_hankel",
    "gauss_legendre",
    "bochner_components",
    "bochner_laplacian",
    "hankel_periodicity_residual",
    "fourier_gauss_hermite",
]

RADIUS_RTOL = 1e-16


@dataclass(frozen=True)
class SphereFTResult:
    point: tuple[float, ...]
    value: complex
    method: str  # "components", "laplacian_powers" or "oracle"

    def to_dict(self) -> dict:
        return {"value_re": self.value.real, "value_im": self.value.imag, "method": self.method}


def _point(x: Sequence[float], d: int) -> tuple[float, ...]:
    if len(x) != d:
        raise ValueError(f"point has length {len(x)}, polynomial lives in dimension {d}")
    return tuple(float(v) for v in x)


def _norm(x: Sequence[float]) -> float:
    return math.sqrt(math.fsum(v * v for v in x))


def _check_radius(rho: float) -> None:
    if rho > MAX_ARGUMENT:
        raise ValueError(f"|x| = {rho} exceeds the Bessel series cap {MAX_ARGUMENT}")


def _i_power(l: int) -> complex:
    return (1, 1j, -1, -1j)[l % 4]


def sphere_ft_components(p: HomogeneousPolynomial, x: Sequence[float]) -> SphereFTResult:
    """Transform via harmonic components.

    ``(i/2)^l sum_k (-1)^k 4^k Gamma(a+1)/Gamma(a+l+1-2k) j_{a+l-2k}(|x|) h_{l-2k}(P)(x)``
    """
    d, l = p.dim, p.degree
    a = alpha_for_dim(d)
    x = _point(x, d)
    rho = _norm(x)
    _check_radius(rho)
    terms = []
    for k, h in decompose(p).components:
        if h.is_zero():
            continue
        w = Fraction((-1) ** k * 4**k, 2**l) / rising(a + 1, l - 2 * k)
        terms.append(float(w * evaluate_exact(h, x)) * spherical_j(a + l - 2 * k, rho))
    return SphereFTResult(x, _i_power(l) * math.fsum(terms), "components")


def sphere_ft_laplacian(p: HomogeneousPolynomial, x: Sequence[float]) -> SphereFTResult:
    """Transform via iterated Laplacians.

    ``(i/2)^l sum_k (-1)^k Gamma(a+1)/(k! Gamma(a+l+1-k)) j_{a+l-k}(|x|) (Delta^k P)(x)``
    """
    d, l = p.dim, p.degree
    a = alpha_for_dim(d)
    x = _point(x, d)
    rho = _norm(x)
    _check_radius(rho)
    terms = []
    for k, q in enumerate(laplacian_powers(p)):
        if q.is_zero():
            break
        w = Fraction((-1) ** k, 2**l * factorial(k)) / rising(a + 1, l - k)
        terms.append(float(w * evaluate_exact(q, x)) * spherical_j(a + l - k, rho))
    return SphereFTResult(x, _i_power(l) * math.fsum(terms), "laplacian_powers")


def _truncated_product(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * (n + 1)
    nz_b = [(j, v) for j, v in enumerate(b) if v]
    for i, u in enumerate(a):
        if not u:
            continue
        for j, v in nz_b:
            if i + j > n:
                break
            out[i + j] += u * v
    return out


def sphere_ft_oracle(p: HomogeneousPolynomial, x: Sequence[float], tol: float = 1e-14) -> SphereFTResult:
    """Brute-force transform: integrate the Taylor series of ``e^{i(x|eta)}`` termwise.

    ``sum_n i^n / n! int (x|eta)^n P(eta) dsigma`` where every integral is an
    exact rational computed from monomial sphere integrals; the series is cut
    once the remaining terms are provably below ``tol``.  No Bessel functions
    and no harmonic decomposition are involved.
    """
    d, l = p.dim, p.degree
    x = _point(x, d)
    rho = _norm(x)
    if rho > 10.0:
        raise ValueError(f"oracle is limited to |x| <= 10, got {rho}")
    coef_sum = math.fsum(abs(float(c)) for c in p.terms.values())
    if coef_sum == 0.0:
        return SphereFTResult(x, 0j, "oracle")
    # tail after N is below rho^{N+1}/(N+1)! * sum|c| / (1 - rho/(N+2))
    n_max = 0
    bound = coef_sum
    while True:
        bound *= rho / (n_max + 1)
        if n_max + 1 > 2 * rho and bound / (1 - rho / (n_max + 2)) < tol:
            break
        n_max += 1
    xs = [to_rational(v) for v in x]

    @lru_cache(maxsize=None)
    def factor_series(i: int, m: int) -> tuple[Fraction, ...]:
        # sum over a of x_i^a (a+m-1)!! / a! z^a, only a + m even
        out = []
        for a in range(n_max + 1):
            if (a + m) % 2:
                out.append(Fraction(0))
            else:
                out.append(xs[i] ** a * _odd_double_factorial((a + m) // 2) / factorial(a))
        return tuple(out)

    @lru_cache(maxsize=None)
    def prefix_series(prefix: tuple[int, ...]) -> tuple[Fraction, ...]:
        if not prefix:
            return tuple([Fraction(1)] + [Fraction(0)] * n_max)
        head = prefix_series(prefix[:-1])
        return tuple(_truncated_product(list(head), list(factor_series(len(prefix) - 1, prefix[-1])), n_max))

    # S[n] = sum_e c_e sum_{|a| = n} prod_i x_i^{a_i} (a_i+e_i-1)!! / a_i!
    S = [Fraction(0)] * (n_max + 1)
    for e, c in p.terms.items():
        series = prefix_series(tuple(e))
        for n in range(n_max + 1):
            if series[n]:
                S[n] += c * series[n]
    re, im = Fraction(0), Fraction(0)
    half_d = Fraction(d, 2)
    for n in range(n_max + 1):
        if (n + l) % 2 or not S[n]:
            continue
        b = (n + l) // 2
        term = S[n] / (2**b * rising(half_d, b))
        phase = n % 4
        if phase == 0:
            re += term
        elif phase == 1:
            im += term
        elif phase == 2:
            re -= term
        else:
            im -= term
    return SphereFTResult(x, complex(float(re), float(im)), "oracle")


# ---- radial profiles and the Hankel transform -----------------------------


def _scan_radius(fn: Callable[[np.ndarray], np.ndarray], start: float, rtol: float = RADIUS_RTOL) -> float:
    """Smallest radius (on a 5% ladder from ``start``) beyond which ``|fn| <= rtol * peak``."""
    start = max(float(start), 1e-3)
    peak = float(np.max(np.abs(fn(np.linspace(0.0, start, 2001)))))
    if peak == 0.0:
        return start
    R = start
    for _ in range(400):
        tail = float(np.max(np.abs(fn(np.linspace(R, 4.0 * R, 2001)))))
        if tail <= rtol * peak:
            return R
        R *= 1.05
    raise ValueError("profile does not decay fast enough for a finite truncation radius")


@dataclass(frozen=True)
class RadialProfile:
    """A function on ``[0, inf)`` with a truncation radius.

    Beyond ``truncation_radius`` the profile is below ``1e-16`` times its peak;
    this is checked by sampling when the profile is built.
    """

    evaluator: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    decay_class: str
    truncation_radius: float
    name: str = "custom"

    def __post_init__(self):
        if not (
            self.decay_class in ("gaussian-like", "compactly-supported")
            or (self.decay_class.startswith("polynomial-decay(") and self.decay_class.endswith(")"))
        ):
            raise ValueError(f"unknown decay class {self.decay_class!r}")
        R = float(self.truncation_radius)
        if not R > 0:
            raise ValueError(f"truncation radius must be positive, got {R}")
        peak = float(np.max(np.abs(self(np.linspace(0.0, R, 2001)))))
        tail = float(np.max(np.abs(self(np.linspace(R, 4.0 * R, 2001)))))
        if tail > RADIUS_RTOL * peak:
            raise ValueError(
                f"profile {self.name!r} is {tail:.3g} beyond its truncation radius {R} (peak {peak:.3g})"
            )

    def __call__(self, s) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(s, dtype=float)), dtype=float)

    @classmethod
    def gaussian(cls, a: float = 1.0) -> "RadialProfile":
        """``exp(-a s^2)``."""
        a = float(a)
        return cls(lambda s: np.exp(-a * s * s), "gaussian-like", math.sqrt(37.0 / a), f"gaussian(a={a!r})")

    @classmethod
    def bump(cls, width: float = 1.0) -> "RadialProfile":
        """Smooth compactly supported ``exp(-1/(1-(s/w)^2))`` on ``[0, w)``."""
        w = float(width)

        def fn(s):
            u = np.clip(s / w, 0.0, 1.0)
            with np.errstate(divide="ignore", over="ignore"):
                out = np.where(u < 1.0, np.exp(-1.0 / np.maximum(1.0 - u * u, 1e-300)), 0.0)
            return out

        return cls(fn, "compactly-supported", w, f"bump(w={w!r})")

    @classmethod
    def from_function(cls, fn: Callable, decay_class: str = "gaussian-like", radius: float | None = None, name: str = "custom") -> "RadialProfile":
        if radius is None:
            radius = _scan_radius(fn, 1.0)
        return cls(fn, decay_class, radius, name)

    def times_power(self, k: int) -> "RadialProfile":
        """``s^{2k} phi(s)``; same decay class, radius re-derived."""
        if k == 0:
            return self
        base = self.evaluator

        def fn(s):
            return s ** (2 * k) * base(s)

        if self.decay_class == "compactly-supported":
            R = self.truncation_radius
        else:
            R = _scan_radius(fn, self.truncation_radius)
        return RadialProfile(fn, self.decay_class, R, f"s^{2 * k}*{self.name}")

    def combine(self, a: float, other: "RadialProfile", b: float) -> "RadialProfile":
        """``a phi + b psi``."""
        f, g = self.evaluator, other.evaluator
        decay = self.decay_class if self.decay_class == other.decay_class else "gaussian-like"
        fn = lambda s: a * f(s) + b * g(s)  # noqa: E731
        R = _scan_radius(fn, max(self.truncation_radius, other.truncation_radius))
        return RadialProfile(fn, decay, R, f"{a}*{self.name}+{b}*{other.name}")


@dataclass(frozen=True)
class HankelResult:
    order: Fraction
    at: float
    value: float
    quadrature_error_estimate: float


class HankelConvergenceError(ArithmeticError):
    def __init__(self, message: str, best: float, estimate: float):
        super().__init__(f"{message}: best value {best!r}, error estimate {estimate:.3g}")
        self.best = best
        self.estimate = estimate


@lru_cache(maxsize=32)
def _gl_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    return leggauss(order)


def gauss_legendre(fn: Callable[[np.ndarray], np.ndarray], a: float, b: float, order: int = 16) -> float:
    """Single-panel Gauss-Legendre rule on ``[a, b]``."""
    x, w = _gl_rule(order)
    half = 0.5 * (b - a)
    return float(half * np.dot(w, fn(0.5 * (a + b) + half * x)))


def _integration_radius(profile: RadialProfile, v: Fraction) -> float:
    if profile.decay_class == "compactly-supported":
        return profile.truncation_radius
    power = 2.0 * float(v) + 1.0
    weighted = lambda s: profile(s) * s**power  # noqa: E731
    return _scan_radius(weighted, profile.truncation_radius, rtol=1e-17)


def hankel(profile: RadialProfile, nu, t: float, tol: float = 1e-10, order: int = 16, max_depth: int = 30) -> HankelResult:
    """``H_nu(phi)(t)`` by adaptive composite Gauss-Legendre quadrature.

    Panels are halved until each one's two-level difference is within its
    share of ``tol``; the reported error estimate is the sum of those
    differences (scaled by the transform's prefactor).
    """
    v = BesselOrder(nu)
    t = float(t)
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    R = _integration_radius(profile, v)
    if R * t > MAX_ARGUMENT:
        raise ValueError(f"s*t reaches {R * t:.3g} on [0, {R:.3g}], beyond the Bessel series cap {MAX_ARGUMENT}")
    pref = 2.0 ** (-float(v)) / gamma_float(v + 1)
    power = 2.0 * float(v) + 1.0

    def integrand(s):
        return profile(s) * spherical_j_array(v, s * t) * s**power

    width = R / 8.0
    if t > 1.0:
        width = min(width, math.pi / (2.0 * t))
    n0 = max(1, math.ceil(R / width))
    edges = np.linspace(0.0, R, n0 + 1)
    budget = tol / pref  # absolute tolerance on the bare integral

    total = []
    errors = []
    failed = False
    stack = [(float(edges[i]), float(edges[i + 1]), 0) for i in range(n0)]
    coarse = {(a, b): gauss_legendre(integrand, a, b, order) for a, b, _ in stack}
    while stack:
        a, b, depth = stack.pop()
        whole = coarse.pop((a, b))
        m = 0.5 * (a + b)
        left = gauss_legendre(integrand, a, m, order)
        right = gauss_legendre(integrand, m, b, order)
        err = abs(left + right - whole)
        allowed = 0.5 * budget * (b - a) / R
        if err <= allowed or err <= 1e-15 * abs(left + right):
            total.append(left + right)
            errors.append(err)
        elif depth >= max_depth:
            total.append(left + right)
            errors.append(err)
            failed = True
        else:
            coarse[(a, m)] = left
            coarse[(m, b)] = right
            stack.append((a, m, depth + 1))
            stack.append((m, b, depth + 1))
    value = pref * math.fsum(total)
    estimate = pref * math.fsum(errors)
    if failed or estimate > tol:
        raise HankelConvergenceError(f"Hankel transform of order {v} at t={t} did not reach tol={tol}", value, estimate)
    return HankelResult(v, t, value, estimate)


def gaussian_hankel(nu, t: float, a: float = 1.0) -> float:
    """Closed form ``H_nu(e^{-a s^2})(t) = (2a)^{-(nu+1)} e^{-t^2/(4a)}``."""
    v = float(to_rational(nu))
    return (2.0 * a) ** (-(v + 1.0)) * math.exp(-t * t / (4.0 * a))


def _per_term_tol(tol: float, values: Sequence[float]) -> float:
    return tol / (max(1, len(values)) * max(1.0, max((abs(v) for v in values), default=1.0)))


def bochner_components(f: RadialProfile, p: HomogeneousPolynomial, y: Sequence[float], tol: float = 1e-10) -> complex:
    """Fourier transform of ``f(|x|) P(x)`` from harmonic components.

    ``i^l sum_k (-1)^k H_{a+l-2k}(s^{2k} f)(|y|) h_{l-2k}(P)(y)``
    """
    d, l = p.dim, p.degree
    a = alpha_for_dim(d)
    y = _point(y, d)
    rho = _norm(y)
    comps = [(k, h) for k, h in decompose(p).components if not h.is_zero()]
    hvals = [float(evaluate_exact(h, y)) for _, h in comps]
    sub_tol = _per_term_tol(tol, hvals)
    terms = []
    for (k, _), hv in zip(comps, hvals):
        H = hankel(f.times_power(k), a + l - 2 * k, rho, sub_tol).value
        terms.append((-1) ** k * H * hv)
    return _i_power(l) * math.fsum(terms)


def bochner_laplacian(f: RadialProfile, p: HomogeneousPolynomial, y: Sequence[float], tol: float = 1e-10) -> complex:
    """Fourier transform of ``f(|x|) P(x)`` from iterated Laplacians.

    ``i^l sum_k (-1)^k / (2^k k!) H_{a+l-k}(f)(|y|) Delta^k P(y)``
    """
    d, l = p.dim, p.degree
    a = alpha_for_dim(d)
    y = _point(y, d)
    rho = _norm(y)
    powers = [(k, q) for k, q in enumerate(laplacian_powers(p)) if not q.is_zero()]
    qvals = [float(evaluate_exact(q, y)) / (2**k * factorial(k)) for k, q in powers]
    sub_tol = _per_term_tol(tol, qvals)
    terms = []
    for (k, _), qv in zip(powers, qvals):
        H = hankel(f, a + l - k, rho, sub_tol).value
        terms.append((-1) ** k * H * qv)
    return _i_power(l) * math.fsum(terms)


def hankel_periodicity_residual(
    profile: RadialProfile, alpha, l: int, t: float, tol: float = 1e-9, t_squared: bool = False
) -> float:
    """Residual of the three-order relation between Hankel transforms.

    With ``nu = alpha + l`` this is
    ``|H_nu(phi)(t) - 2(nu-1) H_{nu-1}(phi)(t) + H_{nu-2}(s^2 phi)(t)|``.
    Substituting the Bessel recurrence ``J_{nu-2} + J_nu = 2(nu-1)/z J_{nu-1}``
    into the integral shows the left member actually carries a factor
    ``t^2``; pass ``t_squared=True`` to test
    ``t^2 H_nu(phi)(t) = 2(nu-1) H_{nu-1}(phi)(t) - H_{nu-2}(s^2 phi)(t)``.
    Without it the relation only holds at ``t = 1``.
    """
    a = to_rational(alpha)
    if a < 0 or (2 * a).denominator != 1:
        raise ValueError(f"alpha must be a nonnegative integer or half-odd integer, got {a}")
    nu = a + l
    if nu - 2 <= -1:
        raise ValueError(f"order alpha+l-2 = {nu - 2} must exceed -1")
    sub = tol / 10.0
    h0 = hankel(profile, nu, t, sub).value
    h1 = hankel(profile, nu - 1, t, sub).value
    h2 = hankel(profile.times_power(1), nu - 2, t, sub).value
    lhs = t * t * h0 if t_squared else h0
    return abs(lhs - (2.0 * float(nu - 1) * h1 - h2))


def _eval_grid(p: HomogeneousPolynomial, coords: Sequence[np.ndarray]) -> np.ndarray:
    out = np.zeros_like(coords[0])
    for e, c in p.terms.items():
        term = np.full_like(coords[0], float(c))
        for xi, k in zip(coords, e):
            if k:
                term = term * xi**k
        out = out + term
    return out


def fourier_gauss_hermite(p: HomogeneousPolynomial, y: Sequence[float], a: float = 0.5, nodes: int = 40) -> complex:
    """``(2 pi)^{-d/2} int e^{-a|x|^2} P(x) e^{i(y|x)} dx`` by tensor Gauss-Hermite.

    A direct d-dimensional check on the Bochner formulas for Gaussian radial
    factors; the node count grows as ``nodes**d`` so only ``d <= 4`` is allowed.
    """
    d = p.dim
    if d > 4:
        raise ValueError("tensor Gauss-Hermite oracle is limited to d <= 4")
    y = _point(y, d)
    u, w = hermgauss(nodes)
    x1 = u / math.sqrt(a)
    grids = np.meshgrid(*([x1] * d), indexing="ij")
    weights = np.ones_like(grids[0])
    for W in np.meshgrid(*([w] * d), indexing="ij"):
        weights = weights * W
    phase = sum(yi * g for yi, g in zip(y, grids))
    vals = _eval_grid(p, grids)
    scale = (2.0 * math.pi) ** (-d / 2.0) * a ** (-d / 2.0)
    return complex(scale * np.sum(weights * vals * np.cos(phase)), scale * np.sum(weights * vals * np.sin(phase)))
