"""Canonical decomposition of homogeneous polynomials into harmonic parts.

Every ``P`` of degree ``l`` in ``d >= 3`` variables splits uniquely as
``P = sum_k r^{2k} h_{l-2k}(P)`` with each ``h`` harmonic, and

    h_{l-2k}(P) = sum_j e^l_j(k) r^{2j} Delta^{k+j} P,
    e^l_j(k) = (-1)^j (a+l-2k) Gamma(a+l-2k-j) / (4^{k+j} k! j! Gamma(a+l+1-k)),

where ``a = (d-2)/2``.  All arithmetic is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ._gamma import gamma_ratio, rising
from .polyalg import HomogeneousPolynomial, laplacian_powers, mul_r2, r2_power, to_rational

__all__ = [
    "Alpha",
    "alpha_for_dim",
    "dim_for_alpha",
    "check_alpha",
    "HarmonicDecomposition",
    "harmonic_coefficient",
    "decompose",
    "harmonic_dim",
    "project",
    "laplacian_kernel_dim",
]

Alpha = Fraction


def alpha_for_dim(d: int) -> Fraction:
    if d < 3:
        raise ValueError(f"dimension must be at least 3, got {d}")
    return Fraction(d - 2, 2)


def check_alpha(alpha) -> Fraction:
    """Validate ``alpha = (d-2)/2`` for some ``d >= 3``."""
    a = to_rational(alpha)
    if (2 * a).denominator != 1 or a < Fraction(1, 2):
        raise ValueError(f"alpha must be an integer or half-odd integer >= 1/2, got {a}")
    return a


def dim_for_alpha(alpha) -> int:
    return int(2 * check_alpha(alpha)) + 2


def harmonic_coefficient(alpha, l: int, k: int, j: int) -> Fraction:
    a = check_alpha(alpha)
    if l < 0 or not 0 <= k <= l // 2 or not 0 <= j <= l // 2 - k:
        raise ValueError(f"index out of range: l={l}, k={k}, j={j}")
    base = a + l - 2 * k - j
    # Gamma(base) / Gamma(a+l+1-k) has k+j+1 factors
    value = (a + l - 2 * k) / rising(base, k + j + 1)
    value /= 4 ** (k + j) * factorial(k) * factorial(j)
    return -value if j % 2 else value


def harmonic_dim(alpha, l: int) -> int:
    """Dimension of the space of harmonic homogeneous polynomials of degree ``l``."""
    a = check_alpha(alpha)
    if l < 0:
        raise ValueError(f"degree must be nonnegative, got {l}")
    value = 2 * (l + a) * gamma_ratio(2 * a + l, 2 * a + 1) / factorial(l)
    if value.denominator != 1 or value <= 0:
        raise ArithmeticError(f"dimension formula gave non-integer {value} for alpha={a}, l={l}")
    return int(value)


@dataclass(frozen=True)
class HarmonicDecomposition:
    """``components[k] == (k, h_{l-2k})`` for ``k = 0 .. l // 2``."""

    source: HomogeneousPolynomial
    components: tuple[tuple[int, HomogeneousPolynomial], ...]

    @property
    def source_degree(self) -> int:
        return self.source.degree

    def component(self, k: int) -> HomogeneousPolynomial:
        return self.components[k][1]

    def projection(self, k: int) -> HomogeneousPolynomial:
        return r2_power(self.source.dim, k) * self.component(k)

    def reconstruct(self) -> HomogeneousPolynomial:
        total = HomogeneousPolynomial.zero(self.source.dim, self.source.degree)
        for k, _ in self.components:
            total = total + self.projection(k)
        return total

    def to_dict(self) -> dict:
        return {"components": [{"k": k, "h": h.to_dict()} for k, h in self.components]}


def decompose(p: HomogeneousPolynomial) -> HarmonicDecomposition:
    d, l = p.dim, p.degree
    a = alpha_for_dim(d)
    half = l // 2
    lap = laplacian_powers(p, half)
    comps = []
    for k in range(half + 1):
        # sum_j e_j(k) r^{2j} Delta^{k+j} P, accumulated Horner-style in r^2
        h = HomogeneousPolynomial.zero(d, l - 2 * k - 2 * (half - k))
        for j in range(half - k, -1, -1):
            term = lap[k + j].scale(harmonic_coefficient(a, l, k, j))
            h = term + mul_r2(h) if j < half - k else term
        comps.append((k, h))
    return HarmonicDecomposition(p, tuple(comps))


def project(p: HomogeneousPolynomial, k: int) -> HomogeneousPolynomial:
    """``r^{2k} h_{l-2k}(P)``, the component of ``P`` in ``r^{2k} H^{l-2k}``."""
    if not 0 <= k <= p.degree // 2:
        raise ValueError(f"k must lie in 0..{p.degree // 2}, got {k}")
    return decompose(p).projection(k)


def _monomials(dim: int, degree: int):
    if dim == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _monomials(dim - 1, degree - first):
            yield (first,) + rest


def laplacian_kernel_dim(dim: int, l: int) -> int:
    """``dim ker(Delta)`` on degree-``l`` polynomials by exact row reduction.

    Independent of :func:`harmonic_dim`: builds the matrix of the Laplacian
    in the monomial basis and computes its rank over the rationals.
    """
    source = list(_monomials(dim, l))
    if l < 2:
        return len(source)
    target_index = {e: i for i, e in enumerate(_monomials(dim, l - 2))}
    # columns = source monomials, rows = target monomials
    rows: list[dict[int, Fraction]] = [dict() for _ in target_index]
    for col, e in enumerate(source):
        for i, k in enumerate(e):
            if k >= 2:
                tgt = e[:i] + (k - 2,) + e[i + 1:]
                rows[target_index[tgt]][col] = Fraction(k * (k - 1))
    rank = 0
    remaining = [r for r in rows if r]
    while remaining:
        row = remaining.pop()
        if not row:
            continue
        pivot = min(row)
        rank += 1
        pv = row[pivot]
        nxt = []
        for other in remaining:
            if pivot in other:
                factor = other[pivot] / pv
                for c, v in row.items():
                    nv = other.get(c, Fraction(0)) - factor * v
                    if nv:
                        other[c] = nv
                    else:
                        other.pop(c, None)
            if other:
                nxt.append(other)
        remaining = nxt
    return len(source) - rank
