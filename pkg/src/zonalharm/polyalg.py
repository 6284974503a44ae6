"""Exact sparse homogeneous polynomials in d variables.

Coefficients are :class:`fractions.Fraction` throughout; floating point only
enters in :func:`evaluate`.  Surface integrals use the normalized measure on
the unit sphere (total mass 1).
"""
from __future__ import annotations

import json
import math
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

Rational = Fraction
Monomial = tuple[int, ...]

__all__ = [
    "Rational",
    "Monomial",
    "HomogeneousPolynomial",
    "UnitVector",
    "PolynomialParseError",
    "apply_signed_permutation",
    "laplacian",
    "laplacian_powers",
    "mul_r2",
    "r2_power",
    "linear_form",
    "evaluate",
    "evaluate_exact",
    "sphere_monomial_integral",
    "sphere_inner_product",
    "parse_polynomial",
    "to_rational",
]


def to_rational(value) -> Fraction:
    """Coerce ints, floats (exactly), strings ``p/q`` and Fractions."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


class HomogeneousPolynomial:
    """Immutable homogeneous polynomial of fixed dimension and degree.

    ``terms`` maps exponent tuples to nonzero :class:`~fractions.Fraction`
    coefficients.  The zero polynomial keeps its nominal degree so that it can
    still take part in degree-checked arithmetic.
    """

    __slots__ = ("_dim", "_deg", "_terms", "_hash")

    def __init__(self, dim: int, degree: int, terms: Mapping[Sequence[int], object] | None = None):
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {dim}")
        if degree < 0:
            raise ValueError(f"degree must be nonnegative, got {degree}")
        clean: dict[Monomial, Fraction] = {}
        for exps, coef in (terms or {}).items():
            e = tuple(int(v) for v in exps)
            if len(e) != dim:
                raise ValueError(f"monomial {e} has length {len(e)}, expected {dim}")
            if any(v < 0 for v in e):
                raise ValueError(f"negative exponent in {e}")
            if sum(e) != degree:
                raise ValueError(f"monomial {e} has degree {sum(e)}, expected {degree}")
            c = to_rational(coef)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self._dim = dim
        self._deg = degree
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, degree: int, terms: dict[Monomial, Fraction]) -> "HomogeneousPolynomial":
        # trusted constructor: terms already validated and free of zeros
        obj = cls.__new__(cls)
        obj._dim = dim
        obj._deg = degree
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, dim: int, value=1) -> "HomogeneousPolynomial":
        return cls(dim, 0, {(0,) * dim: value})

    @classmethod
    def zero(cls, dim: int, degree: int) -> "HomogeneousPolynomial":
        return cls._raw(dim, degree, {})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coef=1) -> "HomogeneousPolynomial":
        e = tuple(exponents)
        return cls(len(e), sum(e), {e: coef})

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def degree(self) -> int:
        return self._deg

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        """Terms in canonical order (descending lexicographic exponents)."""
        return sorted(self._terms.items(), reverse=True)

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _check_compatible(self, other: "HomogeneousPolynomial") -> None:
        if self._dim != other._dim:
            raise ValueError(f"dimension mismatch: {self._dim} vs {other._dim}")
        if self._deg != other._deg:
            raise ValueError(f"degree mismatch: {self._deg} vs {other._deg}")

    def __add__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return HomogeneousPolynomial._raw(self._dim, self._deg, out)

    def __neg__(self):
        return HomogeneousPolynomial._raw(self._dim, self._deg, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "HomogeneousPolynomial":
        f = to_rational(factor)
        if not f:
            return HomogeneousPolynomial.zero(self._dim, self._deg)
        return HomogeneousPolynomial._raw(self._dim, self._deg, {e: c * f for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, HomogeneousPolynomial):
            if self._dim != other._dim:
                raise ValueError(f"dimension mismatch: {self._dim} vs {other._dim}")
            out: dict[Monomial, Fraction] = defaultdict(Fraction)
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
            return HomogeneousPolynomial._raw(
                self._dim, self._deg + other._deg, {e: c for e, c in out.items() if c}
            )
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return self._dim == other._dim and self._deg == other._deg and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dim, self._deg, frozenset(self._terms.items())))
        return self._hash

    def permute(self, perm: Sequence[int], signs: Sequence[int] | None = None) -> "HomogeneousPolynomial":
        """Return ``x -> P(M x)`` where ``(M x)[perm[i]] = signs[i] * x[i]``.

        ``M`` is a signed permutation matrix, so this is the rotation action
        ``(g.P)(x) = P(g^{-1} x)`` with ``g = M^T``.  See :func:`apply_signed_permutation`.
        """
        d = self._dim
        if sorted(perm) != list(range(d)):
            raise ValueError(f"{perm} is not a permutation of range({d})")
        signs = [1] * d if signs is None else list(signs)
        out = {}
        for e, c in self._terms.items():
            new = [0] * d
            sign = 1
            for i in range(d):
                # variable y_{perm[i]} becomes signs[i] * x_i
                k = e[perm[i]]
                new[i] = k
                if signs[i] < 0 and k % 2:
                    sign = -sign
            out[tuple(new)] = c * sign
        return HomogeneousPolynomial._raw(d, self._deg, out)

    # ---- serialization -------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.items()):
            neg = c < 0
            a = -c if neg else c
            factors = [f"x{j + 1}" + (f"^{k}" if k > 1 else "") for j, k in enumerate(e) if k]
            if not factors:
                body = str(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = str(a) + "*" + "*".join(factors)
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def to_dict(self) -> dict:
        return {
            "d": self._dim,
            "l": self._deg,
            "terms": [{"e": list(e), "c": str(c)} for e, c in self.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "HomogeneousPolynomial":
        return cls(int(data["d"]), int(data["l"]), {tuple(t["e"]): Fraction(t["c"]) for t in data["terms"]})

    @classmethod
    def from_json(cls, text: str) -> "HomogeneousPolynomial":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return f"HomogeneousPolynomial(d={self._dim}, l={self._deg}, {self.to_text()!r})"

    __str__ = to_text


@dataclass(frozen=True)
class UnitVector:
    components: tuple[float, ...]

    def __post_init__(self):
        comps = tuple(float(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        norm = math.sqrt(math.fsum(c * c for c in comps))
        if abs(norm - 1.0) > 1e-14:
            raise ValueError(f"not a unit vector: norm = {norm!r}")

    @classmethod
    def normalize(cls, components: Iterable[float]) -> "UnitVector":
        comps = [float(c) for c in components]
        norm = math.sqrt(math.fsum(c * c for c in comps))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        out = [c / norm for c in comps]
        # one Newton step pulls the norm inside 1e-14 for any length
        n2 = math.sqrt(math.fsum(c * c for c in out))
        return cls(tuple(c / n2 for c in out))

    @classmethod
    def axis(cls, dim: int, index: int, sign: int = 1) -> "UnitVector":
        comps = [0.0] * dim
        comps[index] = float(sign)
        return cls(tuple(comps))

    @property
    def dim(self) -> int:
        return len(self.components)

    def dot(self, other: "UnitVector | Sequence[float]") -> float:
        comps = other.components if isinstance(other, UnitVector) else tuple(other)
        if len(comps) != len(self.components):
            raise ValueError(f"dimension mismatch: {len(self.components)} vs {len(comps)}")
        return math.fsum(a * b for a, b in zip(self.components, comps))

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)


def apply_signed_permutation(perm: Sequence[int], signs: Sequence[int] | None, x: Sequence[float]) -> list[float]:
    """``M x`` for the signed permutation used by :meth:`HomogeneousPolynomial.permute`."""
    signs = [1] * len(perm) if signs is None else signs
    y = [0.0] * len(perm)
    for i, j in enumerate(perm):
        y[j] = signs[i] * x[i]
    return y


# ---- differential operators ---------------------------------------------


def laplacian(p: HomogeneousPolynomial) -> HomogeneousPolynomial:
    d, l = p.dim, p.degree
    if l < 2:
        return HomogeneousPolynomial.zero(d, 0)
    out: dict[Monomial, Fraction] = defaultdict(Fraction)
    for e, c in p._terms.items():
        for i, k in enumerate(e):
            if k >= 2:
                new = e[:i] + (k - 2,) + e[i + 1:]
                out[new] += c * (k * (k - 1))
    return HomogeneousPolynomial._raw(d, l - 2, {e: c for e, c in out.items() if c})


def laplacian_powers(p: HomogeneousPolynomial, count: int | None = None) -> list[HomogeneousPolynomial]:
    """``[P, ΔP, Δ²P, ...]`` up to ``Δ^count P`` (default ``count = l // 2``)."""
    n = p.degree // 2 if count is None else count
    seq = [p]
    for _ in range(n):
        seq.append(laplacian(seq[-1]))
    return seq


def mul_r2(p: HomogeneousPolynomial) -> HomogeneousPolynomial:
    d = p.dim
    out: dict[Monomial, Fraction] = defaultdict(Fraction)
    for e, c in p._terms.items():
        for i in range(d):
            out[e[:i] + (e[i] + 2,) + e[i + 1:]] += c
    return HomogeneousPolynomial._raw(d, p.degree + 2, {e: c for e, c in out.items() if c})


@lru_cache(maxsize=256)
def r2_power(dim: int, k: int) -> HomogeneousPolynomial:
    """``(x_1^2 + ... + x_d^2)^k``."""
    p = HomogeneousPolynomial.constant(dim)
    for _ in range(k):
        p = mul_r2(p)
    return p


def linear_form(eta: Sequence) -> HomogeneousPolynomial:
    """The degree-1 polynomial ``x -> (x|eta)`` with exact coefficients.

    Float entries are converted exactly (every double is a dyadic rational).
    """
    d = len(eta)
    terms = {}
    for i, v in enumerate(eta):
        e = [0] * d
        e[i] = 1
        terms[tuple(e)] = to_rational(v)
    return HomogeneousPolynomial(d, 1, terms)


# ---- evaluation -----------------------------------------------------------


def evaluate(p: HomogeneousPolynomial, x: Sequence[float]) -> float:
    if len(x) != p.dim:
        raise ValueError(f"dimension mismatch: point has length {len(x)}, polynomial has d={p.dim}")
    xs = [float(v) for v in x]
    vals = []
    for e, c in p._terms.items():
        t = float(c)
        for v, k in zip(xs, e):
            if k:
                t *= v**k
        vals.append(t)
    return math.fsum(vals)


def evaluate_exact(p: HomogeneousPolynomial, x: Sequence) -> Fraction:
    """Exact value at a point whose coordinates are rationals or floats."""
    if len(x) != p.dim:
        raise ValueError(f"dimension mismatch: point has length {len(x)}, polynomial has d={p.dim}")
    xs = [to_rational(v) for v in x]
    total = Fraction(0)
    for e, c in p._terms.items():
        t = c
        for v, k in zip(xs, e):
            if k:
                t *= v**k
        total += t
    return total


# ---- sphere integrals -----------------------------------------------------


@lru_cache(maxsize=None)
def _odd_double_factorial(n: int) -> int:
    """``(2n-1)!! = 1*3*...*(2n-1)``, with ``(-1)!! = 1``."""
    out = 1
    for i in range(1, 2 * n, 2):
        out *= i
    return out


def _rising(a: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= a + i
    return out


def sphere_monomial_integral(exponents: Sequence[int]) -> Fraction:
    """Mean of ``xi^e`` over the unit sphere ``S^{d-1}``.

    Zero if any exponent is odd; otherwise, with ``e = 2*beta``,
    ``prod (1/2)_{beta_i} / (d/2)_{|beta|}``, which is the Gamma-function
    ratio with every power of ``sqrt(pi)`` cancelled.
    """
    e = tuple(exponents)
    if any(k < 0 for k in e):
        raise ValueError(f"negative exponent in {e}")
    if any(k % 2 for k in e):
        return Fraction(0)
    d = len(e)
    beta = [k // 2 for k in e]
    num = 1
    for b in beta:
        num *= _odd_double_factorial(b)
    total = sum(beta)
    return Fraction(num, 2**total) / _rising(Fraction(d, 2), total)


def _integer_form(p: HomogeneousPolynomial) -> tuple[dict[Monomial, int], int]:
    den = 1
    for c in p._terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    return {e: int(c * den) for e, c in p._terms.items()}, den


def sphere_inner_product(p: HomogeneousPolynomial, q: HomogeneousPolynomial) -> Fraction:
    """Exact ``<P|Q> = mean over S^{d-1} of P * Q`` (real coefficients)."""
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")
    if not p or not q or (p.degree + q.degree) % 2:
        return Fraction(0)
    d = p.dim
    half = (p.degree + q.degree) // 2
    pi_, pden = _integer_form(p)
    qi, qden = _integer_form(q)
    # only exponent pairs of equal parity contribute
    buckets: dict[tuple[int, ...], list[tuple[Monomial, int]]] = defaultdict(list)
    for f, c in qi.items():
        buckets[tuple(k & 1 for k in f)].append((f, c))
    odf = _odd_double_factorial
    acc = 0
    for e, a in pi_.items():
        partners = buckets.get(tuple(k & 1 for k in e))
        if not partners:
            continue
        sub = 0
        for f, b in partners:
            w = b
            for i in range(d):
                w *= odf((e[i] + f[i]) >> 1)
            sub += w
        acc += a * sub
    if not acc:
        return Fraction(0)
    return Fraction(acc, pden * qden * 2**half) / _rising(Fraction(d, 2), half)


# ---- text format ----------------------------------------------------------


class PolynomialParseError(ValueError):
    """Malformed polynomial text; ``position`` is a 0-based column."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x(?P<idx>\d+)(?:\^(?P<exp>\d+))?)|(?P<op>[-+*])|(?P<bad>\S))")


def parse_polynomial(text: str, dim: int, degree: int | None = None) -> HomogeneousPolynomial:
    """Parse ``3/2*x1^2*x2 - x3^3`` style text into a homogeneous polynomial.

    Variables are 1-based.  ``degree`` is only needed for the zero polynomial;
    when given it must agree with every term.
    """
    pos = 0
    terms: dict[Monomial, Fraction] = defaultdict(Fraction)
    sign = 1
    expect_term = True
    coef: Fraction | None = None
    exps = [0] * dim
    have_factor = False
    after_star = False
    term_start = 0
    term_degrees: list[tuple[int, int]] = []

    def finish(at: int):
        nonlocal coef, exps, have_factor, sign
        if not have_factor:
            raise PolynomialParseError("expected a term", text, at)
        if after_star:
            raise PolynomialParseError("dangling '*'", text, at)
        c = (coef if coef is not None else Fraction(1)) * sign
        terms[tuple(exps)] += c
        if c or any(exps):
            term_degrees.append((sum(exps), term_start))
        coef, exps, have_factor, sign = None, [0] * dim, False, 1

    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastgroup) if m.lastgroup else pos
        if m.group("bad"):
            raise PolynomialParseError(f"unexpected character {m.group('bad')!r}", text, start)
        if m.group("op") in ("+", "-"):
            if have_factor:
                finish(start)
            elif not expect_term or coef is not None:
                raise PolynomialParseError("unexpected sign", text, start)
            if m.group("op") == "-":
                sign = -sign
            expect_term = True
            after_star = False
            term_start = start + 1
        elif m.group("op") == "*":
            if not have_factor or after_star:
                raise PolynomialParseError("unexpected '*'", text, start)
            after_star = True
        else:
            if have_factor and not after_star:
                raise PolynomialParseError("missing operator", text, start)
            if not have_factor:
                term_start = start
            if m.group("num"):
                if coef is not None or any(exps):
                    raise PolynomialParseError("coefficient must come first in a term", text, start)
                num = m.group("num")
                if "/" in num and int(num.split("/")[1]) == 0:
                    raise PolynomialParseError("zero denominator", text, start)
                coef = Fraction(num)
            else:
                idx = int(m.group("idx"))
                if not 1 <= idx <= dim:
                    raise PolynomialParseError(f"variable x{idx} outside 1..{dim}", text, start)
                exps[idx - 1] += int(m.group("exp") or 1)
            have_factor = True
            after_star = False
            expect_term = False
        pos = m.end()
    if text.strip() == "":
        raise PolynomialParseError("empty polynomial", text, 0)
    finish(len(text))
    clean = {e: c for e, c in terms.items() if c}
    if degree is None:
        degree = term_degrees[0][0] if term_degrees else 0
    for dg, at in term_degrees:
        if dg != degree:
            raise PolynomialParseError(f"term of degree {dg} in a polynomial of degree {degree}", text, at)
    return HomogeneousPolynomial._raw(dim, degree, clean)
