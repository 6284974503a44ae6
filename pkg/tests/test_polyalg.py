from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zonalharm.polyalg import (
    HomogeneousPolynomial,
    PolynomialParseError,
    UnitVector,
    apply_signed_permutation,
    evaluate,
    evaluate_exact,
    laplacian,
    mul_r2,
    parse_polynomial,
    r2_power,
    sphere_inner_product,
    sphere_monomial_integral,
    to_rational,
)

P = parse_polynomial


def _monomials(d, l):
    if d == 1:
        yield (l,)
        return
    for a in range(l, -1, -1):
        for rest in _monomials(d - 1, l - a):
            yield (a,) + rest


@st.composite
def polys(draw, dims=(3, 6), degrees=(0, 8), max_terms=5):
    d = draw(st.integers(*dims))
    l = draw(st.integers(*degrees))
    monos = list(_monomials(d, l))
    picks = draw(st.lists(st.sampled_from(monos), min_size=0, max_size=max_terms, unique=True))
    coefs = draw(
        st.lists(
            st.fractions(min_value=-9, max_value=9, max_denominator=6).filter(bool),
            min_size=len(picks),
            max_size=len(picks),
        )
    )
    return HomogeneousPolynomial(d, l, dict(zip(picks, coefs)))


class TestConstruction:
    def test_zero_coefficients_dropped(self):
        p = HomogeneousPolynomial(3, 2, {(2, 0, 0): 1, (0, 2, 0): 0})
        assert p.terms == {(2, 0, 0): Fraction(1)}

    def test_degree_mismatch_rejected(self):
        with pytest.raises(ValueError):
            HomogeneousPolynomial(3, 2, {(1, 0, 0): 1})

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            HomogeneousPolynomial(3, 1, {(1, 0): 1})

    def test_coefficients_are_reduced(self):
        p = HomogeneousPolynomial(3, 1, {(1, 0, 0): Fraction(4, 6)})
        c = p.coefficient((1, 0, 0))
        assert (c.numerator, c.denominator) == (2, 3)

    def test_float_coefficients_taken_exactly(self):
        assert to_rational(0.5) == Fraction(1, 2)

    def test_mixed_degree_addition_rejected(self):
        with pytest.raises(ValueError):
            P("x1", 3) + P("x1^2", 3)


class TestLaplacian:
    def test_r2(self):
        assert laplacian(P("x1^2 + x2^2 + x3^2", 3)) == HomogeneousPolynomial.constant(3, 6)

    def test_mixed_monomial(self):
        assert laplacian(P("x1*x2", 3)).is_zero()

    def test_quartic(self):
        assert laplacian(P("x1^4", 3)) == P("12*x1^2", 3)

    def test_constant_has_degree_zero_image(self):
        out = laplacian(HomogeneousPolynomial.constant(4, 5))
        assert out.is_zero()

    @settings(max_examples=40, deadline=None)
    @given(polys(), st.fractions(max_denominator=7), st.fractions(max_denominator=7), st.data())
    def test_linear(self, p, a, b, data):
        q = data.draw(polys(dims=(p.dim, p.dim), degrees=(p.degree, p.degree)))
        assert laplacian(p.scale(a) + q.scale(b)) == laplacian(p).scale(a) + laplacian(q).scale(b)

    @pytest.mark.parametrize("d", [3, 4, 7])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_laplacian_of_r_power(self, d, k):
        # Delta r^{2k} = 2k(2k + d - 2) r^{2k-2}
        assert laplacian(r2_power(d, k)) == r2_power(d, k - 1).scale(2 * k * (2 * k + d - 2))


class TestMulR2:
    def test_one(self):
        assert mul_r2(HomogeneousPolynomial.constant(3)) == P("x1^2 + x2^2 + x3^2", 3)

    def test_linear(self):
        assert mul_r2(P("x1", 3)) == P("x1^3 + x1*x2^2 + x1*x3^2", 3)

    @settings(max_examples=30, deadline=None)
    @given(polys(), st.data())
    def test_invisible_on_sphere(self, p, data):
        v = np.array(data.draw(st.lists(st.floats(-1, 1), min_size=p.dim, max_size=p.dim)))
        if np.linalg.norm(v) < 1e-3:
            v[0] = 1.0
        xi = list(v / np.linalg.norm(v))
        assert math.isclose(evaluate(mul_r2(p), xi), evaluate(p, xi), rel_tol=1e-12, abs_tol=1e-12)


class TestEvaluate:
    def test_simple(self):
        assert evaluate(P("x1^2", 3), (2, 0, 0)) == 4.0

    def test_origin(self):
        assert evaluate(P("x1*x2 - 3*x3^2", 3), (0, 0, 0)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            evaluate(P("x1", 3), (1, 2))

    @settings(max_examples=30, deadline=None)
    @given(polys(degrees=(1, 6)), st.floats(0.1, 3.0), st.data())
    def test_homogeneous(self, p, t, data):
        x = data.draw(st.lists(st.floats(-2, 2), min_size=p.dim, max_size=p.dim))
        tq = to_rational(t)
        assert evaluate_exact(p, [tq * to_rational(v) for v in x]) == tq**p.degree * evaluate_exact(p, x)
        assert math.isclose(evaluate(p, [t * v for v in x]), t**p.degree * evaluate(p, x), rel_tol=1e-12, abs_tol=1e-12)


class TestSphereIntegrals:
    def test_mass(self):
        assert sphere_monomial_integral((0, 0, 0)) == 1

    def test_second_moment(self):
        assert sphere_monomial_integral((2, 0, 0)) == Fraction(1, 3)

    def test_odd(self):
        assert sphere_monomial_integral((1, 1, 0)) == 0

    def test_inner_products(self):
        assert sphere_inner_product(HomogeneousPolynomial.constant(3), HomogeneousPolynomial.constant(3)) == 1
        assert sphere_inner_product(P("x1", 5), P("x2", 5)) == 0
        assert sphere_inner_product(P("x1^2", 3), P("x2^2", 3)) == Fraction(1, 15)

    def test_against_quadrature_d3(self):
        # tensor Gauss rule in spherical coordinates, independent of the closed form
        tc, wc = np.polynomial.legendre.leggauss(40)
        ph = np.linspace(0, 2 * np.pi, 80, endpoint=False)
        C, PH = np.meshgrid(tc, ph, indexing="ij")
        S = np.sqrt(1 - C**2)
        X = [S * np.cos(PH), S * np.sin(PH), C]
        W = np.outer(wc, np.full(ph.size, 2 * np.pi / ph.size)) / (4 * np.pi)
        for e in [(2, 2, 0), (4, 0, 2), (2, 2, 2), (6, 0, 0), (0, 4, 4)]:
            val = float(np.sum(W * X[0] ** e[0] * X[1] ** e[1] * X[2] ** e[2]))
            assert abs(val - float(sphere_monomial_integral(e))) < 1e-14

    @pytest.mark.parametrize("e", [(0, 0, 0, 0), (2, 0, 0, 2), (4, 2, 0), (2, 2, 2, 0, 2), (0, 6, 0)])
    def test_r2_sum_rule(self, e):
        d = len(e)
        bumped = [e[:i] + (e[i] + 2,) + e[i + 1:] for i in range(d)]
        assert sum(sphere_monomial_integral(b) for b in bumped) == sphere_monomial_integral(e)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            sphere_inner_product(P("x1", 3), P("x1", 4))

    @settings(max_examples=30, deadline=None)
    @given(polys(max_terms=4), st.data())
    def test_symmetric_positive(self, p, data):
        q = data.draw(polys(dims=(p.dim, p.dim), max_terms=4))
        assert sphere_inner_product(p, q) == sphere_inner_product(q, p)
        if not p.is_zero():
            assert sphere_inner_product(p, p) > 0

    def test_parity(self):
        assert sphere_inner_product(P("x1^3 + x1*x2^2", 3), P("x1^2 - x3^2", 3)) == 0


class TestText:
    def test_parse(self):
        p = P("3/2*x1^2*x2 - x3^3", 3)
        assert p.degree == 3
        assert p.terms == {(2, 1, 0): Fraction(3, 2), (0, 0, 3): Fraction(-1)}

    def test_json_shape(self):
        p = P("3/2*x1^2*x2", 3)
        assert p.to_dict() == {"d": 3, "l": 3, "terms": [{"e": [2, 1, 0], "c": "3/2"}]}
        assert HomogeneousPolynomial.from_json(p.to_json()) == p

    def test_like_terms_combine(self):
        assert P("x1*x2 + 2*x2*x1", 3) == P("3*x1*x2", 3)

    def test_zero(self):
        z = P("0", 3, degree=4)
        assert z.is_zero() and z.degree == 4

    @pytest.mark.parametrize(
        "text, pos",
        [
            ("x1^2 + x2 ^", 10),
            ("x1 + x2^2", 5),
            ("x4", 0),
            ("x1 x2", 3),
            ("2*", 2),
            ("", 0),
            ("1/0*x1", 0),
        ],
    )
    def test_errors_carry_position(self, text, pos):
        with pytest.raises(PolynomialParseError) as info:
            P(text, 3)
        assert info.value.position == pos
        assert "^" in str(info.value)

    @settings(max_examples=60, deadline=None)
    @given(polys())
    def test_round_trip(self, p):
        again = P(p.to_text(), p.dim, degree=p.degree)
        assert again.terms == p.terms
        assert P(again.to_text(), p.dim, degree=p.degree) == again


class TestSymmetry:
    def test_permute(self):
        p = P("x1^2*x2", 3)
        q = p.permute([1, 2, 0], [1, -1, 1])
        x = [0.3, -0.7, 1.1]
        assert math.isclose(evaluate(q, x), evaluate(p, apply_signed_permutation([1, 2, 0], [1, -1, 1], x)))

    def test_unit_vector(self):
        UnitVector((0.6, 0.8, 0.0))
        with pytest.raises(ValueError):
            UnitVector((1.0, 1.0, 0.0))
        assert UnitVector.normalize([3, 4, 0]).components == pytest.approx((0.6, 0.8, 0.0))
