from fractions import Fraction
import math

import numpy as np
import pytest
from scipy.special import eval_gegenbauer

from zonalharm.gegenbauer import (
    ZonalKernel,
    expand_power,
    gegenbauer,
    gegenbauer_at_one,
    gegenbauer_eval,
    gegenbauer_values,
    generating_function_check,
    generating_function_residuals,
    zonal_kernel_eval,
    zonal_polynomial,
)
from zonalharm.harmonic import alpha_for_dim, decompose, harmonic_dim
from zonalharm.polyalg import HomogeneousPolynomial, UnitVector, evaluate_exact, linear_form, sphere_inner_product

ALPHAS = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(5, 2)]


def test_low_degrees():
    a = Fraction(3, 2)
    assert gegenbauer(a, 0).coefficients == (1,)
    assert gegenbauer(a, 1).coefficients == (0, 2 * a)
    assert gegenbauer(a, 2).coefficients == (-a, 0, 2 * a * (a + 1))


def test_values_at_one():
    assert gegenbauer_at_one(Fraction(1, 2), 0) == 1
    assert gegenbauer_at_one(Fraction(1, 2), 2) == 1
    assert gegenbauer_at_one(1, 3) == 4
    for a in ALPHAS:
        for l in range(12):
            assert gegenbauer(a, l).at_exact(1) == gegenbauer_at_one(a, l)


@pytest.mark.parametrize("a", ALPHAS)
def test_recurrence_exact(a):
    polys = [gegenbauer(a, l).coefficients for l in range(32)]
    for l in range(1, 31):
        lhs = [(l + 1) * c for c in polys[l + 1]]
        shifted = [Fraction(0)] + [2 * (l + a) * c for c in polys[l]]
        prev = list(polys[l - 1]) + [Fraction(0)] * 2
        rhs = [s - (l + 2 * a - 1) * p for s, p in zip(shifted, prev)]
        assert lhs == rhs


@pytest.mark.parametrize("a", ALPHAS)
def test_parity(a):
    for l in range(10):
        coeffs = gegenbauer(a, l).coefficients
        assert all(c == 0 for i, c in enumerate(coeffs) if (i - l) % 2)


@pytest.mark.parametrize("a", ALPHAS + [Fraction(7)])
def test_float_against_scipy(a):
    t = np.linspace(-1, 1, 41)
    vals = gegenbauer_values(a, 25, t)
    for l in range(26):
        ref = eval_gegenbauer(l, float(a), t)
        assert np.allclose(vals[l], ref, rtol=1e-12, atol=1e-12 * float(gegenbauer_at_one(a, l)))


def test_eval_matches_exact():
    for a in ALPHAS:
        for l in range(15):
            g = gegenbauer(a, l)
            for t in (-0.9, -0.25, 0.0, 0.5, 1.0):
                assert math.isclose(gegenbauer_eval(a, l, t), float(g.at_exact(t)), rel_tol=1e-12, abs_tol=1e-12)
                assert g(t) == gegenbauer_eval(a, l, t)


class TestKernel:
    def test_normalized_at_pole(self):
        eta = UnitVector.normalize([1, 2, -1, 0.5])
        for l in range(8):
            assert math.isclose(zonal_kernel_eval(ZonalKernel(Fraction(1), l, eta), eta), 1.0, rel_tol=1e-13)

    def test_odd_at_antipode(self):
        eta = UnitVector.normalize([0.3, -0.2, 0.9])
        anti = [-c for c in eta]
        for l in (1, 3, 5):
            assert math.isclose(ZonalKernel(Fraction(1, 2), l, eta)(anti), -1.0, rel_tol=1e-13)

    def test_dimension_checked(self):
        with pytest.raises(ValueError):
            ZonalKernel(Fraction(1, 2), 2, UnitVector.axis(4, 0))

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_reproducing_property(self, d):
        a = alpha_for_dim(d)
        for l in range(7):
            eta = [0] * d
            eta[d - 1] = 1
            Z = zonal_polynomial(a, l, eta)
            dim = harmonic_dim(a, l)
            for e in _monomials(d, l):
                h = decompose(HomogeneousPolynomial.monomial(e)).component(0)
                assert dim * sphere_inner_product(Z, h) == evaluate_exact(h, eta)

    def test_reproducing_rational_direction(self):
        a = alpha_for_dim(3)
        eta = [Fraction(3, 5), Fraction(4, 5), 0]
        h = decompose(HomogeneousPolynomial(3, 3, {(1, 1, 1): 1, (3, 0, 0): 2, (0, 1, 2): -1})).component(0)
        assert harmonic_dim(a, 3) * sphere_inner_product(zonal_polynomial(a, 3, eta), h) == evaluate_exact(h, eta)

    @pytest.mark.parametrize("d", [3, 4, 6])
    def test_orthogonal_degrees(self, d):
        a = alpha_for_dim(d)
        eta = [Fraction(3, 5), 0, Fraction(4, 5)] + [0] * (d - 3)
        Zs = [zonal_polynomial(a, l, eta) for l in range(7)]
        for l in range(7):
            for m in range(l + 2, 7, 2):
                assert sphere_inner_product(Zs[l], Zs[m]) == 0

    def test_zonal_polynomial_restricts_to_kernel(self):
        a = Fraction(1)
        eta = [Fraction(0), Fraction(3, 5), Fraction(4, 5), Fraction(0)]
        xi = UnitVector.normalize([0.2, -0.5, 0.3, 0.7])
        Z = zonal_polynomial(a, 5, eta)
        ref = ZonalKernel(a, 5, UnitVector(tuple(float(c) for c in eta)))(xi)
        assert math.isclose(float(evaluate_exact(Z, list(xi))), ref, rel_tol=1e-12)


def _monomials(d, l):
    if d == 1:
        yield (l,)
        return
    for a in range(l, -1, -1):
        for rest in _monomials(d - 1, l - a):
            yield (a,) + rest


class TestExpandPower:
    def test_small(self):
        a = Fraction(3, 2)
        assert expand_power(a, 0) == [(0, 1)]
        assert expand_power(a, 1) == [(0, 1 / (2 * a))]

    @pytest.mark.parametrize("d", [3, 4, 5, 7])
    def test_matches_decomposition(self, d):
        a = alpha_for_dim(d)
        for eta in ([0] * (d - 1) + [1], [Fraction(3, 5), Fraction(4, 5)] + [0] * (d - 2)):
            lin = linear_form(eta)
            power = HomogeneousPolynomial.constant(d)
            for l in range(9):
                if l:
                    power = power * lin
                dec = decompose(power)
                for k, w in expand_power(a, l):
                    target = zonal_polynomial(a, l - 2 * k, eta).scale(w * gegenbauer_at_one(a, l - 2 * k))
                    assert dec.component(k) == target

    def test_numeric(self):
        a, t = Fraction(1), 0.37
        for l in range(10):
            total = math.fsum(float(w) * gegenbauer_eval(a, l - 2 * k, t) for k, w in expand_power(a, l))
            assert math.isclose(total, t**l, rel_tol=1e-13, abs_tol=1e-15)


class TestGeneratingFunction:
    def test_r_zero(self):
        assert generating_function_check(Fraction(1, 2), 0.0, 0.4, 0) == 0.0

    @pytest.mark.parametrize("a", [Fraction(1, 2), Fraction(1), Fraction(3, 2)])
    def test_t_one(self, a):
        r = 0.3
        partial = math.fsum(r**m * float(gegenbauer_at_one(a, m)) for m in range(80))
        assert math.isclose(partial, (1 - r) ** (-2 * float(a)), rel_tol=1e-13)
        assert generating_function_check(a, r, 1.0, 80) < 1e-13

    def test_example(self):
        assert generating_function_check(Fraction(1, 2), 0.5, 0.3, 60) < 1e-12

    def test_geometric_decay(self):
        res = generating_function_residuals(Fraction(1), 0.5, 0.0, 60)
        # odd and even partial sums interleave at t = 0; compare every other index
        ratios = [res[m + 2] / res[m] for m in range(0, 30, 2)]
        assert all(0.15 < q < 0.35 for q in ratios)

    def test_domain(self):
        with pytest.raises(ValueError):
            generating_function_check(1, 1.0, 0.0, 5)
