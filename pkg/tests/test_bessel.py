from fractions import Fraction
import math

import mpmath
import numpy as np
import pytest
from scipy.special import jv

from zonalharm.bessel import (
    BesselOrder,
    bessel_j,
    finite_expansion_halfodd_residual,
    finite_expansion_integer_residual,
    halfodd_closed_form,
    j_to_J_factor,
    multistep_coefficient,
    multistep_coefficient_J,
    multistep_difference,
    multistep_difference_J,
    multistep_residual,
    multistep_residual_J,
    spherical_j,
    spherical_j_array,
    spherical_j_exact,
)

HALF = Fraction(1, 2)
ALPHAS = [HALF, Fraction(1), Fraction(3, 2), Fraction(2)]
RADII = [0.5, 1.0, 2.0, 5.0, 10.0]


def test_order_validation():
    assert BesselOrder("3/2") == Fraction(3, 2)
    with pytest.raises(ValueError):
        BesselOrder(-1)


def test_argument_cap():
    with pytest.raises(ValueError, match="cap"):
        bessel_j(0, 31.0)
    with pytest.raises(ValueError):
        spherical_j(1, -0.5)


def test_origin():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(2, 0.0) == 0.0
    for nu in (Fraction(-1, 2), 0, HALF, 7):
        assert spherical_j(nu, 0.0) == 1.0


@pytest.mark.parametrize("t", [1.0, 2.0, 5.0])
def test_minus_half(t):
    assert abs(bessel_j(Fraction(-1, 2), t) - math.sqrt(2 / (math.pi * t)) * math.cos(t)) < 1e-13


def test_half_closed_forms():
    assert abs(bessel_j(HALF, math.pi)) < 1e-13
    assert spherical_j(HALF, 1.0) == pytest.approx(math.sin(1.0), rel=1e-15)
    t = 2.0
    assert abs(spherical_j(Fraction(3, 2), t) - 3 * (math.sin(t) - t * math.cos(t)) / t**3) < 1e-12


@pytest.mark.parametrize("nu", [Fraction(-1, 2), 0, Fraction(1, 3), HALF, 1, Fraction(5, 2), 4, 10, Fraction(21, 2)])
def test_against_mpmath(nu):
    for t in [0.01, 0.3, 1.0, 2.5, 7.0, 12.0, 19.9, 25.0, 29.9]:
        ref = mpmath.besselj(mpmath.mpf(nu.numerator) / nu.denominator if isinstance(nu, Fraction) else nu, t)
        got = bessel_j(nu, t)
        assert abs(got - float(ref)) <= 4e-16 * max(1.0, abs(float(ref)))


def test_spherical_against_mpmath_relative():
    # j_nu keeps full relative accuracy, including where J_nu is tiny
    for nu in (HALF, 3, Fraction(15, 2)):
        for t in (0.5, 3.0, 11.0, 23.0):
            with mpmath.workdps(40):
                v = mpmath.mpf(nu.numerator) / nu.denominator if isinstance(nu, Fraction) else mpmath.mpf(nu)
                ref = mpmath.gamma(v + 1) * (t / mpmath.mpf(2)) ** (-v) * mpmath.besselj(v, t)
            assert abs(spherical_j(nu, t) - float(ref)) <= 2e-16 * max(abs(float(ref)), 1e-3)


def test_exact_series_is_rational():
    v = spherical_j_exact(1, 0.5)
    assert isinstance(v, Fraction)
    assert float(v) == spherical_j(1, 0.5)


def test_array_path():
    z = np.linspace(0, 29.9, 301)
    for nu in (HALF, 2, Fraction(7, 2)):
        ref = np.array([spherical_j(nu, float(t)) for t in z])
        assert np.allclose(spherical_j_array(nu, z), ref, rtol=0, atol=1e-14)


def test_classical_recurrence():
    for twice_nu in range(1, 21):
        nu = Fraction(twice_nu, 2)
        for t in np.linspace(0.25, 20.0, 40):
            res = bessel_j(nu - 1, t) + bessel_j(nu + 1, t) - 2 * float(nu) / t * bessel_j(nu, t)
            assert abs(res) < 1e-12


def test_derivative_relation():
    h = 1e-5
    for nu in (HALF, 1, Fraction(5, 2)):
        g = lambda t: t ** (-float(nu)) * bessel_j(nu, t)  # noqa: E731
        for t in (0.7, 2.0, 6.5):
            lhs = (g(t + h) - g(t - h)) / (2 * h) / t
            rhs = -(t ** (-float(nu) - 1)) * bessel_j(nu + 1, t)
            assert abs(lhs - rhs) < 1e-7


def test_small_argument_behaviour():
    for nu in (HALF, 2, 5):
        ts = np.linspace(0.01, 0.1, 10)
        C = max((1 - spherical_j(nu, t)) / t**2 for t in ts)
        assert abs(C - 1 / (4 * (float(nu) + 1))) <= 0.1 / (4 * (float(nu) + 1))


class TestMultistep:
    def test_unit_coefficient(self):
        for a in ALPHAS:
            for l in range(2, 13):
                for s in range(1, l // 2 + 1):
                    assert multistep_coefficient(a, l, s, s) == 1

    def test_example(self):
        assert multistep_residual(HALF, 2, 1, 1.0) < 1e-13

    def test_origin(self):
        for a in ALPHAS:
            for l in range(2, 9):
                for s in range(1, l // 2 + 1):
                    assert multistep_residual(a, l, s, 0.0) < 1e-15

    def test_grid(self):
        worst = 0.0
        for a in ALPHAS:
            for l in range(2, 11):
                for s in range(1, l // 2 + 1):
                    for r in RADII:
                        worst = max(worst, multistep_residual(a, l, s, r), multistep_residual_J(a, l, s, r))
        assert worst < 1e-11

    def test_J_form_reduces_to_three_term(self):
        # s = 1: (2/r) J_{nu} = J_{nu+1}/(nu) * ... compare against the classical recurrence directly
        a, l, r = HALF, 2, 1.0
        nu = a + l - 1
        c0 = float(multistep_coefficient_J(a, l, 1, 0))
        c1 = float(multistep_coefficient_J(a, l, 1, 1))
        # classical: (2 nu / r) J_nu = J_{nu-1} + J_{nu+1}, i.e. (2/r) J_nu = (J_{nu-1} + J_{nu+1}) / nu
        assert c0 == pytest.approx(1 / float(nu)) and c1 == pytest.approx(1 / float(nu))
        classical = (jv(float(nu) - 1, r) + jv(float(nu) + 1, r)) / float(nu)
        assert abs(2 / r * bessel_j(nu, r) - classical) < 1e-13
        assert multistep_residual_J(a, l, 1, r) < 1e-13

    def test_j_and_J_forms_agree(self):
        for a in ALPHAS:
            for l in range(2, 9):
                for s in range(1, l // 2 + 1):
                    for r in (0.5, 2.0, 6.0):
                        scaled = multistep_difference(a, l, s, r) * j_to_J_factor(a, l, s, r)
                        assert abs(scaled - multistep_difference_J(a, l, s, r)) < 1e-13

    def test_validity(self):
        with pytest.raises(ValueError):
            multistep_residual(HALF, 4, 3, 1.0)
        with pytest.raises(ValueError):
            multistep_residual(0, 2, 1, 1.0)  # Gamma(0) appears
        with pytest.raises(ValueError):
            multistep_residual_J(HALF, 2, 1, 0.0)


class TestFiniteExpansions:
    def test_integer_examples(self):
        assert finite_expansion_integer_residual(0, 3.0) == 0.0
        assert finite_expansion_integer_residual(1, 1.0) < 1e-14
        assert abs(bessel_j(0, 1.0) + bessel_j(2, 1.0) - 2 * bessel_j(1, 1.0)) < 1e-14

    def test_integer_grid(self):
        for n in range(9):
            for t in (0.5, 1.0, 2.0, 5.0):
                assert finite_expansion_integer_residual(n, t) < 1e-12

    def test_halfodd_examples(self):
        assert finite_expansion_halfodd_residual(0, 1.0) < 1e-14
        t = 2.0
        assert abs(halfodd_closed_form(1, t) - math.sqrt(2 / (math.pi * t)) * (math.sin(t) / t - math.cos(t))) < 1e-15
        assert finite_expansion_halfodd_residual(1, 2.0) < 1e-13

    def test_halfodd_grid(self):
        for n in range(7):
            for t in (0.5, 1.0, 2.0, 5.0, 10.0):
                assert finite_expansion_halfodd_residual(n, t) < 1e-11

    def test_halfodd_against_scipy(self):
        for n in range(7):
            for t in (0.75, 3.0, 9.0):
                assert abs(halfodd_closed_form(n, t) - jv(n + 0.5, t)) < 1e-14

    def test_domain(self):
        with pytest.raises(ValueError):
            finite_expansion_integer_residual(-1, 1.0)
        with pytest.raises(ValueError):
            finite_expansion_halfodd_residual(2, 0.0)
