"""Tests for the exact arithmetic kernel."""

import random
from fractions import Fraction

import pytest

from picardfuchs.exact import (
    AT_INFINITY,
    AlgebraicPoint,
    LocalElement,
    Polynomial,
    RationalFunction,
    ZeroPolynomial,
    laurent_expand,
    polynomial_gcd,
    squarefree_factor,
)


def P(*coeffs):
    """Polynomial from low-to-high coefficients."""
    return Polynomial(coeffs)


X = Polynomial.x()


class TestPolynomial:
    def test_normalization_strips_trailing_zeros(self):
        assert P(1, 2, 0, 0) == P(1, 2)
        assert P(0, 0).is_zero()
        assert P().degree() == -1

    def test_ring_ops(self):
        p = (X - 1) * (X + 1)
        assert p == P(-1, 0, 1)
        q, r = divmod(p, X - 1)
        assert q == X + 1 and r.is_zero()
        assert (X**3).derivative() == 3 * X**2

    def test_shift_and_reverse(self):
        p = X**2 + 1
        assert p.shift(1) == X**2 + 2 * X + 2
        assert p.reversed_coeffs() == P(1, 0, 1)
        assert (2 * X).reversed_coeffs(3) == P(0, 0, 2)

    def test_evaluate(self):
        p = 3 * X**2 - 2
        assert p.evaluate(Fraction(1, 2)) == Fraction(-5, 4)

    def test_text_roundtrips_visually(self):
        assert (36 * X**2 - 41 * X + 32).to_text("s") == "36*s^2 - 41*s + 32"
        assert Polynomial.zero().to_text() == "0"
        assert P(Fraction(1, 3)).to_text() == "1/3"


class TestGcd:
    def test_common_factor_by_inspection(self):
        assert polynomial_gcd(X**2 - 1, X - 1) == X - 1

    def test_gcd_with_zero_is_monic(self):
        assert polynomial_gcd(3 * X, Polynomial.zero()) == X
        assert polynomial_gcd(Polynomial.zero(), Polynomial.zero()).is_zero()

    def test_derived_factored_inputs(self):
        # gcd(144 x^2 (x-1)^2, x^2 (x-1)) = x^2 (x-1), monic
        a = 144 * X**2 * (X - 1) ** 2
        b = X**2 * (X - 1)
        assert polynomial_gcd(a, b) == X**2 * (X - 1)

    def test_random_products(self):
        rng = random.Random(7)
        for _ in range(25):
            f = Polynomial([rng.randint(-4, 4) for _ in range(4)] + [1])
            g = Polynomial([rng.randint(-4, 4) for _ in range(3)] + [1])
            h = Polynomial([rng.randint(-4, 4) for _ in range(3)] + [1])
            d = polynomial_gcd(f * g, f * h)
            # f divides the gcd
            assert (d % f.monic()).is_zero()


class TestSquarefreeFactor:
    def test_already_factored(self):
        s = X
        result = squarefree_factor(s**2 * (s - 27))
        assert result == [(X, 2), (X - 27, 1)]

    def test_difference_of_squares(self):
        assert squarefree_factor(X**2 - 1) == [(X - 1, 1), (X + 1, 1)]

    def test_irreducible_quadratic_square(self):
        assert squarefree_factor((X**2 + 1) ** 2) == [(X**2 + 1, 2)]

    def test_zero_rejected(self):
        with pytest.raises(ZeroPolynomial):
            squarefree_factor(Polynomial.zero())

    def test_reassembly_exact(self):
        rng = random.Random(11)
        for _ in range(15):
            p = Polynomial([rng.randint(-3, 3) for _ in range(3)] + [1])
            q = Polynomial([rng.randint(-3, 3) for _ in range(2)] + [1])
            prod = p * p * q * Fraction(3, 2)
            back = Polynomial.constant(prod.leading())
            for f, mult in squarefree_factor(prod):
                back = back * f**mult
            assert back == prod


class TestRationalFunction:
    def test_canonical_form(self):
        f = RationalFunction(2 * X, 4 * X**2)
        assert f.num == P(Fraction(1, 2)) and f.den == X
        # two constructions of the same function compare equal field-by-field
        g = RationalFunction(X**2 - 1, (X - 1) * (2 * X**2 + 2))
        h = RationalFunction(X + 1, 2 * X**2 + 2)
        assert g.num == h.num and g.den == h.den and g == h

    def test_arithmetic(self):
        f = RationalFunction(Polynomial.one(), X)
        assert f + f == RationalFunction(P(2), X)
        assert f * X == RationalFunction.one()
        assert (f - f).is_zero()
        assert f**-2 == RationalFunction(X**2)

    def test_derivative(self):
        f = RationalFunction(Polynomial.one(), X)
        assert f.derivative() == RationalFunction(P(-1), X**2)

    def test_compose(self):
        f = RationalFunction(Polynomial.one(), X)  # 1/x
        r = RationalFunction(X, X - 1)
        assert f.compose(r) == RationalFunction(X - 1, X)
        ident = RationalFunction.x()
        assert r.compose(ident) == r

    def test_valuation_at(self):
        f = RationalFunction(27**3 * X**2, (X - 1) ** 3)
        assert f.valuation_at(AlgebraicPoint.rational(1)) == -3
        assert f.valuation_at(AlgebraicPoint.rational(0)) == 2
        assert f.valuation_at(AT_INFINITY) == 1
        assert RationalFunction.zero().valuation_at(AT_INFINITY) is None


class TestLocalElement:
    def test_field_arithmetic_mod_x2_plus_1(self):
        m = X**2 + 1
        i = LocalElement.generator(m)
        assert i * i == -1
        assert (1 + i) * (1 - i) == 2
        assert (1 / (1 + i)) * (1 + i) == 1
        assert (i**4) == 1

    def test_mixing_rationals(self):
        m = X**2 - 2
        r = LocalElement.generator(m)  # sqrt(2)
        assert r * r == 2
        val = Fraction(1, 2) + r
        assert val - r == Fraction(1, 2)


class TestLaurentExpand:
    def test_geometric_series_at_zero(self):
        f = RationalFunction(Polynomial.one(), X * (X - 1))
        exp = laurent_expand(f, AlgebraicPoint.rational(0), 2)
        assert exp.valuation == -1
        assert list(exp.coefficients) == [Fraction(-1)] * 4

    def test_identity_at_infinity(self):
        f = RationalFunction.x()
        exp = laurent_expand(f, AT_INFINITY, 2)
        assert exp.valuation == -1
        assert exp.leading() == 1

    def test_discriminant_pole_order(self):
        f = RationalFunction(27**3 * X**2, (X - 1) ** 3)
        exp = laurent_expand(f, AlgebraicPoint.rational(1), -1)
        assert exp.valuation == -3

    def test_zero_function(self):
        exp = laurent_expand(RationalFunction.zero(), AT_INFINITY, 5)
        assert exp.valuation is None and exp.coefficients == ()

    def test_algebraic_point(self):
        # 1/(x^2 - 2) at sqrt(2): simple pole, leading coeff 1/(2 sqrt 2)
        m = X**2 - 2
        pt = AlgebraicPoint.from_modulus(m)
        f = RationalFunction(Polynomial.one(), m)
        exp = laurent_expand(f, pt, 0)
        assert exp.valuation == -1
        root = LocalElement.generator(m)
        assert exp.leading() * (2 * root) == 1

    def test_multiplicative_property_random(self):
        # v(fg) = v(f) + v(g) and leading coefficients multiply
        rng = random.Random(3)
        pts = [AlgebraicPoint.rational(0), AlgebraicPoint.rational(1), AT_INFINITY,
               AlgebraicPoint.from_modulus(X**2 + 1)]
        for _ in range(20):
            def rand_rf():
                num = Polynomial([rng.randint(-3, 3) for _ in range(rng.randint(1, 4))])
                den = Polynomial([rng.randint(-3, 3) for _ in range(rng.randint(1, 3))] + [1])
                if num.is_zero():
                    num = X
                return RationalFunction(num * X, den * (X**2 + 1))
            f, g = rand_rf(), rand_rf()
            for pt in pts:
                ef = laurent_expand(f, pt, 15)
                eg = laurent_expand(g, pt, 15)
                efg = laurent_expand(f * g, pt, 15)
                assert efg.valuation == ef.valuation + eg.valuation
                assert efg.leading() == ef.leading() * eg.leading()


class TestAlgebraicPoint:
    def test_rational_roundtrip(self):
        p = AlgebraicPoint.rational(Fraction(-2, 3))
        assert p.is_rational and p.rational_value == Fraction(-2, 3)
        assert p.describe() == "-2/3"

    def test_infinity(self):
        assert AT_INFINITY.is_infinity
        assert AT_INFINITY.describe() == "inf"

    def test_sorting(self):
        pts = [AT_INFINITY, AlgebraicPoint.from_modulus(X**2 + 1),
               AlgebraicPoint.rational(1), AlgebraicPoint.rational(0)]
        pts.sort(key=lambda p: p.sort_key())
        assert pts[0].rational_value == 0
        assert pts[1].rational_value == 1
        assert pts[2].degree == 2
        assert pts[3].is_infinity
