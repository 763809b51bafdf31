"""Tests for pullbacks, symmetric squares/powers, roots, and system collapse."""

import random
from fractions import Fraction

import pytest

from picardfuchs.exact import (
    AT_INFINITY,
    AlgebraicPoint,
    Polynomial,
    RationalFunction,
)
from picardfuchs.ode import (
    LinearODE,
    PointKind,
    exponent_difference,
    frobenius_basis,
    apply_operator_to_log_solution,
    pnf2,
    pnf3,
    singular_points,
)
from picardfuchs.series import PowerSeries
from picardfuchs.transform import (
    NotCyclic,
    NotSymmetricSquare,
    classify_pullback,
    critical_points,
    fiber_over_point,
    pullback,
    pullback2,
    sym2,
    sym2_root,
    sym_power_system,
    system_to_scalar,
)

X = Polynomial.x()
RF = RationalFunction


def lam() -> LinearODE:
    q = RF(36 * X**2 - 41 * X + 32, 144 * X**2 * (X - 1) ** 2)
    return LinearODE.second_order(0, q)


def random_fuchsian_order2(rng: random.Random) -> LinearODE:
    """Random order-2 Fuchsian operator with simple rational singular
    points and degree <= 4 coefficient data."""
    a, b = rng.sample([-2, -1, 1, 2, 3], 2)
    den = (X - a) * (X - b)
    p1 = RF(Polynomial([rng.randint(-3, 3), rng.randint(-2, 2)]), den)
    p2 = RF(Polynomial([rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-2, 2)]), den**2)
    return LinearODE.second_order(p1, p2)


class TestPullback:
    def test_identity_map(self):
        L = lam()
        assert pullback2(L, RationalFunction.x()) == L

    def test_cube_exponents(self):
        # pullback of Lambda by z^3 at 0: exponents 3*{1/3, 2/3} = {1, 2}
        pulled = pullback2(lam(), RF(X**3))
        from picardfuchs.ode import exponents

        assert exponents(pulled, AlgebraicPoint.rational(0)) == [Fraction(1), Fraction(2)]

    def test_matches_generic_operator_pullback(self):
        rng = random.Random(5)
        for _ in range(5):
            L = random_fuchsian_order2(rng)
            R = RF(X**2 + 1, X - 3)
            assert pullback2(L, R) == pullback(L, R)


class TestSym2:
    def test_pnf_shape(self):
        # sym2 of f'' + Q f: f''' + 4Q f' + 2Q' f
        q = RF(Polynomial((1,)), X)
        L = LinearODE.second_order(0, q)
        S = sym2(L)
        assert S.coefficient(1).is_zero()
        assert S.coefficient(2) == 4 * q
        assert S.coefficient(3) == 2 * q.derivative()

    def test_trivial(self):
        assert sym2(LinearODE.second_order(0, 0)) == LinearODE.third_order(0, 0, 0)

    def test_annihilates_solution_products(self):
        # products of order-2 Frobenius solutions satisfy sym2(L)
        L = lam()
        S = sym2(L)
        pt = AlgebraicPoint.rational(0)
        basis = frobenius_basis(L, pt, 10)
        f, g = basis[0], basis[1]
        # squares of pure-series solutions: (t^r F)^2 = t^(2r) F^2
        for sol in (f, g):
            if sol.has_log():
                continue
            series = sol.parts[0]
            sq = series * series
            from picardfuchs.ode import LogSolution

            doubled = LogSolution(2 * sol.exponent, [sq])
            residuals = apply_operator_to_log_solution(S, pt, doubled)
            assert all(r.is_zero() for r in residuals)

    def test_pnf_commutes_with_sym2(self):
        rng = random.Random(13)
        for _ in range(10):
            L = random_fuchsian_order2(rng)
            assert pnf3(sym2(L)) == sym2(pnf2(L))

    def test_sym2_mum_has_log_squared_ladder(self):
        from picardfuchs.ode import frobenius_basis as fb, mum_check

        L = lam()
        S = sym2(L)
        assert mum_check(S, AT_INFINITY)
        basis = fb(S, AT_INFINITY, 6)
        assert max(sol.max_log_power() for sol in basis) == 2

    def test_products_with_log_solutions(self):
        # at a logarithmic point: with basis u = t^r F and
        # v = t^r (F log t + G), the products u^2, uv, v^2 solve sym2(L)
        from picardfuchs.ode import LogSolution, frobenius_basis as fb

        L = lam()
        S = sym2(L)
        basis = fb(L, AT_INFINITY, 8)
        u, v = basis[0], basis[1]
        assert not u.has_log() and v.max_log_power() == 1
        F = u.parts[0]
        G, F2 = v.parts[0], v.parts[1]
        assert F2 == F
        r2 = 2 * u.exponent
        # parts are coefficients of log^p / p!
        uu = LogSolution(r2, [F * F])
        uv = LogSolution(r2, [F * G, F * F])
        vv = LogSolution(r2, [G * G, 2 * F * G, 2 * F * F])
        for sol in (uu, uv, vv):
            residuals = apply_operator_to_log_solution(S, AT_INFINITY, sol)
            assert all(r.is_zero() for r in residuals)


class TestSymPowerSystem:
    def test_n1_is_companion(self):
        L = lam()
        A = sym_power_system(L, 1)
        assert A[0][0].is_zero() and A[0][1] == RationalFunction.one()
        assert A[1][0] == -L.coefficient(2) and A[1][1] == -L.coefficient(1)

    def test_n2_band_structure(self):
        p1 = RF(Polynomial((1,)), X)
        p2 = RF(Polynomial((2,)), X**2)
        L = LinearODE.second_order(p1, p2)
        A = sym_power_system(L, 2)
        assert A[0][0].is_zero()
        assert A[1][1] == -p1
        assert A[2][2] == -2 * p1
        assert A[0][1] == RationalFunction.constant(2)
        assert A[1][2] == RationalFunction.one()
        assert A[1][0] == -p2
        assert A[2][1] == -2 * p2

    def test_collapse_equals_sym2(self):
        rng = random.Random(17)
        for _ in range(5):
            L = random_fuchsian_order2(rng)
            A = sym_power_system(L, 2)
            assert system_to_scalar(A, 0) == sym2(L)


class TestSystemToScalar:
    def test_companion_roundtrip(self):
        L = lam()
        A = sym_power_system(L, 1)
        assert system_to_scalar(A, 0) == L

    def test_diagonal_not_cyclic(self):
        one = RationalFunction.one()
        A = [[one, RationalFunction.zero()], [RationalFunction.zero(), 2 * one]]
        first = system_to_scalar(A, 0)
        assert first.order == 1
        assert first.coefficient(1) == -one
        with pytest.raises(NotCyclic):
            system_to_scalar(A, 0, require_full_order=True)


class TestSym2Root:
    def test_roundtrip_lambda(self):
        assert sym2_root(sym2(lam())) == lam()

    def test_trivial(self):
        assert sym2_root(LinearODE.third_order(0, 0, 0)) == LinearODE.second_order(0, 0)

    def test_not_a_square(self):
        with pytest.raises(NotSymmetricSquare):
            sym2_root(LinearODE.third_order(0, 0, 1))

    def test_root_of_sym2_of_pnf_random(self):
        rng = random.Random(29)
        for _ in range(10):
            L = pnf2(random_fuchsian_order2(rng))
            assert sym2_root(sym2(L)) == L


class TestFibersAndCritical:
    def test_fiber_of_cube(self):
        R = RF(X**3)
        fiber0 = fiber_over_point(R, AlgebraicPoint.rational(0))
        assert fiber0 == [(AlgebraicPoint.rational(0), 3)]
        fiber_inf = fiber_over_point(R, AT_INFINITY)
        assert fiber_inf == [(AT_INFINITY, 3)]

    def test_fiber_with_algebraic_points(self):
        R = RF(X**2)
        fiber = fiber_over_point(R, AlgebraicPoint.rational(2))
        assert len(fiber) == 1
        pt, ram = fiber[0]
        assert pt.modulus == X**2 - 2 and ram == 1

    def test_critical_points_of_z3_minus_3z(self):
        R = RF(X**3 - 3 * X)
        crit = dict(critical_points(R))
        finite = {pt.describe(): e for pt, e in crit.items() if not pt.is_infinity}
        assert finite == {"-1": 2, "1": 2}
        assert crit[AT_INFINITY] == 3


class TestClassifyPullback:
    def test_z2_generic_at_zero(self):
        result = classify_pullback(lam(), RF(X**2))
        by_loc = {r.location.describe(): r for r in result.points}
        zero = by_loc["0"]
        assert zero.ramification == 2 and zero.source_weight == 3
        assert zero.difference == Fraction(2, 3)
        assert zero.classification.kind == PointKind.GENERIC

    def test_extra_ramification_apparent(self):
        # z^3 - 3z ramifies at z = +-1 over regular values 2, -2
        result = classify_pullback(lam(), RF(X**3 - 3 * X))
        by_loc = {r.location.describe(): r for r in result.points}
        for loc in ("-1", "1"):
            assert by_loc[loc].source is None
            assert by_loc[loc].classification.kind == PointKind.APPARENT

    def test_z3_resolves_at_zero(self):
        # b = 3, r = 3: difference 1, resolved by the obstruction test
        result = classify_pullback(lam(), RF(X**3))
        by_loc = {r.location.describe(): r for r in result.points}
        zero = by_loc["0"]
        assert zero.difference == 1
        assert zero.classification.kind in (PointKind.ORDINARY, PointKind.APPARENT)
        # for the genuine uniformizing source the point is ordinary
        assert zero.classification.kind == PointKind.ORDINARY

    def test_lemma_3_22_differences_multiply(self):
        rng = random.Random(31)
        maps = [RF(X**2 + X), RF(X**3 - 2), RF(X**2, X - 1), RF((X - 1) * (X + 2))]
        L = lam()
        for R in maps:
            result = classify_pullback(L, R)
            for rep in result.points:
                if rep.source is None:
                    assert rep.difference == rep.ramification
                elif rep.source_weight is None:
                    assert rep.difference == 0
                else:
                    assert rep.difference == Fraction(rep.ramification, rep.source_weight)
