"""Tests for the orbifold-uniformization checker and the combinatorial
pullback-signature predictor."""

import random
from fractions import Fraction

import pytest

from picardfuchs.exact import AT_INFINITY, AlgebraicPoint, Polynomial, RationalFunction
from picardfuchs.ode import LinearODE, NotPNF, pnf2
from picardfuchs.transform import pullback2
from picardfuchs.uniformize import (
    CUSP,
    OrbifoldSignature,
    prediction_agrees,
    signature_of_pullback,
    uniformization_check,
)

X = Polynomial.x()
RF = RationalFunction


def lam() -> LinearODE:
    q = RF(36 * X**2 - 41 * X + 32, 144 * X**2 * (X - 1) ** 2)
    return LinearODE.second_order(0, q)


def lam_signature() -> OrbifoldSignature:
    return OrbifoldSignature([
        (AlgebraicPoint.rational(0), 3),
        (AlgebraicPoint.rational(1), 2),
        (AT_INFINITY, CUSP),
    ])


class TestUniformizationCheck:
    def test_lambda_passes_with_modular_signature(self):
        report = uniformization_check(lam())
        assert report.passed and report.strict_passed
        assert report.signature == lam_signature()

    def test_apparent_point_fails(self):
        L = LinearODE.second_order(0, RF(Polynomial((-2,)), X**2))
        report = uniformization_check(L)
        assert not report.passed
        failing = [v for v in report.points if not v.ok]
        assert any("apparent" in v.reason for v in failing)

    def test_pullback_by_z2_fails_at_zero(self):
        L = pnf2(pullback2(lam(), RF(X**2)))
        report = uniformization_check(L)
        assert not report.passed
        by_loc = {v.location.describe(): v for v in report.points}
        assert not by_loc["0"].ok
        assert by_loc["0"].difference == Fraction(2, 3)

    def test_requires_pnf(self):
        L = LinearODE.second_order(RF(Polynomial.one(), X), 0)
        with pytest.raises(NotPNF):
            uniformization_check(L)


class TestSignaturePrediction:
    def test_identity_map_unchanged(self):
        pred = signature_of_pullback(lam_signature(), RationalFunction.x())
        assert pred.passed
        assert pred.signature() == lam_signature()

    def test_cube_drops_weight3_point(self):
        pred = signature_of_pullback(lam_signature(), RF(X**3))
        assert pred.passed
        # preimage of the weight-3 point has weight 3/3 = 1 and drops out
        dropped_locs = [pt.describe() for pt, _ in pred.dropped]
        assert "0" in dropped_locs
        sig = pred.signature()
        weights = {loc.describe(): w for loc, w in sig}
        assert weights.get("inf") is CUSP

    def test_extra_critical_point_predicts_apparent(self):
        pred = signature_of_pullback(lam_signature(), RF(X**3 - 3 * X))
        assert not pred.passed
        assert any("apparent" in reason for _, reason in pred.failures)

    def test_z2_fails_generic(self):
        pred = signature_of_pullback(lam_signature(), RF(X**2))
        assert not pred.passed
        assert any("generic" in reason for _, reason in pred.failures)


def random_rational_map(rng: random.Random) -> RationalFunction:
    """Small random nonconstant rational maps, biased toward interesting
    ramification over {0, 1, inf}."""
    kind = rng.randrange(5)
    if kind == 0:
        n = rng.randint(1, 3)
        return RF(X**n)
    if kind == 1:
        n = rng.randint(2, 3)
        return RF(X**n, X - rng.randint(2, 4))
    if kind == 2:
        a = rng.randint(-3, 3)
        num = Polynomial([a, rng.randint(-3, 3), 1])
        return RF(num)
    if kind == 3:
        num = (X - rng.randint(-2, 2)) ** 2
        den = X - rng.randint(3, 5)
        return RF(num, den)
    num = Polynomial([rng.randint(-4, 4), rng.randint(-4, 4), rng.randint(1, 3)])
    den = Polynomial([rng.randint(-4, 4), 1])
    return RF(num, den)


class TestOracleAgreement:
    def test_thirty_random_maps_against_lambda(self):
        rng = random.Random(101)
        source = lam_signature()
        L = lam()
        count = 0
        while count < 30:
            R = random_rational_map(rng)
            if R.is_constant():
                continue
            pred = signature_of_pullback(source, R)
            analytic = uniformization_check(pnf2(pullback2(L, R)))
            assert prediction_agrees(pred, analytic), (R, pred, analytic)
            count += 1
