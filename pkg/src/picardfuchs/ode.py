"""Fuchsian linear ODEs and their local analysis.

A LinearODE is the monic operator

    f^(k) + P_1 f^(k-1) + ... + P_k f = 0,   P_i in Q(x).

This module computes singular points, verifies the Fuchsian property,
builds indicial polynomials and characteristic exponents (over Q,
quadratic extensions, and residue fields of algebraic points), produces
projective normal forms for orders 2 and 3, and constructs exact Frobenius
solution bases with their precise logarithmic structure, from which the
apparent-singularity and maximal-unipotent-monodromy tests are decided.

Convention at infinity: all local analysis at the infinite point is done
on the operator annihilating t^(k-1) * f(1/t) (solutions transported as
(1-k)/2-differentials).  This transformation preserves projective normal
forms under x -> 1/t, and the exponent conventions of every frozen golden
value in the test suite depend on it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exact import (
    AT_INFINITY,
    AlgebraicPoint,
    LocalElement,
    Polynomial,
    RationalFunction,
    _is_zero_scalar,
    irreducible_factors,
    laurent_expand,
    polynomial_lcm,
)
from .series import PowerSeries


class NotFuchsian(ValueError):
    """Operation requires a (locally) regular singular operator."""


class UnsupportedExponentField(ValueError):
    """Indicial roots outside Q, quadratic extensions, or the residue field."""


class NotIntegerDifference(ValueError):
    """Apparent-singularity test at a non-integer-difference point."""


class NotPNF(ValueError):
    """Operator is not in projective normal form."""


# ---------------------------------------------------------------------------
# operator core


class LinearODE:
    """Monic linear differential operator with rational-function coefficients."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Sequence):
        coeffs = tuple(_as_rf(c) for c in coefficients)
        if not coeffs:
            raise ValueError("operator must have order >= 1")
        object.__setattr__(self, "coefficients", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("LinearODE is immutable")

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def coefficient(self, i: int) -> RationalFunction:
        """P_i for 1 <= i <= order."""
        return self.coefficients[i - 1]

    @classmethod
    def second_order(cls, p1, p2) -> "LinearODE":
        return cls((p1, p2))

    @classmethod
    def third_order(cls, p1, p2, p3) -> "LinearODE":
        return cls((p1, p2, p3))

    def __eq__(self, other):
        if not isinstance(other, LinearODE):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        inner = ", ".join(c.to_text() for c in self.coefficients)
        return f"LinearODE(order={self.order}, [{inner}])"

    def to_text(self, var: str = "x") -> str:
        lines = [f"order: {self.order}", f"var: {var}"]
        for i, c in enumerate(self.coefficients, start=1):
            lines.append(f"P{i}: {c.to_text(var)}")
        return "\n".join(lines)

    def infinity_local(self) -> "LinearODE":
        """The operator annihilating t^(k-1) f(1/t) for every solution f,
        analyzed at t = 0 (see the module docstring)."""
        op = DiffOp.from_ode(self)
        one_over_t = RationalFunction(Polynomial.one(), Polynomial.x())
        pulled = op.pullback(one_over_t)
        k = self.order
        gauge_inv = RationalFunction(Polynomial.one(), Polynomial.monomial(k - 1))
        return pulled.multiply_function(gauge_inv).to_ode()

    def translate_to_zero(self, a) -> "LinearODE":
        """The operator in the coordinate t = x - a (pullback by x = t + a)."""
        shift = RationalFunction(Polynomial((a, 1)))
        return DiffOp.from_ode(self).pullback(shift).to_ode()


def _as_rf(c) -> RationalFunction:
    if isinstance(c, RationalFunction):
        return c
    if isinstance(c, Polynomial):
        return RationalFunction(c)
    if isinstance(c, (int, Fraction)):
        return RationalFunction.constant(c)
    raise TypeError(f"bad ODE coefficient {type(c).__name__}")


class DiffOp:
    """Non-monic differential operator sum c_i D^i over Q(x); the
    noncommutative workhorse behind pullbacks and gauge changes."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        cs = [_as_rf(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("DiffOp is immutable")

    @classmethod
    def from_ode(cls, L: LinearODE) -> "DiffOp":
        coeffs = [L.coefficients[L.order - 1 - i] for i in range(L.order)]
        return cls(coeffs + [RationalFunction.one()])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> RationalFunction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return RationalFunction.zero()

    def __add__(self, other: "DiffOp") -> "DiffOp":
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp([self.coefficient(i) + other.coefficient(i) for i in range(n)])

    def scale(self, f) -> "DiffOp":
        f = _as_rf(f)
        return DiffOp([f * c for c in self.coeffs])

    def differentiate_then(self) -> "DiffOp":
        """D o self (left composition with d/dx)."""
        n = len(self.coeffs)
        out = [RationalFunction.zero()] * (n + 1)
        for i, c in enumerate(self.coeffs):
            out[i + 1] = out[i + 1] + c
            out[i] = out[i] + c.derivative()
        return DiffOp(out)

    def compose(self, other: "DiffOp") -> "DiffOp":
        """self o other via Leibniz: D^i o (b D^j) = sum C(i,l) b^(l) D^(i+j-l)."""
        if self.is_zero() or other.is_zero():
            return DiffOp(())
        out = [RationalFunction.zero()] * (self.order + other.order + 1)
        for j, b in enumerate(other.coeffs):
            if b.is_zero():
                continue
            derivs = [b]
            for _ in range(self.order):
                derivs.append(derivs[-1].derivative())
            for i, a in enumerate(self.coeffs):
                if a.is_zero():
                    continue
                for l in range(i + 1):
                    term = a * math.comb(i, l) * derivs[l]
                    out[i + j - l] = out[i + j - l] + term
        return DiffOp(out)

    def multiply_function(self, phi) -> "DiffOp":
        """self o Mult(phi): the operator h |-> self(phi * h)."""
        return self.compose(DiffOp([phi]))

    def pullback(self, R: RationalFunction) -> "DiffOp":
        """Substitute x = R(t): coefficients composed with R and each D_x
        replaced by (1/R') D_t."""
        rp = R.derivative()
        if rp.is_zero():
            raise ValueError("pullback along a constant map")
        inv_rp = DiffOp([RationalFunction.one() / rp])
        power = DiffOp([RationalFunction.one()])  # (D_x)^0 in t-coordinates
        result = DiffOp(())
        for i, c in enumerate(self.coeffs):
            if i > 0:
                power = inv_rp.compose(power.differentiate_then())
            if not c.is_zero():
                result = result + power.scale(c.compose(R))
        return result

    def to_ode(self) -> LinearODE:
        if self.is_zero():
            raise ValueError("zero operator")
        lead = self.coeffs[-1]
        return LinearODE([self.coeffs[self.order - i] / lead for i in range(1, self.order + 1)])


# ---------------------------------------------------------------------------
# exponent values


class QuadraticExponent:
    """Exponent p + sign*sqrt(d) with p, d rational and d not a square."""

    __slots__ = ("rational_part", "radicand", "sign")

    def __init__(self, rational_part: Fraction, radicand: Fraction, sign: int):
        if sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        if radicand == 0 or _rational_sqrt(radicand) is not None:
            raise ValueError("radicand must not be a rational square")
        object.__setattr__(self, "rational_part", Fraction(rational_part))
        object.__setattr__(self, "radicand", Fraction(radicand))
        object.__setattr__(self, "sign", sign)

    def __setattr__(self, *a):
        raise AttributeError("QuadraticExponent is immutable")

    def conjugate(self) -> "QuadraticExponent":
        return QuadraticExponent(self.rational_part, self.radicand, -self.sign)

    def __eq__(self, other):
        if not isinstance(other, QuadraticExponent):
            return NotImplemented
        return (
            self.rational_part == other.rational_part
            and self.radicand == other.radicand
            and self.sign == other.sign
        )

    def __hash__(self):
        return hash(("QuadraticExponent", self.rational_part, self.radicand, self.sign))

    def __repr__(self):
        op = "+" if self.sign > 0 else "-"
        return f"({self.rational_part} {op} sqrt({self.radicand}))"


ExponentValue = Union[Fraction, QuadraticExponent, LocalElement]


def _rational_sqrt(c: Fraction) -> Optional[Fraction]:
    """Exact square root if c is the square of a rational, else None."""
    if c < 0:
        return None
    n, d = c.numerator, c.denominator
    rn = math.isqrt(n)
    rd = math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def exponent_sort_key(e: ExponentValue):
    if isinstance(e, Fraction):
        return (0, e, 0)
    if isinstance(e, QuadraticExponent):
        return (1, e.rational_part, e.sign * e.radicand)
    return (2, e.poly.coeffs, 0)


def exponent_text(e: ExponentValue) -> str:
    if isinstance(e, Fraction):
        return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
    if isinstance(e, QuadraticExponent):
        return repr(e)
    return e.poly.to_text("a")


# ---------------------------------------------------------------------------
# field-generic dense polynomials (indicial data over residue fields)


class FieldPoly:
    """Dense polynomial with coefficients in Q or a residue field; just
    enough structure for indicial computations."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        cs = list(coeffs)
        while cs and _is_zero_scalar(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("FieldPoly is immutable")

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, value):
        result = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    def derivative(self) -> "FieldPoly":
        return FieldPoly([i * c for i, c in enumerate(self.coeffs) if i])

    def __add__(self, other: "FieldPoly") -> "FieldPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return FieldPoly([self.coefficient(i) + other.coefficient(i) for i in range(n)])

    def scale(self, c) -> "FieldPoly":
        return FieldPoly([c * v for v in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, FieldPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("FieldPoly", self.coeffs))

    def eps_taylor(self, x0, n_terms: int) -> list:
        """Coefficients of self(x0 + eps) as a polynomial in eps,
        through eps^(n_terms-1)."""
        out = []
        deriv = self
        fact = 1
        for j in range(n_terms):
            if j > 0:
                deriv = deriv.derivative()
                fact *= j
            out.append(deriv(x0) * Fraction(1, fact))
        return out

    def all_rational(self) -> bool:
        return all(
            isinstance(c, Fraction) or (isinstance(c, LocalElement) and c.is_rational())
            for c in self.coeffs
        )

    def to_rational_poly(self) -> Polynomial:
        if not self.all_rational():
            raise ValueError("non-rational coefficients")
        return Polynomial(
            [c.to_fraction() if isinstance(c, LocalElement) else c for c in self.coeffs]
        )

    def __repr__(self):
        return f"FieldPoly({[repr(c) for c in self.coeffs]})"


def _falling_factorial_poly(k: int) -> FieldPoly:
    """theta (theta-1) ... (theta-k+1) as a FieldPoly in theta."""
    poly = FieldPoly([Fraction(1)])
    for j in range(k):
        # multiply by (theta - j)
        coeffs = [Fraction(0)] + list(poly.coeffs)
        for i, c in enumerate(poly.coeffs):
            coeffs[i] -= j * c
        poly = FieldPoly(coeffs)
    return poly


# ---------------------------------------------------------------------------
# local data at a point


class _LocalView:
    """A point together with the operator in whose coordinates the local
    analysis runs (the operator itself at finite points, the gauged 1/x
    transform at infinity)."""

    __slots__ = ("operator", "point", "at_infinity")

    def __init__(self, operator: LinearODE, point: AlgebraicPoint, at_infinity: bool):
        object.__setattr__(self, "operator", operator)
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "at_infinity", at_infinity)

    def __setattr__(self, *a):
        raise AttributeError("_LocalView is immutable")


def _local_view(L: LinearODE, at: AlgebraicPoint) -> _LocalView:
    if at.is_infinity:
        return _LocalView(L.infinity_local(), AlgebraicPoint.rational(0), True)
    return _LocalView(L, at, False)


def _local_pole_orders(view: _LocalView) -> list[int]:
    """Pole order of each P_i at the point (0 when finite there)."""
    out = []
    for i in range(1, view.operator.order + 1):
        p = view.operator.coefficient(i)
        v = p.valuation_at(view.point)
        out.append(0 if v is None else max(0, -v))
    return out


def _is_regular_singular(view: _LocalView) -> bool:
    return all(order <= i + 1 for i, order in enumerate(_local_pole_orders(view)))


def _theta_coefficient_table(view: _LocalView, n_terms: int) -> list[FieldPoly]:
    """b_m(theta) so that t^k L = sum_m t^m b_m(theta), m = 0..n_terms-1.

    b_0 is the indicial polynomial.  Requires the point to be (at most)
    regular singular.
    """
    L, at = view.operator, view.point
    k = L.order
    if not _is_regular_singular(view):
        raise NotFuchsian(f"irregular singular point at {at.describe()}")
    table = [[Fraction(0)] * n_terms for _ in range(k + 1)]
    # a_i(t) = t^i P_i(t) is analytic at the point; a_0 = 1
    table[0][0] = Fraction(1)
    for i in range(1, k + 1):
        exp = laurent_expand(L.coefficient(i), at, n_terms - 1 - i)
        for m in range(n_terms):
            # coefficient of t^m in t^i P_i = coefficient of t^(m-i) in P_i
            table[i][m] = exp.coefficient(m - i)
    factorials = [_falling_factorial_poly(k - i) for i in range(k + 1)]
    out = []
    for m in range(n_terms):
        b = FieldPoly(())
        for i in range(k + 1):
            c = table[i][m]
            if not _is_zero_scalar(c):
                b = b + factorials[i].scale(c)
        out.append(b)
    return out


def indicial(L: LinearODE, at: AlgebraicPoint) -> FieldPoly:
    """The degree-k indicial polynomial at the point (infinity handled by
    the gauged 1/x transform)."""
    view = _local_view(L, at)
    return _theta_coefficient_table(view, 1)[0]


def _solve_indicial(chi: FieldPoly, at: AlgebraicPoint) -> list[ExponentValue]:
    """Roots of the indicial polynomial in the supported representations."""
    k = chi.degree()
    lead = chi.coeffs[-1]
    monic = chi.scale(_inv(lead)) if lead != 1 else chi

    if monic.all_rational():
        return _solve_rational_poly(monic.to_rational_poly())

    # residue-field coefficients (algebraic point)
    if k == 1:
        return [-monic.coefficient(0)]
    if k == 2:
        b, c = monic.coefficient(1), monic.coefficient(0)
        disc = b * b - 4 * c
        if _is_zero_scalar(disc):
            r = -b * Fraction(1, 2)
            return [r, r]
        if isinstance(disc, LocalElement) and disc.is_rational():
            d = disc.to_fraction()
            s = _rational_sqrt(d)
            if s is not None:
                return [(-b + s) * Fraction(1, 2), (-b - s) * Fraction(1, 2)]
        raise UnsupportedExponentField(
            f"indicial roots at {at.describe()} outside the residue field"
        )
    if k == 3:
        # triple-root case is all the residue-field analysis ever needs
        e = -monic.coefficient(2) * Fraction(1, 3)
        if monic.coefficient(1) == 3 * e * e and monic.coefficient(0) == -(e * e * e):
            return [e, e, e]
        raise UnsupportedExponentField(
            f"order-3 indicial roots at {at.describe()} outside supported cases"
        )
    raise UnsupportedExponentField(f"order {k} exponents not supported")


def _solve_rational_poly(p: Polynomial) -> list[ExponentValue]:
    """All roots of a rational-coefficient indicial polynomial, as
    Fractions and quadratic irrationals; raises if an irreducible factor
    of degree >= 3 appears."""
    roots: list[ExponentValue] = []
    for factor, mult in irreducible_factors(p):
        if factor.degree() == 1:
            roots.extend([-factor.coefficient(0)] * mult)
        elif factor.degree() == 2:
            b, c = factor.coefficient(1), factor.coefficient(0)
            disc = b * b - 4 * c
            half = Fraction(1, 2)
            rad = disc * half * half
            for _ in range(mult):
                roots.append(QuadraticExponent(-b * half, rad, +1))
                roots.append(QuadraticExponent(-b * half, rad, -1))
        else:
            raise UnsupportedExponentField(
                f"irreducible indicial factor of degree {factor.degree()}"
            )
    roots.sort(key=exponent_sort_key)
    return roots


def exponents(L: LinearODE, at: AlgebraicPoint) -> list[ExponentValue]:
    """Characteristic exponents at the point, sorted canonically."""
    view = _local_view(L, at)
    chi = _theta_coefficient_table(view, 1)[0]
    roots = _solve_indicial(chi, at)
    roots.sort(key=exponent_sort_key)
    return roots


def exponent_difference(L: LinearODE, at: AlgebraicPoint) -> ExponentValue:
    """|difference| of the two characteristic exponents (order 2 only),
    as a nonnegative rational or a quadratic irrational sqrt(d)."""
    if L.order != 2:
        raise ValueError("exponent_difference is defined for order 2")
    view = _local_view(L, at)
    chi = _theta_coefficient_table(view, 1)[0]
    lead = chi.coeffs[-1]
    monic = chi.scale(_inv(lead)) if lead != 1 else chi
    b, c = monic.coefficient(1), monic.coefficient(0)
    disc = b * b - 4 * c
    return _difference_from_disc(disc, at)


def _difference_from_disc(disc, at: AlgebraicPoint) -> ExponentValue:
    if _is_zero_scalar(disc):
        return Fraction(0)
    if isinstance(disc, LocalElement):
        if not disc.is_rational():
            raise UnsupportedExponentField(
                f"exponent difference at {at.describe()} outside Q"
            )
        disc = disc.to_fraction()
    s = _rational_sqrt(disc)
    if s is not None:
        return abs(s)
    return QuadraticExponent(Fraction(0), disc, +1)


def _inv(c):
    if isinstance(c, LocalElement):
        return c.inverse()
    return Fraction(1) / Fraction(c)


# ---------------------------------------------------------------------------
# singular points and the Fuchsian test


def singular_points(L: LinearODE) -> list[AlgebraicPoint]:
    """All finite poles of the coefficients, grouped by irreducible
    modulus, plus infinity when the (gauged) transformed operator is
    singular at t = 0.  Sorted canonically."""
    seen = {}
    for c in L.coefficients:
        if c.den.degree() >= 1:
            for factor, _ in irreducible_factors(c.den):
                pt = AlgebraicPoint.from_modulus(factor)
                seen[pt] = True
    points = sorted(seen, key=lambda p: p.sort_key())
    at_inf = L.infinity_local()
    if any(c.valuation_at(AlgebraicPoint.rational(0)) is not None
           and c.valuation_at(AlgebraicPoint.rational(0)) < 0
           for c in at_inf.coefficients):
        points.append(AT_INFINITY)
    return points


class FuchsianDiagnosis:
    """Verdict of the regular-singularity test with per-point detail."""

    __slots__ = ("fuchsian", "violations")

    def __init__(self, fuchsian: bool, violations):
        object.__setattr__(self, "fuchsian", fuchsian)
        object.__setattr__(self, "violations", tuple(violations))

    def __setattr__(self, *a):
        raise AttributeError("FuchsianDiagnosis is immutable")

    def __bool__(self):
        return self.fuchsian

    def __repr__(self):
        if self.fuchsian:
            return "FuchsianDiagnosis(fuchsian)"
        detail = "; ".join(
            f"P{i} has pole order {order} > {i} at {pt.describe()}"
            for pt, i, order in self.violations
        )
        return f"FuchsianDiagnosis(irregular: {detail})"


def fuchsian_check(L: LinearODE) -> FuchsianDiagnosis:
    """True iff every singular point (including infinity) is regular
    singular: pole order of P_i at most i everywhere."""
    violations = []
    for pt in singular_points(L):
        view = _local_view(L, pt)
        for i, order in enumerate(_local_pole_orders(view), start=1):
            if order > i:
                violations.append((pt, i, order))
    return FuchsianDiagnosis(not violations, violations)


# ---------------------------------------------------------------------------
# projective normal forms


def pnf2(L: LinearODE) -> LinearODE:
    """Projective normal form of an order-2 operator:
    g'' + (P2 - P1'/2 - P1^2/4) g = 0."""
    if L.order != 2:
        raise ValueError("pnf2 requires order 2")
    p1, p2 = L.coefficient(1), L.coefficient(2)
    q = p2 - p1.derivative() * Fraction(1, 2) - p1 * p1 * Fraction(1, 4)
    return LinearODE.second_order(RationalFunction.zero(), q)


def pnf3(L: LinearODE) -> LinearODE:
    """Projective normal form of an order-3 operator, from the gauge
    f = g exp(-int P1 / 3):

        R2 = P2 - P1' - P1^2/3
        R3 = P3 - P1 P2/3 - P1''/3 + 2 P1^3/27
    """
    if L.order != 3:
        raise ValueError("pnf3 requires order 3")
    p1, p2, p3 = (L.coefficient(i) for i in (1, 2, 3))
    r2 = p2 - p1.derivative() - p1 * p1 * Fraction(1, 3)
    r3 = (
        p3
        - p1 * p2 * Fraction(1, 3)
        - p1.derivative().derivative() * Fraction(1, 3)
        + p1 * p1 * p1 * Fraction(2, 27)
    )
    return LinearODE.third_order(RationalFunction.zero(), r2, r3)


def is_pnf(L: LinearODE) -> bool:
    return L.coefficient(1).is_zero()


# ---------------------------------------------------------------------------
# Frobenius solution bases with exact log structure


class LogSolution:
    """Formal solution t^exponent * sum_p parts[p](t) * log(t)^p / p!
    in the local parameter of the analyzed point."""

    __slots__ = ("exponent", "parts")

    def __init__(self, exponent, parts: Sequence[PowerSeries]):
        ps = list(parts)
        while len(ps) > 1 and ps[-1].is_zero():
            ps.pop()
        object.__setattr__(self, "exponent", exponent)
        object.__setattr__(self, "parts", tuple(ps))

    def __setattr__(self, *a):
        raise AttributeError("LogSolution is immutable")

    def max_log_power(self) -> int:
        return len(self.parts) - 1

    def has_log(self) -> bool:
        return self.max_log_power() > 0

    def __repr__(self):
        return (
            f"LogSolution(exponent={exponent_text(self.exponent)}, "
            f"log_depth={self.max_log_power()})"
        )


#: Basis of formal solutions at a point, ordered by exponent then log depth.
LogSolutionBasis = list


class _EpsWindow:
    """Laurent polynomials in eps on a fixed window of exponents
    [-width, width]: exactly the bookkeeping Frobenius' method needs when
    resonances are crossed."""

    __slots__ = ("width", "coeffs")

    def __init__(self, width: int, coeffs=None):
        object.__setattr__(self, "width", width)
        if coeffs is None:
            coeffs = [Fraction(0)] * (2 * width + 1)
        object.__setattr__(self, "coeffs", list(coeffs))

    def __setattr__(self, *a):
        raise AttributeError("_EpsWindow is immutable")

    @classmethod
    def monomial(cls, width: int, exponent: int, value=Fraction(1)) -> "_EpsWindow":
        w = cls(width)
        w.coeffs[width + exponent] = value
        return w

    @classmethod
    def from_taylor(cls, width: int, taylor: Sequence) -> "_EpsWindow":
        w = cls(width)
        for j, c in enumerate(taylor):
            if j > width:
                break
            w.coeffs[width + j] = c
        return w

    def get(self, exponent: int):
        j = self.width + exponent
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return Fraction(0)

    def is_zero(self) -> bool:
        return all(_is_zero_scalar(c) for c in self.coeffs)

    def valuation(self) -> Optional[int]:
        for j, c in enumerate(self.coeffs):
            if not _is_zero_scalar(c):
                return j - self.width
        return None

    def add(self, other: "_EpsWindow") -> "_EpsWindow":
        return _EpsWindow(self.width, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def sub(self, other: "_EpsWindow") -> "_EpsWindow":
        return _EpsWindow(self.width, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def mul(self, other: "_EpsWindow") -> "_EpsWindow":
        W = self.width
        out = _EpsWindow(W)
        for i, a in enumerate(self.coeffs):
            if _is_zero_scalar(a):
                continue
            ei = i - W
            for j, b in enumerate(other.coeffs):
                if _is_zero_scalar(b):
                    continue
                e = ei + (j - W)
                if -W <= e <= W:
                    out.coeffs[W + e] = out.coeffs[W + e] + a * b
                elif e < -W and not _is_zero_scalar(a * b):
                    raise AssertionError("eps window underflow")
        return out

    def div(self, other: "_EpsWindow") -> "_EpsWindow":
        """Laurent division; the divisor's valuation must be detectable."""
        W = self.width
        vo = other.valuation()
        if vo is None:
            raise ZeroDivisionError("division by zero eps-element")
        if self.is_zero():
            return _EpsWindow(W)
        vs = self.valuation()
        lead = other.get(vo)
        inv_lead = _inv(lead)
        # series division of shifted units, enough terms to refill the window
        n_terms = 2 * W + 1
        a = [self.get(vs + j) for j in range(n_terms)]
        b = [other.get(vo + j) for j in range(n_terms)]
        q = []
        for n in range(n_terms):
            acc = a[n]
            for j in range(1, n + 1):
                if j < len(b) and not _is_zero_scalar(b[j]):
                    acc = acc - b[j] * q[n - j]
            q.append(acc * inv_lead)
        out = _EpsWindow(W)
        v = vs - vo
        for j, c in enumerate(q):
            e = v + j
            if -W <= e <= W:
                out.coeffs[W + e] = c
            elif e < -W and not _is_zero_scalar(c):
                raise AssertionError("eps window underflow in division")
        return out


def frobenius_basis(L: LinearODE, at: AlgebraicPoint, n_terms: int) -> LogSolutionBasis:
    """Full basis of formal solutions at a regular (singular) point,
    with the exact Frobenius log structure.

    Each basis element is a LogSolution in the local parameter of the
    point: (x - a) at finite points, 1/x at infinity (with the gauge
    described in the module docstring).  Logarithms appear exactly when
    the corresponding recurrence obstruction is nonzero.
    """
    view = _local_view(L, at)
    k = view.operator.order
    btable = _theta_coefficient_table(view, n_terms + 1)
    chi = btable[0]
    roots = _solve_indicial(chi, at)
    chains = _integer_chains(roots)
    solutions: list[LogSolution] = []
    for chain in chains:
        solutions.extend(_solve_chain(view, btable, chain, n_terms))
    if len(solutions) != k:
        raise AssertionError("Frobenius basis has wrong dimension")
    solutions.sort(key=lambda s: (exponent_sort_key(s.exponent), s.max_log_power()))
    return solutions


def _exponent_offset(a, b) -> Optional[int]:
    """Integer n with a = b + n, when the difference is a rational integer."""
    diff = None
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        diff = a - b
    elif isinstance(a, QuadraticExponent) and isinstance(b, QuadraticExponent):
        if a.radicand == b.radicand and a.sign == b.sign:
            diff = a.rational_part - b.rational_part
    elif isinstance(a, LocalElement) and isinstance(b, LocalElement):
        d = a - b
        if d.is_rational():
            diff = d.to_fraction()
    if diff is not None and diff.denominator == 1:
        return int(diff)
    return None


def _integer_chains(roots: list) -> list[list[tuple]]:
    """Group exponents into integer-difference chains; each chain is a
    list of (offset, multiplicity, exponent) with offsets ascending from 0."""
    remaining = list(roots)
    chains = []
    while remaining:
        base = remaining[0]
        members = [base]
        rest = []
        for r in remaining[1:]:
            if _exponent_offset(r, base) is not None:
                members.append(r)
            else:
                rest.append(r)
        # normalize the base to the smallest exponent of the chain
        offsets = [_exponent_offset(r, base) for r in members]
        shift = min(offsets)
        if isinstance(base, QuadraticExponent):
            low = QuadraticExponent(base.rational_part + shift, base.radicand, base.sign)
        else:
            low = base + shift
        counted: dict[int, int] = {}
        for r in members:
            o = _exponent_offset(r, low)
            counted[o] = counted.get(o, 0) + 1
        chain = []
        for o in sorted(counted):
            ex = (
                QuadraticExponent(low.rational_part + o, low.radicand, low.sign)
                if isinstance(low, QuadraticExponent)
                else low + o
            )
            chain.append((o, counted[o], ex))
        chains.append(chain)
        remaining = rest
    return chains


def _add_exponent_int(e, n: int):
    if isinstance(e, QuadraticExponent):
        return QuadraticExponent(e.rational_part + n, e.radicand, e.sign)
    return e + n


def _quad_to_local(e: QuadraticExponent) -> LocalElement:
    """Embed p + s*sqrt(d) into Q[x]/(x^2 - d) so the Frobenius recurrence
    can run in exact field arithmetic."""
    d = e.radicand
    modulus = Polynomial((-d, 0, 1))
    root = LocalElement.generator(modulus)
    return e.rational_part + e.sign * root


def _solve_chain(view: _LocalView, btable, chain, n_terms: int) -> list[LogSolution]:
    """Frobenius construction for one integer-difference chain of
    exponents, via Laurent arithmetic in the deformation parameter."""
    width = sum(mult for _, mult, _ in chain)
    chi = btable[0]
    residue_field = not all(b.all_rational() for b in btable)
    out = []
    for offset, mult, exponent in chain:
        s_j = sum(m for o, m, _ in chain if o > offset)
        if isinstance(exponent, QuadraticExponent) and residue_field:
            # series coefficients would live in a compositum of the residue
            # field and Q(sqrt(d)); outside the supported exponent fields
            raise UnsupportedExponentField(
                "quadratic-irrational exponents over an algebraic point"
            )
        arithmetic_exponent = (
            _quad_to_local(exponent) if isinstance(exponent, QuadraticExponent) else exponent
        )
        c: list[_EpsWindow] = [_EpsWindow.monomial(width, s_j)]
        for n in range(1, n_terms + 1):
            num = _EpsWindow(width)
            for m in range(1, min(n, len(btable) - 1) + 1):
                b_m = btable[m]
                if b_m.is_zero():
                    continue
                coeff = _EpsWindow.from_taylor(
                    width, b_m.eps_taylor(_add_exponent_int(arithmetic_exponent, n - m), width + 1)
                )
                num = num.sub(coeff.mul(c[n - m]))
            denom = _EpsWindow.from_taylor(
                width, chi.eps_taylor(_add_exponent_int(arithmetic_exponent, n), width + 1)
            )
            c.append(num.div(denom))
        for i in range(s_j, s_j + mult):
            parts = []
            for p in range(i + 1):
                coeffs = [c[n].get(i - p) for n in range(n_terms + 1)]
                parts.append(PowerSeries(0, coeffs, n_terms))
            sol = LogSolution(arithmetic_exponent, parts)
            vcheck = min((w.valuation() for w in c if not w.is_zero()), default=0)
            if vcheck is not None and vcheck < 0:
                raise AssertionError("negative eps valuation escaped the construction")
            out.append(sol)
    return out


def apply_operator_to_log_solution(
    L: LinearODE, at: AlgebraicPoint, sol: LogSolution
) -> list[PowerSeries]:
    """Residual of substituting the solution back into t^k L, one series
    per log power (all must vanish through the usable truncation).

    Independent of the recurrence that built the solution: uses the theta
    form of the operator and nilpotent evaluation of b_m at exponent+n.
    """
    view = _local_view(L, at)
    k = view.operator.order
    n_terms = sol.parts[0].truncation_order
    btable = _theta_coefficient_table(view, n_terms + 1)
    P = sol.max_log_power()
    usable = n_terms  # residual exact through t^(exponent + usable)
    residual = [[Fraction(0)] * (usable + 1) for _ in range(P + 1)]
    for n in range(usable + 1):
        cvec = [sol.parts[p].coefficient(n) if p <= P else Fraction(0) for p in range(P + 1)]
        if all(_is_zero_scalar(v) for v in cvec):
            continue
        for m in range(0, usable + 1 - n):
            b_m = btable[m]
            if b_m.is_zero():
                continue
            taylor = b_m.eps_taylor(_add_exponent_int(sol.exponent, n), P + 1)
            # b_m(e + n + N) c where N shifts log-degree p+1 -> p
            for p in range(P + 1):
                acc = Fraction(0)
                for l in range(0, P + 1 - p):
                    if l < len(taylor) and not _is_zero_scalar(taylor[l]):
                        acc = acc + taylor[l] * cvec[p + l]
                if not _is_zero_scalar(acc):
                    residual[p][n + m] = residual[p][n + m] + acc
    return [PowerSeries(0, res, usable) for res in residual]


# ---------------------------------------------------------------------------
# point classification


class PointKind:
    ORDINARY = "ORDINARY"
    APPARENT = "APPARENT"
    LOGARITHMIC = "LOGARITHMIC"
    ORBIFOLD = "ORBIFOLD"
    GENERIC = "GENERIC"
    IRREGULAR = "IRREGULAR"


class PointClass:
    """Classification of a singular point; ORBIFOLD carries its weight b."""

    __slots__ = ("kind", "weight")

    def __init__(self, kind: str, weight: Optional[int] = None):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "weight", weight)

    def __setattr__(self, *a):
        raise AttributeError("PointClass is immutable")

    def __eq__(self, other):
        if not isinstance(other, PointClass):
            return NotImplemented
        return self.kind == other.kind and self.weight == other.weight

    def __hash__(self):
        return hash((self.kind, self.weight))

    def __repr__(self):
        if self.kind == PointKind.ORBIFOLD:
            return f"ORBIFOLD({self.weight})"
        return self.kind


class SingularPointReport:
    """Everything the toolkit knows about one singular point."""

    __slots__ = (
        "location",
        "indicial",
        "exponents",
        "exponent_difference",
        "classification",
        "log_obstruction_checked",
    )

    def __init__(self, location, indicial, exponents, exponent_difference,
                 classification, log_obstruction_checked):
        object.__setattr__(self, "location", location)
        object.__setattr__(self, "indicial", indicial)
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(self, "exponent_difference", exponent_difference)
        object.__setattr__(self, "classification", classification)
        object.__setattr__(self, "log_obstruction_checked", log_obstruction_checked)

    def __setattr__(self, *a):
        raise AttributeError("SingularPointReport is immutable")

    def __repr__(self):
        exps = ", ".join(exponent_text(e) for e in self.exponents)
        return (
            f"SingularPointReport({self.location.describe()}: "
            f"exponents {{{exps}}}, {self.classification!r})"
        )


def _basis_has_log(basis: LogSolutionBasis) -> bool:
    return any(sol.has_log() for sol in basis)


_FROBENIUS_PROBE_TERMS = 6


def classify_point(L: LinearODE, at: AlgebraicPoint, pnf: Optional[LinearODE] = None
                   ) -> SingularPointReport:
    """Full classification of one point of an order-2 operator (order 3
    gets exponents plus a log/ordinary coarse classification)."""
    view = _local_view(L, at)
    if not _is_regular_singular(view):
        return SingularPointReport(at, None, (), None, PointClass(PointKind.IRREGULAR), False)
    chi = _theta_coefficient_table(view, 1)[0]
    exps = _solve_indicial(chi, at)
    exps.sort(key=exponent_sort_key)
    if L.order != 2:
        return _classify_higher_order(L, at, view, chi, exps)
    lead = chi.coeffs[-1]
    monic = chi.scale(_inv(lead)) if lead != 1 else chi
    b, c = monic.coefficient(1), monic.coefficient(0)
    diff = _difference_from_disc(b * b - 4 * c, at)
    checked = False
    if isinstance(diff, QuadraticExponent):
        cls = PointClass(PointKind.GENERIC)
    elif diff == 0:
        basis = frobenius_basis(L, at, _FROBENIUS_PROBE_TERMS)
        if not _basis_has_log(basis):
            raise AssertionError("equal exponents without a log solution")
        checked = True
        cls = PointClass(PointKind.LOGARITHMIC)
    elif diff.denominator == 1:
        n_probe = int(diff) + _FROBENIUS_PROBE_TERMS
        basis = frobenius_basis(L, at, n_probe)
        checked = True
        if _basis_has_log(basis):
            cls = PointClass(PointKind.LOGARITHMIC)
        else:
            pnf_op = pnf if pnf is not None else pnf2(L)
            local_pnf = pnf_op.infinity_local() if at.is_infinity else pnf_op
            probe_pt = AlgebraicPoint.rational(0) if at.is_infinity else at
            qv = local_pnf.coefficient(2).valuation_at(probe_pt)
            finite = qv is None or qv >= 0
            if diff == 1 and finite:
                cls = PointClass(PointKind.ORDINARY)
            else:
                cls = PointClass(PointKind.APPARENT)
    elif diff.numerator == 1 and diff.denominator >= 2:
        cls = PointClass(PointKind.ORBIFOLD, diff.denominator)
    else:
        cls = PointClass(PointKind.GENERIC)
    return SingularPointReport(at, chi, tuple(exps), diff, cls, checked)


def _classify_higher_order(L, at, view, chi, exps) -> SingularPointReport:
    diffs_integer = True
    for i in range(len(exps)):
        for j in range(i + 1, len(exps)):
            if _exponent_offset(exps[i], exps[j]) is None:
                diffs_integer = False
    checked = False
    if diffs_integer:
        offsets = [_exponent_offset(e, exps[0]) for e in exps]
        n_probe = max(offsets) + _FROBENIUS_PROBE_TERMS
        basis = frobenius_basis(L, at, n_probe)
        checked = True
        if _basis_has_log(basis):
            cls = PointClass(PointKind.LOGARITHMIC)
        else:
            k = L.order
            pnf_op = pnf3(L) if k == 3 else None
            finite = True
            if pnf_op is not None:
                probe_pt = AlgebraicPoint.rational(0) if at.is_infinity else at
                op = pnf_op.infinity_local() if at.is_infinity else pnf_op
                for i in range(1, k + 1):
                    v = op.coefficient(i).valuation_at(probe_pt)
                    if v is not None and v < 0:
                        finite = False
            if sorted(offsets) == list(range(k)) and finite:
                cls = PointClass(PointKind.ORDINARY)
            else:
                cls = PointClass(PointKind.APPARENT)
    else:
        cls = PointClass(PointKind.GENERIC)
    return SingularPointReport(at, chi, tuple(exps), None, cls, checked)


def is_apparent(L: LinearODE, at: AlgebraicPoint) -> PointClass:
    """Resolve an integer-difference point: APPARENT, LOGARITHMIC, or
    ORDINARY, always by explicit obstruction computation."""
    if L.order == 2:
        diff = exponent_difference(L, at)
        if isinstance(diff, QuadraticExponent) or diff.denominator != 1:
            raise NotIntegerDifference(f"difference {diff} is not an integer")
    report = classify_point(L, at)
    if report.classification.kind not in (
        PointKind.APPARENT,
        PointKind.LOGARITHMIC,
        PointKind.ORDINARY,
    ):
        raise NotIntegerDifference(
            f"point {at.describe()} classified {report.classification!r}"
        )
    return report.classification


def mum_check(L: LinearODE, at: AlgebraicPoint) -> bool:
    """Maximal unipotent monodromy via the formal-solution picture: all
    exponents equal and the full log ladder log^0..log^(k-1) present."""
    view = _local_view(L, at)
    if not _is_regular_singular(view):
        return False
    chi = _theta_coefficient_table(view, 1)[0]
    try:
        exps = _solve_indicial(chi, at)
    except UnsupportedExponentField:
        return False
    first = exps[0]
    if not all(_exponent_offset(e, first) == 0 for e in exps):
        return False
    basis = frobenius_basis(L, at, _FROBENIUS_PROBE_TERMS)
    return max(sol.max_log_power() for sol in basis) == L.order - 1


def analyze(L: LinearODE) -> list[SingularPointReport]:
    """Reports for every singular point of the operator, canonically
    ordered; per-point analyses are independent."""
    pnf = pnf2(L) if L.order == 2 else None
    return [classify_point(L, pt, pnf) for pt in singular_points(L)]
