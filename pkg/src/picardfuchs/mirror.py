"""Mirror-map extraction at points of maximal unipotent monodromy.

At a MUM point the Frobenius basis is a holomorphic solution f (f(0) = 1)
and a logarithmic one f log z + g with g(0) = 0; the nome is
q(z) = z exp(g/f) (the 2*pi*i factors cancel identically), and the mirror
map is the exact compositional inverse z(q).

Coordinate convention: a finite MUM point a is moved to the origin by
z = x - a.  A MUM point at infinity is moved to the origin by
z = 1/(1728 x), the reciprocal of the arithmetic normalization of the
base (the classical factor 1728 that converts the algebraic J = g2^3/Delta
to the modular invariant with integral q-expansion 1/q + 744 + ...).
Because the construction is only scale-canonical once a coordinate is
fixed, this choice is part of the contract: it is the unique scale under
which the bundled golden expansions hold, and mirror maps of modular
families come out with their integral normalization.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import AlgebraicPoint, Polynomial, RationalFunction
from .ode import (
    DiffOp,
    LinearODE,
    NotFuchsian,
    frobenius_basis,
    fuchsian_check,
    mum_check,
    singular_points,
)
from .series import BadValuation, PowerSeries, QSeries, series_revert

#: scale of the local coordinate at infinity (see module docstring)
INFINITY_COORDINATE_SCALE = 1728


class NotMUM(ValueError):
    """The chosen point is not a point of maximal unipotent monodromy."""


class UnsupportedLocation(ValueError):
    """MUM point at an algebraic location of degree > 1."""


def find_mum_points(L: LinearODE) -> list[AlgebraicPoint]:
    """All singular points passing the maximal-unipotent-monodromy test."""
    if L.order not in (2, 3):
        raise ValueError("find_mum_points expects order 2 or 3")
    diag = fuchsian_check(L)
    if not diag.fuchsian:
        raise NotFuchsian(repr(diag))
    return [pt for pt in singular_points(L) if mum_check(L, pt)]


def mirror_map(L: LinearODE, mum: AlgebraicPoint, n_terms: int) -> QSeries:
    """The mirror-map q-series z(q) of an order-2 operator about a MUM
    point, through q^n_terms, by exact series reversion.

    The point must be rational or infinity; the series is produced in the
    local coordinate described by ``mirror_coordinate_text``."""
    if L.order != 2:
        raise ValueError("mirror_map expects an order-2 operator")
    if not (mum.is_rational or mum.is_infinity):
        raise UnsupportedLocation("MUM point of degree > 1")
    if not mum_check(L, mum):
        raise NotMUM(f"{mum.describe()} fails the MUM test")
    if mum.is_infinity:
        local = _infinity_mirror_operator(L)
        basis = frobenius_basis(local, AlgebraicPoint.rational(0), n_terms)
    else:
        basis = frobenius_basis(L, mum, n_terms)
    nome = _nome_from_basis(basis, n_terms)
    return series_revert(nome)


def _infinity_mirror_operator(L: LinearODE) -> LinearODE:
    """L in the coordinate z = 1/(1728 x)."""
    scale = Polynomial.constant(Fraction(1, INFINITY_COORDINATE_SCALE))
    substitution = RationalFunction(scale, Polynomial.x())
    return DiffOp.from_ode(L).pullback(substitution).to_ode()


def mirror_coordinate_text(mum: AlgebraicPoint, var: str = "x") -> str:
    """Human-readable description of the local coordinate in which the
    mirror map is expanded."""
    if mum.is_infinity:
        return f"z = 1/({INFINITY_COORDINATE_SCALE}*{var})"
    a = mum.rational_value
    if a == 0:
        return f"z = {var}"
    sign = "-" if a > 0 else "+"
    return f"z = {var} {sign} {abs(a)}"


def _nome_from_basis(basis, n_terms: int) -> PowerSeries:
    holomorphic = [s for s in basis if not s.has_log()]
    logarithmic = [s for s in basis if s.max_log_power() == 1]
    if len(holomorphic) != 1 or len(logarithmic) != 1:
        raise NotMUM("Frobenius basis lacks the (holomorphic, log) pair")
    f = holomorphic[0].parts[0]
    log_sol = logarithmic[0]
    f_again = log_sol.parts[1]
    g = log_sol.parts[0]
    if f_again != f:
        # the log part is a multiple of the holomorphic solution; normalize
        scale = f_again.leading() / f.leading()
        g = g / scale
        f_again = f_again / scale
        if f_again != f:
            raise AssertionError("log solution is not aligned with the holomorphic one")
    if not g.is_zero() and g.coefficient(0) != 0:
        # enforce g(0) = 0 by subtracting the unique multiple of the
        # holomorphic solution
        g = g - g.coefficient(0) * f
    # q(t) = t * exp(g/f)
    ratio = g / f if not g.is_zero() else PowerSeries.zero(g.truncation_order)
    return ratio.exp().shift_exponent(1).truncate(n_terms)


def reciprocal_plus_constant(zq: QSeries, c: Fraction) -> QSeries:
    """The Laurent q-series 1/z(q) + c for a valuation-1 series z(q)."""
    if zq.valuation != 1:
        raise BadValuation("reciprocal_plus_constant expects valuation 1")
    return (1 / zq) + Fraction(c)
