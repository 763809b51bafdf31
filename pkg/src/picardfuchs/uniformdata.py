"""Bundled exact fixtures: classical operators, models, fiber lists and
q-expansions used by the tests and addressable from the CLI as
``fixture:<name>``.

Every fixture that a pipeline can re-derive (the uniformizing operator as
the normal form of the bundled Picard-Fuchs operator, the mirror-map
series from the bundled family) is cross-checked at test time.
"""

from __future__ import annotations

from fractions import Fraction

from .elliptic import WeierstrassModel, modular_lambda, modular_list_fixture
from .exact import Polynomial, RationalFunction
from .k3 import FrickeOrbifoldData
from .ode import LinearODE
from .series import QSeries


class UnknownFixture(KeyError):
    """No fixture with the requested name."""


class Fixture:
    __slots__ = ("name", "payload", "provenance")

    def __init__(self, name: str, payload, provenance: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "payload", payload)
        object.__setattr__(self, "provenance", provenance)

    def __setattr__(self, *a):
        raise AttributeError("Fixture is immutable")

    def __repr__(self):
        return f"Fixture({self.name}: {self.provenance})"


def _family_e() -> WeierstrassModel:
    x = Polynomial.x()
    g = RationalFunction(27 * x, x - 1)
    return WeierstrassModel(g, g)


def _family_e_pf() -> LinearODE:
    x = Polynomial.x()
    p1 = RationalFunction(Polynomial.one(), x)
    p2 = RationalFunction(
        Polynomial((Fraction(-1, 36), Fraction(31, 144))), x**2 * (x - 1) ** 2
    )
    return LinearODE.second_order(p1, p2)


def _j_qseries() -> QSeries:
    return QSeries(-1, (1, 744, 196884, 21493760), 2)


def _mirror_qseries() -> QSeries:
    return QSeries(1, (1, -744, 356652, -140361152), 4)


def _psl2z_signature() -> FrickeOrbifoldData:
    return FrickeOrbifoldData(
        1,
        elliptic_points=[(Fraction(0), 3), (Fraction(1), 2)],
        cusp_values=[None],
    )


_BUILDERS = {
    "lambda": (
        modular_lambda,
        "uniformizing differential equation of the modular group on the J-line",
    ),
    "family-E": (
        _family_e,
        "Weierstrass model y^2 = 4x^3 - (27s/(s-1)) x - 27s/(s-1) over the J-line",
    ),
    "family-E-pf": (
        _family_e_pf,
        "Picard-Fuchs operator of the J-line Weierstrass family (holomorphic period)",
    ),
    "modular-33": (
        modular_list_fixture,
        "singular-fiber configurations of the rational elliptic surfaces "
        "with Euler characteristic 12 and modular mirror maps",
    ),
    "j-qseries": (
        _j_qseries,
        "q-expansion of the elliptic modular function, 1/q + 744 + 196884 q + ...",
    ),
    "mirror-qseries": (
        _mirror_qseries,
        "reciprocal q-expansion 1/J(q) = q - 744 q^2 + 356652 q^3 - ...",
    ),
    "psl2z-signature": (
        _psl2z_signature,
        "orbifold signature (2, 3, infinity) of the modular group in the "
        "J-coordinate, derived from the bundled uniformizing operator",
    ),
}


def fixture_names() -> list[str]:
    return sorted(_BUILDERS)


def load_fixture(name: str) -> Fixture:
    """Return the named fixture with its payload and provenance note."""
    try:
        builder, provenance = _BUILDERS[name]
    except KeyError:
        raise UnknownFixture(
            f"unknown fixture {name!r}; available: {', '.join(fixture_names())}"
        ) from None
    return Fixture(name, builder(), provenance)
