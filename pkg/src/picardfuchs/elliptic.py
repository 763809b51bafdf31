"""Weierstrass elliptic surface analyzer.

Discriminant and functional invariant of y^2 = 4x^3 - g2 x - g3 over the
projective line, the Griffiths first-order system and its scalar collapse,
the pullback route to the projective normal form of the Picard-Fuchs
operator, Kodaira fiber typing from minimal-model valuations, and the
modularity verdict for the mirror map.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Union

from .exact import (
    AT_INFINITY,
    AlgebraicPoint,
    Polynomial,
    RationalFunction,
    irreducible_factors,
)
from .ode import LinearODE, PointKind, pnf2
from .transform import (
    ConstantMap,
    NotCyclic,
    critical_points,
    fiber_over_point,
    pullback2,
    system_to_scalar,
)
from .uniformize import CUSP, UniformizationReport, uniformization_check


class IdenticallySingular(ValueError):
    """The discriminant vanishes identically (no smooth general fiber)."""


class ConstantJ(ValueError):
    """Constant functional invariant: the eta_1 period satisfies no
    second-order equation of the analyzed kind."""


class WeierstrassModel:
    """Fibration data (g2, g3) for y^2 = 4 x^3 - g2 x - g3 over P^1."""

    __slots__ = ("g2", "g3")

    def __init__(self, g2, g3):
        g2 = _as_rf(g2)
        g3 = _as_rf(g3)
        delta = g2 * g2 * g2 - 27 * g3 * g3
        if delta.is_zero():
            raise IdenticallySingular("g2^3 - 27 g3^2 vanishes identically")
        object.__setattr__(self, "g2", g2)
        object.__setattr__(self, "g3", g3)

    def __setattr__(self, *a):
        raise AttributeError("WeierstrassModel is immutable")

    def __eq__(self, other):
        if not isinstance(other, WeierstrassModel):
            return NotImplemented
        return self.g2 == other.g2 and self.g3 == other.g3

    def __hash__(self):
        return hash((self.g2, self.g3))

    def __repr__(self):
        return f"WeierstrassModel(g2={self.g2.to_text('s')}, g3={self.g3.to_text('s')})"

    def quadratic_twist(self, u: RationalFunction) -> "WeierstrassModel":
        u = _as_rf(u)
        return WeierstrassModel(u**4 * self.g2, u**6 * self.g3)


def _as_rf(v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, Polynomial):
        return RationalFunction(v)
    if isinstance(v, (int, Fraction)):
        return RationalFunction.constant(v)
    raise TypeError(f"bad Weierstrass datum {type(v).__name__}")


class KodairaFiber:
    """A Kodaira fiber type: I_n (n >= 0), II, III, IV, I_n* (n >= 0),
    IV*, III*, II*; I_0 denotes the smooth fiber."""

    __slots__ = ("family", "n")

    _EULER_BASE = {"I": 0, "II": 2, "III": 3, "IV": 4, "I*": 6, "IV*": 8, "III*": 9, "II*": 10}

    def __init__(self, family: str, n: int = 0):
        if family not in self._EULER_BASE:
            raise ValueError(f"unknown fiber family {family!r}")
        if family not in ("I", "I*") and n != 0:
            raise ValueError(f"fiber {family} carries no index")
        if n < 0:
            raise ValueError("fiber index must be >= 0")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "n", n)

    def __setattr__(self, *a):
        raise AttributeError("KodairaFiber is immutable")

    @classmethod
    def parse(cls, text: str) -> "KodairaFiber":
        text = text.strip()
        star = text.endswith("*")
        body = text[:-1] if star else text
        if body.startswith("I") and body not in ("II", "III", "IV") and body[1:].isdigit():
            return cls("I*" if star else "I", int(body[1:]))
        return cls(body + "*" if star else body)

    @property
    def euler_number(self) -> int:
        return self._EULER_BASE[self.family] + self.n

    @property
    def is_starred(self) -> bool:
        return self.family.endswith("*")

    def __eq__(self, other):
        if not isinstance(other, KodairaFiber):
            return NotImplemented
        return self.family == other.family and self.n == other.n

    def __hash__(self):
        return hash((self.family, self.n))

    def __repr__(self):
        return f"KodairaFiber({self})"

    def __str__(self):
        if self.family == "I":
            return f"I{self.n}"
        if self.family == "I*":
            return f"I{self.n}*"
        return self.family


def discriminant(W: WeierstrassModel) -> RationalFunction:
    """Delta = g2^3 - 27 g3^2 (nonzero by the model invariant)."""
    return W.g2**3 - 27 * W.g3**2


def delta_aux(W: WeierstrassModel) -> RationalFunction:
    """delta = 3 g3 g2' - 2 g2 g3'."""
    return 3 * W.g3 * W.g2.derivative() - 2 * W.g2 * W.g3.derivative()


def functional_invariant(W: WeierstrassModel) -> RationalFunction:
    """J = g2^3 / (g2^3 - 27 g3^2), normalized so the g2 = 0 locus maps
    to 0 and the g3 = 0 locus to 1."""
    return W.g2**3 / discriminant(W)


def modular_lambda() -> LinearODE:
    """The uniformizing operator of the modular group on the J-line:

        f'' + (36 x^2 - 41 x + 32) / (144 x^2 (x-1)^2) f = 0
    """
    x = Polynomial.x()
    q = RationalFunction(36 * x**2 - 41 * x + 32, 144 * x**2 * (x - 1) ** 2)
    return LinearODE.second_order(RationalFunction.zero(), q)


def griffiths_pf(W: WeierstrassModel) -> LinearODE:
    """Second-order Picard-Fuchs operator for the holomorphic period
    eta_1, from the first-order system

        d/dz (eta_1, eta_2) = [[-Delta'/(12 Delta), 3 delta/(2 Delta)],
                               [-g2 delta/(8 Delta), Delta'/(12 Delta)]] (eta_1, eta_2)
    """
    delta_big = discriminant(W)
    delta_small = delta_aux(W)
    if delta_small.is_zero():
        # delta = 0 forces J' = 0; asserted, not assumed
        if not functional_invariant(W).derivative().is_zero():
            raise AssertionError("delta = 0 with nonconstant functional invariant")
        raise ConstantJ("constant functional invariant: eta_1 satisfies a first-order equation")
    dlog = delta_big.derivative() / delta_big
    a11 = -dlog * Fraction(1, 12)
    a12 = 3 * delta_small / (2 * delta_big)
    a21 = -W.g2 * delta_small / (8 * delta_big)
    a22 = dlog * Fraction(1, 12)
    try:
        return system_to_scalar([[a11, a12], [a21, a22]], 0, require_full_order=True)
    except NotCyclic as exc:
        raise ConstantJ(str(exc)) from exc


def lambda_J(jfunc: RationalFunction) -> LinearODE:
    """The PNF pullback of the modular uniformizing operator along the
    functional invariant."""
    jfunc = _as_rf(jfunc)
    if jfunc.is_constant():
        raise ConstantMap("functional invariant must be nonconstant")
    return pnf2(pullback2(modular_lambda(), jfunc))


# ---------------------------------------------------------------------------
# Kodaira fiber typing


def _valuation(f: RationalFunction, at: AlgebraicPoint) -> Optional[int]:
    return f.valuation_at(at)


def kodaira_type(W: WeierstrassModel, at: AlgebraicPoint) -> KodairaFiber:
    """Fiber type at a point, by local minimalization of (g2, g3) and the
    Kodaira-Neron valuation table; when the functional invariant is
    nonconstant the J-value route (value class + minimal v(Delta)) is
    computed as well and must agree."""
    v2 = _valuation(W.g2, at)
    v3 = _valuation(W.g3, at)
    vD = _valuation(discriminant(W), at)
    e = _minimal_shift(v2, v3)
    v2m = None if v2 is None else v2 - 4 * e
    v3m = None if v3 is None else v3 - 6 * e
    vDm = vD - 12 * e
    fiber = _fiber_from_valuations(v2m, v3m, vDm)
    j = functional_invariant(W)
    if not j.is_constant():
        _assert_j_route_agrees(j, at, vDm, fiber)
    return fiber


def _minimal_shift(v2: Optional[int], v3: Optional[int]) -> int:
    import math

    if v2 is None:
        return math.floor(v3 / 6)
    if v3 is None:
        return math.floor(v2 / 4)
    return min(math.floor(v2 / 4), math.floor(v3 / 6))


def _fiber_from_valuations(v2: Optional[int], v3: Optional[int], vD: int) -> KodairaFiber:
    inf = 10**9
    a = inf if v2 is None else v2
    b = inf if v3 is None else v3
    if vD == 0:
        return KodairaFiber("I", 0)
    if a == 0 and b == 0:
        return KodairaFiber("I", vD)
    if b == 1:
        return _expect(vD, 2, KodairaFiber("II"))
    if a == 1:
        return _expect(vD, 3, KodairaFiber("III"))
    if b == 2:
        return _expect(vD, 4, KodairaFiber("IV"))
    if vD == 6:
        return KodairaFiber("I*", 0)
    if a == 2 and b == 3:
        return KodairaFiber("I*", vD - 6)
    if b == 4:
        return _expect(vD, 8, KodairaFiber("IV*"))
    if a == 3:
        return _expect(vD, 9, KodairaFiber("III*"))
    if b == 5:
        return _expect(vD, 10, KodairaFiber("II*"))
    raise AssertionError(f"non-minimal valuations ({v2}, {v3}, {vD})")


def _expect(vD: int, expected: int, fiber: KodairaFiber) -> KodairaFiber:
    if vD != expected:
        raise AssertionError(f"v(Delta) = {vD}, expected {expected} for {fiber}")
    return fiber


def _assert_j_route_agrees(j: RationalFunction, at: AlgebraicPoint, vDm: int,
                           fiber: KodairaFiber) -> None:
    vj = j.valuation_at(at)
    vj1 = (j - 1).valuation_at(at)
    if vj is not None and vj < 0:
        n = -vj
        pair = (KodairaFiber("I", n), KodairaFiber("I*", n))
        expected_vd = (n, n + 6)
    elif vj is not None and vj > 0:
        m = vj % 3
        if m == 1:
            pair = (KodairaFiber("II"), KodairaFiber("IV*"))
            expected_vd = (2, 8)
        elif m == 2:
            pair = (KodairaFiber("IV"), KodairaFiber("II*"))
            expected_vd = (4, 10)
        else:
            pair = (KodairaFiber("I", 0), KodairaFiber("I*", 0))
            expected_vd = (0, 6)
    elif vj1 is not None and vj1 > 0:
        if vj1 % 2 == 1:
            pair = (KodairaFiber("III"), KodairaFiber("III*"))
            expected_vd = (3, 9)
        else:
            pair = (KodairaFiber("I", 0), KodairaFiber("I*", 0))
            expected_vd = (0, 6)
    else:
        pair = (KodairaFiber("I", 0), KodairaFiber("I*", 0))
        expected_vd = (0, 6)
    choice = pair[0] if vDm == expected_vd[0] else pair[1] if vDm == expected_vd[1] else None
    if choice != fiber:
        raise AssertionError(
            f"J-route fiber {choice} disagrees with valuation table {fiber} at {at.describe()}"
        )


def fiber_census(W: WeierstrassModel) -> list[tuple[AlgebraicPoint, KodairaFiber]]:
    """All points carrying a singular fiber (type != I0), canonically
    ordered; candidates are the zeros/poles of Delta and the poles of g2,
    g3, plus infinity."""
    candidates = {AT_INFINITY}
    delta = discriminant(W)
    for poly in (delta.num, delta.den, W.g2.den, W.g3.den):
        if poly.degree() >= 1:
            for factor, _ in irreducible_factors(poly):
                candidates.add(AlgebraicPoint.from_modulus(factor))
    out = []
    for pt in sorted(candidates, key=lambda p: p.sort_key()):
        fiber = kodaira_type(W, pt)
        if fiber != KodairaFiber("I", 0):
            out.append((pt, fiber))
    return out


def euler_sum(fibers) -> int:
    """Sum of Euler numbers of a fiber configuration."""
    return sum(f.euler_number for f in fibers)


# ---------------------------------------------------------------------------
# the complete list of rational elliptic modular surface configurations


def _parse_config(text: str) -> tuple[KodairaFiber, ...]:
    return tuple(KodairaFiber.parse(part) for part in text.split(","))


_MODULAR_33 = tuple(
    _parse_config(row)
    for row in (
        # Euler characteristic 12, nonconstant functional invariant,
        # modular mirror map; column-major transcription
        "I1, II, III*",
        "I2, II, IV*",
        "I1, I2, III*",
        "I3, III, III, III",
        "I1, I3, IV*",
        "I4, II, III, III",
        "I5, II, II, III",
        "I1, I1, I4*",
        "I2, I2, I2*",
        "I6, II, II, II",
        "I1, I5, III, III",
        "I2, I4, III, III",
        "I3, I3, III, III",
        "I1, I6, II, III",
        "I2, I5, II, III",
        "I3, I4, II, III",
        "I1, I7, II, II",
        "I2, I6, II, II",
        "I4, I4, II, II",
        "I1, I1, I7, III",
        "I1, I2, I6, III",
        "I1, I3, I5, III",
        "I2, I3, I4, III",
        "I1, I1, I8, II",
        "I1, I2, I7, II",
        "I1, I4, I5, II",
        "I2, I3, I5, II",
        "I1, I1, I1, I9",
        "I1, I1, I2, I8",
        "I1, I2, I3, I6",
        "I1, I1, I5, I5",
        "I2, I2, I4, I4",
        "I3, I3, I3, I3",
    )
)


def modular_list_fixture() -> tuple[tuple[KodairaFiber, ...], ...]:
    """The 33 singular-fiber configurations of rational elliptic surfaces
    with modular mirror maps."""
    return _MODULAR_33


# ---------------------------------------------------------------------------
# the modularity verdict


class OrderAudit:
    """Multiplicity audit of the functional invariant over one value."""

    __slots__ = ("value", "entries", "ok")

    def __init__(self, value, entries):
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "entries", tuple(entries))
        object.__setattr__(self, "ok", all(ok for _, _, ok in entries))

    def __setattr__(self, *a):
        raise AttributeError("OrderAudit is immutable")


class EllipticModularityReport:
    __slots__ = (
        "j_invariant",
        "zero_audit",
        "one_audit",
        "rh_defect",
        "uniformization",
        "apparent_points",
        "census",
        "forbidden_fibers",
        "modular",
    )

    def __init__(self, j_invariant, zero_audit, one_audit, rh_defect,
                 uniformization, apparent_points, census, forbidden_fibers, modular):
        object.__setattr__(self, "j_invariant", j_invariant)
        object.__setattr__(self, "zero_audit", zero_audit)
        object.__setattr__(self, "one_audit", one_audit)
        object.__setattr__(self, "rh_defect", rh_defect)
        object.__setattr__(self, "uniformization", uniformization)
        object.__setattr__(self, "apparent_points", tuple(apparent_points))
        object.__setattr__(self, "census", census)
        object.__setattr__(self, "forbidden_fibers", tuple(forbidden_fibers))
        object.__setattr__(self, "modular", modular)

    def __setattr__(self, *a):
        raise AttributeError("EllipticModularityReport is immutable")

    def __repr__(self):
        verdict = "MODULAR" if self.modular else "NOT MODULAR"
        return f"EllipticModularityReport({verdict})"


def _order_audit(j: RationalFunction, value: Fraction, admissible) -> OrderAudit:
    """Vanishing orders of j - value over all of P^1 with the per-order
    admissibility flag."""
    entries = []
    shifted = j - value
    for pt, mult in fiber_over_point_orders(shifted):
        entries.append((pt, mult, admissible(mult)))
    return OrderAudit(value, entries)


def fiber_over_point_orders(shifted: RationalFunction) -> list[tuple[AlgebraicPoint, int]]:
    """Zeros of a rational function with multiplicities, including the
    point at infinity."""
    out = []
    if shifted.num.degree() >= 1:
        for factor, mult in irreducible_factors(shifted.num):
            out.append((AlgebraicPoint.from_modulus(factor), mult))
    v_inf = shifted.valuation_at(AT_INFINITY)
    if v_inf is not None and v_inf > 0:
        out.append((AT_INFINITY, v_inf))
    return out


def check_elliptic_modularity(
    model_or_j: Union[WeierstrassModel, RationalFunction]
) -> EllipticModularityReport:
    """Modularity verdict for the mirror map of a Weierstrass elliptic
    surface (or of a bare functional invariant).

    MODULAR iff the functional invariant has zeros to orders 1 or 0 mod 3
    and takes the value one to orders 1 or 0 mod 2, and the full
    apparent-singularity scan of the PNF Picard-Fuchs pullback is clean.
    """
    if isinstance(model_or_j, WeierstrassModel):
        W = model_or_j
        j = functional_invariant(W)
    else:
        W = None
        j = _as_rf(model_or_j)
    if j.is_constant():
        raise ConstantJ("constant functional invariant")

    zero_audit = _order_audit(j, Fraction(0), lambda m: m == 1 or m % 3 == 0)
    one_audit = _order_audit(j, Fraction(1), lambda m: m == 1 or m % 2 == 0)

    # Riemann-Hurwitz bookkeeping over {0, 1, inf}
    d = j.degree()
    branch = 0
    for value in (AlgebraicPoint.rational(0), AlgebraicPoint.rational(1), AT_INFINITY):
        fiber = fiber_over_point(j, value)
        npts = sum(pt.degree for pt, _ in fiber)
        branch += d - npts
    rh_defect = 2 * d - 2 - branch

    uniform = uniformization_check(lambda_J(j))
    apparent = [
        v.location for v in uniform.points
        if v.classification is not None and v.classification.kind == PointKind.APPARENT
    ]
    orders_ok = zero_audit.ok and one_audit.ok
    apparent_clean = not apparent
    modular = orders_ok and apparent_clean

    census = None
    forbidden = []
    if W is not None:
        census = fiber_census(W)
        forbidden = [
            (pt, fiber) for pt, fiber in census
            if fiber in (KodairaFiber("IV"), KodairaFiber("II*"))
        ]
        if forbidden and modular:
            raise AssertionError("IV/II* fiber on a surface passing the order conditions")
    if modular != uniform.passed:
        # Theorem-level identity between the two routes; a mismatch is an
        # internal contract violation, not a verdict
        raise AssertionError("order audit and uniformization verdict disagree")
    return EllipticModularityReport(
        j, zero_audit, one_audit, rh_defect, uniform, apparent, census, forbidden, modular
    )
