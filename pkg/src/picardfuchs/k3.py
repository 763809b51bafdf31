"""Modularity checker for one-parameter lattice-polarized K3 families.

The third-order Picard-Fuchs operator of such a family is a symmetric
square; its PNF square root is the object the orbifold criterion applies
to.  The combinatorial side audits the vanishing orders of the rational
map to the Hauptmodul coordinate against the orbifold signature of the
uniformizing group (weights 2, 3, 4, 6 and cusps), with the single rule:
multiplicity r over a weight-b point is table-admissible iff b | r or
r | b.  Preimages with b | r and r > b are apparent singularities and a
separate audit flags them (the theorem requires the absence of apparent
singularities on top of the table conditions, exactly as in the elliptic
case); r = b resolves to an ordinary point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

from .exact import AT_INFINITY, AlgebraicPoint, RationalFunction
from .ode import LinearODE, NotFuchsian, fuchsian_check
from .series import PowerSeries, QSeries, series_compose
from .transform import ConstantMap, NotSymmetricSquare, fiber_over_point, sym2_root
from .uniformize import UniformizationReport, uniformization_check


class SignatureValueCollision(ValueError):
    """Two signature entries share a value in the Hauptmodul coordinate."""


class TruncationTooShort(ValueError):
    """Fewer than 3 comparable q-series terms."""


_ALLOWED_ORDERS = (2, 3, 4, 6)


class FrickeOrbifoldData:
    """Orbifold signature of a genus-zero Fricke-type group in its
    Hauptmodul coordinate: elliptic points of order 2, 3, 4 or 6 and cusp
    values (values are rational or the infinity marker).

    Genus-zero-ness is the caller's assertion; recorded, not verified."""

    __slots__ = ("n", "elliptic_points", "cusp_values")

    def __init__(self, n: int, elliptic_points: Sequence, cusp_values: Sequence):
        if n < 1:
            raise ValueError("level must be a positive integer")
        ells = []
        for value, order in elliptic_points:
            value = _as_point(value)
            if order not in _ALLOWED_ORDERS:
                raise ValueError(f"elliptic point order must be one of {_ALLOWED_ORDERS}")
            ells.append((value, order))
        cusps = [_as_point(v) for v in cusp_values]
        seen = set()
        for pt in [v for v, _ in ells] + cusps:
            if pt in seen:
                raise SignatureValueCollision(f"value {pt.describe()} appears twice")
            seen.add(pt)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "elliptic_points", tuple(ells))
        object.__setattr__(self, "cusp_values", tuple(cusps))

    def __setattr__(self, *a):
        raise AttributeError("FrickeOrbifoldData is immutable")

    def __repr__(self):
        ell = ", ".join(f"({v.describe()}, {b})" for v, b in self.elliptic_points)
        cusp = ", ".join(v.describe() for v in self.cusp_values)
        return f"FrickeOrbifoldData(n={self.n}, elliptic=[{ell}], cusps=[{cusp}])"


def _as_point(value) -> AlgebraicPoint:
    if isinstance(value, AlgebraicPoint):
        return value
    if value is None:
        return AT_INFINITY
    return AlgebraicPoint.rational(Fraction(value))


class HauptmodulSeries:
    """A normalized Hauptmodul q-expansion 1/q + c_0 + c_1 q + ..."""

    __slots__ = ("series",)

    def __init__(self, series: QSeries):
        object.__setattr__(self, "series", series)

    def __setattr__(self, *a):
        raise AttributeError("HauptmodulSeries is immutable")


def hauptmodul_normalization_check(h: Union[HauptmodulSeries, QSeries]) -> bool:
    """True iff the expansion starts 1/q with unit coefficient and every
    retained coefficient is an integer."""
    series = h.series if isinstance(h, HauptmodulSeries) else h
    if series.is_zero() or series.valuation != -1:
        return False
    if series.coefficient(-1) != 1:
        return False
    for c in series.coefficients:
        if not isinstance(c, Fraction) or c.denominator != 1:
            return False
    return True


def k3_pf_root(L: LinearODE) -> LinearODE:
    """PNF square root of a third-order Fuchsian operator; failure means
    the input is not the Picard-Fuchs operator of such a K3 family."""
    if L.order != 3:
        raise ValueError("k3_pf_root expects order 3")
    diag = fuchsian_check(L)
    if not diag.fuchsian:
        raise NotFuchsian(repr(diag))
    return sym2_root(L)


class EllipticPointAudit:
    __slots__ = ("value", "order", "entries", "table_ok", "apparent")

    def __init__(self, value, order, entries):
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "entries", tuple(entries))
        object.__setattr__(self, "table_ok", all(ok for _, _, ok, _ in entries))
        object.__setattr__(
            self, "apparent", tuple(pt for pt, _, _, app in entries if app)
        )

    def __setattr__(self, *a):
        raise AttributeError("EllipticPointAudit is immutable")


class K3ModularityReport:
    __slots__ = (
        "hauptmodul_map",
        "elliptic_audits",
        "cusp_fibers",
        "rh_defect",
        "apparent_points",
        "analytic",
        "agreement",
        "modular",
    )

    def __init__(self, hauptmodul_map, elliptic_audits, cusp_fibers, rh_defect,
                 apparent_points, analytic, agreement, modular):
        object.__setattr__(self, "hauptmodul_map", hauptmodul_map)
        object.__setattr__(self, "elliptic_audits", tuple(elliptic_audits))
        object.__setattr__(self, "cusp_fibers", tuple(cusp_fibers))
        object.__setattr__(self, "rh_defect", rh_defect)
        object.__setattr__(self, "apparent_points", tuple(apparent_points))
        object.__setattr__(self, "analytic", analytic)
        object.__setattr__(self, "agreement", agreement)
        object.__setattr__(self, "modular", modular)

    def __setattr__(self, *a):
        raise AttributeError("K3ModularityReport is immutable")

    def __repr__(self):
        verdict = "MODULAR" if self.modular else "NOT MODULAR"
        return f"K3ModularityReport({verdict})"


def table_admissible(b: int, r: int) -> bool:
    """The vanishing-order rule for an order-b elliptic point: b | r or
    r | b (this single rule reproduces all four table rows)."""
    return r % b == 0 or b % r == 0


def check_k3_modularity(
    hn: RationalFunction,
    orb: FrickeOrbifoldData,
    L3: Optional[LinearODE] = None,
) -> K3ModularityReport:
    """Modularity verdict for the mirror map of a K3 family with the given
    generalized functional invariant and uniformizing-group signature.

    MODULAR iff every vanishing order over every elliptic point is
    table-admissible, there are no apparent singularities (neither b | r
    preimages with r > b nor extra ramification away from the signature
    values), and, when the third-order operator is supplied, the analytic
    pipeline agrees.
    """
    if not isinstance(hn, RationalFunction):
        raise TypeError("hn must be a RationalFunction")
    if hn.is_constant():
        raise ConstantMap("generalized functional invariant must be nonconstant")

    audits = []
    apparent = []
    for value, b in orb.elliptic_points:
        entries = []
        for pt, r in fiber_over_point(hn, value):
            ok = table_admissible(b, r)
            is_apparent = r % b == 0 and r > b
            if is_apparent:
                apparent.append(pt)
            entries.append((pt, r, ok, is_apparent))
        audits.append(EllipticPointAudit(value, b, entries))

    cusp_fibers = []
    for value in orb.cusp_values:
        cusp_fibers.append((value, tuple(fiber_over_point(hn, value))))

    d = hn.degree()
    branch = 0
    for value in [v for v, _ in orb.elliptic_points] + list(orb.cusp_values):
        fiber = fiber_over_point(hn, value)
        branch += d - sum(pt.degree for pt, _ in fiber)
    rh_defect = 2 * d - 2 - branch
    if rh_defect < 0:
        raise AssertionError("negative ramification defect")

    analytic = None
    agreement = None
    combinatorial = all(a.table_ok for a in audits) and not apparent and rh_defect == 0
    if L3 is not None:
        root = k3_pf_root(L3)
        analytic = uniformization_check(root)
        agreement = analytic.passed == combinatorial
    modular = combinatorial and (agreement is None or agreement)
    return K3ModularityReport(
        hn, audits, cusp_fibers, rh_defect, apparent, analytic, agreement, modular
    )


def mirror_vs_hauptmodul(zq: QSeries, hn_q: QSeries, hn_rat: RationalFunction) -> bool:
    """True iff hn_rat(z(q)) equals the Hauptmodul q-expansion through the
    common truncation (at least 3 comparable terms required)."""
    if zq.valuation != 1:
        raise ValueError("mirror map series must have valuation 1")
    composed = series_compose(hn_rat, zq)
    lo = min(composed.valuation, hn_q.valuation)
    hi = min(composed.truncation_order, hn_q.truncation_order)
    if hi - lo + 1 < 3:
        raise TruncationTooShort(f"only {max(hi - lo + 1, 0)} comparable terms")
    return all(composed.coefficient(n) == hn_q.coefficient(n) for n in range(lo, hi + 1))
