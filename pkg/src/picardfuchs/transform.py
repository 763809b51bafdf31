"""Operator transforms.

Pullback of a second order operator along a rational map, symmetric
squares and symmetric-power systems, detection and extraction of
symmetric-square roots, cyclic-vector collapse of first order systems, and
the per-point classification of pullbacks of uniformizing operators.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .exact import (
    AT_INFINITY,
    AlgebraicPoint,
    Polynomial,
    RationalFunction,
    irreducible_factors,
)
from .ode import (
    DiffOp,
    LinearODE,
    PointClass,
    PointKind,
    QuadraticExponent,
    classify_point,
    exponent_difference,
    pnf2,
    pnf3,
)


class ConstantMap(ValueError):
    """Pullback along a constant rational map."""


class NotCyclic(ValueError):
    """The chosen component does not generate the full system."""


class NotSymmetricSquare(ValueError):
    """Order-3 operator is not the symmetric square of an order-2 one."""


class UnclassifiedSourcePoint(ValueError):
    """classify_pullback needs every source point to be cusp/orbifold/ordinary."""


# ---------------------------------------------------------------------------
# pullback


def pullback2(L: LinearODE, R: RationalFunction) -> LinearODE:
    """Pullback of an order-2 operator along x = R(z):

        f'' + (P1(R) R' - R''/R') f' + P2(R) R'^2 f = 0
    """
    if L.order != 2:
        raise ValueError("pullback2 requires order 2")
    if R.is_constant():
        raise ConstantMap("pullback along a constant map")
    rp = R.derivative()
    rpp = rp.derivative()
    p1, p2 = L.coefficient(1), L.coefficient(2)
    new_p1 = p1.compose(R) * rp - rpp / rp
    new_p2 = p2.compose(R) * rp * rp
    return LinearODE.second_order(new_p1, new_p2)


def pullback(L: LinearODE, R: RationalFunction) -> LinearODE:
    """Pullback of an operator of any order along x = R(z) (coefficients
    composed with R, D_x replaced by (1/R') D_z)."""
    if R.is_constant():
        raise ConstantMap("pullback along a constant map")
    return DiffOp.from_ode(L).pullback(R).to_ode()


# ---------------------------------------------------------------------------
# symmetric squares and powers


def sym2(L: LinearODE) -> LinearODE:
    """Symmetric square of an order-2 operator:

        f''' + 3 P1 f'' + (2 P1^2 + 4 P2 + P1') f' + (4 P1 P2 + 2 P2') f = 0
    """
    if L.order != 2:
        raise ValueError("sym2 requires order 2")
    p1, p2 = L.coefficient(1), L.coefficient(2)
    c1 = 3 * p1
    c2 = 2 * p1 * p1 + 4 * p2 + p1.derivative()
    c3 = 4 * p1 * p2 + 2 * p2.derivative()
    return LinearODE.third_order(c1, c2, c3)


def sym_power_system(L: LinearODE, n: int) -> list[list[RationalFunction]]:
    """First-order system for the n-th symmetric power of an order-2
    operator: the banded (n+1) x (n+1) matrix with

        a[k][k] = (1-k) P1,  a[k][k+1] = n+1-k,  a[k+1][k] = -k P2

    (1-based indices; everything else zero)."""
    if L.order != 2:
        raise ValueError("sym_power_system requires order 2")
    if n < 1:
        raise ValueError("symmetric power requires n >= 1")
    p1, p2 = L.coefficient(1), L.coefficient(2)
    size = n + 1
    zero = RationalFunction.zero()
    A = [[zero for _ in range(size)] for _ in range(size)]
    for k in range(1, size + 1):
        A[k - 1][k - 1] = (1 - k) * p1
        if k <= n:
            A[k - 1][k] = RationalFunction.constant(n + 1 - k)
            A[k][k - 1] = -k * p2
    return A


def system_to_scalar(
    A: Sequence[Sequence[RationalFunction]],
    component: int = 0,
    require_full_order: bool = False,
) -> LinearODE:
    """Monic scalar operator annihilating the chosen component of every
    solution of Y' = A Y, by cyclic-vector elimination.

    Returns the minimal-order annihilator; with require_full_order=True a
    dependency below the matrix size raises NotCyclic.
    """
    n = len(A)
    for row in A:
        if len(row) != n:
            raise ValueError("system matrix must be square")
    r = [RationalFunction.one() if j == component else RationalFunction.zero() for j in range(n)]
    rows: list[list[RationalFunction]] = []
    while True:
        combo = _in_span(rows, r)
        if combo is not None:
            m = len(rows)
            if m == 0:
                raise AssertionError("component vector cannot be zero")
            if require_full_order and m < n:
                raise NotCyclic(f"component {component} generates order {m} < {n}")
            return LinearODE([-combo[m - i] for i in range(1, m + 1)])
        rows.append(r)
        if len(rows) > n:
            raise AssertionError("no dependency found within the system size")
        r = [
            r[j].derivative() + sum((r[l] * A[l][j] for l in range(n)), RationalFunction.zero())
            for j in range(n)
        ]


def _in_span(rows: list[list[RationalFunction]], target: list[RationalFunction]
             ) -> Optional[list[RationalFunction]]:
    """Solve sum c_i rows[i] = target over Q(x); None when independent."""
    m = len(rows)
    n = len(target)
    if m == 0:
        return [] if all(v.is_zero() for v in target) else None
    # augmented columns: n equations, m unknowns
    mat = [[rows[i][j] for i in range(m)] + [target[j]] for j in range(n)]
    pivots = []
    rank = 0
    for col in range(m):
        pivot = None
        for rrow in range(rank, n):
            if not mat[rrow][col].is_zero():
                pivot = rrow
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = RationalFunction.one() / mat[rank][col]
        mat[rank] = [v * inv for v in mat[rank]]
        for rrow in range(n):
            if rrow != rank and not mat[rrow][col].is_zero():
                factor = mat[rrow][col]
                mat[rrow] = [a - factor * b for a, b in zip(mat[rrow], mat[rank])]
        pivots.append(col)
        rank += 1
    for rrow in range(rank, n):
        if not mat[rrow][m].is_zero():
            return None
    combo = [RationalFunction.zero()] * m
    for i, col in enumerate(pivots):
        combo[col] = mat[i][m]
    return combo


def sym2_root(L: LinearODE) -> LinearODE:
    """The projective-normal-form square root of an order-3 operator.

    Writes pnf3(L) = (R2, R3); the operator is a symmetric square exactly
    when R3 = R2'/2, in which case the unique PNF root is
    f'' + (R2/4) f = 0 (since sym2 of f'' + Q f is f''' + 4Q f' + 2Q' f).
    """
    if L.order != 3:
        raise ValueError("sym2_root requires order 3")
    normal = pnf3(L)
    r2, r3 = normal.coefficient(2), normal.coefficient(3)
    if r3 != r2.derivative() * Fraction(1, 2):
        raise NotSymmetricSquare("third-order operator is not a symmetric square")
    return LinearODE.second_order(RationalFunction.zero(), r2 * Fraction(1, 4))


# ---------------------------------------------------------------------------
# fibers and ramification of rational maps


def map_value_at(R: RationalFunction, at: AlgebraicPoint):
    """Value of R at a point of P^1 as (is_infinite, finite_value_or_None).

    At algebraic points the value may live in the residue field."""
    v = R.valuation_at(at)
    if v is not None and v < 0:
        return True, None
    if at.is_infinity:
        from .exact import laurent_expand

        exp = laurent_expand(R, at, 0)
        return False, exp.coefficient(0)
    if at.is_rational:
        return False, R.evaluate(at.rational_value)
    from .exact import laurent_expand

    exp = laurent_expand(R, at, 0)
    return False, exp.coefficient(0)


def ramification_at(R: RationalFunction, at: AlgebraicPoint) -> int:
    """Ramification index of R at a point: multiplicity of the value."""
    v = R.valuation_at(at)
    if v is not None and v < 0:
        return -v
    infinite, value = map_value_at(R, at)
    shifted = R - value if not infinite else None
    if shifted is None:
        raise AssertionError("unreachable")
    w = shifted.valuation_at(at)
    if w is None:
        raise ConstantMap("constant map has no ramification index")
    return w


def fiber_over_point(R: RationalFunction, value: AlgebraicPoint) -> list[tuple[AlgebraicPoint, int]]:
    """Preimages of a point of the target P^1 under R, with ramification
    indices, grouped by irreducible modulus; includes infinity."""
    if R.is_constant():
        raise ConstantMap("fiber of a constant map")
    out = []
    if value.is_infinity:
        pole_locus = R.den
        if pole_locus.degree() >= 1:
            for factor, mult in irreducible_factors(pole_locus):
                out.append((AlgebraicPoint.from_modulus(factor), mult))
        v_inf = R.valuation_at(AT_INFINITY)
        if v_inf < 0:
            out.append((AT_INFINITY, -v_inf))
        return out
    m = value.modulus
    composed = _compose_poly_with_map(m, R)
    if composed.num.degree() >= 1:
        for factor, mult in irreducible_factors(composed.num):
            out.append((AlgebraicPoint.from_modulus(factor), mult))
    v_inf = composed.valuation_at(AT_INFINITY)
    if v_inf is not None and v_inf > 0:
        out.append((AT_INFINITY, v_inf))
    return out


def _compose_poly_with_map(m: Polynomial, R: RationalFunction) -> RationalFunction:
    acc = RationalFunction.zero()
    for c in reversed(m.coeffs):
        acc = acc * R + c
    return acc


def critical_points(R: RationalFunction) -> list[tuple[AlgebraicPoint, int]]:
    """All points of ramification index >= 2, with their indices."""
    if R.is_constant():
        raise ConstantMap("critical points of a constant map")
    out = {}
    rp = R.derivative()
    # finite critical points away from poles: zeros of R'
    if not rp.is_zero() and rp.num.degree() >= 1:
        for factor, mult in irreducible_factors(rp.num):
            pt = AlgebraicPoint.from_modulus(factor)
            if R.valuation_at(pt) is not None and R.valuation_at(pt) < 0:
                continue  # handled as a pole below
            out[pt] = mult + 1
    # multiple poles
    if R.den.degree() >= 1:
        for factor, mult in irreducible_factors(R.den):
            if mult >= 2:
                out[AlgebraicPoint.from_modulus(factor)] = mult
    # the point at infinity
    e_inf = ramification_at(R, AT_INFINITY)
    if e_inf >= 2:
        out[AT_INFINITY] = e_inf
    items = sorted(out.items(), key=lambda kv: kv[0].sort_key())
    return items


# ---------------------------------------------------------------------------
# pullback classification (types of singular points of R^*(L))


class PullbackPointReport:
    """One candidate singular point of the pulled back operator."""

    __slots__ = ("location", "source", "source_weight", "ramification",
                 "difference", "classification")

    def __init__(self, location, source, source_weight, ramification,
                 difference, classification):
        object.__setattr__(self, "location", location)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "source_weight", source_weight)
        object.__setattr__(self, "ramification", ramification)
        object.__setattr__(self, "difference", difference)
        object.__setattr__(self, "classification", classification)

    def __setattr__(self, *a):
        raise AttributeError("PullbackPointReport is immutable")

    def __repr__(self):
        src = self.source.describe() if self.source is not None else "ordinary value"
        return (
            f"PullbackPointReport({self.location.describe()} over {src}, "
            f"e={self.ramification}, {self.classification!r})"
        )


class PullbackClassification:
    __slots__ = ("operator", "points")

    def __init__(self, operator: LinearODE, points):
        object.__setattr__(self, "operator", operator)
        object.__setattr__(self, "points", tuple(points))

    def __setattr__(self, *a):
        raise AttributeError("PullbackClassification is immutable")


#: weight marker for cusps (equal characteristic exponents)
CUSP = None


def classify_pullback(L: LinearODE, R: RationalFunction) -> PullbackClassification:
    """Per-point classification of the singular points of R^*(L) for an
    order-2 PNF operator L whose own singular points are all of orbifold
    type (cusp, finite weight, or resolved ordinary).

    Preimages of cusps are logarithmic; preimages of weight-b points with
    ramification r give difference r/b, resolved through the explicit
    obstruction test when integral; extra ramification points are
    apparent (verified, not assumed).
    """
    if L.order != 2:
        raise ValueError("classify_pullback requires order 2")
    if not L.coefficient(1).is_zero():
        raise ValueError("classify_pullback requires a PNF operator")
    if R.is_constant():
        raise ConstantMap("pullback along a constant map")
    from .ode import singular_points as ode_singular_points

    source_weights: dict[AlgebraicPoint, Optional[int]] = {}
    for pt in ode_singular_points(L):
        report = classify_point(L, pt)
        kind = report.classification.kind
        if kind == PointKind.ORBIFOLD:
            source_weights[pt] = report.classification.weight
        elif kind == PointKind.LOGARITHMIC and report.exponent_difference == 0:
            source_weights[pt] = CUSP
        elif kind == PointKind.ORDINARY:
            continue
        else:
            raise UnclassifiedSourcePoint(
                f"source point {pt.describe()} is {report.classification!r}"
            )

    pulled = pnf2(pullback2(L, R))
    candidates: dict[AlgebraicPoint, tuple[Optional[AlgebraicPoint], Optional[int], int]] = {}
    for src_pt, weight in source_weights.items():
        for pre, ram in fiber_over_point(R, src_pt):
            candidates[pre] = (src_pt, weight, ram)
    for pt, ram in critical_points(R):
        if pt not in candidates:
            candidates[pt] = (None, 1, ram)

    reports = []
    for pt in sorted(candidates, key=lambda p: p.sort_key()):
        src_pt, weight, ram = candidates[pt]
        reports.append(_classify_pullback_point(pulled, pt, src_pt, weight, ram))
    return PullbackClassification(pulled, reports)


def _classify_pullback_point(pulled: LinearODE, pt: AlgebraicPoint,
                             src_pt, weight, ram: int) -> PullbackPointReport:
    diff = exponent_difference(pulled, pt)
    if weight is CUSP:
        if diff != 0:
            raise AssertionError("cusp preimage with unequal exponents")
        cls = PointClass(PointKind.LOGARITHMIC)
    else:
        expected = Fraction(ram, weight) if weight else None
        if expected is not None and not isinstance(diff, QuadraticExponent):
            if diff != expected:
                raise AssertionError(
                    f"difference {diff} at {pt.describe()} != ramification "
                    f"{ram} / weight {weight}"
                )
        if isinstance(diff, QuadraticExponent):
            cls = PointClass(PointKind.GENERIC)
        elif diff.denominator == 1:
            # integer difference: resolve by the explicit obstruction test
            cls = classify_point(pulled, pt).classification
        elif diff.numerator == 1:
            cls = PointClass(PointKind.ORBIFOLD, diff.denominator)
        else:
            cls = PointClass(PointKind.GENERIC)
    return PullbackPointReport(pt, src_pt, weight, ram, diff, cls)
