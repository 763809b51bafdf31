"""Acceptance suite: one test per criterion, each printing a pass/fail
line with its runtime.  All equalities are exact rational arithmetic."""

import random
import time
from fractions import Fraction

from picardfuchs.exact import (
    AT_INFINITY,
    AlgebraicPoint,
    Polynomial,
    RationalFunction,
)
from picardfuchs.elliptic import (
    KodairaFiber,
    WeierstrassModel,
    check_elliptic_modularity,
    euler_sum,
    fiber_census,
    functional_invariant,
    griffiths_pf,
    lambda_J,
    modular_list_fixture,
)
from picardfuchs.k3 import FrickeOrbifoldData, check_k3_modularity, k3_pf_root, table_admissible
from picardfuchs.mirror import mirror_map, reciprocal_plus_constant
from picardfuchs.ode import (
    LinearODE,
    PointKind,
    QuadraticExponent,
    classify_point,
    exponent_difference,
    exponents,
    pnf2,
    pnf3,
    singular_points,
)
from picardfuchs.series import PowerSeries, schwarzian
from picardfuchs.transform import (
    NotSymmetricSquare,
    critical_points,
    fiber_over_point,
    pullback2,
    sym2,
    sym2_root,
    sym_power_system,
    system_to_scalar,
)
from picardfuchs.uniformdata import load_fixture
from picardfuchs.uniformize import uniformization_check

X = Polynomial.x()
RF = RationalFunction


def _check(num: int, desc: str, body, limit: float | None = None):
    start = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - start
    status = "PASS" if ok else "FAIL"
    timing = f"{elapsed:.2f}s" + (f" (limit {limit}s)" if limit else "")
    print(f"criterion {num:2d}: {status} [{timing}] {desc}" + (f" — {detail}" if detail else ""))
    assert ok, f"criterion {num} failed: {detail}"
    if limit is not None:
        assert elapsed < limit, f"criterion {num} exceeded {limit}s ({elapsed:.2f}s)"


def test_criterion_01_pnf_golden():
    def body():
        pf = load_fixture("family-E-pf").payload
        lam = load_fixture("lambda").payload
        expected = RF(36 * X**2 - 41 * X + 32, 144 * X**2 * (X - 1) ** 2)
        ok = pnf2(pf) == lam and lam.coefficient(2) == expected
        return ok, "pnf2 of the bundled Picard-Fuchs operator equals the uniformizing operator"

    _check(1, "PNF golden", body, limit=1.0)


def test_criterion_02_exponent_golden():
    def body():
        lam = load_fixture("lambda").payload
        ok = exponents(lam, AlgebraicPoint.rational(0)) == [Fraction(1, 3), Fraction(2, 3)]
        ok &= exponents(lam, AlgebraicPoint.rational(1)) == [Fraction(1, 4), Fraction(3, 4)]
        ok &= exponents(lam, AT_INFINITY) == [Fraction(1, 2), Fraction(1, 2)]
        report = uniformization_check(lam)
        ok &= report.passed
        sig = {loc.describe(): w for loc, w in report.signature}
        ok &= sig == {"0": 3, "1": 2, "inf": None}
        return ok, "exponents {1/3,2/3}, {1/4,3/4}, {1/2,1/2}; signature {(0,3),(1,2),(inf,inf)}"

    _check(2, "Exponent golden", body, limit=1.0)


def test_criterion_03_mirror_map_golden():
    def body():
        pf = load_fixture("family-E-pf").payload
        zq = mirror_map(pf, AT_INFINITY, 20)
        ok = (
            zq.coefficient(1) == 1
            and zq.coefficient(2) == -744
            and zq.coefficient(3) == 356652
            and zq.coefficient(4) == -140361152
        )
        jq = reciprocal_plus_constant(zq, Fraction(0))
        ok &= (
            jq.coefficient(-1) == 1
            and jq.coefficient(0) == 744
            and jq.coefficient(1) == 196884
            and jq.coefficient(2) == 21493760
        )
        return ok, "z(q) = q - 744q^2 + 356652q^3 - 140361152q^4; 1/z = 1/q + 744 + 196884q + 21493760q^2 (20 terms)"

    _check(3, "Mirror-map golden", body, limit=5.0)


def _fixed_models():
    e_like = load_fixture("family-E").payload
    return [
        e_like,
        WeierstrassModel(RF(X), RF(X)),
        WeierstrassModel(RF(X), 1),
        WeierstrassModel(1, RF(X)),
        WeierstrassModel(RF(X**2), RF(X)),
    ]


def test_criterion_04_pnf_pullback_identity():
    def body():
        rng = random.Random(404)
        models = _fixed_models()
        count = 0
        for W in models:
            if pnf2(griffiths_pf(W)) != lambda_J(functional_invariant(W)):
                return False, f"identity fails for {W!r}"
            count += 1
        for _ in range(10):
            base = models[rng.randrange(len(models))]
            c = rng.randint(2, 5)
            u = [RF(Polynomial((-c, 1))), RF(Polynomial((c,))),
                 RF(Polynomial((-c, 1)), Polynomial((c, 1)))][rng.randrange(3)]
            W = base.quadratic_twist(u)
            if pnf2(griffiths_pf(W)) != lambda_J(functional_invariant(W)):
                return False, f"identity fails for twist {u!r} of {base!r}"
            count += 1
        return True, f"{count} models: pnf2(griffiths) = pullback route, exactly"

    _check(4, "Griffiths/pullback identity", body, limit=10.0)


def test_criterion_05_kodaira_golden():
    def body():
        W = load_fixture("family-E").payload
        census = {pt.describe(): str(f) for pt, f in fiber_census(W)}
        ok = census == {"0": "II", "1": "III*", "inf": "I1"}
        first_row = {str(f) for f in modular_list_fixture()[0]}
        ok &= set(census.values()) == first_row == {"I1", "II", "III*"}
        ok &= check_elliptic_modularity(W).modular
        return ok, "census {II@0, III*@1, I1@inf}; verdict MODULAR"

    _check(5, "Kodaira golden", body, limit=5.0)


def test_criterion_06_modular_33_audit():
    def body():
        rows = modular_list_fixture()
        ok = len(rows) == 33
        for row in rows:
            ok &= euler_sum(row) == 12
            ok &= KodairaFiber("IV") not in row and KodairaFiber("II*") not in row
        return ok, "33 rows, Euler sum 12 each, no IV or II*"

    _check(6, "Fiber-list audit", body, limit=1.0)


def _random_fuchsian_order2(rng: random.Random) -> LinearODE:
    a, b = rng.sample([-3, -2, -1, 1, 2, 3], 2)
    den = (X - a) * (X - b)
    p1 = RF(Polynomial([rng.randint(-3, 3), rng.randint(-2, 2)]), den)
    p2 = RF(Polynomial([rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-2, 2)]), den**2)
    return LinearODE.second_order(p1, p2)


def test_criterion_07_symmetric_square_suite():
    def body():
        rng = random.Random(707)
        for i in range(50):
            L = _random_fuchsian_order2(rng)
            if pnf3(sym2(L)) != sym2(pnf2(L)):
                return False, f"pnf3/sym2 commutation fails at case {i}"
            if sym2_root(sym2(pnf2(L))) != pnf2(L):
                return False, f"sym2 root fails at case {i}"
            if system_to_scalar(sym_power_system(L, 2), 0) != sym2(L):
                return False, f"system collapse fails at case {i}"
        return True, "50 random operators: commutation, root roundtrip, system collapse"

    _check(7, "Symmetric-square suite", body, limit=30.0)


def _random_orbifold_pnf(rng: random.Random):
    """PNF operator with prescribed exponent differences at two rational
    points (Fuchsian at infinity by a vanishing residue sum)."""
    a, b = rng.sample([-2, -1, 0, 1, 2, 3], 2)
    diffs = {}
    terms = RationalFunction.zero()
    d_prev = Fraction(0)
    for i, pt in enumerate((a, b)):
        delta = rng.choice([Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 5)])
        diffs[Fraction(pt)] = delta
        q = (1 - delta * delta) / 4
        terms = terms + RF(Polynomial((q,)), (X - pt) ** 2)
        d = Fraction(rng.randint(-2, 2)) if i == 0 else -d_prev
        d_prev = d if i == 0 else d_prev
        terms = terms + RF(Polynomial((d,)), Polynomial((-pt, 1)))
    return LinearODE.second_order(0, terms), diffs


def _random_map(rng: random.Random) -> RationalFunction:
    kind = rng.randrange(4)
    if kind == 0:
        return RF(X ** rng.randint(2, 3))
    if kind == 1:
        return RF(X ** rng.randint(2, 3), X - rng.randint(4, 6))
    if kind == 2:
        return RF(Polynomial([rng.randint(-3, 3), rng.randint(-3, 3), 1]))
    return RF((X - rng.randint(-2, 2)) ** 2, Polynomial((rng.randint(4, 6), 1)))


def _diff_square(diff):
    if isinstance(diff, QuadraticExponent):
        return diff.radicand
    return diff * diff


def test_criterion_08_pullback_exponent_property():
    def body():
        rng = random.Random(808)
        checked_points = 0
        checked_apparent = 0
        for case in range(30):
            L, _ = _random_orbifold_pnf(rng)
            R = _random_map(rng)
            pulled = pnf2(pullback2(L, R))
            source_pts = singular_points(L)
            source_diffs = {pt: exponent_difference(L, pt) for pt in source_pts}
            covered = set()
            for src in source_pts:
                for pre, ram in fiber_over_point(R, src):
                    covered.add(pre)
                    got = exponent_difference(pulled, pre)
                    want_sq = ram * ram * _diff_square(source_diffs[src])
                    if _diff_square(got) != want_sq:
                        return False, (
                            f"case {case}: difference at {pre.describe()} is {got}, "
                            f"expected |.|^2 = {want_sq}"
                        )
                    checked_points += 1
            for pt, e in critical_points(R):
                if pt in covered:
                    continue
                cls = classify_point(pulled, pt).classification
                if cls.kind != PointKind.APPARENT:
                    return False, f"case {case}: extra critical point {pt.describe()} is {cls!r}"
                checked_apparent += 1
        return True, (
            f"30 random (L, R): {checked_points} preimage differences multiply; "
            f"{checked_apparent} extra critical points apparent"
        )

    _check(8, "Pullback exponent property", body, limit=30.0)


def test_criterion_09_table_equivalence():
    def body():
        literal = {
            2: lambda r: r % 2 == 0 or r == 1,
            3: lambda r: r % 3 == 0 or r == 1,
            4: lambda r: r % 4 == 0 or r in (1, 2),
            6: lambda r: r % 6 == 0 or r in (1, 2, 3),
        }
        for b, row in literal.items():
            for r in range(1, 37):
                if table_admissible(b, r) != row(r):
                    return False, f"divergence at order {b}, multiplicity {r}"
        return True, "rule (b | r or r | b) matches the table for all b in {2,3,4,6}, r <= 36"

    _check(9, "Vanishing-order table equivalence", body, limit=1.0)


def test_criterion_10_k3_pipeline():
    def body():
        pf = load_fixture("family-E-pf").payload
        root = pnf2(pf)
        ok = k3_pf_root(sym2(root)) == root
        direct = mirror_map(pf, AT_INFINITY, 10)
        via_order3 = mirror_map(k3_pf_root(sym2(root)), AT_INFINITY, 10)
        ok &= direct.same_series(via_order3)
        for n in range(1, 11):
            ok &= direct.coefficient(n) == via_order3.coefficient(n)
        return ok, "root roundtrip; order-3 route mirror map equals order-2 route to 10 terms"

    _check(10, "K3 pipeline", body, limit=10.0)


def test_criterion_11_schwarzian_invariance():
    def body():
        rng = random.Random(1111)
        for case in range(20):
            w = PowerSeries(
                0,
                [0, rng.randint(1, 4)]
                + [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(8)],
                9,
            )
            while True:
                a, b, c, d = (Fraction(rng.randint(-5, 5)) for _ in range(4))
                if a * d - b * c != 0:
                    break
            den = c * w + d
            if den.is_zero():
                continue
            moebius = (a * w + b) / den
            if not schwarzian(moebius).same_series(schwarzian(w)):
                return False, f"case {case}: Schwarzian not Moebius-invariant"
        return True, "20 random Moebius compositions leave the Schwarzian fixed"

    _check(11, "Schwarzian invariance", body, limit=5.0)


def test_criterion_12_negative_controls():
    def body():
        not_modular = not check_elliptic_modularity(RF(X**2)).modular
        try:
            sym2_root(LinearODE.third_order(0, 0, 1))
            root_refused = False
        except NotSymmetricSquare:
            root_refused = True
        inadmissible = not table_admissible(2, 3)
        ok = not_modular and root_refused and inadmissible
        return ok, "J = z^2 not modular; f''' + f = 0 not a square; (order 2, mult 3) inadmissible"

    _check(12, "Negative controls", body, limit=5.0)
