"""Orbifold-uniformization decision procedure for order-2 PNF operators.

The criterion: at every regular singular point the characteristic exponent
difference is 0 (cusp, weight infinity) or exactly 1/b for an integer
b >= 2 (weight b).  Points resolved as ORDINARY by the obstruction test
are skipped.  PASS means exactly this local exponent criterion; it is the
modularity criterion used throughout, not an independent discreteness
proof.  A strict verdict that additionally demands the absence of
apparent singularities anywhere is reported alongside (for order 2 the
two coincide: an apparent point has integer difference, which already
violates the exponent criterion).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional

from .exact import AlgebraicPoint, RationalFunction
from .ode import (
    LinearODE,
    NotFuchsian,
    NotPNF,
    PointKind,
    classify_point,
    fuchsian_check,
    singular_points,
)
from .transform import ConstantMap, critical_points, fiber_over_point

#: cusp weight marker (difference 0, weight infinity)
CUSP = None


class OrbifoldSignature:
    """Sequence of (location, weight) pairs, weight an integer >= 2 or the
    cusp marker; canonically sorted by location."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        norm = []
        for location, weight in entries:
            if weight is not CUSP and (not isinstance(weight, int) or weight < 2):
                raise ValueError(f"weight must be >= 2 or the cusp marker, got {weight}")
            norm.append((location, weight))
        norm.sort(key=lambda e: e[0].sort_key())
        object.__setattr__(self, "entries", tuple(norm))

    def __setattr__(self, *a):
        raise AttributeError("OrbifoldSignature is immutable")

    def weights(self) -> tuple:
        return tuple(w for _, w in self.entries)

    def __eq__(self, other):
        if not isinstance(other, OrbifoldSignature):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def describe(self) -> str:
        inner = ", ".join(
            f"({loc.describe()}, {'inf' if w is CUSP else w})" for loc, w in self.entries
        )
        return "{" + inner + "}"

    def __repr__(self):
        return f"OrbifoldSignature({self.describe()})"


class UniformizationPointVerdict:
    __slots__ = ("location", "difference", "classification", "ok", "reason")

    def __init__(self, location, difference, classification, ok, reason):
        object.__setattr__(self, "location", location)
        object.__setattr__(self, "difference", difference)
        object.__setattr__(self, "classification", classification)
        object.__setattr__(self, "ok", ok)
        object.__setattr__(self, "reason", reason)

    def __setattr__(self, *a):
        raise AttributeError("UniformizationPointVerdict is immutable")

    def __repr__(self):
        status = "ok" if self.ok else f"FAIL ({self.reason})"
        return f"UniformizationPointVerdict({self.location.describe()}: {status})"


class UniformizationReport:
    """Outcome of the exponent criterion with per-point reasons."""

    __slots__ = ("passed", "strict_passed", "signature", "points")

    def __init__(self, passed, strict_passed, signature, points):
        object.__setattr__(self, "passed", passed)
        object.__setattr__(self, "strict_passed", strict_passed)
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "points", tuple(points))

    def __setattr__(self, *a):
        raise AttributeError("UniformizationReport is immutable")

    def __bool__(self):
        return self.passed

    def __repr__(self):
        verdict = "PASS" if self.passed else "FAIL"
        sig = f", signature {self.signature.describe()}" if self.signature else ""
        return f"UniformizationReport({verdict}{sig})"


def uniformization_check(L: LinearODE) -> UniformizationReport:
    """Decide the orbifold-uniformization exponent criterion for an
    order-2 PNF Fuchsian operator."""
    if L.order != 2 or not L.coefficient(1).is_zero():
        raise NotPNF("uniformization_check requires an order-2 PNF operator")
    diag = fuchsian_check(L)
    if not diag.fuchsian:
        raise NotFuchsian(repr(diag))
    verdicts = []
    entries = []
    has_apparent = False
    for pt in singular_points(L):
        report = classify_point(L, pt)
        kind = report.classification.kind
        diff = report.exponent_difference
        if kind == PointKind.ORDINARY:
            verdicts.append(UniformizationPointVerdict(
                pt, diff, report.classification, True, "resolved ordinary; skipped"))
            continue
        if kind == PointKind.ORBIFOLD:
            entries.append((pt, report.classification.weight))
            verdicts.append(UniformizationPointVerdict(
                pt, diff, report.classification, True,
                f"orbifold point of weight {report.classification.weight}"))
            continue
        if kind == PointKind.LOGARITHMIC and diff == 0:
            entries.append((pt, CUSP))
            verdicts.append(UniformizationPointVerdict(
                pt, diff, report.classification, True, "cusp (equal exponents)"))
            continue
        if kind == PointKind.APPARENT:
            has_apparent = True
            reason = f"apparent singularity (difference {diff})"
        elif kind == PointKind.LOGARITHMIC:
            reason = f"integer difference {diff} with logarithmic solution"
        else:
            reason = f"difference {_diff_text(diff)} is neither 0 nor 1/b"
        verdicts.append(UniformizationPointVerdict(
            pt, diff, report.classification, False, reason))
    passed = all(v.ok for v in verdicts)
    strict_passed = passed and not has_apparent
    signature = OrbifoldSignature(entries) if passed else None
    return UniformizationReport(passed, strict_passed, signature, verdicts)


def _diff_text(diff) -> str:
    if isinstance(diff, Fraction):
        return str(diff)
    return repr(diff)


# ---------------------------------------------------------------------------
# combinatorial prediction for pullbacks


class SignaturePrediction:
    """Predicted signature of a pullback, from root multiplicities alone."""

    __slots__ = ("passed", "entries", "dropped", "failures")

    def __init__(self, passed, entries, dropped, failures):
        object.__setattr__(self, "passed", passed)
        object.__setattr__(self, "entries", tuple(entries))
        object.__setattr__(self, "dropped", tuple(dropped))
        object.__setattr__(self, "failures", tuple(failures))

    def __setattr__(self, *a):
        raise AttributeError("SignaturePrediction is immutable")

    def signature(self) -> Optional[OrbifoldSignature]:
        return OrbifoldSignature(self.entries) if self.passed else None

    def __repr__(self):
        verdict = "PASS" if self.passed else "FAIL"
        return f"SignaturePrediction({verdict}, {len(self.entries)} entries)"


def signature_of_pullback(source: OrbifoldSignature, R: RationalFunction) -> SignaturePrediction:
    """Predict the signature of the pullback of a uniformizing operator
    with the given signature, purely combinatorially:

    - cusp preimages stay cusps;
    - a weight-b preimage with ramification r gets weight b/gcd(r, b) when
      the reduced difference r/b has numerator 1 (weight 1 drops out as an
      ordinary point), and fails otherwise (apparent when b | r, generic
      when not);
    - extra ramification points are predicted apparent failures.
    """
    if R.is_constant():
        raise ConstantMap("pullback along a constant map")
    entries = []
    dropped = []
    failures = []
    covered = set()
    for pt, weight in source:
        for pre, r in fiber_over_point(R, pt):
            covered.add(pre)
            if weight is CUSP:
                entries.append((pre, CUSP))
                continue
            g = gcd(r, weight)
            if r // g == 1:
                w = weight // g
                if w == 1:
                    dropped.append((pre, f"ramification {r} = weight {weight}: ordinary"))
                else:
                    entries.append((pre, w))
            elif g == weight:
                failures.append((pre, f"apparent: integer difference {r // weight}"))
            else:
                failures.append((pre, f"generic: difference {r}/{weight} not unit-numerator"))
    for pt, e in critical_points(R):
        if pt not in covered:
            failures.append((pt, f"extra ramification (index {e}): apparent"))
    return SignaturePrediction(not failures, entries, dropped, failures)


def prediction_agrees(prediction: SignaturePrediction, analytic: UniformizationReport) -> bool:
    """PASS/FAIL agreement plus, on PASS, weight-for-weight agreement."""
    if prediction.passed != analytic.passed:
        return False
    if not prediction.passed:
        return True
    return prediction.signature() == analytic.signature
