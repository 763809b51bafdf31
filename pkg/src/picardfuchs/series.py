"""Truncated formal power/Laurent series over the exact field.

Truncation order is data, not configuration: a series knows the largest
exponent through which it is exact, every operation computes the tightest
sound truncation for its result, and reading a coefficient beyond the
truncation raises instead of silently returning garbage.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from .exact import LocalElement, RationalFunction, _inv_scalar, _is_zero_scalar


class DivisionByZeroSeries(ZeroDivisionError):
    """Division by a series that is zero through its truncation."""


class BadConstantTerm(ValueError):
    """exp needs valuation >= 1; log needs constant term 1."""


class CompositionDiverges(ValueError):
    """Composition with an inner series of valuation < 1."""


class BadValuation(ValueError):
    """Reversion/reciprocal input with the wrong valuation."""


class ConstantInput(ValueError):
    """Schwarzian derivative of a function with vanishing derivative."""


class PrecisionLoss(ValueError):
    """A coefficient beyond the recorded truncation was requested."""


def _coerce_scalar(c):
    if isinstance(c, LocalElement):
        return c
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"bad series coefficient type {type(c).__name__}")


class PowerSeries:
    """Truncated exact series sum(c_j t^(valuation+j)) + O(t^(truncation_order+1)).

    Negative valuations (Laurent series) are allowed.  The leading stored
    coefficient is nonzero; a series that vanishes through its truncation
    stores no coefficients and has valuation = truncation_order + 1.
    """

    __slots__ = ("valuation", "coefficients", "truncation_order")

    def __init__(self, valuation: int, coefficients: Sequence, truncation_order: int):
        coeffs = [_coerce_scalar(c) for c in coefficients]
        # cut anything beyond the truncation, then strip leading zeros
        keep = truncation_order - valuation + 1
        coeffs = coeffs[: max(keep, 0)]
        while coeffs and _is_zero_scalar(coeffs[0]):
            coeffs.pop(0)
            valuation += 1
        if coeffs:
            pad = truncation_order - valuation + 1 - len(coeffs)
            if pad > 0:
                coeffs.extend([Fraction(0)] * pad)
        else:
            valuation = truncation_order + 1
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "coefficients", tuple(coeffs))
        object.__setattr__(self, "truncation_order", truncation_order)

    def __setattr__(self, *a):
        raise AttributeError("PowerSeries is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, truncation_order: int) -> "PowerSeries":
        return cls(truncation_order + 1, (), truncation_order)

    @classmethod
    def one(cls, truncation_order: int) -> "PowerSeries":
        return cls(0, (1,), truncation_order)

    @classmethod
    def identity(cls, truncation_order: int) -> "PowerSeries":
        """The series t."""
        return cls(1, (1,), truncation_order)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, truncation_order: int, valuation: int = 0):
        return cls(valuation, coeffs, truncation_order)

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        """Zero through the truncation order."""
        return not self.coefficients

    def coefficient(self, n: int):
        if n > self.truncation_order:
            raise PrecisionLoss(
                f"coefficient of t^{n} beyond truncation order {self.truncation_order}"
            )
        j = n - self.valuation
        if j < 0 or j >= len(self.coefficients):
            return Fraction(0)
        return self.coefficients[j]

    def leading(self):
        if self.is_zero():
            raise DivisionByZeroSeries("series is zero through its truncation")
        return self.coefficients[0]

    def relative_terms(self) -> int:
        """Number of exactly known orders past the leading one."""
        return self.truncation_order - self.valuation

    def same_series(self, other: "PowerSeries") -> bool:
        """Agreement through the smaller truncation order."""
        t = min(self.truncation_order, other.truncation_order)
        lo = min(self.valuation, other.valuation)
        return all(self.coefficient(n) == other.coefficient(n) for n in range(lo, t + 1))

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return (
            self.valuation == other.valuation
            and self.coefficients == other.coefficients
            and self.truncation_order == other.truncation_order
        )

    def __hash__(self):
        return hash((self.valuation, self.coefficients, self.truncation_order))

    # -- arithmetic --------------------------------------------------------------

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.truncation_order:
            raise PrecisionLoss("cannot extend a truncated series")
        return PowerSeries(self.valuation, self.coefficients, order)

    def shift_exponent(self, m: int) -> "PowerSeries":
        """Multiply by t^m (exact reindexing)."""
        return PowerSeries(self.valuation + m, self.coefficients, self.truncation_order + m)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, LocalElement)):
            other = PowerSeries(0, (other,), self.truncation_order)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        t = min(self.truncation_order, other.truncation_order)
        lo = min(self.valuation, other.valuation)
        if lo > t:
            return PowerSeries.zero(t)
        coeffs = [self.coefficient(n) + other.coefficient(n) for n in range(lo, t + 1)]
        return PowerSeries(lo, coeffs, t)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(
            self.valuation, tuple(-c for c in self.coefficients), self.truncation_order
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, LocalElement)):
            other = PowerSeries(0, (other,), self.truncation_order)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LocalElement)):
            return PowerSeries(
                self.valuation,
                tuple(c * other for c in self.coefficients),
                self.truncation_order,
            )
        if not isinstance(other, PowerSeries):
            return NotImplemented
        # sound truncation: error terms start at min(va + Tb + 1, vb + Ta + 1)
        t = min(self.valuation + other.truncation_order, other.valuation + self.truncation_order)
        va, vb = self.valuation, other.valuation
        if self.is_zero() or other.is_zero():
            return PowerSeries.zero(t)
        n_out = t - va - vb + 1
        if n_out <= 0:
            return PowerSeries.zero(t)
        out = [Fraction(0)] * n_out
        a, b = self.coefficients, other.coefficients
        for i, ca in enumerate(a):
            if _is_zero_scalar(ca) or i >= n_out:
                continue
            for j, cb in enumerate(b):
                if i + j >= n_out:
                    break
                out[i + j] += ca * cb
        return PowerSeries(va + vb, out, t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, LocalElement)):
            inv = _inv_scalar(_coerce_scalar(other))
            return self * inv
        if not isinstance(other, PowerSeries):
            return NotImplemented
        if other.is_zero():
            raise DivisionByZeroSeries("division by zero-through-truncation series")
        rel = min(self.relative_terms(), other.relative_terms())
        if self.is_zero():
            return PowerSeries.zero(self.truncation_order - other.valuation)
        v = self.valuation - other.valuation
        n_terms = rel + 1
        inv0 = _inv_scalar(other.coefficients[0])
        out = []
        a, b = self.coefficients, other.coefficients
        for n in range(n_terms):
            acc = a[n] if n < len(a) else Fraction(0)
            for j in range(1, min(n, len(b) - 1) + 1):
                acc = acc - b[j] * out[n - j]
            out.append(acc * inv0)
        return PowerSeries(v, out, v + rel)

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction, LocalElement)):
            num = PowerSeries(0, (other,), self.truncation_order + max(-self.valuation, 0) * 2 + 1)
            return num / self
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative series power; divide explicitly")
        result = PowerSeries.one(self.truncation_order + (abs(self.valuation) + 1) * max(n, 1))
        base = self
        for _ in range(n):
            result = result * base
        return result

    def derivative(self) -> "PowerSeries":
        # the constant term contributes a zero entry (not a removal: that
        # would shift every later exponent)
        coeffs = [(self.valuation + j) * c for j, c in enumerate(self.coefficients)]
        return PowerSeries(self.valuation - 1, coeffs, self.truncation_order - 1)

    # -- transcendental operations ---------------------------------------------

    def exp(self) -> "PowerSeries":
        if self.valuation < 1 and not self.is_zero():
            raise BadConstantTerm("exp requires valuation >= 1")
        t = self.truncation_order
        n_terms = t + 1
        f = [self.coefficient(n) if self.valuation <= n <= t else Fraction(0) for n in range(n_terms)]
        g = [Fraction(0)] * n_terms
        g[0] = Fraction(1)
        # g' = f' g  =>  n g_n = sum_{j=1..n} j f_j g_{n-j}
        for n in range(1, n_terms):
            acc = Fraction(0)
            for j in range(1, n + 1):
                if not _is_zero_scalar(f[j]):
                    acc += j * f[j] * g[n - j]
            g[n] = acc / n
        return PowerSeries(0, g, t)

    def log(self) -> "PowerSeries":
        if self.valuation != 0 or self.coefficient(0) != 1:
            raise BadConstantTerm("log requires constant term 1")
        t = self.truncation_order
        n_terms = t + 1
        f = [self.coefficient(n) for n in range(n_terms)]
        h = [Fraction(0)] * n_terms
        # h' = f'/f  =>  n h_n = n f_n - sum_{j=1..n-1} j h_j f_{n-j}
        for n in range(1, n_terms):
            acc = n * f[n]
            for j in range(1, n):
                if not _is_zero_scalar(h[j]):
                    acc -= j * h[j] * f[n - j]
            h[n] = acc / n
        return PowerSeries(0, h, t)

    def __repr__(self):
        return f"PowerSeries({self.to_text()})"

    def to_text(self, var: str = "q", show_order: bool = True) -> str:
        """Exact display such as ``q - 744*q^2 + 356652*q^3``."""
        if self.is_zero():
            return f"0 + O({var}^{self.truncation_order + 1})" if show_order else "0"
        parts = []
        for j, c in enumerate(self.coefficients):
            if _is_zero_scalar(c):
                continue
            e = self.valuation + j
            parts.append((c, e))
        chunks = []
        for i, (c, e) in enumerate(parts):
            neg = (not isinstance(c, LocalElement)) and c < 0
            mag = -c if neg else c
            if e == 0:
                body = _scalar_text(mag)
            else:
                if e == 1:
                    pw = var
                elif e < 0:
                    pw = f"{var}^({e})"
                else:
                    pw = f"{var}^{e}"
                body = pw if mag == 1 else f"{_scalar_text(mag)}*{pw}"
            if i == 0:
                chunks.append(f"-{body}" if neg else body)
            else:
                chunks.append(f"{'-' if neg else '+'} {body}")
        text = " ".join(chunks)
        if show_order:
            text += f" + O({var}^{self.truncation_order + 1})"
        return text


def _scalar_text(c) -> str:
    if isinstance(c, LocalElement):
        return f"({c.poly.to_text('a')})"
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


#: A q-expansion (variable interpreted as q = e^(2 pi i tau)); same data
#: shape and semantics as PowerSeries.
QSeries = PowerSeries


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    return a * b


def series_div(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    return a / b


def series_derive(a: PowerSeries) -> PowerSeries:
    return a.derivative()


def series_exp(a: PowerSeries) -> PowerSeries:
    return a.exp()


def series_log(a: PowerSeries) -> PowerSeries:
    return a.log()


def series_compose(outer: Union[PowerSeries, RationalFunction], inner: PowerSeries) -> PowerSeries:
    """Formal composition outer(inner).

    ``outer`` may be a (Laurent) PowerSeries or a RationalFunction; the
    inner series must have valuation >= 1.
    """
    if isinstance(outer, RationalFunction):
        return _compose_ratfunc(outer, inner)
    if inner.is_zero():
        if outer.valuation < 0:
            raise CompositionDiverges("outer has a pole at 0 and inner vanishes")
        return PowerSeries(0, (outer.coefficient(0),), inner.truncation_order)
    if inner.valuation < 1:
        raise CompositionDiverges("inner series must have valuation >= 1")
    vi, ti = inner.valuation, inner.truncation_order
    vo, to = outer.valuation, outer.truncation_order
    # sound truncation: unknown outer tail contributes O(inner^(to+1));
    # the inner error propagates through outer' ~ inner^(vo-1)
    bound = min(vi * (to + 1), vi * (vo - 1) + ti + 1) - 1
    work = max(bound, ti) + 2  # generous accumulator start; muls self-truncate
    pos = PowerSeries.zero(work)
    if to >= 0:
        for e in range(to, -1, -1):
            pos = pos * inner + outer.coefficient(e)
    result = pos
    if vo < 0:
        inv = PowerSeries.one(work + 2 * vi + 2) / inner
        neg = PowerSeries.zero(work)
        for e in range(vo, min(to + 1, 0)):
            c = outer.coefficient(e)
            if not _is_zero_scalar(c):
                neg = neg + c * _series_power(inv, -e, work)
        result = result + neg
    return result.truncate(min(bound, result.truncation_order))


def _series_power(base: PowerSeries, n: int, work: int) -> PowerSeries:
    out = PowerSeries.one(work + abs(base.valuation) * n + 1)
    for _ in range(n):
        out = out * base
    return out


def _compose_ratfunc(outer: RationalFunction, inner: PowerSeries) -> PowerSeries:
    """Exact rational outer: the only error source is the inner truncation,
    which the sub-operations already track."""
    if inner.is_zero():
        raise CompositionDiverges("inner series is zero through truncation")
    if inner.valuation < 1:
        raise CompositionDiverges("inner series must have valuation >= 1")
    work = inner.truncation_order + 2 * inner.valuation * (
        max(outer.num.degree(), outer.den.degree(), 0) + 2
    )
    num = _poly_of_series(outer.num, inner, work)
    den = _poly_of_series(outer.den, inner, work)
    if den.is_zero():
        raise DivisionByZeroSeries("denominator vanishes identically on the series")
    return num / den


def _poly_of_series(p, inner: PowerSeries, work: int) -> PowerSeries:
    acc = PowerSeries.zero(work)
    for c in reversed(p.coeffs):
        acc = acc * inner + c
    return acc


def series_revert(a: PowerSeries) -> PowerSeries:
    """Compositional inverse of a valuation-1 series, by Newton iteration.

    The result g satisfies a(g(t)) = t through the truncation order.
    """
    if a.valuation != 1:
        raise BadValuation("reversion requires valuation exactly 1")
    n = a.truncation_order
    c1 = a.coefficient(1)
    t = PowerSeries.identity(n)
    g = t * _inv_scalar(c1)
    # quadratic convergence: each step doubles the number of correct terms
    for _ in range(max(1, n.bit_length()) + 2):
        fg = series_compose(a, g)
        err = fg - t
        if err.is_zero():
            return g
        dfg = series_compose(a.derivative(), g)
        g = g - err / dfg
    fg = series_compose(a, g)
    if not (fg - t).is_zero():
        raise AssertionError("Newton reversion failed to converge")
    return g


def schwarzian(w):
    """Schwarzian derivative (3 w''^2 - 2 w' w''')/(4 w'^2) of a
    PowerSeries or RationalFunction; returns the same kind."""
    if isinstance(w, RationalFunction):
        w1 = w.derivative()
        if w1.is_zero():
            raise ConstantInput("Schwarzian of a constant function")
        w2 = w1.derivative()
        w3 = w2.derivative()
        return (3 * w2 * w2 - 2 * w1 * w3) / (4 * w1 * w1)
    if isinstance(w, PowerSeries):
        w1 = w.derivative()
        if w1.is_zero():
            raise ConstantInput("Schwarzian of a constant series")
        w2 = w1.derivative()
        w3 = w2.derivative()
        return (3 * w2 * w2 - 2 * w1 * w3) / (4 * w1 * w1)
    raise TypeError("schwarzian expects a PowerSeries or RationalFunction")
