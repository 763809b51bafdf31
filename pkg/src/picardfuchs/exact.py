"""Exact arithmetic kernel.

Arbitrary-precision rationals, dense univariate polynomials over Q,
rational functions in canonical form (monic denominator, coprime), points
of P^1 given by an irreducible modulus or the infinity marker, residue-field
elements, squarefree/irreducible factorization, and exact local (Laurent)
expansion at rational, algebraic and infinite points.

Everything here is immutable and pure; values are safe to share.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import sympy

#: Exact rational scalar type.  `fractions.Fraction` already guarantees
#: lowest terms and a positive denominator.
Rational = Fraction


class ZeroPolynomial(ValueError):
    """Raised when an operation requires a nonzero polynomial."""


class ZeroDenominator(ZeroDivisionError):
    """Raised when constructing a rational function with zero denominator."""


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


class Polynomial:
    """Dense univariate polynomial over Q, coefficients low to high.

    Trailing zero coefficients are stripped; the zero polynomial has an
    empty coefficient tuple and degree() == -1 (sentinel).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # immutability guard
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((1,))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, n: int, c=1) -> "Polynomial":
        return cls((0,) * n + (c,))

    # -- basic queries -----------------------------------------------------

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant_term(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def coefficient(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Polynomial", self.coeffs))

    # -- ring arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "Polynomial"):
        other = _coerce_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, len(self.coeffs) - len(other.coeffs) + 1)
        rem = list(self.coeffs)
        dlead = other.leading()
        dn = other.degree()
        for i in range(len(rem) - 1, dn - 1, -1):
            if rem[i]:
                c = rem[i] / dlead
                q[i - dn] = c
                for j, oc in enumerate(other.coeffs):
                    rem[i - dn + j] -= c * oc
        return Polynomial(q), Polynomial(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return Polynomial(tuple(x / c for x in self.coeffs))
        return NotImplemented

    # -- structural operations ---------------------------------------------

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.leading()
        if lead == 1:
            return self
        return Polynomial(tuple(c / lead for c in self.coeffs))

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def evaluate(self, value):
        """Horner evaluation; works for Fraction, LocalElement and
        RationalFunction arguments alike."""
        result = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    __call__ = evaluate

    def compose(self, other: "Polynomial") -> "Polynomial":
        result = Polynomial.zero()
        for c in reversed(self.coeffs):
            result = result * other + Polynomial.constant(c)
        return result

    def shift(self, a) -> "Polynomial":
        """p(x + a)."""
        return self.compose(Polynomial((a, 1)))

    def reversed_coeffs(self, n: Optional[int] = None) -> "Polynomial":
        """x^n * p(1/x) for n >= degree (default: the degree)."""
        if self.is_zero():
            return self
        if n is None:
            n = self.degree()
        if n < self.degree():
            raise ValueError("reversal order below degree")
        return Polynomial((0,) * (n - self.degree()) + tuple(reversed(self.coeffs)))

    def primitive_integer(self) -> "Polynomial":
        """Rescale by a positive rational so coefficients are coprime
        integers with positive leading coefficient (gcd is unchanged)."""
        if self.is_zero():
            return self
        from math import gcd, lcm

        denom = 1
        for c in self.coeffs:
            denom = lcm(denom, c.denominator)
        ints = [int(c * denom) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Polynomial([Fraction(v, g) for v in ints])

    def valuation_at_zero(self) -> int:
        """Multiplicity of the root x = 0 (for the zero polynomial a
        large sentinel is never needed here; raises instead)."""
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no finite valuation")
        v = 0
        while self.coeffs[v] == 0:
            v += 1
        return v

    def multiplicity_of(self, factor: "Polynomial") -> int:
        """Largest m with factor^m | self (self nonzero, factor nonconstant)."""
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial")
        if factor.degree() < 1:
            raise ValueError("factor must be nonconstant")
        m = 0
        p = self
        while True:
            q, r = divmod(p, factor)
            if not r.is_zero():
                return m
            m += 1
            p = q

    def to_text(self, var: str = "x") -> str:
        """Human-readable form, e.g. ``36*s^2 - 41*s + 32``; parseable by
        the CLI expression grammar."""
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree(), -1, -1):
            c = self.coefficient(i)
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = _frac_text(mag)
            else:
                xpow = var if i == 1 else f"{var}^{i}"
                body = xpow if mag == 1 else f"{_frac_text(mag)}*{xpow}"
            parts.append((sign, body))
        sign0, body0 = parts[0]
        text = body0 if sign0 == "+" else f"-{body0}"
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()})"


def _frac_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _coerce_poly(v):
    if isinstance(v, Polynomial):
        return v
    if isinstance(v, (int, Fraction)):
        return Polynomial.constant(v)
    return NotImplemented


def polynomial_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd via the primitive Euclidean remainder sequence
    (remainders rescaled to primitive integer form to tame coefficient
    growth).  gcd(0, 0) = 0."""
    a, b = _coerce_poly(a), _coerce_poly(b)
    while not b.is_zero():
        a, b = b, (a % b)
        if not b.is_zero():
            b = b.primitive_integer()
    return a.monic()


def polynomial_xgcd(a: Polynomial, b: Polynomial):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = Polynomial.one(), Polynomial.zero()
    t0, t1 = Polynomial.zero(), Polynomial.one()
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lead = r0.leading()
    return r0.monic(), s0 / lead, t0 / lead


def polynomial_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        return Polynomial.zero()
    return ((a * b) // polynomial_gcd(a, b)).monic()


def _sympy_irreducible_factors(p: Polynomial) -> list[Polynomial]:
    """Split a squarefree monic polynomial into monic Q-irreducible factors."""
    x = sympy.Symbol("x")
    sp = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)],
        x,
        domain="QQ",
    )
    _, factors = sp.factor_list()
    out = []
    for f, mult in factors:
        coeffs = [Fraction(c.p, c.q) for c in reversed(f.all_coeffs())]
        fp = Polynomial(coeffs).monic()
        out.extend([fp] * mult)
    return out


def squarefree_factor(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Factor p over Q: returns [(monic irreducible factor, multiplicity)],
    pairwise distinct factors, sorted canonically, with
    leading(p) * prod(f^m) == p exactly.

    Yun's algorithm separates the multiplicities; each squarefree part is
    then split into irreducibles.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    result: dict[Polynomial, int] = {}
    w = p.monic()
    if w.degree() >= 1:
        g = polynomial_gcd(w, w.derivative())
        c = (w // g).monic()
        d = (w.derivative() // g) - c.derivative()
        mult = 1
        while c.degree() >= 1:
            part = polynomial_gcd(c, d)
            if part.degree() >= 1:
                for irr in _sympy_irreducible_factors(part):
                    result[irr] = result.get(irr, 0) + mult
            c = (c // part).monic()
            d = (d // part) - c.derivative()
            mult += 1
    items = sorted(result.items(), key=lambda kv: _factor_sort_key(kv[0]))
    return items


def _factor_sort_key(f: Polynomial):
    # degree-1 factors ordered by root magnitude (positive root first on
    # ties), higher degrees by coefficient tuple
    if f.degree() == 1:
        root = -f.coefficient(0)
        return (1, (abs(root), root < 0))
    return (f.degree(), f.coeffs)


def irreducible_factors(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Alias view of squarefree_factor for callers that think in terms of
    point loci (denominator supports, fiber positions)."""
    return squarefree_factor(p)


class RationalFunction:
    """Quotient of polynomials in canonical form: monic nonzero
    denominator, gcd(numerator, denominator) = 1.  Equality is syntactic.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=Polynomial((1,))):
        num = _coerce_poly(num)
        den = _coerce_poly(den)
        if den.is_zero():
            raise ZeroDenominator("zero denominator")
        if num.is_zero():
            object.__setattr__(self, "num", Polynomial.zero())
            object.__setattr__(self, "den", Polynomial.one())
            return
        g = polynomial_gcd(num, den)
        if g.degree() >= 1:
            num, den = num // g, den // g
        lead = den.leading()
        if lead != 1:
            num, den = num / lead, den / lead
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RationalFunction is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls(Polynomial.zero())

    @classmethod
    def one(cls) -> "RationalFunction":
        return cls(Polynomial.one())

    @classmethod
    def x(cls) -> "RationalFunction":
        return cls(Polynomial.x())

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(Polynomial.constant(c))

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "RationalFunction":
        return cls(p)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant rational function")
        return self.num.constant_term()

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def degree(self) -> int:
        """Degree as a map P^1 -> P^1 (max of numerator/denominator degrees)."""
        if self.is_zero():
            return 0
        return max(self.num.degree(), self.den.degree())

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        other = _coerce_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RationalFunction", self.num.coeffs, self.den.coeffs))

    # -- field arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = _coerce_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("rational function division by zero")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _coerce_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            if self.is_zero():
                raise ZeroDivisionError("zero rational function to negative power")
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num**n, self.den**n)

    # -- calculus and substitution -----------------------------------------

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def compose(self, inner: "RationalFunction") -> "RationalFunction":
        """self(inner(x)) as a rational function."""
        inner = _coerce_ratfunc(inner)
        n = max(self.num.degree(), self.den.degree(), 0)
        # clear denominators: p(R)/q(R) = sum p_i N^i D^(n-i) / sum q_j N^j D^(n-j)
        num_acc = Polynomial.zero()
        den_acc = Polynomial.zero()
        npow = [Polynomial.one()]
        dpow = [Polynomial.one()]
        for _ in range(n):
            npow.append(npow[-1] * inner.num)
            dpow.append(dpow[-1] * inner.den)
        for i in range(n + 1):
            ci = self.num.coefficient(i)
            if ci:
                num_acc = num_acc + ci * npow[i] * dpow[n - i]
            cj = self.den.coefficient(i)
            if cj:
                den_acc = den_acc + cj * npow[i] * dpow[n - i]
        return RationalFunction(num_acc, den_acc)

    def evaluate(self, value):
        den = self.den.evaluate(value)
        num = self.num.evaluate(value)
        return num / den

    __call__ = evaluate

    def valuation_at(self, point: "AlgebraicPoint") -> Optional[int]:
        """Order of vanishing at the point (negative at a pole); None for
        the zero function."""
        if self.is_zero():
            return None
        if point.is_infinity:
            return self.den.degree() - self.num.degree()
        m = point.modulus
        return self.num.multiplicity_of(m) - self.den.multiplicity_of(m)

    def to_text(self, var: str = "x") -> str:
        """Exact text form with integer-normalized numerator/denominator."""
        if self.is_zero():
            return "0"
        from math import lcm

        scale = 1
        for c in self.num.coeffs + self.den.coeffs:
            scale = lcm(scale, c.denominator)
        num = self.num * scale
        den = self.den * scale
        ntext = num.to_text(var)
        if den == Polynomial.one():
            return ntext
        dtext = den.to_text(var)
        if num.degree() > 0 or num.coefficient(0) < 0:
            ntext = f"({ntext})"
        return f"{ntext}/({dtext})"

    def __repr__(self) -> str:
        return f"RationalFunction({self.to_text()})"


def _coerce_ratfunc(v):
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, Polynomial):
        return RationalFunction(v)
    if isinstance(v, (int, Fraction)):
        return RationalFunction(Polynomial.constant(v))
    return NotImplemented


class AlgebraicPoint:
    """A closed point of P^1 over Q: either the marker at infinity or a
    monic Q-irreducible modulus (degree 1 <=> rational point)."""

    __slots__ = ("modulus",)

    def __init__(self, modulus: Optional[Polynomial]):
        if modulus is not None:
            modulus = modulus.monic()
            if modulus.degree() < 1:
                raise ValueError("modulus must be nonconstant")
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, *a):
        raise AttributeError("AlgebraicPoint is immutable")

    @classmethod
    def rational(cls, a) -> "AlgebraicPoint":
        return cls(Polynomial((-_as_fraction(a), 1)))

    @classmethod
    def infinity(cls) -> "AlgebraicPoint":
        return cls(None)

    @classmethod
    def from_modulus(cls, m: Polynomial) -> "AlgebraicPoint":
        return cls(m)

    @property
    def is_infinity(self) -> bool:
        return self.modulus is None

    @property
    def degree(self) -> int:
        return 1 if self.modulus is None else self.modulus.degree()

    @property
    def is_rational(self) -> bool:
        return self.modulus is not None and self.modulus.degree() == 1

    @property
    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational point")
        return -self.modulus.coefficient(0)

    def sort_key(self):
        if self.is_infinity:
            return (2, 0, ())
        if self.is_rational:
            v = self.rational_value
            return (0, v, ())
        return (1, self.modulus.degree(), self.modulus.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraicPoint):
            return NotImplemented
        return self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(("AlgebraicPoint", None if self.modulus is None else self.modulus.coeffs))

    def __repr__(self) -> str:
        return f"AlgebraicPoint({self.describe()})"

    def describe(self, var: str = "x") -> str:
        if self.is_infinity:
            return "inf"
        if self.is_rational:
            return _frac_text(self.rational_value)
        return f"root of {self.modulus.to_text(var)}"


AT_INFINITY = AlgebraicPoint.infinity()


class LocalElement:
    """Element of the residue field Q[x]/(modulus), modulus irreducible.

    Stored as the reduced representative polynomial of degree <
    deg(modulus).  Supports field arithmetic with other LocalElements over
    the same modulus and with exact rationals.
    """

    __slots__ = ("poly", "modulus")

    def __init__(self, poly: Polynomial, modulus: Polynomial):
        modulus = modulus.monic()
        if modulus.degree() < 1:
            raise ValueError("modulus must be nonconstant")
        object.__setattr__(self, "poly", poly % modulus)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, *a):
        raise AttributeError("LocalElement is immutable")

    @classmethod
    def from_fraction(cls, c, modulus: Polynomial) -> "LocalElement":
        return cls(Polynomial.constant(c), modulus)

    @classmethod
    def generator(cls, modulus: Polynomial) -> "LocalElement":
        """The class of x (a root of the modulus)."""
        return cls(Polynomial.x(), modulus)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_rational(self) -> bool:
        return self.poly.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.poly.constant_term()

    def _coerce(self, other):
        if isinstance(other, LocalElement):
            if other.modulus != self.modulus:
                raise ValueError("mixed residue fields")
            return other
        if isinstance(other, (int, Fraction)):
            return LocalElement.from_fraction(other, self.modulus)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LocalElement(self.poly + o.poly, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return LocalElement(-self.poly, self.modulus)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LocalElement(self.poly - o.poly, self.modulus)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LocalElement(self.poly * o.poly, self.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "LocalElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero residue element")
        g, s, _ = polynomial_xgcd(self.poly, self.modulus)
        if g.degree() != 0:
            raise ValueError("modulus not irreducible (gcd found)")
        return LocalElement(s / g.constant_term(), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = LocalElement.from_fraction(1, self.modulus)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, LocalElement):
            return self.modulus == other.modulus and self.poly == other.poly
        if isinstance(other, (int, Fraction)):
            return self.poly == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(("LocalElement", self.poly.coeffs, self.modulus.coeffs))

    def __repr__(self):
        return f"LocalElement({self.poly.to_text('a')} mod {self.modulus.to_text('a')})"


#: A coefficient of a local expansion: rational at rational/infinite
#: points, residue-field element at higher-degree algebraic points.
LocalScalar = Union[Fraction, LocalElement]


def _inv_scalar(c: LocalScalar) -> LocalScalar:
    if isinstance(c, LocalElement):
        return c.inverse()
    return Fraction(1) / c


class LaurentExpansion:
    """Truncated Laurent expansion of a rational function in the local
    parameter of a point.  ``coefficients[j]`` multiplies t^(valuation+j);
    the expansion covers exponents valuation..order.  The zero function has
    valuation None (the +infinity sentinel) and no coefficients."""

    __slots__ = ("valuation", "coefficients", "order")

    def __init__(self, valuation: Optional[int], coefficients: Sequence, order: int):
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "coefficients", tuple(coefficients))
        object.__setattr__(self, "order", order)

    def __setattr__(self, *a):
        raise AttributeError("LaurentExpansion is immutable")

    def coefficient(self, n: int) -> LocalScalar:
        if self.valuation is None:
            return Fraction(0)
        if n > self.order:
            raise ValueError(f"coefficient of exponent {n} beyond expansion order {self.order}")
        j = n - self.valuation
        if j < 0 or j >= len(self.coefficients):
            return Fraction(0)
        return self.coefficients[j]

    def leading(self) -> LocalScalar:
        if self.valuation is None:
            raise ZeroDivisionError("zero expansion has no leading coefficient")
        return self.coefficients[0]

    def __repr__(self):
        return f"LaurentExpansion(v={self.valuation}, coeffs={list(self.coefficients)})"


def _poly_local_taylor(p: Polynomial, point: AlgebraicPoint, n_terms: int) -> list:
    """First n_terms Taylor coefficients of p in the local parameter at a
    finite point: p(a + t) for rational a, p(alpha + t) in the residue
    field at an algebraic point."""
    if point.is_rational:
        shifted = p.shift(point.rational_value)
        return [shifted.coefficient(j) for j in range(n_terms)]
    m = point.modulus
    out = []
    fact = 1
    deriv = p
    for j in range(n_terms):
        if j > 0:
            deriv = deriv.derivative()
            fact *= j
        out.append(LocalElement(deriv / fact, m))
    return out


def _series_quotient(num: list, den: list, n_terms: int) -> list:
    """Coefficients of (sum num_i t^i)/(sum den_i t^i) through t^(n_terms-1);
    den[0] must be invertible."""
    inv0 = _inv_scalar(den[0])
    out = []
    for n in range(n_terms):
        acc = num[n] if n < len(num) else Fraction(0)
        for j in range(1, min(n, len(den) - 1) + 1):
            acc = acc - den[j] * out[n - j]
        out.append(acc * inv0)
    return out


def laurent_expand(f: RationalFunction, at: AlgebraicPoint, order: int) -> LaurentExpansion:
    """Exact Laurent expansion of f at the point through exponent
    ``order`` inclusive, with the exact valuation.

    Local parameter: (x - a) at finite points (x - alpha in the residue
    field at algebraic points), 1/x at infinity.
    """
    if f.is_zero():
        return LaurentExpansion(None, (), order)
    if at.is_infinity:
        # f(1/t) = t^(deg den - deg num) * rev(num)(t) / rev(den)(t),
        # both reversals having nonzero constant term.
        v = f.den.degree() - f.num.degree()
        n_terms = order - v + 1
        if n_terms <= 0:
            return LaurentExpansion(v, (), order)
        nc = list(f.num.reversed_coeffs().coeffs)
        dc = list(f.den.reversed_coeffs().coeffs)
        coeffs = _series_quotient(nc, dc, n_terms)
        return LaurentExpansion(v, coeffs, order)
    m = at.modulus
    vnum = f.num.multiplicity_of(m)
    vden = f.den.multiplicity_of(m)
    v = vnum - vden
    n_terms = order - v + 1
    if n_terms <= 0:
        return LaurentExpansion(v, (), order)
    # Taylor coefficients in the local parameter; the first vnum (resp.
    # vden) vanish exactly by the multiplicity computation above.
    nc = _poly_local_taylor(f.num, at, vnum + n_terms)[vnum:]
    dc = _poly_local_taylor(f.den, at, vden + n_terms)[vden:]
    if _is_zero_scalar(nc[0]) or _is_zero_scalar(dc[0]):
        raise AssertionError("valuation/leading-coefficient mismatch")
    coeffs = _series_quotient(nc, dc, n_terms)
    return LaurentExpansion(v, coeffs, order)


def _is_zero_scalar(c) -> bool:
    if isinstance(c, LocalElement):
        return c.is_zero()
    return c == 0
