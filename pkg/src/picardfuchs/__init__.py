"""Exact-arithmetic toolkit for second/third order Fuchsian ODE analysis:
projective normal forms, pullbacks, symmetric squares and roots, Frobenius
solution bases, orbifold uniformization checks, Weierstrass elliptic
surface modularity verdicts, K3 vanishing-order checks, and mirror-map
q-series.
"""

from .exact import (
    AT_INFINITY,
    AlgebraicPoint,
    LaurentExpansion,
    LocalElement,
    Polynomial,
    Rational,
    RationalFunction,
    ZeroPolynomial,
    laurent_expand,
    polynomial_gcd,
    squarefree_factor,
)

__all__ = [
    "AT_INFINITY",
    "AlgebraicPoint",
    "LaurentExpansion",
    "LocalElement",
    "Polynomial",
    "Rational",
    "RationalFunction",
    "ZeroPolynomial",
    "laurent_expand",
    "polynomial_gcd",
    "squarefree_factor",
]
