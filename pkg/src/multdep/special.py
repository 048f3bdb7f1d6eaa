"""Special polynomials (affinely conjugate to +-X^d or +-T_d) and the
compositional square root of T_4."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .arith import format_rational, rational_root
from .numberfield import FieldElement
from .poly import Polynomial, chebyshev, compose

TARGETS = ("+X^d", "-X^d", "+T_d", "-T_d")


def target_polynomial(tag: str, d: int) -> Polynomial:
    sign = -1 if tag.startswith("-") else 1
    base = Polynomial.monomial(d) if tag.endswith("X^d") else chebyshev(d)
    return base * sign


@dataclass
class ConjugacyWitness:
    """f = l o target o l^-1 with l(x) = a x + b."""

    a: Any
    b: Any
    target: str
    degree: int

    def target_poly(self) -> Polynomial:
        return target_polynomial(self.tag, self.degree)

    @property
    def tag(self) -> str:
        return self.target.replace(str(self.degree), "d")

    def conjugate(self) -> Polynomial:
        """l o target o l^-1 as a polynomial."""
        inv = Polynomial([-self.b / self.a, 1 / self.a])
        ell = Polynomial([self.b, self.a])
        return ell.compose(self.target_poly().compose(inv))

    def to_json(self) -> dict:
        return {"special": True, "target": self.target, "a": _s(self.a), "b": _s(self.b)}


def _s(c: Any) -> str:
    if isinstance(c, Fraction):
        return format_rational(c)
    if isinstance(c, FieldElement) and c.is_rational():
        return format_rational(c.coords[0])
    return str(c)


def _scale_candidates(value: Any, k: int) -> list:
    """Solutions a of a^k = value available exactly (positive root first)."""
    if isinstance(value, FieldElement):
        if k == 1:
            return [value]
        if value.is_rational():
            value = value.coords[0]
        else:
            return []
    value = Fraction(value)
    r = rational_root(value, k)
    if r is None:
        return []
    if k % 2 == 0:
        r = abs(r)
        return [r, -r] if r else [r]
    return [r]


def is_special(f: Polynomial) -> ConjugacyWitness | None:
    """Affine conjugacy of f to +-X^d or +-T_d over its coefficient field.

    Over Q the search is complete.  With number-field coefficients the scale
    is found only when d = 2 or the leading coefficient is rational.
    """
    d = f.degree
    if d < 2:
        raise ValueError("is_special needs deg f >= 2")
    cd = f.lead
    b = -f[d - 1] / (cd * d)
    for tag in TARGETS:
        sign = -1 if tag.startswith("-") else 1
        target = target_polynomial(tag, d)
        for a in _scale_candidates(sign / cd, d - 1):
            if isinstance(a, Fraction) and any(isinstance(c, FieldElement) for c in f.coeffs):
                a = next(c for c in f.coeffs if isinstance(c, FieldElement)).field.element(a)
            ell = Polynomial([b, a])
            # target candidate: (f(a x + b) - b) / a
            g = (f.compose(ell) - b) / a
            if g == target:
                w = ConjugacyWitness(a, b, tag.replace("d", str(d)), d)
                if w.conjugate() != f:
                    raise AssertionError("conjugacy witness failed verification")
                return w
    return None


def compose_quadratic_coefficients(a: Any, b: Any, c: Any) -> tuple:
    """Coefficients (X^0..X^4) of f o f for f = a X^2 + b X + c."""
    return (
        a * c * c + b * c + c,
        2 * a * b * c + b * b,
        a * (b * b + 2 * a * c) + a * b,
        2 * a * a * b,
        a * a * a,
    )


@dataclass
class SqrtDerivation:
    result: Polynomial
    trace: list[str]


def compositional_sqrt_T4() -> Polynomial:
    """The unique quadratic f with f o f = T_4."""
    return sqrt_T4_derivation().result


def sqrt_T4_derivation() -> SqrtDerivation:
    """Solve f o f = T_4 for quadratic f = a X^2 + b X + c, keeping the steps."""
    t4 = chebyshev(4)
    trace = [
        "f o f = a^3 X^4 + 2a^2 b X^3 + (a(b^2 + 2ac) + ab) X^2 + (2abc + b^2) X + (ac^2 + bc + c)",
        f"compare with T_4 = {t4}",
        "X^4: a^3 = 1",
        "X^3: 2 a^2 b = 0, so b = 0",
        "X^2: 2 a^2 c = -4, so c = -2/a^2 = -2a (using a^3 = 1)",
        "X^0: a c^2 + c = 4a^3 - 2a = 4 - 2a = 2, so a = 1",
        "X^1: 2abc + b^2 = 0 holds with b = 0",
    ]
    a, b = Fraction(1), Fraction(0)
    c = -2 * a
    f = Polynomial([c, b, a])
    coeffs = compose_quadratic_coefficients(a, b, c)
    if Polynomial(coeffs) != t4 or compose(f, f) != t4:
        raise AssertionError("derived square root does not compose to T_4")
    trace.append(f"f = {f}; f o f = {compose(f, f)}")
    return SqrtDerivation(f, trace)
