import math
import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from multdep.arith import weil_height
from multdep.numberfield import (
    FieldMismatchError,
    NumberField,
    ReducibleModulusError,
    field_arith,
    house,
    irreducibility_evidence,
    is_algebraic_integer,
    is_root_of_unity,
    minimal_polynomial,
    norm,
    parse_element,
    parse_elements,
    parse_field,
    weil_height_alg,
)
from multdep.poly import Polynomial, X, cyclotomic

x = sympy.Symbol("x")
QI = NumberField(X**2 + 1)
QR2 = NumberField(X**2 - 2)


def _sym(p: Polynomial):
    return sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(p.coeffs))


def test_field_arith_examples():
    i = QI.gen()
    assert i * i == -1
    assert i * i * i * i == 1
    r = QR2.gen()
    q = field_arith(1 + r, 1 - r, "div")
    assert q == QR2.element([-3, -2])
    assert q * (1 - r) == 1 + r


def test_field_errors():
    with pytest.raises(FieldMismatchError):
        QI.gen() + QR2.gen()
    with pytest.raises(ZeroDivisionError):
        QI.gen() / QI.zero()
    with pytest.raises(ReducibleModulusError):
        NumberField(X**2 - 1)
    with pytest.raises(ValueError):
        parse_field('{"modulus": ["1", "0", "2"]}')


coords = st.lists(st.fractions(min_value=-49, max_value=49, max_denominator=20), min_size=4, max_size=4)


@settings(max_examples=50, deadline=None)
@given(coords, coords, coords)
def test_field_axioms(a, b, c):
    K = NumberField.cyclotomic(5)
    a, b, c = K.element(a), K.element(b), K.element(c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if b != 0:
        assert (a * b) / b == a
        assert b * b.inverse() == 1


def test_minimal_polynomial_examples():
    r = QR2.gen()
    assert minimal_polynomial(r) == X**2 - 2
    assert minimal_polynomial(QR2.element(3)) == X - 3
    assert minimal_polynomial(1 + r) == X**2 - 2 * X - 1


def test_minimal_polynomial_against_sympy():
    rng = random.Random(12)
    z = sympy.exp(2 * sympy.pi * sympy.I / 7)
    K = NumberField.cyclotomic(7)
    for _ in range(12):
        c = [rng.randint(-2, 2) for _ in range(6)]
        a = K.element(c)
        expr = sum(ci * z**i for i, ci in enumerate(c))
        ref = sympy.minimal_polynomial(expr, x) if any(c[1:]) else x - c[0]
        mine = _sym(minimal_polynomial(a))
        assert sympy.Poly(mine, x).monic() == sympy.Poly(ref, x).monic()


def test_house_examples():
    assert house(NumberField.cyclotomic(5).gen()).contains(1)
    assert house(QR2.element(3)).value == 3
    h = house(1 + QR2.gen())
    assert h.contains(str(sympy.N(1 + sympy.sqrt(2), 60)))
    assert h.error < 1e-30


def test_weil_height_examples():
    assert weil_height_alg(QR2.element(1)).value == 0
    assert weil_height_alg(QR2.element(F(2, 3))).value == pytest.approx(math.log(3), abs=1e-30)
    assert weil_height_alg(NumberField.cyclotomic(8).gen()).value == 0


def test_height_embeds_rational_height():
    rng = random.Random(3)
    K = NumberField.cyclotomic(3)
    for _ in range(30):
        q = F(rng.randint(-999, 999) or 1, rng.randint(1, 999))
        enc = weil_height_alg(K.element(q))
        assert enc.contains(weil_height(q)) or abs(enc.value - weil_height(q)) < 1e-30


def test_height_of_quadratic_unit():
    # h(1 + sqrt 2) = log(1 + sqrt 2) / 2
    enc = weil_height_alg(1 + QR2.gen())
    assert enc.value == pytest.approx(math.log(1 + math.sqrt(2)) / 2, rel=1e-14)


def test_root_of_unity_examples():
    assert is_root_of_unity(QI.gen()) == 4
    assert is_root_of_unity(QR2.element(-1)) == 2
    assert is_root_of_unity(1 + QI.gen()) is None


def test_root_of_unity_completeness():
    for n in range(1, 61):
        assert is_root_of_unity(NumberField.cyclotomic(n).gen()) == n, n


def test_kronecker_property():
    rng = random.Random(21)
    for n in (5, 8, 12):
        K = NumberField.cyclotomic(n)
        z = K.gen()
        for _ in range(10):
            if rng.random() < 0.5:
                a = (-1) ** rng.randint(0, 1) * z ** rng.randint(0, 2 * n)
            else:
                a = K.element([rng.randint(-3, 3) for _ in range(K.degree)])
                if a == 0:
                    continue
            order = is_root_of_unity(a)
            h = weil_height_alg(a)
            if order is not None:
                assert h.value == 0 and a**order == 1
            else:
                assert h.lo > 0


def test_algebraic_integer():
    assert not is_algebraic_integer(QR2.element(F(1, 2)))
    assert is_algebraic_integer(QR2.gen())
    K6 = NumberField.cyclotomic(6)
    assert is_algebraic_integer((K6.gen() - 1).inverse())
    K5 = NumberField.cyclotomic(5)
    assert not is_algebraic_integer((K5.gen() - 1).inverse())


def test_norm_and_trace():
    r = QR2.gen()
    assert norm(1 + r) == -1
    assert (1 + r).trace() == 2


def test_irreducibility_evidence():
    assert irreducibility_evidence(X**2 - 2) == "proved"
    assert irreducibility_evidence(cyclotomic(15)) == "proved"
    assert irreducibility_evidence(X**4 + 1) == "proved"
    with pytest.raises(ReducibleModulusError):
        irreducibility_evidence(X**3 - 8)


def test_parse_specs():
    K = parse_field("cyclotomic:12")
    assert K.degree == 4 and K.modulus == cyclotomic(12)
    assert parse_field('{"modulus": ["-2", "0", "1"]}').modulus == X**2 - 2
    assert parse_element(QI, ["1", "1"]) == 1 + QI.gen()
    assert parse_element(QI, "x^3") == -QI.gen()
    assert parse_elements(QI, "x; 2") == [QI.gen(), QI.element(2)]
    assert parse_elements(QI, '[["0","1"],["2"]]') == [QI.gen(), QI.element(2)]
    with pytest.raises(ValueError):
        parse_field("cyclotomic:zero")
