import random
from fractions import Fraction as F

from multdep.numberfield import NumberField
from multdep.poly import Polynomial, X, chebyshev, compose
from multdep.special import (
    compositional_sqrt_T4,
    is_special,
    sqrt_T4_derivation,
    target_polynomial,
)


def conjugate(target, a, b):
    ell, inv = Polynomial([b, a]), Polynomial([-b / a, 1 / a])
    return ell.compose(target.compose(inv))


def test_examples():
    w = is_special(X**3 - 3 * X)
    assert w.target == "+T_3" and (w.a, w.b) == (1, 0)
    w = is_special(2 * X**2 - 1)
    assert w.target == "+T_2" and w.a == F(1, 2) and w.b == 0
    assert w.conjugate() == 2 * X**2 - 1
    assert w.to_json() == {"special": True, "target": "+T_2", "a": "1/2", "b": "0"}


def test_non_special():
    assert is_special(X**2 + 1) is None
    assert is_special(X**3 + X + 1) is None
    assert is_special(X**2 - 1) is None


def test_quadratic_classification():
    # X^2 + c is special over Q exactly for c in {0, -2}
    for c in range(-6, 7):
        w = is_special(X**2 + c)
        assert (w is not None) == (c in (0, -2)), c


def test_sign_collapse():
    w = is_special(-(X**2))
    assert w.target == "+X^2" and w.a == -1
    assert w.conjugate() == -(X**2)


def test_round_trip_small():
    rng = random.Random(31)
    for _ in range(40):
        d = rng.randint(2, 5)
        tag = rng.choice(["+X^d", "-X^d", "+T_d", "-T_d"])
        a = F(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
        b = F(rng.randint(-4, 4), rng.randint(1, 3))
        f = conjugate(target_polynomial(tag, d), a, b)
        w = is_special(f)
        assert w is not None and w.conjugate() == f
        assert w.target[1] == tag[1]


def test_over_number_field():
    K = NumberField(X**2 - 2)
    r = K.gen()
    f = conjugate(chebyshev(2), K.element(1), r)
    w = is_special(f)
    assert w is not None and w.target == "+T_2"


def test_sqrt_t4():
    f = compositional_sqrt_T4()
    assert f == X**2 - 2
    assert compose(f, f) == X**4 - 4 * X**2 + 2
    assert compose(X**2 - 1, X**2 - 1) == X**4 - 2 * X**2
    assert compose(X**2 - 1, X**2 - 1) != chebyshev(4)
    trace = sqrt_T4_derivation().trace
    assert any("b = 0" in t for t in trace) and any("a^3 = 1" in t for t in trace)
