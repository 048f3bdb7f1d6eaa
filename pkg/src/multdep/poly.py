"""Dense univariate polynomials and rational functions with exact coefficients.

Coefficients are :class:`~fractions.Fraction` by default.  Any exact scalar
type supporting ``+ - * /`` and equality with ``0`` (for instance
:class:`multdep.numberfield.FieldElement`) may be used instead; the fast
integer paths (Kronecker multiplication, modular gcd screening) then switch
off automatically.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .arith import divisors, factor_integer, format_rational

MAX_DEGREE = 10_000
_KRONECKER_MIN = 24
# 61-bit primes used for modular coprimality screening
_SCREEN_PRIMES = (
    2305843009213693951,
    2305843009213693921,
    2305843009213693907,
    2305843009213693669,
    2305843009213693613,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        loc = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{loc}")


class PoleError(ZeroDivisionError):
    """Evaluation at a pole of a rational function."""


class CompositionError(ArithmeticError):
    """Composition collapses to the indeterminate 0/0 or to a zero denominator."""


class SizeLimitError(ArithmeticError):
    def __init__(self, message: str, reached: int | None = None):
        self.reached = reached
        super().__init__(message)


def _scalar(c: Any) -> Any:
    if isinstance(c, int):
        return Fraction(c)
    return c


# --------------------------------------------------------------------------
# integer polynomial kernels
# --------------------------------------------------------------------------

def _schoolbook(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(value: int, nbytes: int, n: int) -> list[int]:
    negative = value < 0
    value = -value if negative else value
    data = value.to_bytes((n + 1) * nbytes, "little")
    w = 8 * nbytes
    half, full = 1 << (w - 1), 1 << w
    out = []
    carry = 0
    for i in range(n):
        d = int.from_bytes(data[i * nbytes : (i + 1) * nbytes], "little") + carry
        if d >= half:
            d -= full
            carry = 1
        else:
            carry = 0
        out.append(-d if negative else d)
    return out


def int_poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Product of integer coefficient lists (low degree first)."""
    if not a or not b:
        return []
    if min(len(a), len(b)) < _KRONECKER_MIN:
        return _schoolbook(a, b)
    ba = max(abs(x) for x in a).bit_length()
    bb = max(abs(x) for x in b).bit_length()
    w = ba + bb + min(len(a), len(b)).bit_length() + 2
    nbytes = (w + 7) // 8
    return _unpack(_pack(a, nbytes) * _pack(b, nbytes), nbytes, len(a) + len(b) - 1)


def _common_denominator(coeffs: Sequence[Fraction]) -> int:
    d = 1
    for c in coeffs:
        q = c.denominator
        if q != 1:
            d = d * q // math.gcd(d, q)
    return d


def _to_int(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    d = _common_denominator(coeffs)
    return [c.numerator * (d // c.denominator) for c in coeffs], d


# --------------------------------------------------------------------------
# Polynomial
# --------------------------------------------------------------------------

class Polynomial:
    """Dense polynomial; ``coeffs[i]`` is the coefficient of X^i."""

    __slots__ = ("coeffs", "_rational")

    def __init__(self, coeffs: Iterable[Any] = ()):
        cs = [_scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)
        self._rational = all(type(c) is Fraction for c in cs)

    # construction helpers
    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: Any) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c: Any = 1) -> "Polynomial":
        return cls([0] * degree + [c])

    # basic properties
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_rational(self) -> bool:
        return self._rational

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.lead == 1

    def is_monomial(self) -> bool:
        return sum(1 for c in self.coeffs if c != 0) == 1

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # arithmetic
    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __add__(self, other: Any) -> "Polynomial":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial([x + b[i] if i < len(b) else x for i, x in enumerate(a)])

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Polynomial":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other: Any) -> "Polynomial":
        if isinstance(other, Polynomial):
            return _poly_mul(self, other)
        if isinstance(other, (int, Fraction)) or not hasattr(other, "coeffs"):
            return Polynomial([c * other for c in self.coeffs])
        return NotImplemented

    def __rmul__(self, other: Any) -> "Polynomial":
        return Polynomial([other * c for c in self.coeffs])

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Any) -> "Polynomial":
        return Polynomial([x * c for x in self.coeffs])

    def __truediv__(self, c: Any) -> "Polynomial":
        if isinstance(c, Polynomial):
            if c.degree == 0:
                c = c.coeffs[0]
            else:
                raise TypeError("use divmod or exact_div for polynomial division")
        return Polynomial([x / c for x in self.coeffs])

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        if len(r) - 1 < db:
            return Polynomial(), self
        lead = other.lead
        monic = lead == 1
        bc = other.coeffs
        q = [Fraction(0)] * (len(r) - db)
        for i in range(len(r) - 1 - db, -1, -1):
            c = r[i + db]
            if c == 0:
                continue
            if not monic:
                c = c / lead
            q[i] = c
            for j in range(db):
                if bc[j] != 0:
                    r[i + j] = r[i + j] - c * bc[j]
            r[i + db] = 0
        return Polynomial(q), Polynomial(r[:db])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    # evaluation and composition
    def __call__(self, x: Any) -> Any:
        if isinstance(x, Polynomial):
            return self.compose(x)
        if isinstance(x, RationalFunction):
            return RationalFunction.from_poly(self).compose(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "Polynomial") -> "Polynomial":
        if not self.coeffs:
            return Polynomial()
        if self.degree * max(inner.degree, 0) > MAX_DEGREE:
            raise SizeLimitError(
                f"composition degree {self.degree * inner.degree} exceeds {MAX_DEGREE}")
        acc = Polynomial([self.coeffs[-1]])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * inner
            if c != 0:
                acc = acc + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([c * i for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.lead
        if lead == 1:
            return self
        return Polynomial([c / lead for c in self.coeffs])

    def primitive_integer(self) -> list[int]:
        """Primitive integer coefficient list with positive leading entry."""
        ints, _ = _to_int(self.coeffs)
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        g = g or 1
        if ints and ints[-1] < 0:
            g = -g
        return [c // g for c in ints]

    def term_count(self) -> int:
        return sum(1 for c in self.coeffs if c != 0)

    def bit_size(self) -> int:
        if not self._rational:
            return 0
        return sum(c.numerator.bit_length() + c.denominator.bit_length() for c in self.coeffs)

    # presentation
    def to_json(self) -> list[str]:
        return [format_rational(c) if type(c) is Fraction else str(c) for c in self.coeffs]

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r})"


def _as_poly(x: Any) -> Any:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, RationalFunction):
        return NotImplemented
    return Polynomial([x])


def _poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        return Polynomial()
    if a._rational and b._rational and min(len(a), len(b)) >= _KRONECKER_MIN:
        ia, da = _to_int(a.coeffs)
        ib, db = _to_int(b.coeffs)
        prod = int_poly_mul(ia, ib)
        d = da * db
        if d == 1:
            return Polynomial([Fraction(c) for c in prod])
        return Polynomial([Fraction(c, d) for c in prod])
    return Polynomial(_schoolbook(a.coeffs, b.coeffs))


def format_poly(p: Polynomial, var: str = "X") -> str:
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        if type(c) is Fraction:
            neg = c < 0
            mag = -c if neg else c
            cs = format_rational(mag)
        else:
            neg, cs = False, f"({c})"
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and cs == "1":
            term = mono
        elif mono:
            term = f"{cs}*{mono}"
        else:
            term = cs
        if not parts:
            parts.append(f"-{term}" if neg else term)
        else:
            parts.append(f"- {term}" if neg else f"+ {term}")
    return " ".join(parts)


X = Polynomial.x()


# --------------------------------------------------------------------------
# gcd, squarefree decomposition
# --------------------------------------------------------------------------

def _mod_p_list(coeffs: Sequence[Fraction], p: int) -> list[int] | None:
    out = []
    for c in coeffs:
        d = c.denominator % p
        if d == 0:
            return None
        out.append(c.numerator * pow(d, -1, p) % p)
    while out and out[-1] == 0:
        out.pop()
    return out


def _gcd_degree_mod_p(a: list[int], b: list[int], p: int) -> int:
    while b:
        inv = pow(b[-1], -1, p)
        db = len(b) - 1
        a = list(a)
        while len(a) - 1 >= db and a:
            c = a[-1] * inv % p
            shift = len(a) - 1 - db
            for j in range(db + 1):
                a[shift + j] = (a[shift + j] - c * b[j]) % p
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return len(a) - 1


def coprime_certified(a: Polynomial, b: Polynomial) -> bool:
    """True when a mod-p image proves gcd(a, b) = 1 over Q."""
    if not (a._rational and b._rational):
        return False
    for p in _SCREEN_PRIMES:
        ap = _mod_p_list(a.coeffs, p)
        bp = _mod_p_list(b.coeffs, p)
        if ap is None or bp is None or len(ap) != len(a) or len(bp) != len(b):
            continue
        return _gcd_degree_mod_p(ap, bp, p) == 0
    return False


def _int_content(c: Sequence[int]) -> int:
    g = 0
    for x in c:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer coefficient lists."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for j in range(db + 1):
            r[shift + j] -= c * b[j]
        while r and r[-1] == 0:
            r.pop()
        if r:
            g = _int_content(r)
            if g > 1:
                r = [x // g for x in r]
    return r


def _int_gcd(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _int_prem(a, b)
        if r:
            g = _int_content(r)
            r = [x // g for x in r]
        a, b = b, r
    return a


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd (zero if both inputs are zero)."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return Polynomial([1])
    if a._rational and b._rational:
        if coprime_certified(a, b):
            return Polynomial([1])
        g = _int_gcd(a.primitive_integer(), b.primitive_integer())
        return Polynomial([Fraction(c) for c in g]).monic()
    x, y = a, b
    while not y.is_zero():
        x, y = y, x % y
    return x.monic()


def squarefree_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: monic squarefree, pairwise coprime factors with multiplicities."""
    if p.is_constant():
        return []
    f = p.monic()
    df = f.derivative()
    a0 = poly_gcd(f, df)
    out: list[tuple[Polynomial, int]] = []
    if a0.is_constant():
        return [(f, 1)]
    b = f.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.derivative()
    i = 1
    while not b.is_constant():
        a = poly_gcd(b, d)
        if not a.is_constant():
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def has_multiple_roots(p: Polynomial) -> bool:
    if p.degree < 2:
        return False
    return not poly_gcd(p, p.derivative()).is_constant()


# --------------------------------------------------------------------------
# RationalFunction
# --------------------------------------------------------------------------

class RationalFunction:
    """Reduced quotient num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial | Any, den: Polynomial | Any = None, *, reduced: bool = False):
        num = num if isinstance(num, Polynomial) else Polynomial([num])
        den = Polynomial([1]) if den is None else (den if isinstance(den, Polynomial) else Polynomial([den]))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not reduced:
            if num.is_zero():
                den = Polynomial([1])
            elif not den.is_constant():
                g = poly_gcd(num, den)
                if not g.is_constant():
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lead = den.lead
            if lead != 1:
                num = num / lead
                den = den.monic()
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: Polynomial) -> "RationalFunction":
        return cls(p, Polynomial([1]), reduced=True)

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_monic(self) -> bool:
        return self.num.is_monic() and self.den.is_monic()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise TypeError(f"{self} is not a polynomial")
        return self.num

    def poles(self) -> Polynomial:
        return self.den

    def __call__(self, x: Any) -> Any:
        if isinstance(x, (Polynomial, RationalFunction)):
            return self.compose(x if isinstance(x, RationalFunction) else RationalFunction.from_poly(x))
        d = self.den(x)
        if d == 0:
            raise PoleError(f"{x} is a pole of {self}")
        return self.num(x) / d

    def compose(self, inner: "RationalFunction | Polynomial") -> "RationalFunction":
        if isinstance(inner, Polynomial):
            inner = RationalFunction.from_poly(inner)
        if self.is_polynomial() and inner.is_polynomial():
            return RationalFunction.from_poly(self.num.compose(inner.num))
        A, B = inner.num, inner.den
        N = self.degree
        if N * max(inner.degree, 1) > MAX_DEGREE:
            raise SizeLimitError(f"composition degree exceeds {MAX_DEGREE}")
        Bpow = [Polynomial([1])]
        for _ in range(N):
            Bpow.append(Bpow[-1] * B)

        def homog(p: Polynomial) -> Polynomial:
            acc = Polynomial()
            Apow = Polynomial([1])
            for i, c in enumerate(p.coeffs):
                if c != 0:
                    acc = acc + (Apow * Bpow[N - i]).scale(c)
                if i < p.degree:
                    Apow = Apow * A
            return acc

        num, den = homog(self.num), homog(self.den)
        if den.is_zero():
            raise CompositionError(f"composition {self} o {inner} has zero denominator")
        return RationalFunction(num, den)

    # field operations
    def __mul__(self, other: Any) -> "RationalFunction":
        o = _as_rf(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "RationalFunction":
        o = _as_rf(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __add__(self, other: Any) -> "RationalFunction":
        o = _as_rf(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "RationalFunction":
        o = _as_rf(other)
        return RationalFunction(self.num * o.den - o.num * self.den, self.den * o.den)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduced=True)

    def __pow__(self, n: int) -> "RationalFunction":
        if n >= 0:
            return RationalFunction(self.num**n, self.den**n, reduced=True).renormalized()
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return RationalFunction(self.den ** (-n), self.num ** (-n))

    def renormalized(self) -> "RationalFunction":
        return RationalFunction(self.num, self.den, reduced=True) if self.den.is_monic() else RationalFunction(self.num, self.den)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, Polynomial)):
            other = _as_rf(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        return f"{_wrap(self.num)}/{_wrap(self.den)}"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}


def _wrap(p: Polynomial) -> str:
    text = str(p)
    return text if p.term_count() == 1 and " " not in text else f"({text})"


def _as_rf(x: Any) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction.from_poly(x)
    return RationalFunction(Polynomial([x]))


def as_rational_function(x: Any) -> RationalFunction:
    return _as_rf(x)


def reduce(num: Polynomial, den: Polynomial) -> RationalFunction:
    return RationalFunction(num, den)


def compose(outer: Any, inner: Any) -> RationalFunction | Polynomial:
    """Exact composition; polynomial inputs give a polynomial result."""
    if isinstance(outer, Polynomial) and isinstance(inner, Polynomial):
        return outer.compose(inner)
    return _as_rf(outer).compose(_as_rf(inner))


def iterate(phi: Any, n: int, max_degree: int = MAX_DEGREE, max_bits: int = 50_000_000):
    """n-th iterate; ``iterate(phi, 0)`` is X."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    poly = isinstance(phi, Polynomial)
    rf = phi if poly else _as_rf(phi)
    current: Any = X if poly else _as_rf(X)
    for k in range(1, n + 1):
        deg_next = rf.degree * max(current.degree, 1)
        if deg_next > max_degree:
            raise SizeLimitError(f"iterate {k} would have degree {deg_next} > {max_degree}", reached=k - 1)
        current = rf.compose(current) if poly else rf.compose(current)
        size = current.bit_size() if poly else current.num.bit_size() + current.den.bit_size()
        if size > max_bits:
            raise SizeLimitError(f"iterate {k} exceeds {max_bits} coefficient bits", reached=k)
    return current


# --------------------------------------------------------------------------
# families
# --------------------------------------------------------------------------

_CHEB: list[Polynomial] = [Polynomial([2]), Polynomial([0, 1])]


def chebyshev(d: int) -> Polynomial:
    """Monic Chebyshev polynomial with T_d(X + 1/X) = X^d + X^-d."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    while len(_CHEB) <= d:
        _CHEB.append(X * _CHEB[-1] - _CHEB[-2])
    return _CHEB[d]


_CYCLO: dict[int, Polynomial] = {}


def _mobius(n: int) -> int:
    exps = factor_integer(n).exponents
    if any(e > 1 for e in exps.values()):
        return 0
    return -1 if len(exps) % 2 else 1


def cyclotomic(n: int) -> Polynomial:
    """Phi_n as the product of (X^d - 1)^mu(n/d) over divisors d of n."""
    if n < 1:
        raise ValueError("n must be positive")
    if n not in _CYCLO:
        a = [1]
        divs = divisors(n)
        for d in divs:
            if _mobius(n // d) == 1:
                out = [0] * (len(a) + d)
                for i, c in enumerate(a):
                    out[i] -= c
                    out[i + d] += c
                a = out
        for d in divs:
            if _mobius(n // d) == -1:
                q = [0] * (len(a) - d)
                for i in range(len(q)):
                    q[i] = (q[i - d] if i >= d else 0) - a[i]
                a = q
        _CYCLO[n] = Polynomial(a)
    return _CYCLO[n]


# --------------------------------------------------------------------------
# coprime bases
# --------------------------------------------------------------------------

class CoprimeBase:
    """Pairwise coprime monic squarefree polynomials plus an exponent matrix.

    ``matrix[i][j]`` is the exponent of ``elements[i]`` in input j, and
    input j equals ``constants[j] * prod(elements[i] ** matrix[i][j])``.
    """

    def __init__(self, elements: list[Polynomial], matrix: list[list[int]], constants: list):
        self.elements = elements
        self.matrix = matrix
        self.constants = constants

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.matrix]

    def reconstruct(self, j: int) -> RationalFunction:
        num = Polynomial([self.constants[j]])
        den = Polynomial([1])
        for e, row in zip(self.elements, self.matrix):
            if row[j] > 0:
                num = num * e ** row[j]
            elif row[j] < 0:
                den = den * e ** (-row[j])
        return RationalFunction(num, den, reduced=True)

    def __repr__(self) -> str:
        return f"CoprimeBase({[str(e) for e in self.elements]}, {self.matrix}, {self.constants})"


def _poly_key(p: Polynomial) -> tuple:
    return (p.degree, tuple(p.coeffs))


def refine_coprime(pieces: Iterable[Polynomial]) -> list[Polynomial]:
    """Refine monic squarefree polynomials into a pairwise coprime base."""
    work = [p.monic() for p in pieces if not p.is_constant()]
    seen: set = set()
    uniq = []
    for p in work:
        if p not in seen:
            seen.add(p)
            uniq.append(p)
    work = uniq
    base: list[Polynomial] = []
    while work:
        x = work.pop()
        for i, b in enumerate(base):
            if b == x:
                break
            g = poly_gcd(x, b)
            if g.is_constant():
                continue
            del base[i]
            for piece in (g, x.exact_div(g), b.exact_div(g)):
                if not piece.is_constant():
                    work.append(piece)
            break
        else:
            base.append(x)
    return sorted(base, key=_poly_key)


def _multiplicity(p: Polynomial, b: Polynomial) -> tuple[int, Polynomial]:
    e = 0
    if p.degree < b.degree:
        return 0, p
    if p._rational and b._rational and coprime_certified(p, b):
        return 0, p
    while p.degree >= b.degree:
        q, r = divmod(p, b)
        if not r.is_zero():
            break
        p = q
        e += 1
    return e, p


def coprime_base(inputs: Sequence[Any]) -> CoprimeBase:
    fns = [_as_rf(f) for f in inputs]
    if any(f.is_zero() for f in fns):
        raise ValueError("coprime_base inputs must be nonzero")
    pieces = []
    for f in fns:
        for part in (f.num, f.den):
            pieces += [q for q, _ in squarefree_decomposition(part)]
    elements = refine_coprime(pieces)
    matrix = [[0] * len(fns) for _ in elements]
    constants = []
    for j, f in enumerate(fns):
        for sign, part in ((1, f.num), (-1, f.den)):
            rest = part
            for i, b in enumerate(elements):
                e, rest = _multiplicity(rest, b)
                matrix[i][j] += sign * e
            if not rest.is_constant():
                raise ArithmeticError("coprime base does not generate input")
        constants.append(f.num.lead / f.den.lead)
    return CoprimeBase(elements, matrix, constants)


# --------------------------------------------------------------------------
# sparsity
# --------------------------------------------------------------------------

def term_count(p: Polynomial) -> int:
    return p.term_count()


def _cofactor_constants(f: RationalFunction, limit: int = 12) -> list[Fraction]:
    nums: set[int] = {1}
    dens: set[int] = {1}
    for c in f.num.coeffs + f.den.coeffs:
        if type(c) is not Fraction or c == 0:
            continue
        if abs(c.numerator) < 10**12:
            nums.update(divisors(c.numerator)[:limit])
        if c.denominator < 10**12:
            dens.update(divisors(c.denominator)[:limit])
    cands = {Fraction(s * a, b) for a in nums for b in dens for s in (1, -1)}
    return sorted(cands, key=lambda q: (abs(q.numerator) + q.denominator, q))[: 4 * limit]


def _cofactor_family(f: RationalFunction, D: int) -> list[Polynomial]:
    fam: list[Polynomial] = [Polynomial([1])]
    if D <= 0:
        return fam
    cs = _cofactor_constants(f)
    binomials = [Polynomial.monomial(a) - c for a in range(1, D + 1) for c in cs]
    fam += binomials
    for i, b1 in enumerate(binomials):
        for b2 in binomials[i:]:
            if b1.degree + b2.degree <= D:
                fam.append(b1 * b2)
    dense = [Polynomial([c, 1]) for c in cs]
    if D >= 2:
        dense += [Polynomial([c0, c1, 1]) for c0 in cs for c1 in cs]
    fam += dense
    # the reduced parts themselves are natural cofactors
    for part in (f.num, f.den):
        for q, _ in squarefree_decomposition(part):
            if 0 < q.degree <= D:
                fam.append(q)
    return fam


def sparsity_upper(phi: Any, cofactor_degree: int) -> int:
    """Certified upper bound on the sparsity S(phi).

    Minimizes total term count of ``num*h`` and ``den*h`` over a finite
    cofactor family of degree at most ``cofactor_degree``: binomials
    ``X^a - c`` and their pairwise products, monic dense cofactors of degree
    at most two, and squarefree parts of phi itself, with constants ``c``
    drawn from divisors of phi's coefficients.
    """
    if cofactor_degree < 0:
        raise ValueError("cofactor degree must be nonnegative")
    f = _as_rf(phi)
    if f.is_zero():
        return 1
    best = f.num.term_count() + f.den.term_count()
    for h in _cofactor_family(f, cofactor_degree):
        if h.is_zero() or h.degree > cofactor_degree:
            continue
        best = min(best, (f.num * h).term_count() + (f.den * h).term_count())
    return best


def fz_lower_bound(n: int, d: int) -> float:
    """Lower bound ((n-5) log d - log 2016)/log 5 for the sparsity of iterates."""
    if n < 1 or d < 2:
        raise ValueError("need n >= 1 and d >= 2")
    return ((n - 5) * math.log(d) - math.log(2016)) / math.log(5)


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, max_exponent: int):
        self.text = text
        self.pos = 0
        self.max_exponent = max_exponent

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.pos, self.text)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self) -> RationalFunction:
        if not self.text.strip():
            raise self.error("empty expression")
        value = self.expr()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return value

    def expr(self) -> RationalFunction:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek() in ("+", "-") and self.peek():
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RationalFunction:
        value = self.factor()
        while self.peek() in ("*", "/") and self.peek():
            op = self.text[self.pos]
            self.pos += 1
            at = self.pos
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    self.pos = at
                    raise self.error("division by zero")
                value = value / rhs
        return value

    def factor(self) -> RationalFunction:
        base = self.base()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                raise self.error("expected nonnegative integer exponent")
            e = int(self.text[start : self.pos])
            if e > self.max_exponent or e * max(base.degree, 1) > MAX_DEGREE:
                self.pos = start
                raise self.error(f"exponent overflow ({e})")
            base = base**e
        return base

    def base(self) -> RationalFunction:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            self.expect(")")
            return value
        if ch in ("X", "x"):
            self.pos += 1
            return RationalFunction.from_poly(X)
        if ch == "-":
            self.pos += 1
            return -self.base()
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            num = int(self.text[start : self.pos])
            # an inline '/digits' belongs to the rational literal
            if self.pos < len(self.text) and self.text[self.pos] == "/":
                j = self.pos + 1
                k = j
                while k < len(self.text) and self.text[k].isdigit():
                    k += 1
                if k > j and (k == len(self.text) or self.text[k] != "^"):
                    den = int(self.text[j:k])
                    if den == 0:
                        self.pos = j
                        raise self.error("zero denominator")
                    self.pos = k
                    return RationalFunction(Polynomial([Fraction(num, den)]))
            return RationalFunction(Polynomial([Fraction(num)]))
        if not ch:
            raise self.error("unexpected end of expression")
        raise self.error(f"unexpected {ch!r}")


def parse_rational_function(text: str, max_exponent: int = MAX_DEGREE) -> RationalFunction:
    return _Parser(text, max_exponent).parse()


def parse_poly(text: str, max_exponent: int = MAX_DEGREE) -> Polynomial:
    """Parse an expression in X over Q into a canonical Polynomial."""
    rf = parse_rational_function(text, max_exponent)
    if not rf.is_polynomial():
        raise ParseError("expression is not a polynomial", None, text)
    return rf.num
