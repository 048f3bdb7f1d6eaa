"""Arithmetic in explicitly presented number fields ``K = Q[x]/(m(x))``."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .arith import SMALL_PRIMES, divisors, euler_phi, parse_rational
from .poly import Polynomial, X, cyclotomic, int_poly_mul, parse_poly
from .roots import (
    DEFAULT_PRECISION,
    Enclosure,
    RootDisk,
    certified_roots,
    iv_hi,
    iv_lo,
    iv_rational,
    working_precision,
)

from mpmath import iv, mp


class FieldMismatchError(ValueError):
    pass


class ReducibleModulusError(ValueError):
    pass


# --------------------------------------------------------------------------
# irreducibility evidence
# --------------------------------------------------------------------------

def _rational_roots(p: Polynomial) -> list[Fraction]:
    ints = p.primitive_integer()
    if ints[0] == 0:
        return [Fraction(0)]
    out = []
    for a in divisors(ints[0]):
        for b in divisors(ints[-1]):
            for s in (1, -1):
                q = Fraction(s * a, b)
                if q not in out and p(q) == 0:
                    out.append(q)
    return out


def _pmod_poly(a: list[int], m: list[int], p: int) -> list[int]:
    """a mod m over F_p (m monic mod p)."""
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1] % p
        if c:
            shift = len(a) - 1 - dm
            for j in range(dm + 1):
                a[shift + j] = (a[shift + j] - c * m[j]) % p
        a.pop()
    while a and a[-1] % p == 0:
        a.pop()
    return [x % p for x in a]


def _pmul(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    return _pmod_poly(int_poly_mul(a, b), m, p)


def _ppow_x(e: int, m: list[int], p: int) -> list[int]:
    result, base = [1], [0, 1]
    while e:
        if e & 1:
            result = _pmul(result, base, m, p)
        e >>= 1
        if e:
            base = _pmul(base, base, m, p)
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    b = [x % p for x in b]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    while b:
        inv = pow(b[-1], -1, p)
        bm = [x * inv % p for x in b]
        a = _pmod_poly(a, bm, p)
        a, b = b, a
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _pdiv(a: list[int], b: list[int], p: int) -> list[int]:
    """Exact quotient a/b over F_p."""
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] * inv % p
        q[i] = c
        for j in range(db + 1):
            a[i + j] = (a[i + j] - c * b[j]) % p
    return q


def _ddf_degrees(m: list[int], p: int) -> list[int] | None:
    """Degrees of the irreducible factors of m mod p (None if not squarefree)."""
    n = len(m) - 1
    inv = pow(m[-1], -1, p)
    f = [x * inv % p for x in m]
    df = [(i * c) % p for i, c in enumerate(f)][1:]
    if len(_pgcd(f, df, p)) > 1:
        return None
    degrees: list[int] = []
    h = [0, 1]
    rest = f
    k = 0
    while len(rest) - 1 >= 2 * (k + 1):
        k += 1
        h = _ppow_x(p, rest, p) if k == 1 else _pmul_pow(h, p, rest)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        while diff and diff[-1] == 0:
            diff.pop()
        g = _pgcd(rest, diff, p)
        if len(g) > 1:
            degrees += [k] * ((len(g) - 1) // k)
            rest = _pdiv(rest, g, p)
            h = _pmod_poly(h, rest, p)
    if len(rest) > 1:
        degrees.append(len(rest) - 1)
    assert sum(degrees) == n
    return degrees


def _pmul_pow(h: list[int], p: int, m: list[int]) -> list[int]:
    """h(x)^p mod m, i.e. the Frobenius image of h."""
    result, base, e = [1], h, p
    while e:
        if e & 1:
            result = _pmul(result, base, m, p)
        e >>= 1
        if e:
            base = _pmul(base, base, m, p)
    return result


def _subset_sums(degrees: list[int]) -> set[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def irreducibility_evidence(m: Polynomial, primes: int = 12) -> str:
    """``'proved'`` when irreducibility over Q is certified, else ``'asserted'``.

    Raises :class:`ReducibleModulusError` on a rational root.
    """
    n = m.degree
    if n == 1:
        return "proved"
    roots = _rational_roots(m)
    if roots:
        raise ReducibleModulusError(f"modulus {m} has rational root {roots[0]}")
    if n <= 3:
        return "proved"
    if any(m == cyclotomic(w) for w in _candidate_orders(n)):
        return "proved"
    ints = m.primitive_integer()
    possible = set(range(1, n))
    used = 0
    for p in SMALL_PRIMES[1:]:
        if ints[-1] % p == 0:
            continue
        degs = _ddf_degrees(ints, p)
        if degs is None:
            continue
        possible &= _subset_sums(degs)
        used += 1
        if not possible:
            return "proved"
        if used >= primes:
            break
    return "asserted"


# --------------------------------------------------------------------------
# NumberField / FieldElement
# --------------------------------------------------------------------------

class NumberField:
    """``Q[x]/(m(x))`` for a monic modulus m; irreducibility recorded as evidence."""

    _cyclotomic_cache: dict[int, "NumberField"] = {}

    def __init__(self, modulus: Polynomial | Sequence, irreducibility: str | None = None, name: str | None = None):
        m = modulus if isinstance(modulus, Polynomial) else Polynomial(modulus)
        if m.degree < 1:
            raise ValueError("modulus must have degree >= 1")
        if not m.is_rational():
            raise ValueError("modulus must have rational coefficients")
        self.modulus = m.monic()
        self.degree = self.modulus.degree
        self.irreducibility = irreducibility or irreducibility_evidence(self.modulus)
        self.name = name
        self._integral = all(c.denominator == 1 for c in self.modulus.coeffs)
        self._int_mod = [c.numerator for c in self.modulus.coeffs] if self._integral else None
        self._embeddings: dict[int, list[RootDisk]] = {}

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls(X, "proved", "Q")

    @classmethod
    def cyclotomic(cls, n: int) -> "NumberField":
        if n not in cls._cyclotomic_cache:
            cls._cyclotomic_cache[n] = cls(cyclotomic(n), "proved", f"cyclotomic:{n}")
        return cls._cyclotomic_cache[n]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(self.modulus)

    def __repr__(self) -> str:
        return f"NumberField({self.name or str(self.modulus)})"

    def to_json(self) -> dict:
        return {"modulus": self.modulus.to_json(), "irreducibility": self.irreducibility}

    # element construction
    def __call__(self, value: Any) -> "FieldElement":
        return self.element(value)

    def element(self, value: Any) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError("element belongs to another field")
            return value
        if isinstance(value, Polynomial):
            return FieldElement._from_poly(self, value)
        if isinstance(value, (int, Fraction)):
            return FieldElement(self, [value])
        if isinstance(value, str):
            return FieldElement._from_poly(self, parse_poly(value))
        return FieldElement(self, list(value))

    def gen(self) -> "FieldElement":
        return FieldElement._from_poly(self, X)

    def one(self) -> "FieldElement":
        return FieldElement(self, [1])

    def zero(self) -> "FieldElement":
        return FieldElement(self, [])

    # embeddings
    def embeddings(self, precision: int = DEFAULT_PRECISION) -> list[RootDisk]:
        """Certified disks around the roots of the modulus, one per embedding."""
        if precision not in self._embeddings:
            self._embeddings[precision] = certified_roots(self.modulus, precision)
        return self._embeddings[precision]


def _reduce_int(coeffs: list[int], m: list[int]) -> list[int]:
    n = len(m) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, n - 1, -1):
        t = c[i]
        if t:
            base = i - n
            for j in range(n):
                if m[j]:
                    c[base + j] -= t * m[j]
        c.pop()
    return c


class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Iterable[Any]):
        cs = [Fraction(c) for c in coords]
        n = field.degree
        if len(cs) > n:
            p = divmod(Polynomial(cs), field.modulus)[1]
            cs = list(p.coeffs)
        cs += [Fraction(0)] * (n - len(cs))
        self.field = field
        self.coords: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def _from_poly(cls, field: NumberField, p: Polynomial) -> "FieldElement":
        if p.degree >= field.degree:
            p = divmod(p, field.modulus)[1]
        return cls(field, p.coeffs)

    def poly(self) -> Polynomial:
        return Polynomial(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def _coerce(self, other: Any) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [other])
        return NotImplemented

    def __add__(self, other: Any) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other: Any) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other: Any) -> "FieldElement":
        return (-self) + other

    def __mul__(self, other: Any) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coords])
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        K = self.field
        if K.degree == 1:
            return FieldElement(K, [self.coords[0] * o.coords[0]])
        if K._integral:
            da = _common_den(self.coords)
            db = _common_den(o.coords)
            ia = [c.numerator * (da // c.denominator) for c in self.coords]
            ib = [c.numerator * (db // c.denominator) for c in o.coords]
            prod = _reduce_int(int_poly_mul(ia, ib), K._int_mod)
            d = da * db
            return FieldElement(K, [Fraction(c, d) for c in prod])
        return FieldElement._from_poly(K, self.poly() * o.poly())

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        K = self.field
        if self.is_rational():
            return FieldElement(K, [1 / self.coords[0]])
        cs = self.coords
        if not any(cs[2:]):
            # c0 + c1 x = c1 (x - r): (x - r)^-1 = -q(x)/m(r) with m = (x - r) q + m(r)
            c0, c1 = cs[0], cs[1]
            r = -c0 / c1
            q = []
            acc = Fraction(0)
            for c in reversed(K.modulus.coeffs):
                acc = acc * r + c
                q.append(acc)
            mr = q.pop()
            q.reverse()
            scale = -1 / (c1 * mr)
            return FieldElement(K, [x * scale for x in q])
        # extended Euclid: s*a + t*m = 1
        r0, r1 = K.modulus, self.poly()
        s0, s1 = Polynomial(), Polynomial([1])
        while not r1.is_constant():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r1.is_zero():
            raise ZeroDivisionError("element is a zero divisor; modulus is reducible")
        return FieldElement._from_poly(K, s1 / r1.coeffs[0])

    def __truediv__(self, other: Any) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.field, [a / other for a in self.coords])
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> "FieldElement":
        return self.inverse() * other

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.coords)

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.coords[0])
        return str(self.poly()).replace("X", "x")

    def __repr__(self) -> str:
        return f"FieldElement({self})"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]

    def embed(self, precision: int = DEFAULT_PRECISION) -> list:
        """Interval enclosures of sigma(self) for every complex embedding sigma."""
        disks = self.field.embeddings(precision)
        out = []
        with working_precision(precision + 32):
            coeffs = [iv_rational(c) for c in reversed(self.coords)]
            for d in disks:
                z = d.box()
                acc = coeffs[0]
                for c in coeffs[1:]:
                    acc = acc * z + c
                out.append(acc)
        return out

    def trace(self) -> Fraction:
        """Trace via Newton power sums of the modulus roots."""
        K = self.field
        n = K.degree
        m = K.modulus.coeffs
        power_sums = [Fraction(n)]
        for k in range(1, n):
            s = -k * m[n - k]
            for i in range(1, k):
                s -= m[n - i] * power_sums[k - i]
            power_sums.append(s)
        return sum(c * ps for c, ps in zip(self.coords, power_sums))


def _common_den(coeffs: Sequence[Fraction]) -> int:
    d = 1
    for c in coeffs:
        q = c.denominator
        if q != 1:
            d = d * q // math.gcd(d, q)
    return d


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.field != b.field:
        raise FieldMismatchError("elements of different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# --------------------------------------------------------------------------
# minimal polynomials and derived invariants
# --------------------------------------------------------------------------

def _solve_relation(vectors: list[Sequence[Fraction]]) -> list[Fraction] | None:
    """Nontrivial c with sum c_i v_i = 0 for the given vectors, or None."""
    k = len(vectors)
    dim = len(vectors[0])
    # columns are the vectors; eliminate rows
    rows = [[vectors[j][i] for j in range(k)] for i in range(dim)]
    pivots: list[int] = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, dim) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        f = rows[r][c]
        rows[r] = [x / f for x in rows[r]]
        for i in range(dim):
            if i != r and rows[i][c] != 0:
                g = rows[i][c]
                rows[i] = [x - g * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == dim:
            break
    free = [c for c in range(k) if c not in pivots]
    if not free:
        return None
    fc = free[0]
    sol = [Fraction(0)] * k
    sol[fc] = Fraction(1)
    for i, c in enumerate(pivots):
        sol[c] = -rows[i][fc]
    return sol


def _mobius_minpoly(a: FieldElement) -> Polynomial | None:
    """Minimal polynomial when a = (h x + e)/(g x + c) for rationals."""
    K = a.field
    if K.degree < 2:
        return None
    ax = a * K.gen()
    one = [Fraction(1)] + [Fraction(0)] * (K.degree - 1)
    xg = [Fraction(0), Fraction(1)] + [Fraction(0)] * (K.degree - 2)
    sol = _solve_relation([ax.coords, a.coords, xg, one])
    if sol is None:
        return None
    g, c, mh, me = sol
    if g == 0 and c == 0:
        return None
    h, e = -mh, -me
    # a (g x + c) = h x + e  =>  x = (e - c a)/(g a - h)
    # homogeneous Horner for sum m_i U^i V^(n-i) on integer linear forms
    lam = _common_den([e, c, h, g])
    u0, u1 = int(e * lam), int(-c * lam)
    v0, v1 = int(-h * lam), int(g * lam)
    n = K.degree
    md = _common_den(K.modulus.coeffs)
    m = [int(x * md) for x in K.modulus.coeffs]
    acc = [m[n]]
    vpow = [1]
    for i in range(n - 1, -1, -1):
        vpow = _lin_mul(vpow, v0, v1)
        acc = _lin_mul(acc, u0, u1)
        mi = m[i]
        if mi:
            for j, x in enumerate(vpow):
                acc[j] += mi * x
    while acc and acc[-1] == 0:
        acc.pop()
    if len(acc) - 1 != n:
        return None
    return Polynomial(acc).monic()


def _lin_mul(p: list[int], c0: int, c1: int) -> list[int]:
    """p * (c0 + c1 X) on integer coefficient lists."""
    out = [0] * (len(p) + 1)
    for i, x in enumerate(p):
        if x:
            out[i] += c0 * x
            out[i + 1] += c1 * x
    return out


def minimal_polynomial(a: FieldElement) -> Polynomial:
    """Monic minimal polynomial of a over Q."""
    if a.is_rational():
        return Polynomial([-a.coords[0], 1])
    mob = _mobius_minpoly(a)
    if mob is not None:
        return mob
    K = a.field
    n = K.degree
    # incremental elimination over powers 1, a, a^2, ...
    basis: list[tuple[list[Fraction], list[Fraction], int]] = []  # (reduced vec, combo, pivot)
    power = K.one()
    for k in range(n + 1):
        vec = list(power.coords)
        combo = [Fraction(0)] * (n + 1)
        combo[k] = Fraction(1)
        for bvec, bcombo, piv in basis:
            f = vec[piv]
            if f != 0:
                vec = [x - f * y for x, y in zip(vec, bvec)]
                combo = [x - f * y for x, y in zip(combo, bcombo)]
        piv = next((i for i, x in enumerate(vec) if x != 0), None)
        if piv is None:
            return Polynomial(combo[: k + 1]).monic()
        f = vec[piv]
        vec = [x / f for x in vec]
        combo = [x / f for x in combo]
        basis.append((vec, combo, piv))
        power = power * a
    raise ArithmeticError("no linear relation among powers; modulus not irreducible?")


def is_algebraic_integer(a: FieldElement) -> bool:
    return all(c.denominator == 1 for c in minimal_polynomial(a).coeffs)


def norm(a: FieldElement) -> Fraction:
    mp_ = minimal_polynomial(a)
    k = mp_.degree
    c = mp_.coeffs[0] * (-1) ** k
    return c ** (a.field.degree // k)


def _candidate_orders(degree: int) -> list[int]:
    # phi(w) >= sqrt(w/2) bounds w <= 2 degree^2 (plus small-case slack)
    return [w for w in range(1, 2 * degree * degree + 3) if euler_phi(w) == degree]


def is_root_of_unity(a: FieldElement) -> int | None:
    """Smallest w with a^w = 1, or None."""
    if a.is_zero():
        raise ValueError("zero is not a root of unity")
    if a.is_rational():
        q = a.coords[0]
        return 1 if q == 1 else (2 if q == -1 else None)
    P = minimal_polynomial(a)
    if any(c.denominator != 1 for c in P.coeffs) or abs(P.coeffs[0]) != 1:
        return None
    for w in _candidate_orders(P.degree):
        if P == cyclotomic(w):
            if a**w == 1:
                return w
            raise ArithmeticError(f"minimal polynomial is cyclotomic({w}) but a^{w} != 1")
    return None


def house(a: FieldElement, precision: int = DEFAULT_PRECISION) -> Enclosure:
    """Max |sigma(a)| over conjugates, certified."""
    if a.is_zero():
        raise ValueError("house of zero")
    if a.is_rational():
        q = abs(a.coords[0])
        with working_precision(precision + 16):
            v = iv_rational(q)
            return Enclosure(iv_lo(v), iv_hi(v), exact=q)
    P = minimal_polynomial(a)
    disks = certified_roots(P, precision)
    encs = [d.abs_enclosure() for d in disks]
    return Enclosure(max(e.lo for e in encs), max(e.hi for e in encs))


def weil_height_alg(a: FieldElement, precision: int = DEFAULT_PRECISION) -> Enclosure:
    """Absolute logarithmic Weil height via the Mahler measure of the minimal polynomial."""
    if a.is_zero():
        raise ValueError("height of zero")
    P = minimal_polynomial(a)
    ints = P.primitive_integer()
    lead = abs(ints[-1])
    k = P.degree
    if lead == 1 and abs(ints[0]) == 1 and not a.is_rational() and is_root_of_unity(a) is not None:
        return Enclosure(mp.mpf(0), mp.mpf(0), exact=0)
    if a.is_rational():
        q = a.coords[0]
        with working_precision(precision + 16):
            v = iv.log(iv.mpf(max(abs(q.numerator), q.denominator)))
            exact = 0 if q in (1, -1) else None
            return Enclosure(iv_lo(v), iv_hi(v), exact=exact)
    disks = certified_roots(P, precision)
    with working_precision(precision + 32):
        total = iv.log(iv.mpf(lead))
        for d in disks:
            r = abs(d.box())
            hi = iv_hi(r)
            lo = iv_lo(r)
            if hi <= 1:
                continue
            total += iv.log(iv.mpf([max(lo, mp.mpf(1)), hi]))
        total = total / k
        return Enclosure(max(iv_lo(total), mp.mpf(0)), iv_hi(total))


# --------------------------------------------------------------------------
# textual field specs
# --------------------------------------------------------------------------

def parse_field(spec: str) -> NumberField:
    """``cyclotomic:n`` or JSON ``{"modulus": [rational strings, low->high]}``."""
    s = spec.strip()
    if s.startswith("cyclotomic:"):
        try:
            n = int(s.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"invalid cyclotomic field spec {spec!r}") from None
        if n < 1:
            raise ValueError("cyclotomic index must be positive")
        return NumberField.cyclotomic(n)
    if s in ("Q", "rationals"):
        return NumberField.rationals()
    try:
        data = json.loads(s)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid field spec {spec!r}: {exc}") from None
    if not isinstance(data, dict) or "modulus" not in data:
        raise ValueError("field spec must be an object with a 'modulus' list")
    mod = data["modulus"]
    if isinstance(mod, str):
        poly = parse_poly(mod)
    else:
        poly = Polynomial([parse_rational(str(c)) for c in mod])
    if not poly.is_monic():
        raise ValueError("field modulus must be monic")
    return NumberField(poly)


def parse_element(K: NumberField, text: Any) -> FieldElement:
    """Coordinate array (JSON list) or an expression in x."""
    if isinstance(text, list):
        return K.element([parse_rational(str(c)) for c in text])
    s = str(text).strip()
    if s.startswith("["):
        return parse_element(K, json.loads(s))
    return K.element(parse_poly(s))


def parse_elements(K: NumberField, text: str) -> list[FieldElement]:
    s = text.strip()
    if s.startswith("["):
        data = json.loads(s)
        if data and all(isinstance(v, list) for v in data):
            return [parse_element(K, v) for v in data]
        return [parse_element(K, v) for v in data]
    return [parse_element(K, part) for part in s.split(";") if part.strip()]
