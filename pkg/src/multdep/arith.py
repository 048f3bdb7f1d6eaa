"""Exact integer and rational arithmetic.

Rationals are :class:`fractions.Fraction` values throughout the package; this
module adds strict text parsing, factorization, p-adic valuations, Weil
height and integer coprime bases.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^(-?)(\d+)(?:/(\d+))?$")

_TRIAL_LIMIT = 10_000
# Deterministic Miller-Rabin for n < 3.3e24 (first 13 primes).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_BASES_WIDE = _MR_BASES + (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981


class ArithmeticInputError(ValueError):
    """Illegal input to an exact-arithmetic routine (zero, composite p, ...)."""


class BaseIncompleteError(ValueError):
    """Raised when an exponent vector is requested over a base missing primes."""

    def __init__(self, missing: Sequence[int]):
        self.missing = list(missing)
        super().__init__(f"base incomplete: missing primes {self.missing}")


def parse_rational(text: str) -> Fraction:
    """Parse ``-?digits(/digits)?`` into a Fraction. Floats are rejected."""
    m = _RATIONAL_RE.match(text.strip())
    if not m:
        raise ArithmeticInputError(f"not an exact rational literal: {text!r}")
    sign, num, den = m.groups()
    d = int(den) if den is not None else 1
    if d == 0:
        raise ArithmeticInputError(f"zero denominator in {text!r}")
    q = Fraction(int(num), d)
    return -q if sign else q


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# primality and factorization
# --------------------------------------------------------------------------

def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


SMALL_PRIMES = _small_primes(_TRIAL_LIMIT)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in SMALL_PRIMES[:25]:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_DETERMINISTIC_LIMIT else _MR_BASES_WIDE
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n."""
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard rho failed on {n}")


@dataclass(frozen=True)
class Factorization:
    sign: int
    exponents: dict[int, int] = field(default_factory=dict)

    def value(self) -> Fraction:
        out = Fraction(self.sign)
        for p, e in self.exponents.items():
            out *= Fraction(p) ** e
        return out


def _factor_positive(n: int, out: dict[int, int]) -> None:
    for p in SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = out.get(p, 0) + e
    if n == 1:
        return
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        g = _pollard_brent(m)
        stack += [g, m // g]


def factor_integer(n: int) -> Factorization:
    """Factor a nonzero integer; primes in ascending order."""
    if n == 0:
        raise ArithmeticInputError("cannot factor 0")
    exps: dict[int, int] = {}
    _factor_positive(abs(n), exps)
    return Factorization(1 if n > 0 else -1, dict(sorted(exps.items())))


def factor_rational(q: Fraction) -> Factorization:
    q = Fraction(q)
    if q == 0:
        raise ArithmeticInputError("cannot factor 0")
    exps: dict[int, int] = {}
    _factor_positive(abs(q.numerator), exps)
    den: dict[int, int] = {}
    _factor_positive(q.denominator, den)
    for p, e in den.items():
        exps[p] = -e
    return Factorization(1 if q > 0 else -1, dict(sorted(exps.items())))


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(q: Fraction | int, p: int) -> int:
    """Additive p-adic valuation of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise ArithmeticInputError("valuation of 0 is undefined here")
    if not is_prime(p):
        raise ArithmeticInputError(f"{p} is not prime")
    return _int_valuation(abs(q.numerator), p) - _int_valuation(q.denominator, p)


def weil_height(q: Fraction | int) -> float:
    q = Fraction(q)
    if q == 0:
        raise ArithmeticInputError("height of 0 is undefined here")
    return math.log(max(abs(q.numerator), q.denominator))


def exponent_vector(q: Fraction | int, base: Sequence[int]) -> tuple[list[int], int]:
    """Exponents of ``q`` over the prime list ``base`` and its sign."""
    q = Fraction(q)
    if q == 0:
        raise ArithmeticInputError("exponent vector of 0")
    num, den = abs(q.numerator), q.denominator
    vec = []
    for p in base:
        a = b = 0
        while num % p == 0:
            num //= p
            a += 1
        while den % p == 0:
            den //= p
            b += 1
        vec.append(a - b)
    if num != 1 or den != 1:
        missing = sorted(set(factor_integer(num).exponents) | set(factor_integer(den).exponents))
        raise BaseIncompleteError(missing)
    return vec, (1 if q > 0 else -1)


# --------------------------------------------------------------------------
# coprime bases of integers (factor refinement)
# --------------------------------------------------------------------------

def integer_coprime_base(values: Iterable[int]) -> list[int]:
    """Pairwise coprime integers > 1 generating every input multiplicatively.

    Factor refinement by repeated gcd splitting; no factorization is performed,
    so this scales to integers far beyond the reach of :func:`factor_integer`.
    """
    work = sorted({abs(v) for v in values if abs(v) > 1})
    base: list[int] = []
    while work:
        x = work.pop()
        for i, b in enumerate(base):
            g = math.gcd(x, b)
            if g == 1:
                continue
            del base[i]
            for piece in (g, x // g, b // g):
                if piece > 1:
                    work.append(piece)
            break
        else:
            base.append(x)
    return sorted(base)


def integer_base_exponents(n: int, base: Sequence[int]) -> list[int]:
    """Exponents of |n| over a pairwise coprime base that generates it."""
    n = abs(n)
    out = []
    for b in base:
        e = 0
        while n % b == 0:
            n //= b
            e += 1
        out.append(e)
    if n != 1:
        raise BaseIncompleteError([n])
    return out


def euler_phi(n: int) -> int:
    result = n
    for p in factor_integer(n).exponents:
        result = result // p * (p - 1)
    return result


def divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return []
    divs = [1]
    for p, e in factor_integer(n).exponents.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of the integer n, or None."""
    if k == 1:
        return n
    if n < 0:
        if k % 2 == 0:
            return None
        r = integer_root(-n, k)
        return None if r is None else -r
    if n < 2:
        return n
    # integer Newton from above converges to floor(n ** (1/k))
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x**k == n else None


def rational_root(q: Fraction, k: int) -> Fraction | None:
    q = Fraction(q)
    a = integer_root(q.numerator, k)
    b = integer_root(q.denominator, k)
    if a is None or b is None:
        return None
    return Fraction(a, b)
