"""Certified complex roots of rational polynomials.

Roots are approximated with the Aberth–Ehrlich iteration in mpmath and then
certified with Weierstrass inclusion disks: if ``W_i = p(z_i) / (lead *
prod_{j != i} (z_i - z_j))`` then the disks ``|z - z_i| <= n |W_i|`` contain
all roots, and when they are pairwise disjoint each holds exactly one.  The
corrections are evaluated in interval arithmetic, so the radii are rigorous.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from mpmath import iv, mp, mpc, mpf

from .poly import Polynomial, squarefree_decomposition

DEFAULT_PRECISION = 128
MAX_PRECISION = 8192


class PrecisionError(ArithmeticError):
    """Requested certification could not be reached within the precision cap."""


@contextlib.contextmanager
def working_precision(bits: int):
    old_mp, old_iv = mp.prec, iv.prec
    mp.prec = bits
    iv.prec = bits
    try:
        yield
    finally:
        mp.prec = old_mp
        iv.prec = old_iv


def iv_lo(x) -> mpf:
    return mp.make_mpf(x._mpi_[0])


def iv_hi(x) -> mpf:
    return mp.make_mpf(x._mpi_[1])


def iv_rational(q: Fraction):
    q = Fraction(q)
    if q.denominator == 1:
        return iv.mpf(q.numerator)
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


@dataclass
class Enclosure:
    """Certified real interval ``[lo, hi]``; ``exact`` holds a known closed form."""

    lo: Any
    hi: Any
    exact: Any = None

    @property
    def value(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        return float((self.lo + self.hi) / 2)

    @property
    def error(self) -> float:
        if self.exact is not None:
            return 0.0
        return float((self.hi - self.lo) / 2)

    def __float__(self) -> float:
        return self.value

    def contains(self, x: Any) -> bool:
        if self.exact is not None and isinstance(x, (int, Fraction)) and isinstance(self.exact, (int, Fraction)):
            return Fraction(x) == self.exact
        # convert well below the enclosure width; mpf comparisons are exact
        with mp.workprec(max(mp.prec, 1024)):
            x = mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpf(x)
            return self.lo <= x <= self.hi

    def __lt__(self, other: "Enclosure") -> bool:
        return self.hi < other.lo

    def __gt__(self, other: "Enclosure") -> bool:
        return self.lo > other.hi

    def to_json(self) -> dict:
        out = {"value": self.value, "error": self.error}
        if self.exact is not None and isinstance(self.exact, (int, Fraction)):
            out["exact"] = str(self.exact)
        return out

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"Enclosure(exact={self.exact})"
        return f"Enclosure({mp.nstr(self.lo, 20)}, {mp.nstr(self.hi, 20)})"


@dataclass
class RootDisk:
    center: mpc
    radius: mpf
    prec: int = DEFAULT_PRECISION

    def box(self):
        """Interval rectangle containing the disk (at the current iv precision)."""
        r = iv.mpf(self.radius)
        re, im = iv.mpf(self.center.real), iv.mpf(self.center.imag)
        return iv.mpc(re + iv.mpf([-1, 1]) * r, im + iv.mpf([-1, 1]) * r)

    def abs_enclosure(self) -> Enclosure:
        with working_precision(self.prec + 16):
            a = abs(self.box())
            return Enclosure(iv_lo(a), iv_hi(a))


def _horner(coeffs_high: Sequence, z):
    acc = coeffs_high[0]
    for c in coeffs_high[1:]:
        acc = acc * z + c
    return acc


def _initial_guesses(coeffs: list[mpf], n: int) -> list[mpc]:
    lead = abs(coeffs[-1])
    r = mpf(0)
    for i in range(n):
        if coeffs[i] != 0:
            r = max(r, (abs(coeffs[i]) / lead) ** (mpf(1) / (n - i)))
    r = r if r > 0 else mpf(1)
    return [r * mp.expj(2 * mp.pi * k / n + mpf("0.4")) for k in range(n)]


def _aberth(coeffs: list, z: list[mpc], tol: mpf, max_iter: int) -> tuple[list[mpc], bool]:
    n = len(z)
    high = list(reversed(coeffs))
    dhigh = [c * (n - i) for i, c in enumerate(high[:-1])]
    for _ in range(max_iter):
        worst = mpf(0)
        for k in range(n):
            zk = z[k]
            pv = _horner(high, zk)
            if pv == 0:
                continue
            dv = _horner(dhigh, zk)
            s = mpc(0)
            for j in range(n):
                if j != k:
                    s += 1 / (zk - z[j])
            ratio = pv / dv if dv != 0 else mpc(1)
            denom = 1 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            z[k] = zk - w
            worst = max(worst, abs(w) / max(mpf(1), abs(z[k])))
        if worst <= tol:
            return z, True
    return z, False


def _certify(coeffs: Sequence[Fraction], z: list[mpc]) -> list[mpf] | None:
    n = len(z)
    high = [iv_rational(c) for c in reversed(coeffs)]
    lead = high[0]
    Z = [iv.mpc(c.real, c.imag) for c in z]
    radii = []
    for i in range(n):
        pv = _horner(high, Z[i])
        prod = lead
        for j in range(n):
            if j != i:
                prod = prod * (Z[i] - Z[j])
        W = pv / prod
        radii.append(iv_hi(abs(W)) * n)
    for i in range(n):
        for j in range(i + 1, n):
            gap = iv_lo(abs(Z[i] - Z[j]))
            if gap <= radii[i] + radii[j]:
                return None
    return radii


def certified_roots(p: Polynomial, precision: int = DEFAULT_PRECISION) -> list[RootDisk]:
    """Isolating disks for the roots of a squarefree rational polynomial.

    Each radius is at most ``2^-precision * max(1, |center|)``.  Disks are
    returned in a fixed order (by real part, then imaginary part).
    """
    if p.degree < 1:
        return []
    if not p.is_rational():
        raise TypeError("certified_roots needs rational coefficients")
    if p.degree == 1:
        r = -p.coeffs[0] / p.coeffs[1]
        with working_precision(precision + 16):
            c = mpc(mpf(r.numerator) / r.denominator, 0)
            rad = abs(c) * mpf(2) ** (-precision - 8)
        return [RootDisk(c, rad, precision + 16)]
    bits = precision + 32
    z = None
    while bits <= MAX_PRECISION:
        with working_precision(bits):
            coeffs = [mpf(c.numerator) / c.denominator for c in p.coeffs]
            if z is None:
                z = _initial_guesses(coeffs, p.degree)
            else:
                z = [mpc(c) for c in z]
            z, _ = _aberth(coeffs, z, mpf(2) ** (-(bits - 8)), 60 + 10 * p.degree)
            radii = _certify(p.coeffs, z)
            if radii is not None:
                target = mpf(2) ** (-precision)
                if all(r <= target * max(mpf(1), abs(c)) for r, c in zip(radii, z)):
                    disks = [RootDisk(c, r, bits) for c, r in zip(z, radii)]
                    disks.sort(key=lambda d: (d.center.real, d.center.imag))
                    return disks
        bits *= 2
    raise PrecisionError(f"could not certify roots of degree-{p.degree} polynomial")


def squarefree_part(p: Polynomial) -> Polynomial:
    out = Polynomial([1])
    for q, _ in squarefree_decomposition(p):
        out = out * q
    return out


def max_abs_root(p: Polynomial, precision: int = DEFAULT_PRECISION) -> Enclosure:
    disks = certified_roots(squarefree_part(p), precision)
    encs = [d.abs_enclosure() for d in disks]
    return Enclosure(max(e.lo for e in encs), max(e.hi for e in encs))
