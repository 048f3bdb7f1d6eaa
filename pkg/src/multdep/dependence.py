"""Multiplicative dependence: exact lattices over Q, bounded search in number fields,
and divisor-lattice checks for rational functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .arith import ArithmeticInputError, format_rational, integer_base_exponents, integer_coprime_base
from .lattice import integer_kernel, normalize_sign, shortest_max_norm
from .numberfield import FieldElement, NumberField, is_root_of_unity
from .poly import Polynomial, RationalFunction, as_rational_function, coprime_base, squarefree_decomposition
from .roots import iv_hi, iv_lo, working_precision

from mpmath import mp

DEFAULT_MAX_CANDIDATES = 10**7


class CertificationError(AssertionError):
    """A relation failed its exact re-verification (internal error)."""


class SearchSpaceError(ValueError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"search space of {count} candidates exceeds cap {cap}")


@dataclass
class Relation:
    exponents: tuple[int, ...]
    witness_order: int = 1
    certificate: str = ""

    def to_json(self) -> dict:
        return {"exponents": list(self.exponents), "witness_order": self.witness_order}


@dataclass
class IndependenceVerdict:
    dependent: bool
    relation: Relation | None = None
    method: str = "complete-lattice"
    bound: int | None = None
    constant: Any = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "dependent": self.dependent,
            "exponents": list(self.relation.exponents) if self.relation else None,
            "witness_order": self.relation.witness_order if self.relation else None,
            "method": self.method,
        }
        if self.bound is not None:
            out["bound"] = self.bound
        if self.constant is not None:
            out["constant"] = _scalar_str(self.constant)
        out.update(self.extra)
        return out


def _scalar_str(c: Any) -> str:
    if isinstance(c, Fraction):
        return format_rational(c)
    if isinstance(c, FieldElement) and c.is_rational():
        return format_rational(c.coords[0])
    return str(c)


# --------------------------------------------------------------------------
# over Q
# --------------------------------------------------------------------------

def product_of_powers(values: Sequence[Any], exponents: Sequence[int]) -> Any:
    """Exact prod values_i^k_i, grouping positive and negative exponents."""
    num: Any = 1
    den: Any = 1
    for v, k in zip(values, exponents):
        if k > 0:
            num = num * v**k
        elif k < 0:
            den = den * v ** (-k)
    if isinstance(den, int) and den == 1:
        return num
    return num / den


def _rational_lattice(values: Sequence[Fraction], base: Sequence[int] | None = None) -> list[list[int]]:
    s = len(values)
    if base is None:
        base = integer_coprime_base([abs(v.numerator) for v in values] + [v.denominator for v in values])
    cols = []
    for v in values:
        e_num = integer_base_exponents(v.numerator, base)
        e_den = integer_base_exponents(v.denominator, base)
        cols.append([a - b for a, b in zip(e_num, e_den)])
    rows = [[cols[j][i] for j in range(s)] for i in range(len(base))]
    # parity of the number of negative factors: sum sigma_j k_j + 2 t = 0
    rows = [r + [0] for r in rows]
    rows.append([1 if v < 0 else 0 for v in values] + [2])
    kernel = integer_kernel(rows, s + 1)
    return [v[:s] for v in kernel]


def rational_dependence(values: Sequence[Any], base: Sequence[int] | None = None) -> IndependenceVerdict:
    """Complete decision of multiplicative dependence for nonzero rationals.

    Uses an integer coprime base (gcd refinement) of the numerators and
    denominators instead of prime factorization, plus a sign-parity row.
    ``base`` may be passed when it is known to generate every value.
    """
    vals = [Fraction(v) for v in values]
    if not vals:
        raise ArithmeticInputError("need at least one value")
    if any(v == 0 for v in vals):
        raise ArithmeticInputError("zero is excluded from multiplicative dependence")
    lattice = _rational_lattice(vals, base)
    if not lattice:
        return IndependenceVerdict(False, None, "complete-lattice")
    k, proven = shortest_max_norm(lattice)
    prod = product_of_powers(vals, k)
    if prod != 1:
        raise CertificationError(f"relation {k} on {vals} gives {prod}, not 1")
    rel = Relation(tuple(k), 1, "exact product = 1" + ("" if proven else " (minimality not proven)"))
    return IndependenceVerdict(True, rel, "complete-lattice")


def lattice_rank(values: Sequence[Any]) -> int:
    """Rank of the relation lattice of nonzero rationals."""
    vals = [Fraction(v) for v in values]
    return len(_rational_lattice(vals))


# --------------------------------------------------------------------------
# bounded search in a number field
# --------------------------------------------------------------------------

def _as_field_elements(values: Sequence[Any]) -> tuple[NumberField, list[FieldElement]]:
    fes = [v for v in values if isinstance(v, FieldElement)]
    K = fes[0].field if fes else NumberField.rationals()
    out = []
    for v in values:
        e = K.element(v)
        if e.is_zero():
            raise ArithmeticInputError("zero is excluded from multiplicative dependence")
        out.append(e)
    return K, out


def _log_embeddings(elems: Sequence[FieldElement]) -> np.ndarray:
    """Matrix [i, j] = log |sigma_j(elem_i)| in float64."""
    rows = []
    for e in elems:
        if e.is_rational():
            q = abs(e.coords[0])
            v = math.log(q.numerator) - math.log(q.denominator)
            rows.append([v] * e.field.degree)
            continue
        row = []
        with working_precision(64):
            for z in e.embed(64):
                a = abs(z)
                row.append(float(mp.log((iv_lo(a) + iv_hi(a)) / 2)))
        rows.append(row)
    return np.array(rows, dtype=float)


def _shell(s: int, t: int) -> np.ndarray:
    """All k in [-t, t]^s with max|k_i| = t, in lexicographic order."""
    grid = np.indices((2 * t + 1,) * s).reshape(s, -1).T - t
    mask = np.abs(grid).max(axis=1) == t
    return grid[mask]


def bounded_field_dependence(values: Sequence[Any], B: int, max_candidates: int = DEFAULT_MAX_CANDIDATES) -> IndependenceVerdict:
    """First relation in canonical order with 0 < max|k_i| <= B, certified exactly.

    Canonical order is graded by max-norm, lexicographic within a shell.
    A float prefilter on sum k_i log|sigma_j(v_i)| discards candidates whose
    product cannot have all conjugates of absolute value 1; survivors are
    checked exactly with :func:`is_root_of_unity`.
    """
    if B < 1:
        raise ValueError("bound must be >= 1")
    K, elems = _as_field_elements(values)
    s = len(elems)
    count = (2 * B + 1) ** s - 1
    if count > max_candidates:
        raise SearchSpaceError(count, max_candidates)
    logs = _log_embeddings(elems)
    scale = np.abs(logs).max(initial=0.0)
    for t in range(1, B + 1):
        ks = _shell(s, t)
        sums = ks @ logs
        tol = 1e-8 * (1.0 + t * s * scale)
        hits = np.nonzero(np.abs(sums).max(axis=1) <= tol)[0]
        for idx in hits:
            k = [int(x) for x in ks[idx]]
            prod = product_of_powers(elems, k)
            w = is_root_of_unity(prod)
            if w is not None:
                if prod**w != 1:
                    raise CertificationError(f"witness order {w} fails for {k}")
                rel = Relation(tuple(k), w, f"exact product is a root of unity of order {w}")
                return IndependenceVerdict(True, rel, "bounded-search", bound=B)
    return IndependenceVerdict(False, None, "bounded-search", bound=B)


# --------------------------------------------------------------------------
# rational functions
# --------------------------------------------------------------------------

def _constant_of(cb, k: Sequence[int]) -> Any:
    c: Any = Fraction(1)
    for cj, kj in zip(cb.constants, k):
        if kj:
            c = c * cj**kj
    return c


def _function_product(functions: Sequence[RationalFunction], k: Sequence[int]) -> RationalFunction:
    out = RationalFunction(Polynomial([1]))
    for f, e in zip(functions, k):
        if e:
            out = out * f**e
    return out


def _certify_function_product(functions: Sequence[RationalFunction], k: Sequence[int], constant: Any) -> None:
    if _function_product(functions, k) != RationalFunction(Polynomial([constant])):
        raise CertificationError("function relation does not give the stated constant")


def mult_indep_mod_constants(functions: Sequence[Any]) -> IndependenceVerdict:
    """Complete check of multiplicative independence modulo constants."""
    fns = [as_rational_function(f) for f in functions]
    cb = coprime_base(fns)
    kernel = integer_kernel(cb.matrix, len(fns))
    if not kernel:
        return IndependenceVerdict(False, None, "complete-lattice", extra={"base": [str(e) for e in cb.elements]})
    k, proven = shortest_max_norm(kernel)
    const = _constant_of(cb, k)
    _certify_function_product(fns, k, const)
    rel = Relation(tuple(k), 1, "product is the constant " + _scalar_str(const))
    return IndependenceVerdict(True, rel, "complete-lattice", constant=const)


@dataclass
class LinearFractionalWitness:
    exponents: tuple[int, ...] | None
    ell: RationalFunction | None
    power: int
    constant: Any

    def to_json(self) -> dict:
        return {
            "exponents": list(self.exponents) if self.exponents is not None else None,
            "ell": str(self.ell) if self.ell is not None else None,
            "power": self.power,
            "constant": _scalar_str(self.constant),
        }


def _linear_power(p: Polynomial):
    """(L, k) with p = lead * L^k for monic linear L, (None, 0) for constants, else None."""
    if p.is_constant():
        return None, 0
    parts = squarefree_decomposition(p)
    if len(parts) == 1 and parts[0][0].degree == 1:
        return parts[0][0], parts[0][1]
    return None


def is_power_of_linear_fractional(phi: Any) -> tuple[bool, LinearFractionalWitness | None]:
    """Decide phi = c * ell^n for a degree <= 1 fractional linear ell over the closure."""
    f = as_rational_function(phi)
    if f.is_zero():
        raise ArithmeticInputError("zero function")
    c = f.num.lead / f.den.lead
    top = _linear_power(f.num)
    bot = _linear_power(f.den)
    if top is None or bot is None:
        return False, None
    (P, a), (Q, b) = top, bot
    if a and b and a != b:
        return False, None
    n = a or b
    one = Polynomial([1])
    ell = RationalFunction(P or one, Q or one) if n else None
    return True, LinearFractionalWitness(None, ell, n, c)


def _extended_matrix(cb) -> list[list[int]]:
    rows = [list(r) for r in cb.matrix]
    s = len(cb.constants)
    inf = [-sum(e.degree * row[j] for e, row in zip(cb.elements, cb.matrix)) for j in range(s)]
    return rows + [inf]


def generates_power_linear_fractional(functions: Sequence[Any]) -> tuple[bool, LinearFractionalWitness | None]:
    """Complete decision whether some prod f_i^k_i (k != 0) is c * ell^n.

    Divisors live on the coprime base (each squarefree element stands for
    all its roots) extended by the place at infinity.  Cases are tried in a
    fixed order: the constant case, then (P, infinity) for linear base
    elements P, then pairs of linear base elements.
    """
    fns = [as_rational_function(f) for f in functions]
    s = len(fns)
    cb = coprime_base(fns)
    M = _extended_matrix(cb)
    kernel = integer_kernel(cb.matrix, s)
    if kernel:
        k, _ = shortest_max_norm(kernel)
        return True, LinearFractionalWitness(tuple(k), None, 0, _constant_of(cb, k))
    inf_index = len(cb.elements)
    linear = [i for i, e in enumerate(cb.elements) if e.degree == 1]
    pairs = [(i, inf_index) for i in linear] + [(i, j) for a, i in enumerate(linear) for j in linear[a + 1 :]]
    for P, Q in pairs:
        target = [0] * len(M)
        target[P] = 1
        target[Q] = -1
        rows = [row + [-target[r]] for r, row in enumerate(M)]
        ker = integer_kernel(rows, s + 1)
        if not ker:
            continue
        kp, _ = shortest_max_norm([v[:s] for v in ker])
        # recover n from the divisor at P
        n = sum(M[P][j] * kp[j] for j in range(s))
        if n < 0:
            kp = [-x for x in kp]
            n = -n
        kp = normalize_sign(kp) if n == 0 else kp
        num = cb.elements[P]
        den = Polynomial([1]) if Q == inf_index else cb.elements[Q]
        ell = RationalFunction(num, den)
        const = _constant_of(cb, kp)
        _certify_linear_power(fns, kp, ell, n, const)
        return True, LinearFractionalWitness(tuple(kp), ell, n, const)
    return False, None


def _certify_linear_power(fns, k, ell: RationalFunction, n: int, const: Any) -> None:
    rhs = ell**n * RationalFunction(Polynomial([const]))
    if _function_product(fns, k) != rhs:
        raise CertificationError("linear-fractional witness failed exact check")
