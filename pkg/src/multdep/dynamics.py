"""Orbits, growth and escape criteria, preperiodic points over Q and search experiments."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from itertools import islice
from typing import Any, Callable, Iterator, Sequence

from mpmath import mp

from .arith import divisors, factor_integer, factor_rational, format_rational, integer_coprime_base, is_prime, valuation
from .dependence import IndependenceVerdict, Relation, bounded_field_dependence, rational_dependence
from .numberfield import FieldElement, NumberField, is_root_of_unity
from .poly import Polynomial, PoleError, as_rational_function, has_multiple_roots
from .roots import DEFAULT_PRECISION, MAX_PRECISION, Enclosure, PrecisionError, iv_hi, iv_lo, iv_rational, working_precision

DEFAULT_BOUND = 10


class PreconditionError(ValueError):
    def __init__(self, clause: str, message: str):
        self.clause = clause
        super().__init__(message)


# --------------------------------------------------------------------------
# orbits
# --------------------------------------------------------------------------

@dataclass
class Orbit:
    function: Any
    start: Any
    points: list[tuple[int, Any]]
    terminated_by: str  # "pole" | "cap" | "cycle"
    pole_index: int | None = None
    cycle: tuple[int, int] | None = None  # (entry index, period)

    @property
    def values(self) -> list:
        return [v for _, v in self.points]

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "points": [[n, _fmt(v)] for n, v in self.points],
            "terminated_by": self.terminated_by,
        }
        if self.pole_index is not None:
            out["pole_index"] = self.pole_index
        if self.cycle is not None:
            out["cycle"] = {"entry": self.cycle[0], "period": self.cycle[1]}
        return out


def _fmt(v: Any) -> Any:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, FieldElement):
        return v.to_json()
    return str(v)


def _coerce_start(alpha: Any) -> Any:
    if isinstance(alpha, (int, Fraction)):
        return Fraction(alpha)
    return alpha


def orbit(phi: Any, alpha: Any, N: int) -> Orbit:
    """u_0 = alpha, u_n = phi(u_{n-1}) for n <= N, halting at a pole."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    u = _coerce_start(alpha)
    points = [(0, u)]
    seen = {u: 0}
    cycle = None
    for n in range(1, N + 1):
        try:
            u = phi(u)
        except (PoleError, ZeroDivisionError):
            return Orbit(phi, alpha, points, "pole", pole_index=n - 1, cycle=cycle)
        points.append((n, u))
        if cycle is None:
            if u in seen:
                cycle = (seen[u], n - seen[u])
            else:
                seen[u] = n
    return Orbit(phi, alpha, points, "cycle" if cycle else "cap", cycle=cycle)


# --------------------------------------------------------------------------
# growth constants and Archimedean growth
# --------------------------------------------------------------------------

def _is_rational_poly(f: Polynomial) -> bool:
    return f.is_rational()


def _field_of(*things: Any) -> NumberField | None:
    for t in things:
        if isinstance(t, FieldElement):
            return t.field
        if isinstance(t, Polynomial):
            for c in t.coeffs:
                if isinstance(c, FieldElement):
                    return c.field
    return None


def _embed_scalar(c: Any, K: NumberField, prec: int) -> list:
    if isinstance(c, FieldElement):
        return c.embed(prec)
    with working_precision(prec + 32):
        v = iv_rational(Fraction(c))
    return [v] * K.degree


def growth_constant_L(f: Polynomial, precision: int = DEFAULT_PRECISION) -> Fraction | Enclosure:
    """1 + |1/a_d| + sum_{i<d} |a_i/a_d|, maximized over embeddings.

    Exact (a Fraction) for rational coefficients, else a certified Enclosure.
    """
    if f.degree < 2:
        raise PreconditionError("degree", "growth constant needs deg f >= 2")
    if _is_rational_poly(f):
        ad = f.lead
        return 1 + abs(1 / ad) + sum(abs(c / ad) for c in f.coeffs[:-1])
    K = _field_of(f)
    embs = [_embed_scalar(c, K, precision) for c in f.coeffs]
    with working_precision(precision + 32):
        vals = []
        for j in range(K.degree):
            ad = embs[-1][j]
            total = 1 + abs(1 / ad)
            for i in range(f.degree):
                total += abs(embs[i][j] / ad)
            vals.append(total)
        return Enclosure(max(iv_lo(v) for v in vals), max(iv_hi(v) for v in vals))


@dataclass
class GrowthReport:
    increasing: bool
    exact: bool
    L: Any
    log_magnitudes: list[list[float]]  # per embedding, n = 0..N
    precision: int | None = None

    def to_json(self) -> dict:
        return {
            "increasing": self.increasing,
            "exact": self.exact,
            "L": format_rational(self.L) if isinstance(self.L, Fraction) else float(self.L.hi),
            "log_magnitudes": self.log_magnitudes,
            "precision": self.precision,
        }


def _log_abs(q: Fraction) -> float:
    return math.log(abs(q.numerator)) - math.log(q.denominator) if q else float("-inf")


def check_archimedean_growth(f: Polynomial, alpha: Any, N: int, precision: int = DEFAULT_PRECISION) -> GrowthReport:
    """Check |sigma(f^(n)(alpha))| strictly increasing for n <= N at every embedding."""
    alpha = _coerce_start(alpha)
    K = _field_of(f, alpha)
    if K is None:
        L = growth_constant_L(f)
        if not abs(alpha) > L:
            raise PreconditionError("|alpha| > L", f"|alpha| = {abs(alpha)} is not > L = {L}")
        vals = orbit(f, alpha, N).values
        inc = all(abs(vals[i + 1]) > abs(vals[i]) for i in range(len(vals) - 1))
        return GrowthReport(inc, True, L, [[_log_abs(v) for v in vals]])
    prec = precision
    while prec <= MAX_PRECISION:
        result = _interval_growth(f, alpha, N, K, prec)
        if result is not None:
            return result
        prec *= 2
    raise PrecisionError("interval overlap persisted up to the precision cap")


def _interval_growth(f: Polynomial, alpha: Any, N: int, K: NumberField, prec: int) -> GrowthReport | None:
    L = growth_constant_L(f, prec)
    if isinstance(L, Fraction):
        with working_precision(prec + 32):
            v = iv_rational(L)
        L = Enclosure(iv_lo(v), iv_hi(v), exact=L)
    coeffs = [_embed_scalar(c, K, prec) for c in f.coeffs]
    start = _embed_scalar(alpha, K, prec)
    logs: list[list[float]] = []
    increasing = True
    with working_precision(prec + 32):
        for j in range(K.degree):
            u = start[j]
            a = abs(u)
            if not iv_lo(a) > L.hi:
                if iv_hi(a) <= L.lo:
                    raise PreconditionError("|alpha| > L", f"embedding {j}: |alpha| <= L")
                return None
            row = [float(mp.log(iv_lo(a)))]
            for _ in range(N):
                acc = coeffs[-1][j]
                for c in reversed(coeffs[:-1]):
                    acc = acc * u + c[j]
                b = abs(acc)
                if not iv_lo(b) > iv_hi(a):
                    if iv_hi(b) <= iv_lo(a):
                        increasing = False
                    else:
                        return None
                u, a = acc, b
                row.append(float(mp.log(iv_lo(a))))
            logs.append(row)
    return GrowthReport(increasing, False, L, logs, prec)


def prefix_bound_violations(values: Sequence[Fraction], L: Fraction) -> int:
    """Count n where some r < n has |u_r| > max(|u_n|, L)."""
    bad = 0
    running = None
    for v in values:
        a = abs(Fraction(v))
        if running is not None and running > max(a, L):
            bad += 1
        running = a if running is None else max(running, a)
    return bad


# --------------------------------------------------------------------------
# places and valuations
# --------------------------------------------------------------------------

INF = "inf"


def _clearing_denominator(f: Polynomial) -> int:
    d = 1
    for c in f.coeffs:
        d = d * c.denominator // math.gcd(d, c.denominator)
    return d


def places_S_f(f: Polynomial) -> list:
    """{inf} plus primes of the clearing denominator D and of lead(D*f)."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    D = _clearing_denominator(f)
    lead = abs((f.lead * D).numerator)
    primes = set(factor_integer(D).exponents) | set(factor_integer(lead).exponents)
    return [INF] + sorted(primes)


@dataclass
class ValuationRecord:
    p: int
    trace: list[int]
    expected: list[int]

    @property
    def holds(self) -> bool:
        return self.trace == self.expected

    def to_json(self) -> dict:
        return {"p": self.p, "trace": self.trace, "expected": self.expected, "holds": self.holds}


def valuation_escape_check(f: Polynomial, alpha: Any, p: int, M: int) -> ValuationRecord:
    """Verify v_p(f^(m)(alpha)) = d^m v_p(alpha) for 0 <= m <= M."""
    alpha = Fraction(alpha)
    if not is_prime(p):
        raise PreconditionError("p prime", f"{p} is not prime")
    if p in places_S_f(f):
        raise PreconditionError("p not in S_f", f"{p} lies in S_f")
    if alpha == 0 or valuation(alpha, p) >= 0:
        raise PreconditionError("v_p(alpha) < 0", f"v_{p}({alpha}) is not negative")
    d = f.degree
    v0 = valuation(alpha, p)
    trace = []
    u = alpha
    for m in range(M + 1):
        trace.append(valuation(u, p))
        if m < M:
            u = f(u)
    return ValuationRecord(p, trace, [d**m * v0 for m in range(M + 1)])


# --------------------------------------------------------------------------
# preperiodicity over Q
# --------------------------------------------------------------------------

def escape_thresholds(f: Polynomial) -> dict[int, int]:
    """e_p = max(0, -v_p(a_j/a_d), v_p(a_d)) at every prime where it is positive."""
    ad = f.lead
    primes: set[int] = set()
    for c in f.coeffs:
        if c != 0:
            primes |= set(factor_rational(c).exponents)
    out = {}
    for p in sorted(primes):
        e = max(0, valuation(ad, p))
        for c in f.coeffs[:-1]:
            if c != 0:
                e = max(e, -valuation(c / ad, p))
        if e > 0:
            out[p] = e
    return out


def _threshold_denominator(f: Polynomial) -> int:
    D = 1
    for p, e in escape_thresholds(f).items():
        D *= p**e
    return D


@dataclass
class PreperiodicResult:
    preperiodic: bool
    reason: str  # "repeat" | "archimedean" | "p-adic"
    index: int
    orbit: list[Fraction]
    cycle: tuple[int, int] | None = None
    prime: int | None = None

    def __bool__(self) -> bool:
        return self.preperiodic

    def to_json(self) -> dict:
        out = {
            "preperiodic": self.preperiodic,
            "reason": self.reason,
            "index": self.index,
            "orbit": [format_rational(v) for v in self.orbit],
        }
        if self.cycle:
            out["cycle"] = {"entry": self.cycle[0], "period": self.cycle[1]}
        if self.prime is not None:
            out["prime"] = self.prime
        return out


def is_preperiodic(f: Polynomial, alpha: Any, max_steps: int = 1_000_000) -> PreperiodicResult:
    """Exact decision over Q with Archimedean and p-adic escape certificates."""
    if f.degree < 2:
        raise PreconditionError("degree", "is_preperiodic needs deg f >= 2")
    if not f.is_rational():
        raise TypeError("is_preperiodic works over Q")
    L = growth_constant_L(f)
    thresholds = escape_thresholds(f)
    Dmax = _threshold_denominator(f)
    u = Fraction(alpha)
    seen: dict[Fraction, int] = {}
    values: list[Fraction] = []
    for n in range(max_steps):
        if u in seen:
            return PreperiodicResult(True, "repeat", n, values, cycle=(seen[u], n - seen[u]))
        seen[u] = n
        values.append(u)
        if abs(u) > L:
            return PreperiodicResult(False, "archimedean", n, values)
        if Dmax % u.denominator:
            return PreperiodicResult(False, "p-adic", n, values, prime=_escaping_prime(u.denominator, thresholds))
        u = f(u)
    raise RuntimeError("orbit neither repeated nor escaped within max_steps")


def _escaping_prime(den: int, thresholds: dict[int, int]) -> int:
    for p, e in thresholds.items():
        v = 0
        while den % p == 0:
            den //= p
            v += 1
        if v > e:
            return p
    return min(factor_integer(den).exponents)


def preperiodic_points(f: Polynomial) -> list[Fraction]:
    """All rational preperiodic points, from a finite candidate grid."""
    if f.degree < 2:
        raise PreconditionError("degree", "preperiodic_points needs deg f >= 2")
    L = growth_constant_L(f)
    out = []
    for den in divisors(_threshold_denominator(f)):
        top = math.floor(L * den)
        for num in range(-top, top + 1):
            if math.gcd(num, den) != 1:
                continue
            a = Fraction(num, den)
            if is_preperiodic(f, a).preperiodic:
                out.append(a)
    return sorted(out)


# --------------------------------------------------------------------------
# hypothesis flags
# --------------------------------------------------------------------------

def excluded_monomial_form(phi: Any) -> bool:
    """True when phi = beta * X^(+-d)."""
    r = as_rational_function(phi)
    return (r.num.is_monomial() and r.den.is_monomial()) and (r.num.is_constant() or r.den.is_constant())


def hypothesis_report(f: Any) -> dict:
    from .special import is_special

    r = as_rational_function(f)
    out: dict[str, Any] = {"degree": r.degree}
    if r.is_polynomial():
        p = r.num
        out["monomial"] = p.is_monomial()
        out["multiple_roots_f"] = has_multiple_roots(p)
        if p.degree == 2:
            out["multiple_roots_f2"] = has_multiple_roots(p.compose(p))
        if p.degree >= 2:
            w = is_special(p)
            out["special"] = w.target if w else None
    out["excluded_form"] = excluded_monomial_form(r)
    flags = []
    if out.get("multiple_roots_f") or out.get("multiple_roots_f2"):
        flags.append("multiple roots")
    if out.get("monomial"):
        flags.append("monomial")
    if out.get("special"):
        flags.append(f"special ({out['special']})")
    if out["excluded_form"]:
        flags.append("excluded form beta*X^(+-d)")
    out["warnings"] = flags
    return out


# --------------------------------------------------------------------------
# search experiments
# --------------------------------------------------------------------------

def height_grid(height_num: int) -> Iterator[Fraction]:
    """Rationals with max(|num|, den) <= height_num, ordered by (max, num, den)."""
    for h in range(1, height_num + 1):
        for num in range(-h, h + 1):
            if abs(num) == h:
                for den in range(1, h + 1):
                    if math.gcd(num, den) == 1:
                        yield Fraction(num, den)
            elif math.gcd(num, h) == 1:
                yield Fraction(num, h)


def grid_size(height_num: int) -> int:
    return sum(1 for _ in height_grid(height_num))


@dataclass
class Hit:
    alpha: Any
    m: int
    n: int
    relation: Relation

    def sort_key(self) -> tuple:
        a = self.alpha
        if isinstance(a, Fraction):
            return (0, max(abs(a.numerator), a.denominator), a, self.m, self.n)
        return (1, 0, str(a), self.m, self.n)

    def to_json(self) -> dict:
        return {
            "alpha": _fmt(self.alpha),
            "m": self.m,
            "n": self.n,
            "exponents": list(self.relation.exponents),
            "witness_order": self.relation.witness_order,
        }


@dataclass
class SearchReport:
    parameters: dict
    hits: list[Hit] = field(default_factory=list)
    scanned_count: int = 0
    wall_time: float = 0.0
    complete: bool = True
    next_cursor: int = 0
    hypotheses: dict = field(default_factory=dict)

    def sort(self) -> None:
        self.hits.sort(key=Hit.sort_key)

    def alphas(self) -> list:
        out = []
        for h in self.hits:
            if h.alpha not in out:
                out.append(h.alpha)
        return out


def _dependence(values: Sequence[Any], B: int | None, base=None) -> IndependenceVerdict:
    if all(isinstance(v, Fraction) for v in values):
        return rational_dependence(values, base)
    return bounded_field_dependence(values, B or DEFAULT_BOUND)


def _orbit_base(values: Sequence[Any]):
    if all(isinstance(v, Fraction) for v in values):
        return integer_coprime_base([abs(v.numerator) for v in values if v] + [v.denominator for v in values])
    return None


def pairs_for_alpha(f: Polynomial, N: int, B: int | None, alpha: Any) -> list[Hit]:
    vals = orbit(f, alpha, N).values
    base = _orbit_base(vals)
    hits = []
    for m in range(1, len(vals)):
        for n in range(m):
            if vals[m] == 0 or vals[n] == 0:
                continue
            v = _dependence([vals[m], vals[n]], B, base)
            if v.dependent:
                hits.append(Hit(alpha, m, n, v.relation))
    return hits


def consecutive_for_alpha(f: Polynomial, s: int, N: int, B: int | None, alpha: Any) -> list[Hit]:
    vals = orbit(f, alpha, N + s).values
    base = _orbit_base(vals)
    hits = []
    for n in range(0, N + 1):
        if n + s >= len(vals):
            break
        window = vals[n + 1 : n + s + 1]
        if any(v == 0 for v in window):
            continue
        v = _dependence(window, B, base)
        if v.dependent:
            hits.append(Hit(alpha, n + s, n, v.relation))
    return hits


def run_grid(task: Callable[[Any], list[Hit]], alphas: Sequence[Any], workers: int = 1) -> list[Hit]:
    """Apply task to every alpha (optionally in a process pool); order-independent merge."""
    hits: list[Hit] = []
    if workers > 1 and len(alphas) > 1:
        import multiprocessing as mpc

        with mpc.get_context("fork").Pool(workers) as pool:
            for part in pool.imap(task, alphas, chunksize=max(1, len(alphas) // (8 * workers))):
                hits += part
    else:
        for a in alphas:
            hits += task(a)
    hits.sort(key=Hit.sort_key)
    return hits


def _grid_slice(height_num: int, start: int, budget: int | None) -> tuple[list[Fraction], int]:
    total = grid_size(height_num)
    stop = total if budget is None else min(total, start + budget)
    return list(islice(height_grid(height_num), start, stop)), total


def _search(kind: str, f: Polynomial, task, params: dict, height_num: int | None, alphas, start: int, budget, workers) -> SearchReport:
    t0 = time.time()
    if alphas is None:
        grid, total = _grid_slice(height_num, start, budget)
    else:
        grid = [_coerce_start(a) for a in alphas][start : None if budget is None else start + budget]
        total = len(alphas)
    hits = run_grid(task, grid, workers)
    scanned = len(grid)
    rep = SearchReport(
        parameters={"kind": kind, **params},
        hits=hits,
        scanned_count=scanned,
        complete=start + scanned >= total,
        next_cursor=start + scanned,
        hypotheses=hypothesis_report(f),
    )
    rep.wall_time = time.time() - t0
    return rep


def search_dependent_pairs(
    f: Polynomial,
    height_num: int | None = None,
    N: int = 4,
    B: int | None = None,
    *,
    alphas: Sequence[Any] | None = None,
    start: int = 0,
    budget: int | None = None,
    workers: int = 1,
) -> SearchReport:
    """Hits (alpha, m, n) with f^(m)(alpha), f^(n)(alpha) dependent, 0 <= n < m <= N.

    Exponents are listed for (f^(m)(alpha), f^(n)(alpha)).
    """
    if f.degree < 2:
        raise PreconditionError("degree", "need deg f >= 2")
    if alphas is None and (height_num is None or height_num < 1):
        raise ValueError("height_num must be >= 1")
    params = {"f": str(f), "height_num": height_num, "depth": N, "bound": B}
    return _search("search-pairs", f, partial(pairs_for_alpha, f, N, B), params, height_num, alphas, start, budget, workers)


def consecutive_dependence_search(
    f: Polynomial,
    s: int,
    height_num: int | None = None,
    N: int = 4,
    B: int | None = None,
    *,
    alphas: Sequence[Any] | None = None,
    start: int = 0,
    budget: int | None = None,
    workers: int = 1,
) -> SearchReport:
    """Hits where (f^(n+1)(alpha), ..., f^(n+s)(alpha)) is dependent; hit.m = n + s."""
    if s < 1:
        raise ValueError("s must be >= 1")
    if f.degree < 2:
        raise PreconditionError("degree", "need deg f >= 2")
    if alphas is None and (height_num is None or height_num < 1):
        raise ValueError("height_num must be >= 1")
    params = {"f": str(f), "s": s, "height_num": height_num, "depth": N, "bound": B}
    return _search("consecutive", f, partial(consecutive_for_alpha, f, s, N, B), params, height_num, alphas, start, budget, workers)


def scan_fixed_alpha(phi: Any, alpha: Any, N: int, B: int | None = None) -> SearchReport:
    """All n <= N with (alpha, phi^(n)(alpha)) dependent; hit.m = 0, hit.n = n."""
    t0 = time.time()
    alpha = _coerce_start(alpha)
    if alpha == 0:
        raise PreconditionError("alpha != 0", "alpha must be nonzero")
    orb = orbit(phi, alpha, N)
    vals = orb.values
    base = _orbit_base(vals)
    hits = []
    for n in range(1, len(vals)):
        if vals[n] == 0:
            continue
        v = _dependence([alpha, vals[n]], B, base)
        if v.dependent:
            hits.append(Hit(alpha, 0, n, v.relation))
    hyp = hypothesis_report(phi)
    if isinstance(alpha, FieldElement):
        hyp["alpha_root_of_unity"] = is_root_of_unity(alpha) is not None
    else:
        hyp["alpha_root_of_unity"] = alpha in (1, -1)
    if hyp["alpha_root_of_unity"]:
        hyp["warnings"].append("alpha is a root of unity")
    params = {"kind": "scan", "phi": str(phi), "alpha": _fmt(alpha), "depth": N, "bound": B}
    if orb.pole_index is not None:
        params["pole_index"] = orb.pole_index
    rep = SearchReport(params, hits, 1, complete=True, next_cursor=1, hypotheses=hyp)
    rep.wall_time = time.time() - t0
    return rep
