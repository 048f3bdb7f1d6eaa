"""Integer lattices: Hermite-normal-form kernels, LLL and short vectors."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]
Vector = list[int]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def column_hnf(rows: Sequence[Sequence[int]], ncols: int) -> tuple[Matrix, Matrix, int]:
    """Column-style Hermite reduction ``A U = H`` with U unimodular.

    Returns ``(H, U, rank)``; the first ``rank`` columns of H are the pivot
    columns, the remaining columns of H are zero, so the trailing columns of
    U span the integer kernel of A.
    """
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    n = ncols
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(i: int, j: int, a: int, b: int, c: int, d: int) -> None:
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for M in (A, U):
            for r in M:
                x, y = r[i], r[j]
                r[i] = a * x + b * y
                r[j] = c * x + d * y

    pivot = 0
    for row in range(m):
        if pivot >= n:
            break
        for j in range(pivot + 1, n):
            b = A[row][j]
            if b == 0:
                continue
            a = A[row][pivot]
            g, x, y = _xgcd(a, b)
            colop(pivot, j, x, y, -b // g, a // g)
        if A[row][pivot] == 0:
            continue
        if A[row][pivot] < 0:
            for M in (A, U):
                for r in M:
                    r[pivot] = -r[pivot]
        p = A[row][pivot]
        for j in range(pivot):
            q = A[row][j] // p
            if q:
                for M in (A, U):
                    for r in M:
                        r[j] -= q * r[pivot]
        pivot += 1
    return A, U, pivot


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Basis of ``{k in Z^ncols : A k = 0}``."""
    if not rows:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    _, U, rank = column_hnf(rows, ncols)
    return [[U[i][j] for i in range(ncols)] for j in range(rank, ncols)]


def _dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> list[Vector]:
    """Exact LLL reduction of linearly independent integer vectors."""
    b = [list(v) for v in basis]
    n = len(b)
    if n <= 1:
        return b

    def gram_schmidt():
        bstar: list[list[Fraction]] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        norms: list[Fraction] = []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = _dot(b[i], bstar[j]) / norms[j] if norms[j] else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(_dot(v, v))
        return mu, norms

    mu, norms = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, norms = gram_schmidt()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, norms = gram_schmidt()
            k = max(k - 1, 1)
    return b


def max_norm(v: Sequence[int]) -> int:
    return max((abs(x) for x in v), default=0)


def normalize_sign(v: Sequence[int]) -> Vector:
    """Flip v so that its first nonzero entry is positive."""
    for x in v:
        if x:
            return list(v) if x > 0 else [-y for y in v]
    return list(v)


def _solve_left_inverse(B: list[Vector]) -> list[list[Fraction]]:
    """Rows P with P @ (columns B) = I, for independent integer vectors B."""
    r = len(B)
    G = [[Fraction(_dot(B[i], B[j])) for j in range(r)] for i in range(r)]
    inv = [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]
    for c in range(r):
        piv = next(i for i in range(c, r) if G[i][c] != 0)
        G[c], G[piv] = G[piv], G[c]
        inv[c], inv[piv] = inv[piv], inv[c]
        f = G[c][c]
        G[c] = [x / f for x in G[c]]
        inv[c] = [x / f for x in inv[c]]
        for i in range(r):
            if i != c and G[i][c] != 0:
                g = G[i][c]
                G[i] = [x - g * y for x, y in zip(G[i], G[c])]
                inv[i] = [x - g * y for x, y in zip(inv[i], inv[c])]
    s = len(B[0])
    return [[sum(inv[i][j] * B[j][t] for j in range(r)) for t in range(s)] for i in range(r)]


def shortest_max_norm(basis: Sequence[Sequence[int]], box_limit: int = 2_000_000) -> tuple[Vector, bool]:
    """Nonzero lattice vector of minimal max-norm, ties broken lexicographically.

    The vector is sign-normalized (first nonzero entry positive).  Coefficients
    against the LLL-reduced basis are bounded through an exact left inverse;
    the enumeration box is additionally capped at ten times the best basis
    norm per coordinate and at ``box_limit`` points.  Returns ``(vector,
    proven_minimal)``.
    """
    B = lll_reduce(basis)
    if not B:
        raise ValueError("empty lattice")
    best = min((normalize_sign(v) for v in B), key=lambda v: (max_norm(v), v))
    if len(B) == 1:
        return best, True
    t = max_norm(best)
    P = _solve_left_inverse(B)
    bounds = []
    for row in P:
        l1 = sum(abs(x) for x in row)
        bounds.append(int(l1 * t))
    capped = [min(c, 10 * t) for c in bounds]
    proven = capped == bounds
    size = 1
    for c in capped:
        size *= 2 * c + 1
    if size > box_limit:
        return best, False
    s = len(B[0])
    for coeffs in itertools.product(*(range(-c, c + 1) for c in capped)):
        if not any(coeffs):
            continue
        v = [sum(c * B[j][i] for j, c in enumerate(coeffs) if c) for i in range(s)]
        v = normalize_sign(v)
        key = (max_norm(v), v)
        if key < (max_norm(best), best):
            best = v
    return best, proven


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def rank(rows: Sequence[Sequence[int]], ncols: int) -> int:
    if not rows:
        return 0
    return column_hnf(rows, ncols)[2]
