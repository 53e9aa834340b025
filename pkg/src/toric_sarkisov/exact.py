"""Exact integer and rational linear algebra.

Every routine here works on plain nested lists of ``int`` / ``Fraction``.
Nothing is ever converted to floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Matrix = list[list[Fraction]]


def frac(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a string such as '1/3'")
    return Fraction(x)


def to_matrix(rows) -> Matrix:
    return [[frac(x) for x in row] for row in rows]


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def mat_vec(A: Sequence[Sequence], v: Sequence) -> list:
    return [dot(row, v) for row in A]


def mat_mul(A, B) -> list[list]:
    Bt = list(zip(*B))
    return [[dot(row, col) for col in Bt] for row in A]


def transpose(A) -> list[list]:
    return [list(col) for col in zip(*A)]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    v = [frac(x) for x in v]
    if all(x == 0 for x in v):
        raise ValueError("zero vector has no primitive representative")
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def rref(A: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = to_matrix(A)
    if not M:
        return M, []
    rows, cols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A: Sequence[Sequence]) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A)[1])


def det(A: Sequence[Sequence]) -> Fraction:
    M = to_matrix(A)
    n = len(M)
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            result = -result
        result *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return result


def kernel(A: Sequence[Sequence], ncols: Optional[int] = None) -> list[list[Fraction]]:
    """Rational basis of {x : A x = 0}."""
    if ncols is None:
        ncols = len(A[0])
    if not A:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    R, pivots = rref(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -R[i][f]
        basis.append(x)
    return basis


@dataclass(frozen=True)
class LinearSolution:
    particular: Optional[tuple[Fraction, ...]]
    kernel: tuple[tuple[Fraction, ...], ...]

    @property
    def feasible(self) -> bool:
        return self.particular is not None


def solve_linear(A: Sequence[Sequence], b: Sequence, ncols: Optional[int] = None) -> LinearSolution:
    """Exact solution set of A x = b: a particular solution plus a kernel basis.

    ``particular`` is None when the system is inconsistent.
    """
    if ncols is None:
        ncols = len(A[0]) if A else 0
    ker = tuple(tuple(v) for v in kernel(A, ncols)) if A else tuple(
        tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols))
    if not A:
        return LinearSolution(tuple([Fraction(0)] * ncols), ker)
    aug = [list(row) + [frac(bi)] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return LinearSolution(None, ker)
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = R[i][ncols]
    return LinearSolution(tuple(x), ker)


def inverse(A: Sequence[Sequence]) -> Matrix:
    n = len(A)
    aug = [list(map(frac, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


# --- integer lattices -----------------------------------------------------

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@dataclass(frozen=True)
class HermiteSmith:
    hermite: tuple[tuple[int, ...], ...]
    transform: tuple[tuple[int, ...], ...]
    divisors: tuple[int, ...]
    rank: int


def hermite_form(A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form ``H = U A`` with U unimodular.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``; zero rows sit at the bottom.
    """
    H = [[int(x) for x in row] for row in A]
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            # [[x, y], [-q, p]] has determinant 1
            H[r], H[i] = ([x * u + y * v for u, v in zip(H[r], H[i])],
                          [-q * u + p * v for u, v in zip(H[r], H[i])])
            U[r], U[i] = ([x * u + y * v for u, v in zip(U[r], U[i])],
                          [-q * u + p * v for u, v in zip(U[r], U[i])])
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        piv = H[r][c]
        for i in range(r):
            f = H[i][c] // piv
            if f:
                H[i] = [u - f * v for u, v in zip(H[i], H[r])]
                U[i] = [u - f * v for u, v in zip(U[i], U[r])]
        r += 1
    return H, U


def smith_divisors(A: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero elementary divisors d1 | d2 | ... of an integer matrix."""
    M = [[int(x) for x in row] for row in A]
    divisors = []
    while M and M[0]:
        entries = [(abs(M[i][j]), i, j) for i in range(len(M)) for j in range(len(M[0])) if M[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        M[0], M[pi] = M[pi], M[0]
        for row in M:
            row[0], row[pj] = row[pj], row[0]
        while True:
            piv = M[0][0]
            bad = False
            for i in range(1, len(M)):
                q = M[i][0] // piv
                M[i] = [u - q * v for u, v in zip(M[i], M[0])]
                if M[i][0]:
                    bad = True
            for j in range(1, len(M[0])):
                q = M[0][j] // piv
                for row in M:
                    row[j] -= q * row[0]
                if M[0][j]:
                    bad = True
            if not bad:
                rest = [(i, j) for i in range(1, len(M)) for j in range(1, len(M[0])) if M[i][j] % piv]
                if not rest:
                    break
                i, _ = rest[0]
                M[0] = [u + v for u, v in zip(M[0], M[i])]
                continue
            entries = [(abs(M[i][0]), i, 0) for i in range(len(M)) if M[i][0]]
            entries += [(abs(M[0][j]), 0, j) for j in range(len(M[0])) if M[0][j]]
            _, pi, pj = min(entries)
            M[0], M[pi] = M[pi], M[0]
            for row in M:
                row[0], row[pj] = row[pj], row[0]
        divisors.append(abs(M[0][0]))
        M = [row[1:] for row in M[1:]]
    return tuple(divisors)


def hermite_smith(A: Sequence[Sequence[int]]) -> HermiteSmith:
    H, U = hermite_form(A)
    divs = smith_divisors(A)
    return HermiteSmith(tuple(map(tuple, H)), tuple(map(tuple, U)), divs, len(divs))


def integer_kernel(A: Sequence[Sequence], ncols: int) -> list[list[int]]:
    """Basis of the saturated lattice {x in Z^ncols : A x = 0}, in Hermite form."""
    rows = [primitive(r) for r in A if any(x != 0 for x in r)]
    if not rows:
        return identity(ncols)
    At = transpose(rows)
    H, U = hermite_form(At)
    basis = [U[i] for i in range(len(H)) if all(x == 0 for x in H[i])]
    if not basis:
        return []
    return hermite_form(basis)[0]


def saturated_span(vectors: Sequence[Sequence], n: int) -> list[list[int]]:
    """Hermite basis of (span_Q vectors) intersected with Z^n."""
    return integer_kernel(integer_kernel(vectors, n), n) if vectors else []


# --- exact linear programming --------------------------------------------

def _phase_one(A: list[list[Fraction]], b: list[Fraction]) -> Optional[list[Fraction]]:
    """Find x >= 0 with A x = b by the two-phase simplex method (Bland's rule)."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    rows = []
    for row, bi in zip(A, b):
        if bi < 0:
            rows.append([-x for x in row] + [-bi])
        else:
            rows.append(list(row) + [bi])
    # tableau columns: x (n), artificials (m), rhs
    T = [r[:n] + [Fraction(int(i == j)) for j in range(m)] + [r[n]] for i, r in enumerate(rows)]
    basis = [n + i for i in range(m)]
    width = n + m
    obj = [Fraction(0)] * (width + 1)
    for r in T:
        for j in range(width + 1):
            obj[j] -= r[j]
    for j in range(n, width):
        obj[j] += 1
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][width] / T[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            break  # unbounded direction; cannot happen for phase one
        _, i = best
        piv = T[i][enter]
        T[i] = [x / piv for x in T[i]]
        for k in range(m):
            if k != i and T[k][enter] != 0:
                f = T[k][enter]
                T[k] = [a - f * c for a, c in zip(T[k], T[i])]
        f = obj[enter]
        obj = [a - f * c for a, c in zip(obj, T[i])]
        basis[i] = enter
    if obj[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, bj in enumerate(basis):
        if bj < n:
            x[bj] = T[i][width]
    return x


@dataclass(frozen=True)
class FeasibilityResult:
    """Either a point of {x : G x >= h} or a Farkas witness y >= 0, y G = 0, y h > 0."""

    point: Optional[tuple[Fraction, ...]]
    farkas: Optional[tuple[Fraction, ...]]

    @property
    def feasible(self) -> bool:
        return self.point is not None


def feasible_point(G: Sequence[Sequence], h: Sequence, dim: int) -> FeasibilityResult:
    G = to_matrix(G)
    h = [frac(x) for x in h]
    if not G:
        return FeasibilityResult(tuple([Fraction(0)] * dim), None)
    m = len(G)
    # x = xp - xn, G xp - G xn - s = h
    A = [G[i] + [-x for x in G[i]] + [Fraction(-int(i == j)) for j in range(m)] for i in range(m)]
    sol = _phase_one(A, h)
    if sol is not None:
        x = tuple(sol[j] - sol[dim + j] for j in range(dim))
        return FeasibilityResult(x, None)
    At = [[G[i][j] for i in range(m)] for j in range(dim)]
    At.append(list(h))
    rhs = [Fraction(0)] * dim + [Fraction(1)]
    y = _phase_one(At, rhs)
    if y is None:
        raise ArithmeticError("neither a feasible point nor a Farkas certificate was found")
    return FeasibilityResult(None, tuple(y))


def check_farkas(G, h, y) -> bool:
    if any(v < 0 for v in y):
        return False
    dim = len(G[0]) if G else 0
    combo = [sum((y[i] * frac(G[i][j]) for i in range(len(G))), Fraction(0)) for j in range(dim)]
    return all(c == 0 for c in combo) and dot(y, [frac(x) for x in h]) > 0
