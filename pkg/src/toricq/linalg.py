"""Small exact linear algebra over Fraction.

Matrices are lists of row lists. Everything is copied before elimination,
nothing is done in place on caller data. Sizes here are tiny (the character
lattice rank and the number of weights), so plain Gaussian elimination with
exact pivots is the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def _copy(mat):
    return [[Fraction(x) for x in row] for row in mat]


def rank(mat) -> int:
    """Rational rank, by row reduction."""
    m = _copy(mat)
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def solve(mat, rhs):
    """Solve mat * x = rhs exactly.

    Returns the unique solution as a list of Fractions, or None when the
    system is inconsistent. Requires the columns of mat to be linearly
    independent, which is how every call site uses it.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    aug = [[Fraction(mat[i][j]) for j in range(cols)] + [Fraction(rhs[i])]
           for i in range(rows)]
    r = 0
    pivots = []
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if piv is None:
            return None  # dependent columns, caller guarantees otherwise
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    # leftover rows must have vanished for consistency
    for i in range(r, rows):
        if aug[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for row_idx, c in enumerate(pivots):
        x[c] = aug[row_idx][cols]
    return x


def invert(mat):
    """Exact inverse of a square matrix, or None if singular."""
    n = len(mat)
    aug = [[Fraction(mat[i][j]) for j in range(n)] +
           [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def det(mat) -> Fraction:
    m = _copy(mat)
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def independent(vectors) -> bool:
    return rank(vectors) == len(vectors)


def positive_combination(target, gens):
    """Coefficients expressing target as a >= 0 combination of gens.

    gens must be linearly independent, so the representation is unique if it
    exists inside the span. Returns the coefficient list or None.
    """
    cols = [[g[i] for g in gens] for i in range(len(target))]
    coeffs = solve(cols, list(target))
    if coeffs is None:
        return None
    if any(c < 0 for c in coeffs):
        return None
    return coeffs


def in_rational_cone(target, gens) -> bool:
    """Is target a nonnegative rational combination of gens?

    Caratheodory over Q: if so, some linearly independent subset already
    works, so trying every independent subset of size <= dim is exhaustive.
    """
    if all(x == 0 for x in target):
        return True
    if not gens:
        return False
    dim = len(target)
    idx = range(len(gens))
    for size in range(1, min(dim, len(gens)) + 1):
        for subset in combinations(idx, size):
            sub = [gens[i] for i in subset]
            if not independent(sub):
                continue
            if positive_combination(target, sub) is not None:
                return True
    return False


def torsion_subgroup(mat):
    """All v in (Q/Z)^k with mat * v integral, for square nonsingular mat.

    These are the fractional-part vectors of the columns of mat^{-1}, closed
    under addition mod 1. The subgroup has order |det mat|, which bounds the
    closure loop.
    """
    inv = invert(mat)
    if inv is None:
        return None
    k = len(mat)
    gens = [tuple(inv[i][j] % 1 for i in range(k)) for j in range(k)]
    group = {tuple(Fraction(0) for _ in range(k))}
    frontier = list(group)
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                s = tuple((a + b) % 1 for a, b in zip(g, h))
                if s not in group:
                    group.add(s)
                    nxt.append(s)
        frontier = nxt
    return group
