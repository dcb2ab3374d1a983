"""Reference computations written independently of the package.

Everything here works on plain nested lists of ints/Fractions.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


def det(M):
    """Determinant by Fraction Gaussian elimination."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    sign = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    out = Fraction(sign)
    for i in range(n):
        out *= A[i][i]
    return out


def rank_mod(M, p=None):
    """Rank over Q (``p=None``) or over F_p."""
    if not M or not M[0]:
        return 0
    if p is None:
        A = [[Fraction(x) for x in row] for row in M]
    else:
        A = [[int(x) % p for x in row] for row in M]
    rows, cols = len(A), len(A[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = (1 / A[r][c]) if p is None else pow(A[r][c], -1, p)
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
                if p is not None:
                    A[i] = [a % p for a in A[i]]
        r += 1
    return r


def determinantal_divisors(M):
    """``d_k`` = gcd of all ``k x k`` minors, until it becomes zero."""
    if not M or not M[0]:
        return []
    m, n = len(M), len(M[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                g = gcd(g, int(det([[M[i][j] for j in cs] for i in rs])))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors(M):
    """Nonzero Smith diagonal from determinantal divisors: ``s_k = d_k / d_(k-1)``."""
    d = determinantal_divisors(M)
    prev = 1
    out = []
    for x in d:
        out.append(x // prev)
        prev = x
    return out


def integer_homology(dims, boundaries):
    """Homology of ``C_k`` (rank ``dims[k]``) with ``boundaries[k]: C_k -> C_(k-1)``.

    Returns ``{k: (free rank, [torsion])}``; matrices are lists of rows.
    """
    out = {}
    for k, n in dims.items():
        dk = boundaries.get(k)
        dk1 = boundaries.get(k + 1)
        rk = rank_mod(dk) if dk else 0
        rk1 = rank_mod(dk1) if dk1 else 0
        tors = [t for t in invariant_factors(dk1) if t > 1] if dk1 else []
        out[k] = (n - rk - rk1, tors)
    return out


def field_homology_dims(dims, boundaries, p=None):
    out = {}
    for k, n in dims.items():
        dk = boundaries.get(k)
        dk1 = boundaries.get(k + 1)
        out[k] = n - (rank_mod(dk, p) if dk else 0) - (rank_mod(dk1, p) if dk1 else 0)
    return out
