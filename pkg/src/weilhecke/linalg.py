"""Exact integer and rational matrix routines (small dense matrices)."""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError


def smith_normal_form(mat: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Smith normal form over Z with transforms.

    Returns (U, V, d) with U*mat*V = diag(d), d nonnegative and d[i] | d[i+1].
    U and V are unimodular.  Pivoting picks the entry of least absolute value.
    """
    a = [row[:] for row in mat]
    n = len(a)
    m = len(a[0]) if n else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(m)] for i in range(m)]

    def row_op(i, j, q):  # row i -= q * row j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col i -= q * col j
        for r in range(n):
            a[r][i] -= q * a[r][j]
        for r in range(m):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(m):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    k = 0
    size = min(n, m)
    while k < size:
        # locate nonzero pivot of least absolute value in the trailing block
        piv = None
        for i in range(k, n):
            for j in range(k, m):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(k, piv[0])
        swap_cols(k, piv[1])
        # clear row and column k
        dirty = True
        while dirty:
            dirty = False
            for i in range(k + 1, n):
                if a[i][k]:
                    q = a[i][k] // a[k][k]
                    row_op(i, k, q)
                    if a[i][k]:
                        swap_rows(k, i)
                        dirty = True
            for j in range(k + 1, m):
                if a[k][j]:
                    q = a[k][j] // a[k][k]
                    col_op(j, k, q)
                    if a[k][j]:
                        swap_cols(k, j)
                        dirty = True
        # enforce divisibility: a[k][k] must divide the trailing block
        bad = None
        for i in range(k + 1, n):
            for j in range(k + 1, m):
                if a[i][j] % a[k][k]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_op(k, bad, -1)  # fold row `bad` into row k, redo pivot
            continue
        k += 1

    for i in range(size):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    d = [a[i][i] for i in range(size)]
    return u, v, d


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [
        [sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
        for i in range(n)
    ]


def mat_det(mat) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination over Q."""
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


def mat_inverse(mat) -> list[list[Fraction]]:
    """Exact inverse of a square rational matrix."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise DomainError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def symmetric_signature(mat) -> tuple[int, int]:
    """(positive, negative) inertia of a nondegenerate symmetric rational matrix.

    Uses congruence diagonalization; a zero diagonal with a nonzero
    off-diagonal entry is repaired by adding the partner row/column.
    """
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    pos = neg = 0
    idx = list(range(n))
    used = [False] * n
    for _ in range(n):
        piv = next((i for i in idx if not used[i] and a[i][i] != 0), None)
        if piv is None:
            pair = None
            for i in idx:
                if used[i]:
                    continue
                for j in idx:
                    if not used[j] and j != i and a[i][j] != 0:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                raise DomainError("matrix is degenerate")
            i, j = pair
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        used[piv] = True
        for i in idx:
            if not used[i] and a[i][piv] != 0:
                f = a[i][piv] / p
                for c in range(n):
                    a[i][c] -= f * a[piv][c]
                for r in range(n):
                    a[r][i] -= f * a[r][piv]
    return pos, neg
