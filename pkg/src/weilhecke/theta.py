"""Theta series of positive definite even lattices, the built-in test forms.

Vector enumeration is Fincke-Pohst style: the quadratic form is split into
a rational diagonal-times-unit-triangular square decomposition computed
exactly, integer ranges per coordinate come from exact square root bounds,
and every vector is certified by an exact evaluation.  A theta series has
weight rank/2 and one component per class of the discriminant group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import DomainError
from .finquad import DiscForm
from .hecke import FourierExpansion
from .linalg import mat_inverse


@dataclass(frozen=True)
class LatticeSpec:
    """A positive definite even lattice given by its Gram matrix."""

    gram: tuple[tuple[int, ...], ...]

    def __init__(self, gram):
        rows = tuple(tuple(int(x) for x in row) for row in gram)
        object.__setattr__(self, "gram", rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DomainError("Gram matrix must be square")
        for i in range(n):
            if rows[i][i] % 2:
                raise DomainError("not an even lattice")
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise DomainError("Gram matrix must be symmetric")
        if not _is_positive_definite(rows):
            raise DomainError("Gram matrix is not positive definite")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def disc_form(self) -> DiscForm:
        return DiscForm.from_gram([list(r) for r in self.gram])


def _is_positive_definite(rows) -> bool:
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True


def _square_decomposition(w):
    """w = sum_i d_i (x_i + sum_{j>i} r_ij x_j)^2 with exact rational d, r."""
    n = len(w)
    q = [[Fraction(x) for x in row] for row in w]
    d = [Fraction(0)] * n
    r = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = q[i][i]
        if d[i] <= 0:
            raise DomainError("form is not positive definite")
        for j in range(i + 1, n):
            r[i][j] = q[i][j] / d[i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= d[i] * r[i][k] * r[i][l]
                q[l][k] = q[k][l]
    return d, r


def _floor_minus_c_plus_sqrt(c: Fraction, bound: Fraction) -> int:
    """floor(-c + sqrt(bound)) for bound >= 0, exactly."""
    s = isqrt(bound.numerator * bound.denominator) // bound.denominator
    t = s - int(c) + 2
    while not _le_sq(t + c, bound):
        t -= 1
    return t


def _le_sq(x: Fraction, bound: Fraction) -> bool:
    """Whether x <= sqrt(bound), i.e. x <= 0 or x^2 <= bound."""
    return x <= 0 or x * x <= bound


def enumerate_quadratic(w, bound: Fraction) -> list[tuple[int, ...]]:
    """All integer vectors v with (1/2) v^T w v <= bound, for rational PD w."""
    n = len(w)
    if n == 0:
        return [()]
    d, r = _square_decomposition(w)
    bound2 = 2 * Fraction(bound)
    if bound2 < 0:
        return []
    out: list[tuple[int, ...]] = []
    vec = [0] * n

    def recurse(i: int, budget: Fraction):
        if i < 0:
            out.append(tuple(vec))
            return
        c = sum((r[i][j] * vec[j] for j in range(i + 1, n)), Fraction(0))
        cap = budget / d[i]
        hi = _floor_minus_c_plus_sqrt(c, cap)
        lo = -_floor_minus_c_plus_sqrt(-c, cap)
        for x in range(lo, hi + 1):
            vec[i] = x
            recurse(i - 1, budget - d[i] * (x + c) ** 2)
        vec[i] = 0

    recurse(n - 1, bound2)
    return out


def short_vectors(lattice: LatticeSpec, bound) -> list[tuple[int, ...]]:
    """All lattice vectors x with x^2/2 <= bound, in coordinates; includes 0."""
    bound = Fraction(bound)
    return enumerate_quadratic([list(r) for r in lattice.gram], bound)


def theta_series(lattice: LatticeSpec, n_max, df: DiscForm | None = None) -> FourierExpansion:
    """Component-wise theta series of the lattice, truncated below n_max.

    c(lambda, n) counts dual vectors in the class lambda with x^2/2 = n;
    the weight is rank/2 and the class labels match disc_form().
    """
    n_max = Fraction(n_max)
    if df is None:
        df = lattice.disc_form()
    n = lattice.rank
    ginv = mat_inverse([list(r) for r in lattice.gram])
    counts: dict[tuple, int] = {}
    for v in enumerate_quadratic(ginv, n_max):
        val = Fraction(0)
        for i in range(n):
            if v[i]:
                val += v[i] * sum(ginv[i][j] * v[j] for j in range(n))
        val /= 2
        if val >= n_max:
            continue
        lam = df.dual_vector_label(list(v))
        key = (lam, val)
        counts[key] = counts.get(key, 0) + 1
    return FourierExpansion(df, Fraction(lattice.rank, 2), n_max, counts)
