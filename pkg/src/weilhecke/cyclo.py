"""Exact arithmetic in cyclotomic fields Q(zeta_M).

A CycNum is a polynomial in zeta_M reduced modulo the M-th cyclotomic
polynomial Phi_M, stored as an integer coefficient vector of length
phi(M) over a common positive denominator.  The reduction is canonical,
so two field elements are equal exactly when their stored data agree.
Rationals never degrade to floating point; the only floating-point exit
is :meth:`CycNum.embed`.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import reduce
from math import gcd

import numpy as np

from .arith import divisors, factorize, squarefree_decomposition
from .errors import DomainError

_INT64_SAFE = 2**62


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    """Quotient of a by b in Z[x]; the division must be exact and b monic-ish."""
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1]
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        q[i] = c // lead
        if q[i]:
            for j, bj in enumerate(b):
                a[i + j] -= q[i] * bj
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return q


_cyclo_cache: dict[int, list[int]] = {}
_cyclo_lock = threading.Lock()


def cyclotomic_polynomial(m: int) -> list[int]:
    """Coefficients of Phi_m, ascending degree, computed by exact division."""
    cached = _cyclo_cache.get(m)
    if cached is not None:
        return cached
    if m == 1:
        out = [-1, 1]
    else:
        num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
        den = [1]
        for d in divisors(m):
            if d < m:
                den = _poly_mul(den, cyclotomic_polynomial(d))
        out = _poly_divexact(num, den)
    with _cyclo_lock:
        _cyclo_cache[m] = out
    return out


def euler_phi(m: int) -> int:
    out = 1
    for p, e in factorize(m).items():
        out *= (p - 1) * p ** (e - 1)
    return out


class _Field:
    """Shared per-modulus context: Phi_M and reduction/rotation tables."""

    def __init__(self, m: int):
        self.m = m
        self.phi_poly = cyclotomic_polynomial(m)
        self.deg = len(self.phi_poly) - 1
        # rows[j] = coefficients of x^j mod Phi_M, for every exponent that can
        # arise from products (< 2*deg - 1), exponent lifting (< m), or
        # root-of-unity rotations (< m + deg - 1).
        nrows = max(m + self.deg - 1, 2 * self.deg - 1)
        rows: list[list[int]] = []
        for j in range(nrows):
            if j < self.deg:
                row = [0] * self.deg
                row[j] = 1
            else:
                # x^j = x * x^(j-1) reduced
                prev = rows[j - 1]
                row = [0] + prev[:-1]
                top = prev[-1]
                if top:
                    for i in range(self.deg):
                        row[i] -= top * self.phi_poly[i]
            rows.append(row)
        self.red_rows = rows
        self.red_np = np.array(rows, dtype=np.int64)
        self.red_max = max(1, int(np.abs(self.red_np).max()))
        self._galois: dict[int, np.ndarray] = {}
        self._restrict: dict[int, tuple] = {}
        self.roots = np.exp(2j * np.pi * np.arange(self.deg) / m)

    def reduce_exponent(self, j: int) -> tuple[int, ...]:
        return tuple(self.red_rows[j % self.m])

    def galois_matrix(self, t: int) -> np.ndarray:
        """Row i is the reduction of x^(i*t mod M); realizes zeta -> zeta^t."""
        t %= self.m
        if gcd(t, self.m) != 1:
            raise DomainError(f"{t} is not a unit modulo {self.m}")
        mat = self._galois.get(t)
        if mat is None:
            mat = np.array(
                [self.red_rows[(i * t) % self.m] for i in range(self.deg)],
                dtype=np.int64,
            )
            self._galois[t] = mat
        return mat


_fields: dict[int, _Field] = {}
_fields_lock = threading.Lock()


def _field(m: int) -> _Field:
    f = _fields.get(m)
    if f is None:
        with _fields_lock:
            f = _fields.get(m)
            if f is None:
                f = _Field(m)
                _fields[m] = f
    return f


def _mul_nums(a: tuple[int, ...], b: tuple[int, ...], fld: _Field) -> tuple[int, ...]:
    """Product of two reduced coefficient vectors, reduced mod Phi_M."""
    deg = fld.deg
    if deg == 1:
        return (a[0] * b[0],)
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma and mb and ma * mb * deg * fld.red_max * (2 * deg - 1) < _INT64_SAFE:
        conv = np.convolve(
            np.array(a, dtype=np.int64), np.array(b, dtype=np.int64)
        )
        out = conv @ fld.red_np[: len(conv)]
        return tuple(int(x) for x in out)
    conv = _poly_mul(list(a), list(b))
    out = [0] * deg
    for j, c in enumerate(conv):
        if c:
            row = fld.red_rows[j]
            for i in range(deg):
                out[i] += c * row[i]
    return tuple(out)


def _normalize(num: list[int] | tuple[int, ...], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        den = -den
        num = [-x for x in num]
    g = den
    for x in num:
        g = gcd(g, x)
        if g == 1:
            break
    if g > 1:
        num = [x // g for x in num]
        den //= g
    return tuple(num), den


class CycNum:
    """Element of Q(zeta_M) in canonical reduced form.

    Alternate moduli interoperate: binary operations lift both operands to
    Q(zeta_lcm) first.  Instances are immutable and safe to share.
    """

    __slots__ = ("mod", "num", "den")

    def __init__(self, mod: int, num: tuple[int, ...], den: int = 1):
        if mod < 1:
            raise DomainError("modulus must be a positive integer")
        fld = _field(mod)
        if len(num) != fld.deg:
            raise DomainError("coefficient vector has wrong length")
        if den == 0:
            raise DomainError("zero denominator")
        self.mod = mod
        self.num, self.den = _normalize(num, den)

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(q, mod: int = 1) -> "CycNum":
        q = Fraction(q)
        deg = _field(mod).deg
        return CycNum(mod, (q.numerator,) + (0,) * (deg - 1), q.denominator)

    # -- basics --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_one(self) -> bool:
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.num)

    def __repr__(self):
        return f"CycNum(mod={self.mod}, coeffs={[str(c) for c in self.coeffs()]})"

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNum.from_rational(other, self.mod)
        if not isinstance(other, CycNum):
            return NotImplemented
        if self.mod != other.mod:
            m = self.mod * other.mod // gcd(self.mod, other.mod)
            return self.lift(m) == other.lift(m)
        return self.num == other.num and self.den == other.den

    __hash__ = None  # values of different moduli may compare equal

    # -- modulus changes ------------------------------------------------

    def lift(self, mod: int) -> "CycNum":
        """Image under Q(zeta_M) -> Q(zeta_mod), zeta_M -> zeta_mod^(mod/M)."""
        if mod == self.mod:
            return self
        if mod % self.mod:
            raise DomainError(f"{self.mod} does not divide {mod}")
        fld = _field(mod)
        step = mod // self.mod
        out = [0] * fld.deg
        for i, c in enumerate(self.num):
            if c:
                row = fld.red_rows[i * step]
                for j in range(fld.deg):
                    out[j] += c * row[j]
        return CycNum(mod, tuple(out), self.den)

    def restrict(self, mod: int) -> "CycNum":
        """Inverse of lift for elements lying in the subfield Q(zeta_mod).

        Raises DomainError when the value does not belong to the subfield.
        """
        if mod == self.mod:
            return self
        if self.mod % mod:
            raise DomainError(f"{mod} does not divide {self.mod}")
        solver = _restriction_solver(self.mod, mod)
        target = self.coeffs()
        sol = solver(target)
        if sol is None:
            raise DomainError(
                f"value is not in Q(zeta_{mod}) (modulus {self.mod})"
            )
        den = reduce(lcm_int, (c.denominator for c in sol), 1)
        return CycNum(mod, tuple(int(c * den) for c in sol), den)

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNum.from_rational(other, self.mod)
        if not isinstance(other, CycNum):
            return None, None
        if self.mod == other.mod:
            return self, other
        m = self.mod * other.mod // gcd(self.mod, other.mod)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        g = gcd(a.den, b.den)
        da, db = b.den // g, a.den // g
        num = [x * da + y * db for x, y in zip(a.num, b.num)]
        return CycNum(a.mod, tuple(num), a.den * da)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.mod, tuple(-x for x in self.num), self.den)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        fld = _field(a.mod)
        return CycNum(a.mod, _mul_nums(a.num, b.num, fld), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        """Field inverse via the extended Euclidean algorithm mod Phi_M."""
        if self.is_zero():
            raise DomainError("division by zero")
        fld = _field(self.mod)
        if fld.deg == 1:
            return CycNum(self.mod, (self.den,), self.num[0])
        # work in Q[x]: invert num (as polynomial) modulo Phi_M
        r0 = [Fraction(c) for c in fld.phi_poly]
        r1 = [Fraction(n) for n in self.num]
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if len(r1) == 1:
                c = r1[0]
                inv = [s / c for s in s1]
                break
            q, rem = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _frac_poly_sub(s0, _poly_mul_frac(q, s1))
        out = [Fraction(0)] * fld.deg
        for j, c in enumerate(inv):
            if c:
                row = fld.red_rows[j]
                for i in range(fld.deg):
                    out[i] += c * row[i]
        den = reduce(lcm_int, (c.denominator for c in out), 1)
        return CycNum(
            self.mod, tuple(int(c * den) for c in out), den
        ) * Fraction(self.den)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return CycNum.from_rational(other, self.mod) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CycNum.from_rational(1, self.mod)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- Galois action ----------------------------------------------------

    def galois(self, t: int) -> "CycNum":
        """Apply the automorphism zeta_M -> zeta_M^t for t prime to M."""
        fld = _field(self.mod)
        if fld.deg == 1:
            return self
        mat = fld.galois_matrix(t)
        ma = max(abs(x) for x in self.num)
        if ma and ma * fld.red_max * fld.deg < _INT64_SAFE:
            out = np.array(self.num, dtype=np.int64) @ mat
            return CycNum(self.mod, tuple(int(x) for x in out), self.den)
        out = [0] * fld.deg
        for i, c in enumerate(self.num):
            if c:
                for j in range(fld.deg):
                    out[j] += c * int(mat[i, j])
        return CycNum(self.mod, tuple(out), self.den)

    def conjugate(self) -> "CycNum":
        """Complex conjugation, zeta_M -> zeta_M^(-1)."""
        return self.galois(-1)

    # -- exits -------------------------------------------------------------

    def embed(self) -> complex:
        """Numerical value under zeta_M -> exp(2*pi*i/M)."""
        fld = _field(self.mod)
        return complex(np.dot(np.array(self.num, dtype=float), fld.roots)) / self.den

    def as_rational(self) -> Fraction | None:
        """The value as an exact rational, or None if it is irrational."""
        if any(self.num[1:]):
            return None
        return Fraction(self.num[0], self.den)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "modulus": self.mod,
            "coeffs": [str(c) for c in self.coeffs()],
        }

    @staticmethod
    def from_json(obj: dict) -> "CycNum":
        coeffs = [Fraction(s) for s in obj["coeffs"]]
        den = reduce(lcm_int, (c.denominator for c in coeffs), 1)
        return CycNum(
            int(obj["modulus"]), tuple(int(c * den) for c in coeffs), den
        )


def lcm_int(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _frac_poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 1)
    while len(a) - 1 >= db and any(a):
        da = len(a) - 1
        c = a[-1] / b[-1]
        q[da - db] = c
        for i in range(db + 1):
            a[da - db + i] -= c * b[i]
        while a and a[-1] == 0:
            a.pop()
        if not a:
            a = [Fraction(0)]
    return q, a


def _frac_poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_mul_frac(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


_restriction_cache: dict[tuple[int, int], object] = {}


def _restriction_solver(big: int, small: int):
    """Solver mapping coefficient vectors in Q(zeta_big) to Q(zeta_small) data."""
    key = (big, small)
    solver = _restriction_cache.get(key)
    if solver is not None:
        return solver
    fb, fs = _field(big), _field(small)
    step = big // small
    # columns: reduced vectors of zeta_big^(step*i) for i < phi(small)
    cols = []
    for i in range(fs.deg):
        cols.append([Fraction(c) for c in fb.red_rows[(step * i) % big]])
    # Gaussian elimination, recording row operations on an identity tail
    nrows, ncols = fb.deg, fs.deg
    mat = [[cols[j][i] for j in range(ncols)] for i in range(nrows)]
    pivots: list[tuple[int, int]] = []
    ops: list[tuple] = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if mat[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("restriction basis is degenerate")
        if piv != row:
            mat[row], mat[piv] = mat[piv], mat[row]
            ops.append(("swap", row, piv))
        inv = 1 / mat[row][col]
        mat[row] = [x * inv for x in mat[row]]
        ops.append(("scale", row, inv))
        for r in range(nrows):
            if r != row and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[row])]
                ops.append(("axpy", r, row, f))
        pivots.append((row, col))
        row += 1

    basis = cols

    def solve(target):
        vec = [Fraction(t) for t in target]
        for op in ops:
            if op[0] == "swap":
                _, i, j = op
                vec[i], vec[j] = vec[j], vec[i]
            elif op[0] == "scale":
                _, i, f = op
                vec[i] *= f
            else:
                _, r, i, f = op
                vec[r] -= f * vec[i]
        sol = [Fraction(0)] * ncols
        for r, c in pivots:
            sol[c] = vec[r]
        # verify: the candidate must reproduce the target exactly
        for i in range(nrows):
            acc = Fraction(0)
            for j in range(ncols):
                if sol[j]:
                    acc += sol[j] * basis[j][i]
            if acc != target[i]:
                return None
        return sol

    _restriction_cache[key] = solve
    return solve


# -- public constructors ------------------------------------------------------


def zeta(a: int, m: int) -> CycNum:
    """The root of unity e(a/m) = exp(2*pi*i*a/m)."""
    if m < 1:
        raise DomainError("modulus must be a positive integer")
    fld = _field(m)
    return CycNum(m, fld.reduce_exponent(a % m))


def e_frac(q, m: int) -> CycNum:
    """e(q) for a rational q whose denominator divides m, as an element of Q(zeta_m)."""
    q = Fraction(q)
    if m % q.denominator:
        raise DomainError(f"e({q}) does not lie in Q(zeta_{m})")
    return zeta(q.numerator * (m // q.denominator), m)


def sqrt_nat(n: int, m: int) -> CycNum:
    """Exact square root of a positive integer n inside Q(zeta_m).

    Requires 8 | m when n has even part, 4 | m for the quadratic Gauss sum
    corrections, and the odd squarefree part of n to divide m.
    """
    if n <= 0:
        raise DomainError("sqrt_nat expects a positive integer")
    f, u = squarefree_decomposition(n)
    out = CycNum.from_rational(f, m)
    if u % 2 == 0:
        if m % 8:
            raise DomainError(f"sqrt(2) requires 8 | modulus, got {m}")
        out = out * (zeta(1, 8).lift(m) + zeta(7, 8).lift(m))
        u //= 2
    if u > 1:
        if m % u or m % 4:
            raise DomainError(f"sqrt({u}) does not lie in Q(zeta_{m})")
        g = zeta(0, m) * 0
        for j in range(u):
            g = g + zeta(j * j * (m // u), m)
        if u % 4 == 3:
            g = g * zeta(-1 * (m // 4) % m, m)  # divide by i
        out = out * g
    return out
