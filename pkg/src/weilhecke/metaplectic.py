"""The metaplectic double cover of GL2+ and integer matrix plumbing.

A MetaElem is a pair (M, phi) with M in GL2+(Q) integral here, and
phi(tau) = sign * sqrt(c*tau + d) for the principal branch of the square
root.  Products track the sign exactly; the branch cocycle is evaluated
numerically at an interior point of the upper half plane, where it is
guaranteed to be +-1.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import gcd

from .arith import xgcd
from .errors import DomainError, VerificationError

# Branch cocycle evaluation point and acceptance threshold.  The cocycle is
# exactly +-1; evaluating at tau = i keeps all square roots well away from
# the branch cut for integral matrices of moderate size.
COCYCLE_TAU = 1j
COCYCLE_TOL = 1e-6


@dataclass(frozen=True)
class MetaElem:
    """(matrix, sign * sqrt(c*tau + d)) with positive determinant."""

    a: int
    b: int
    c: int
    d: int
    sign: int = 1

    def __post_init__(self):
        if self.a * self.d - self.b * self.c <= 0:
            raise DomainError("metaplectic elements need positive determinant")
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")

    @property
    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def phi(self, tau: complex) -> complex:
        return self.sign * cmath.sqrt(self.c * tau + self.d)

    def act(self, tau: complex) -> complex:
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def __mul__(self, other: "MetaElem") -> "MetaElem":
        if not isinstance(other, MetaElem):
            return NotImplemented
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        lhs = self.phi(other.act(COCYCLE_TAU)) * other.phi(COCYCLE_TAU)
        rhs = cmath.sqrt(c * COCYCLE_TAU + d)
        ratio = lhs / rhs
        if abs(ratio - 1) < COCYCLE_TOL:
            sign = 1
        elif abs(ratio + 1) < COCYCLE_TOL:
            sign = -1
        else:
            raise VerificationError(f"branch cocycle ratio {ratio} is not +-1")
        return MetaElem(a, b, c, d, sign)

    def inverse(self) -> "MetaElem":
        if self.det != 1:
            raise DomainError("inverse is only integral for determinant 1")
        cand = MetaElem(self.d, -self.b, -self.c, self.a, 1)
        prod = self * cand
        return cand if prod.sign == 1 else MetaElem(self.d, -self.b, -self.c, self.a, -1)

    def __pow__(self, e: int) -> "MetaElem":
        if e < 0:
            return self.inverse() ** (-e)
        out = MetaElem(1, 0, 0, 1, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def to_json(self) -> dict:
        return {"m": [[self.a, self.b], [self.c, self.d]], "sign": self.sign}

    @staticmethod
    def from_json(obj: dict) -> "MetaElem":
        (a, b), (c, d) = obj["m"]
        return MetaElem(int(a), int(b), int(c), int(d), int(obj.get("sign", 1)))


T = MetaElem(1, 1, 0, 1)
S = MetaElem(0, -1, 1, 0)
Z = MetaElem(-1, 0, 0, -1)  # principal sqrt(-1) = i; Z = S^2 = (ST)^3


def t_power(n: int) -> MetaElem:
    return MetaElem(1, n, 0, 1)


@dataclass(frozen=True)
class Word:
    """Generator word; evaluating the tokens reproduces a MetaElem exactly.

    Tokens are ('S',), ('T', n) and ('Z', j).
    """

    tokens: tuple[tuple, ...]

    def evaluate(self) -> MetaElem:
        out = MetaElem(1, 0, 0, 1, 1)
        for tok in self.tokens:
            if tok[0] == "S":
                out = out * S
            elif tok[0] == "T":
                out = out * t_power(tok[1])
            elif tok[0] == "Z":
                out = out * Z ** (tok[1] % 4)
            else:
                raise DomainError(f"unknown token {tok!r}")
        return out


def word_decompose(mat) -> Word:
    """Write an SL2(Z) matrix as a word in S, T, Z.

    The returned word evaluates to the metaplectic element
    (mat, +sqrt(c*tau+d)) exactly (principal branch, positive sign).
    Its length is O(log max|entry|) via continued fractions on the
    first column.
    """
    mat = (tuple(mat[0]), tuple(mat[1]))
    (a, b), (c, d) = mat
    if a * d - b * c != 1:
        raise DomainError("word decomposition needs determinant 1")
    tokens: list[tuple] = []
    while c != 0:
        q, r = divmod(a, c)
        if 2 * abs(r) > abs(c):  # round to nearest for shorter words
            q += 1
        # mat = T^q * S * mat2  with  mat2 = S^-1 T^-q mat
        if q:
            tokens.append(("T", q))
        tokens.append(("S",))
        a, b, c, d = c, d, -(a - q * c), -(b - q * d)
    # now the matrix is +-T^(+-b)
    if a == 1:
        if b:
            tokens.append(("T", b))
    else:  # a == d == -1
        tokens.append(("Z", 1))
        if b:
            tokens.append(("T", -b))
    word = Word(tuple(tokens))
    val = word.evaluate()
    if val.matrix != mat:
        raise VerificationError("word evaluation does not reproduce the matrix")
    if val.sign == -1:
        word = Word(word.tokens + (("Z", 2),))
    return word


def lift_mod_n(mbar, n: int):
    """Lift a matrix with det = 1 (mod n) to an SL2(Z) matrix, entrywise mod n.

    Strong approximation: fix the bottom row to a coprime pair congruent to
    the input, complete to SL2 with the extended Euclidean algorithm, and
    correct the top row by a left shear.
    """
    if n < 1:
        raise DomainError("modulus must be positive")
    (a, b), (c, d) = [[x % n for x in row] for row in mbar]
    if (a * d - b * c) % n != 1 % n:
        raise DomainError("matrix determinant is not 1 mod n")
    if n == 1:
        return ((1, 0), (0, 1))
    c0, d0 = c, d
    if c0 == 0 and d0 == 0:
        raise DomainError("matrix is singular mod n")
    if c0 == 0:
        if d0 == 1 % n:
            pass  # bottom row (0, 1) is already coprime
        elif d0 == (-1) % n:
            d0 -= n  # bottom row (0, -1)
        else:
            c0 = n
    if c0 == 0:
        d1 = d0
    else:
        # strip the n-part of c0; remaining primes of c0 must avoid d1
        m = abs(c0)
        g = gcd(m, n)
        while g > 1:
            m //= g
            g = gcd(m, n)
        # d1 = d0 (mod n) and d1 = 1 (mod m); the moduli are coprime
        if m == 1:
            d1 = d0
        else:
            _, x, _ = xgcd(n, m)
            d1 = (d0 + (1 - d0) * x % m * n) % (n * m)
    if gcd(c0, d1) != 1:
        raise VerificationError("bottom row completion failed")
    _, y, x = xgcd(d1, c0)
    # a1*d1 - b1*c0 = 1 with a1 = y, b1 = -x
    a1, b1 = y, -x
    # top row correction: find s with (a1,b1) + s*(c0,d1) = (a,b) mod n
    g2, p, q = xgcd(c0, d1)
    s = ((a - a1) * p + (b - b1) * q) % n
    a2, b2 = a1 + s * c0, b1 + s * d1
    out = ((a2, b2), (c0, d1))
    assert a2 * d1 - b2 * c0 == 1
    for i in range(2):
        for j in range(2):
            if (out[i][j] - mbar[i][j]) % n:
                raise VerificationError("lift does not reduce to the input")
    return out


def snf_sl2(mat) -> tuple[tuple, tuple, int]:
    """Elementary divisor decomposition inside SL2(Z).

    For a primitive integer matrix D with positive determinant, returns
    (U, V, det) with U, V in SL2(Z) and U*D*V = diag(1, det).
    """
    (a, b), (c, d) = mat
    det = a * d - b * c
    if det <= 0:
        raise DomainError("positive determinant required")
    if gcd(gcd(a, b), gcd(c, d)) != 1:
        raise DomainError("matrix is not primitive; use its primitive part")
    u = [[1, 0], [0, 1]]
    v = [[1, 0], [0, 1]]
    m = [[a, b], [c, d]]

    def left(g):  # m <- g*m, u <- g*u
        for target in (m, u):
            r0 = [g[0][0] * target[0][j] + g[0][1] * target[1][j] for j in range(2)]
            r1 = [g[1][0] * target[0][j] + g[1][1] * target[1][j] for j in range(2)]
            target[0], target[1] = r0, r1

    def right(g):  # m <- m*g, v <- v*g
        for target in (m, v):
            c0 = [target[i][0] * g[0][0] + target[i][1] * g[1][0] for i in range(2)]
            c1 = [target[i][0] * g[0][1] + target[i][1] * g[1][1] for i in range(2)]
            for i in range(2):
                target[i][0], target[i][1] = c0[i], c1[i]

    rounds = 0
    while True:
        rounds += 1
        if rounds > 64:
            raise VerificationError("elementary divisor reduction did not converge")
        while m[1][0] or m[0][1]:
            if m[1][0]:
                if m[0][0] == 0:
                    left([[0, -1], [1, 0]])
                elif m[1][0] % m[0][0] == 0:
                    left([[1, 0], [-m[1][0] // m[0][0], 1]])
                else:
                    g, x, y = xgcd(m[0][0], m[1][0])
                    left([[x, y], [-m[1][0] // g, m[0][0] // g]])
            if m[0][1]:
                if m[0][0] == 0:
                    right([[0, 1], [-1, 0]])
                elif m[0][1] % m[0][0] == 0:
                    right([[1, -m[0][1] // m[0][0]], [0, 1]])
                else:
                    g, x, y = xgcd(m[0][0], m[0][1])
                    right([[x, -m[0][1] // g], [y, m[0][0] // g]])
        if abs(m[0][0]) == 1:
            break
        right([[1, 0], [1, 1]])  # fold column 2 in; redo until gcd reaches 1
    if m[0][0] < 0:  # both diagonal entries negative; fix with -I
        left([[-1, 0], [0, -1]])
    # primitivity forces the first elementary divisor to be 1
    if m[0][0] != 1 or m[1][1] != det:
        raise VerificationError("unexpected elementary divisors")
    return (tuple(u[0]), tuple(u[1])), (tuple(v[0]), tuple(v[1])), det
