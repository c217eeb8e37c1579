"""Elementary number-theoretic helpers shared across the package."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .errors import DomainError


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def inv_mod(a: int, n: int) -> int:
    """Inverse of a modulo n; raises DomainError if gcd(a, n) != 1."""
    g, x, _ = xgcd(a % n, n)
    if g != 1:
        raise DomainError(f"{a} is not invertible modulo {n}")
    return x % n


def crt(r1: int, n1: int, r2: int, n2: int) -> int:
    """Solution modulo n1*n2 of x = r1 (n1), x = r2 (n2) for coprime moduli."""
    g, x, _ = xgcd(n1, n2)
    if g != 1:
        raise DomainError("crt moduli are not coprime")
    return (r1 + (r2 - r1) * x % n2 * n1) % (n1 * n2)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine at the scales used here."""
    if n <= 0:
        raise DomainError("factorize expects a positive integer")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """n = f**2 * u with u squarefree; returns (f, u). n must be positive."""
    f, u = 1, 1
    for p, e in factorize(n).items():
        f *= p ** (e // 2)
        if e % 2:
            u *= p
    return f, u


def odd_radical(n: int) -> int:
    """Product of the odd primes dividing n."""
    r = 1
    for p in factorize(n):
        if p != 2:
            r *= p
    return r


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), totally multiplicative in both arguments.

    Conventions: (a/2) is 0 for even a and (-1)^((a^2-1)/8) otherwise;
    (a/-1) is -1 exactly for a < 0; (a/0) is 1 for a = +-1 and 0 else.
    For odd positive n this is the Jacobi symbol.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # pull out the 2-part of n
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_rational(a: Fraction | int, p: int) -> int:
    """Legendre-type symbol (a/p) for a rational a with denominator prime to p."""
    a = Fraction(a)
    if a.denominator % p == 0:
        raise DomainError(f"denominator of {a} is not prime to {p}")
    num = a.numerator % p
    den_inv = inv_mod(a.denominator % p, p)
    return kronecker(num * den_inv % p, p)


def theta_multiplier_sign(c: int, d: int) -> int:
    """Sign (c/d) of the theta multiplier, for odd d.

    The symbol is the Kronecker symbol extended so that (c/-1) is the sign
    of c (and 1 for c = 0); it is totally multiplicative in d.
    """
    if d % 2 == 0:
        raise DomainError("theta multiplier sign needs odd lower entry")
    if d < 0:
        return kronecker(c, -d) * (1 if c >= 0 else -1)
    return kronecker(c, d)


def frac_mod1(q: Fraction) -> Fraction:
    """Representative of q + Z in [0, 1)."""
    return q - (q.numerator // q.denominator)


def lcm(*vals: int) -> int:
    out = 1
    for v in vals:
        out = out * v // gcd(out, v)
    return out
