import random
from fractions import Fraction

import pytest

from weilhecke.arith import (
    crt,
    divisors,
    factorize,
    frac_mod1,
    inv_mod,
    is_prime,
    is_square,
    kronecker,
    kronecker_rational,
    odd_radical,
    squarefree_decomposition,
    theta_multiplier_sign,
    xgcd,
)
from weilhecke.errors import DomainError


def test_xgcd():
    rng = random.Random(1)
    for _ in range(200):
        a, b = rng.randint(-500, 500), rng.randint(-500, 500)
        g, x, y = xgcd(a, b)
        assert a * x + b * y == g
        assert g >= 0


def test_inv_mod():
    assert inv_mod(3, 10) == 7
    with pytest.raises(DomainError):
        inv_mod(4, 10)


def test_crt():
    x = crt(2, 3, 3, 5)
    assert x % 3 == 2 and x % 5 == 3


def test_factorize_divisors():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert squarefree_decomposition(360) == (6, 10)
    assert odd_radical(360) == 15
    assert is_square(49) and not is_square(48)
    assert is_prime(97) and not is_prime(91)


def test_kronecker_legendre_agreement():
    # against Euler's criterion for odd primes
    for p in (3, 5, 7, 11, 13):
        for a in range(1, p):
            euler = pow(a, (p - 1) // 2, p)
            assert kronecker(a, p) == (1 if euler == 1 else -1)
        assert kronecker(p, p) == 0


def test_kronecker_multiplicativity():
    rng = random.Random(2)
    for _ in range(300):
        a, b = rng.randint(-40, 40), rng.randint(-40, 40)
        n = rng.randint(1, 40)
        assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)


def test_kronecker_two():
    assert kronecker(3, 2) == -1
    assert kronecker(7, 2) == 1
    assert kronecker(2, 2) == 0


def test_kronecker_rational():
    assert kronecker_rational(Fraction(1, 4), 3) == kronecker(1 * inv_mod(4, 3), 3)
    assert kronecker_rational(Fraction(0), 5) == 0
    with pytest.raises(DomainError):
        kronecker_rational(Fraction(1, 3), 3)


def test_theta_multiplier_sign():
    assert theta_multiplier_sign(0, 1) == 1
    assert theta_multiplier_sign(0, -1) == 1
    assert theta_multiplier_sign(-4, -1) == -1
    assert theta_multiplier_sign(4, 9) == 1
    with pytest.raises(DomainError):
        theta_multiplier_sign(1, 2)


def test_frac_mod1():
    assert frac_mod1(Fraction(7, 3)) == Fraction(1, 3)
    assert frac_mod1(Fraction(-1, 4)) == Fraction(3, 4)
    assert frac_mod1(Fraction(2)) == 0
