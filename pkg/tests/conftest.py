import random
from fractions import Fraction

import pytest

from weilhecke.corpus import GRAM_CORPUS, corpus_forms
from weilhecke.finquad import DfElem, DiscForm
from weilhecke.hecke import FourierExpansion
from weilhecke.metaplectic import MetaElem, S, Z, t_power
from weilhecke.theta import LatticeSpec, theta_series


@pytest.fixture(scope="session")
def forms():
    return corpus_forms()


@pytest.fixture(scope="session")
def theta_z2():
    # weight 1/2, the classical theta of the integers with x -> x^2
    return theta_series(LatticeSpec([[2]]), 500)


@pytest.fixture(scope="session")
def theta_a2():
    return theta_series(LatticeSpec([[2, 1], [1, 2]]), 500)


@pytest.fixture(scope="session")
def theta_z4():
    return theta_series(LatticeSpec([[4]]), 500)


@pytest.fixture(scope="session")
def theta_z6():
    return theta_series(LatticeSpec([[6]]), 500)


@pytest.fixture(scope="session")
def theta_e8_small():
    return theta_series(LatticeSpec(GRAM_CORPUS["E8"]), 6)


def sigma3(n: int) -> int:
    return sum(d**3 for d in range(1, n + 1) if n % d == 0)


def eisenstein4(prec: int, df: DiscForm) -> FourierExpansion:
    """Weight-4 expansion 1 + 240 sum sigma_3(n) q^n on a trivial form."""
    coeffs = {(DfElem(()), Fraction(0)): 1}
    for n in range(1, prec):
        coeffs[(DfElem(()), Fraction(n))] = 240 * sigma3(n)
    return FourierExpansion(df, 4, prec, coeffs)


@pytest.fixture(scope="session")
def e8_series(forms, theta_e8_small):
    """High-precision stand-in for the E8 theta series.

    The coefficient law c(n) = 240 sigma_3(n) is validated against the
    enumerated series on their common range before use.
    """
    df = forms["E8"]
    high = eisenstein4(500, df)
    assert high.truncate(theta_e8_small.prec) == theta_e8_small
    return high


def rand_sl2(rng: random.Random, k: int = 6) -> MetaElem:
    g = MetaElem(1, 0, 0, 1)
    for _ in range(k):
        if rng.random() < 0.5:
            g = g * S
        else:
            g = g * t_power(rng.randint(-3, 3))
    if rng.random() < 0.5:
        g = g * (Z * Z)
    return g


def rand_gamma_n(rng: random.Random, n: int, k: int = 5) -> MetaElem:
    g = MetaElem(1, 0, 0, 1)
    for _ in range(k):
        if rng.random() < 0.5:
            g = g * MetaElem(1, n * rng.randint(-3, 3), 0, 1)
        else:
            g = g * MetaElem(1, 0, n * rng.randint(-3, 3), 1)
    return g
