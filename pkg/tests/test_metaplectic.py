import math
import random

import pytest

from weilhecke.errors import DomainError
from weilhecke.metaplectic import (
    MetaElem,
    S,
    T,
    Word,
    Z,
    lift_mod_n,
    snf_sl2,
    t_power,
    word_decompose,
)

from conftest import rand_sl2


def mat_mul2(x, y):
    return tuple(
        tuple(sum(x[i][t] * y[t][j] for t in range(2)) for j in range(2))
        for i in range(2)
    )


def test_defining_relations():
    assert S * S == Z
    assert (S * T) ** 3 == Z
    z2 = Z * Z
    assert z2.matrix == ((1, 0), (0, 1)) and z2.sign == -1
    z4 = z2 * z2
    assert z4.matrix == ((1, 0), (0, 1)) and z4.sign == 1


def test_center_and_associativity():
    rng = random.Random(3)
    for _ in range(60):
        g, h, k = rand_sl2(rng), rand_sl2(rng), rand_sl2(rng)
        assert (g * h) * k == g * (h * k)
        assert Z * g == g * Z
        assert g * g.inverse() == MetaElem(1, 0, 0, 1, 1)


def test_phi_squares_to_ctau_plus_d():
    rng = random.Random(4)
    for _ in range(30):
        g = rand_sl2(rng)
        tau = 0.3 + 0.9j
        assert abs(g.phi(tau) ** 2 - (g.c * tau + g.d)) < 1e-9


def test_word_decompose_generators():
    assert word_decompose(((1, 1), (0, 1))).tokens == (("T", 1),)
    assert word_decompose(((0, -1), (1, 0))).tokens == (("S",),)
    assert word_decompose(((1, 0), (0, 1))).tokens == ()


def test_word_round_trip_random():
    rng = random.Random(5)
    for _ in range(250):
        g = rand_sl2(rng, 10)
        word = word_decompose(g.matrix)
        val = word.evaluate()
        assert val.matrix == g.matrix
        assert val.sign == 1


def test_word_round_trip_large_entries():
    rng = random.Random(6)
    g = MetaElem(1, 0, 0, 1)
    while max(abs(x) for row in g.matrix for x in row) < 10**6:
        g = g * t_power(rng.randint(2, 9)) * S
    word = word_decompose(g.matrix)
    val = word.evaluate()
    assert val.matrix == g.matrix and val.sign == 1
    entries = max(abs(x) for row in g.matrix for x in row)
    assert len(word.tokens) <= 6 * (entries.bit_length() + 2)


def test_word_rejects_wrong_determinant():
    with pytest.raises(DomainError):
        word_decompose(((2, 0), (0, 1)))


def test_lift_mod_n_examples():
    assert lift_mod_n([[1, 0], [0, 1]], 12) == ((1, 0), (0, 1))
    assert lift_mod_n([[0, -1], [1, 0]], 12) == ((0, -1), (1, 0))


def test_lift_mod_n_round_trip():
    rng = random.Random(7)
    for n in (2, 7, 12, 13, 24, 104):
        for _ in range(60):
            g = rand_sl2(rng)
            mbar = [[x % n for x in row] for row in g.matrix]
            lifted = lift_mod_n(mbar, n)
            det = lifted[0][0] * lifted[1][1] - lifted[0][1] * lifted[1][0]
            assert det == 1
            for i in range(2):
                for j in range(2):
                    assert (lifted[i][j] - mbar[i][j]) % n == 0


def test_lift_mod_n_rejects_bad_determinant():
    with pytest.raises(DomainError):
        lift_mod_n([[1, 0], [0, 2]], 5)


def test_snf_sl2_examples():
    for m in (2, 3, 5):
        u, v, det = snf_sl2(((m * m, 0), (0, 1)))
        assert det == m * m
        assert mat_mul2(mat_mul2(u, ((m * m, 0), (0, 1))), v) == ((1, 0), (0, m * m))
    u, v, det = snf_sl2(((1, 5), (0, 9)))
    assert mat_mul2(mat_mul2(u, ((1, 5), (0, 9))), v) == ((1, 0), (0, 9))
    # lower-triangular prime-square class with unit upper entry
    p, n, h = 3, 4, 1
    u, v, det = snf_sl2(((p, h * n), (0, p)))
    assert det == p * p


def test_snf_sl2_random():
    rng = random.Random(8)
    checked = 0
    while checked < 400:
        a, b, c, d = (rng.randint(-60, 60) for _ in range(4))
        det = a * d - b * c
        if det <= 0 or math.gcd(math.gcd(a, b), math.gcd(c, d)) != 1:
            continue
        u, v, m = snf_sl2(((a, b), (c, d)))
        assert m == det
        assert mat_mul2(mat_mul2(u, ((a, b), (c, d))), v) == ((1, 0), (0, det))
        assert u[0][0] * u[1][1] - u[0][1] * u[1][0] == 1
        assert v[0][0] * v[1][1] - v[0][1] * v[1][0] == 1
        checked += 1


def test_snf_sl2_rejects_imprimitive():
    with pytest.raises(DomainError):
        snf_sl2(((2, 0), (0, 2)))


def test_json_round_trip():
    g = S * T * Z
    assert MetaElem.from_json(g.to_json()) == g
