import itertools
import random
from fractions import Fraction

import pytest

from weilhecke.corpus import GRAM_CORPUS
from weilhecke.cyclo import sqrt_nat, zeta
from weilhecke.errors import DomainError
from weilhecke.finquad import DfElem, DiscForm
from weilhecke.linalg import mat_mul


def test_from_gram_hyperbolic_plane():
    u = DiscForm.from_gram([[0, 1], [1, 0]])
    assert u.order == 1 and u.level == 1 and u.signature == 0


def test_from_gram_z2():
    a = DiscForm.from_gram([[2]])
    assert a.orders == (2,)
    assert a.q(DfElem((1,))) == Fraction(1, 4)
    assert a.level == 4 and a.signature == 1
    # Milgram sum 1 + i = sqrt(2) e(1/8)
    assert a.gauss_sum(1) == sqrt_nat(2, 8) * zeta(1, 8)


def test_from_gram_real_quadratic_norm_form():
    f5 = DiscForm.from_gram([[2, 1], [1, -2]])
    assert f5.order == 5 and f5.signature == 0


def test_from_gram_rejects_bad_input():
    with pytest.raises(DomainError):
        DiscForm.from_gram([[3]])
    with pytest.raises(DomainError):
        DiscForm.from_gram([[2, 0], [0, 0]])
    with pytest.raises(DomainError):
        DiscForm.from_gram([[2, 1], [0, 2]])


def test_forms_values():
    a = DiscForm.from_gram([[2]])
    one = DfElem((1,))
    zero = a.zero()
    assert a.forms(one) == Fraction(1, 4)
    assert a.forms(zero) == 0
    assert a.forms(zero, one) == 0
    assert a.forms(one, one) == Fraction(1, 2)  # polarization: 2 Q(1)
    with pytest.raises(DomainError):
        a.forms(DfElem((1, 0)))


def test_polarization_identity(forms):
    for df in forms.values():
        if df.order > 40:
            continue
        for x in df.elements():
            for y in df.elements():
                lhs = (df.q(df.add(x, y)) - df.q(x) - df.q(y)) % 1
                assert lhs == df.b(x, y)


def test_signature_values():
    assert DiscForm.from_gram([[2]]).signature == 1
    assert DiscForm.from_gram([[-2]]).signature == 7
    assert DiscForm.from_gram([[2, 1], [1, -2]]).signature == 0


def test_signature_consistency(forms):
    for name, df in forms.items():
        m = df.field_modulus
        assert df.gauss_sum(1) == sqrt_nat(df.order, m) * zeta(df.signature, 8).lift(m)


def test_level_minimality(forms):
    for df in forms.values():
        n = df.level
        assert all((n * df.q(x)).denominator == 1 for x in df.elements())
        for p in set(k for k in range(2, n + 1) if n % k == 0):
            proper = n // p
            assert any((proper * df.q(x)).denominator != 1 for x in df.elements())


def test_odd_signature_level_divisible_by_four(forms):
    for df in forms.values():
        if df.signature % 2:
            assert df.level % 4 == 0


def test_gauss_sum_examples():
    a = DiscForm.from_gram([[2]])
    assert a.gauss_sum(1) == 1 + zeta(1, 4).lift(8)
    f5 = DiscForm.from_gram([[2, 1], [1, -2]])
    # 3 = 2 * 4^2 mod 5, so g_2 = g_3
    assert f5.gauss_sum(2) == f5.gauss_sum(3)


def test_gauss_sum_modulus_and_scaling(forms):
    for df in forms.values():
        n = df.level
        for d in range(1, n + 1):
            if _gcd(d, n) != 1:
                continue
            g = df.gauss_sum(d)
            assert (g * g.conjugate()).as_rational() == df.order
            for r in range(2, min(n, 6)):
                if _gcd(r, n) == 1:
                    assert df.gauss_sum(d * r * r) == g


def test_gauss_cocycle(forms):
    for df in forms.values():
        n = df.level
        g1 = df.gauss_sum(1)
        units = [u for u in range(1, n + 1) if _gcd(u, n) == 1]
        for d in units[:4]:
            for r in units[:4]:
                ratio = (df.gauss_sum(d * r) * g1) / (df.gauss_sum(d) * df.gauss_sum(r))
                if df.signature % 2 == 0:
                    assert ratio.as_rational() == 1
                else:
                    assert ratio.as_rational() in (1, -1)


def _gcd(a, b):
    import math

    return math.gcd(a, b)


def test_preimages_mul():
    z4 = DiscForm.from_orders((4,), (Fraction(1, 8),))
    assert z4.preimages_mul(DfElem((2,)), 2) == {DfElem((1,)), DfElem((3,))}
    assert z4.preimages_mul(DfElem((1,)), 2) == set()
    assert z4.preimages_mul(DfElem((3,)), 3) == {DfElem((1,))}


def test_preimages_bijective_case(forms):
    rng = random.Random(13)
    for df in forms.values():
        if df.order == 1:
            continue
        for m in (3, 5, 7):
            if _gcd(m, df.order) != 1:
                continue
            x = rng.choice(df.elements())
            pre = df.preimages_mul(x, m)
            assert len(pre) == 1
            assert df.smul(m, next(iter(pre))) == x


def test_sub_groups():
    z4 = DiscForm.from_orders((4,), (Fraction(1, 8),))
    tor, img = z4.sub_groups(2)
    assert set(tor) == {DfElem((0,)), DfElem((2,))}
    assert set(img) == {DfElem((0,)), DfElem((2,))}
    z5 = DiscForm.from_orders((5,), (Fraction(4, 5),))
    tor, img = z5.sub_groups(5)
    assert len(tor) == 5 and img == [DfElem((0,))]
    z6 = DiscForm.from_gram([[6]])
    tor, img = z6.sub_groups(2)
    assert len(tor) == 2 and len(img) == 3 and len(tor) * len(img) == z6.order


def test_sub_groups_orthogonality(forms):
    for df in forms.values():
        for n in (2, 3):
            tor, img = df.sub_groups(n)
            assert len(tor) * len(img) == df.order
            for x in tor:
                for y in img:
                    assert df.b(x, y) == 0


def test_is_isometry():
    for gram in ([[2]], [[2, 1], [1, 2]], [[6]]):
        df = DiscForm.from_gram(gram)
        k = len(df.orders)
        neg = [[-1 if i == j else 0 for j in range(k)] for i in range(k)]
        assert df.is_isometry(neg)
    z6 = DiscForm.from_gram([[6]])
    assert z6.is_isometry([[5]])  # 5^2 = 1 mod 12
    z5 = DiscForm.from_orders((5,), (Fraction(4, 5),))
    assert not z5.is_isometry([[2]])  # Q(2x) = 4 Q(x) != Q(x)
    assert not DiscForm.from_gram([[4]]).is_isometry([[2]])  # well defined, not bijective
    mixed = DiscForm.from_gram([[2, 0], [0, 4]])
    with pytest.raises(DomainError):
        # sends the order-2 generator to an order-4 element
        mixed.is_isometry([[0, 0], [1, 1]])


def test_unimodular_change_of_basis_invariance():
    rng = random.Random(14)
    for gram in ([[2]], [[2, 1], [1, 2]], [[2, 1], [1, -2]], [[4]]):
        df = DiscForm.from_gram(gram)
        n = len(gram)
        for _ in range(5):
            u = _random_unimodular(rng, n)
            moved = mat_mul(mat_mul(_transpose(u), gram), u)
            other = DiscForm.from_gram(moved)
            assert other.orders == df.orders
            assert other.order == df.order
            assert other.level == df.level
            assert other.signature == df.signature
            for d in range(1, df.level + 1):
                if df.level % d == 0:
                    assert other.gauss_sum(d) == df.gauss_sum(d)


def _transpose(m):
    return [list(r) for r in zip(*m)]


def _random_unimodular(rng, n):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(4):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        for k in range(n):
            u[i][k] += c * u[j][k]
    return u


def test_nondegeneracy_rejection():
    # Z/2 with Q = 1/2 has B(x, x) = 0: degenerate
    with pytest.raises(DomainError):
        DiscForm.from_orders((2,), (Fraction(1, 2),))


def test_element_enumeration_and_index(forms):
    for df in forms.values():
        els = df.elements()
        assert len(els) == df.order
        assert len(set(els)) == df.order
        for i, x in enumerate(els):
            assert df.index(x) == i


def test_json_round_trip(forms):
    for df in forms.values():
        again = DiscForm.from_json(df.to_json())
        assert again == df
        assert again.level == df.level and again.signature == df.signature


def test_from_json_gram():
    df = DiscForm.from_json({"gram": [[2]]})
    assert df.orders == (2,)


def test_direct_and_gram_forms_agree():
    # the norm form of the real quadratic field of discriminant 5 carries
    # x -> -x^2/5 on Z/5; both constructions give the same invariants
    f5 = DiscForm.from_gram([[2, 1], [1, -2]])
    z5 = DiscForm.from_orders((5,), (Fraction(4, 5),))
    assert f5.order == z5.order and f5.level == z5.level
    assert f5.signature == z5.signature
    qvals_gram = sorted(f5.q(x) for x in f5.elements())
    qvals_direct = sorted(z5.q(x) for x in z5.elements())
    assert qvals_gram == qvals_direct
