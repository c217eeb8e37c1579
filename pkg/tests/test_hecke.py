import json
import math
import random
from fractions import Fraction

import pytest

from weilhecke.arith import kronecker, lcm
from weilhecke.cyclo import CycNum, zeta
from weilhecke.errors import DomainError, PrecisionError
from weilhecke.finquad import DfElem, DiscForm
from weilhecke.hecke import (
    FourierExpansion,
    apply_T_general,
    apply_T_p2_even,
    apply_T_p2_odd,
    apply_T_p_even,
    coset_reps,
    eigenvalue,
    hecke_vanishes,
    is_eigenform,
    t_character,
)
from weilhecke.metaplectic import MetaElem, t_power
from weilhecke.theta import LatticeSpec, theta_series

from conftest import eisenstein4, sigma3


# -- FourierExpansion basics -------------------------------------------------------


def test_parity_rejection(forms):
    with pytest.raises(DomainError):
        FourierExpansion(forms["Z2"], 1, 4, {})  # sig odd, 2k even
    with pytest.raises(DomainError):
        FourierExpansion(forms["A2"], Fraction(1, 2), 4, {})  # sig even, 2k odd


def test_key_validation(forms):
    df = forms["Z2"]
    with pytest.raises(DomainError):
        FourierExpansion(df, Fraction(1, 2), 4, {(DfElem((1,)), Fraction(1, 2)): 1})
    with pytest.raises(DomainError):
        FourierExpansion(df, Fraction(1, 2), 4, {(DfElem((0,)), Fraction(5)): 1})


def test_zero_coefficients_dropped(forms):
    df = forms["Z2"]
    f = FourierExpansion(df, Fraction(1, 2), 4, {(DfElem((0,)), Fraction(1)): 0})
    assert not f.coeffs


def test_center_symmetry_on_theta(theta_z2, theta_a2):
    theta_z2.truncate(20).check_center_symmetry()
    theta_a2.truncate(20).check_center_symmetry()


def test_expansion_json_round_trip(theta_z2):
    f = theta_z2.truncate(10)
    obj = f.to_json()
    again = FourierExpansion.from_json(obj)
    assert again == f
    # deterministic output: keys sorted, fractions in lowest terms
    assert json.dumps(obj, sort_keys=True) == json.dumps(
        again.to_json(), sort_keys=True
    )


# -- coset representatives -----------------------------------------------------------


def test_coset_counts_prime():
    for p in (2, 3, 5, 7):
        assert len(coset_reps(p, primitive=True)) == p + 1
        assert len(coset_reps(p * p, primitive=True)) == p * p + p
        assert len(coset_reps(p * p, primitive=False)) == p * p + p + 1


def test_coset_reps_identity():
    assert coset_reps(1) == [((1, 0), (0, 1))]


def test_coset_reps_shape():
    for ((a, b), (z, d)) in coset_reps(36, primitive=True):
        assert z == 0 and a * d == 36 and 0 <= b < d
        assert math.gcd(math.gcd(a, b), d) == 1


# -- the general engine ---------------------------------------------------------------


def test_T1_is_identity(theta_z2):
    f = theta_z2.truncate(12)
    assert apply_T_general(f, 1) == f


def test_engine_precision_law(theta_z2):
    f = theta_z2.truncate(45)
    g = apply_T_general(f, 3)
    assert g.prec == Fraction(5)
    with pytest.raises(PrecisionError):
        apply_T_general(f, 3, out_prec=6)


def test_engine_matches_odd_closed_form(theta_z2, theta_z4):
    for f0, p in ((theta_z2, 3), (theta_z2, 5), (theta_z4, 3)):
        f = f0.truncate(3 * p * p)
        assert apply_T_general(f, p) == apply_T_p2_odd(f, p)


def test_engine_matches_even_closed_form(theta_a2, e8_series):
    f = theta_a2.truncate(2 * 25)
    assert apply_T_general(f, 5) == apply_T_p2_even(f, 5)
    f = e8_series.truncate(2 * 9)
    assert apply_T_general(f, 3) == apply_T_p2_even(f, 3)


def test_multiplicativity_coprime(theta_z2):
    f = theta_z2.truncate(144)
    lhs = apply_T_general(apply_T_general(f, 3), 2)
    rhs = apply_T_general(f, 6)
    assert lhs == rhs


def test_commutativity(theta_z2):
    f = theta_z2.truncate(144)
    assert apply_T_general(apply_T_general(f, 3), 2) == apply_T_general(
        apply_T_general(f, 2), 3
    )


def test_engine_support_law(theta_z6):
    f = theta_z6.truncate(36)
    g = apply_T_general(f, 2)  # 2 divides the level 12
    for (lam, n) in g.coeffs:
        assert (n - g.df.q(lam)).denominator == 1


# -- closed forms ------------------------------------------------------------------------


def test_Tp_even_classical_shape(forms, e8_series):
    # trivial form: b(n) = c(p n) + p^(k-1) c(n/p), the classical operator
    f = e8_series.truncate(35)
    g = apply_T_p_even(f, 7, 1)
    z = DfElem(())
    for n in range(5):
        want = f.get(z, 7 * n)
        if n % 7 == 0:
            want = want + 7**3 * f.get(z, Fraction(n, 7))
        assert g.get(z, n) == want
    # p does not divide n: single term
    assert g.get(z, 1) == f.get(z, 7)
    # eigenvalue on the weight-4 Eisenstein form: 1 + p^3
    lam = eigenvalue(f.truncate(5), g)
    assert lam.as_rational() == 1 + 343


def test_Tp_even_zero_in_zero_out(forms):
    df = forms["A2"]
    zerof = FourierExpansion(df, 1, 21, {})
    out = apply_T_p_even(zerof, 7, 1)
    assert not out.coeffs


def test_Tp_even_unit_relabelling(forms):
    # the two unit choices r and r' differ by the isometry relabelling
    rng = random.Random(31)
    df = forms["Fp5"]
    m = df.field_modulus
    coeffs = {}
    for lam in df.elements():
        n = df.q(lam)
        while n < 11:
            coeffs[(lam, n)] = CycNum.from_rational(rng.randint(-5, 5), m)
            n += 1
    f = FourierExpansion(df, 2, 11, coeffs)
    p = 11  # 11 = 1 = 1^2 = 4^2 mod 5
    g1 = apply_T_p_even(f, p, 1)
    g4 = apply_T_p_even(f, p, 4)
    # r' = 4 = -1 mod 5: relabelling by the isometry x -> -x
    for (lam, n), c in g4.coeffs.items():
        assert c == g1.get(df.neg(lam), n)


def test_Tp2_even_delta_branches(e8_series):
    z = DfElem(())
    f = e8_series.truncate(3 * 9)
    g = apply_T_p2_even(f, 3)
    k = 4
    p = 3
    # p | n branch and p^2 | n branch, spelled out
    for n in range(3):
        direct = f.get(z, 9 * n)
        mid = (p if n % p == 0 else 0) - 1
        got = g.get(z, n)
        want = direct + Fraction(p) ** (k - 2) * mid * f.get(z, n)
        if n % 9 == 0:
            want = want + Fraction(p) ** (2 * k - 2) * f.get(z, Fraction(n, 9))
        assert got == want


def test_Tp2_even_eisenstein_eigenvalue(e8_series):
    # classical T(p^2) eigenvalue minus the imprimitive-coset contribution
    for p in (2, 3):
        f = e8_series.truncate(2 * p * p)
        g = apply_T_p2_even(f, p)
        lam = eigenvalue(f.truncate(2), g)
        assert lam.as_rational() == sigma3(p * p) - p ** (4 - 2)
    # the worked value: p = 2, k = 4 gives 1 + 8 + 64 - 4 = 69
    f = e8_series.truncate(8)
    lam = eigenvalue(f.truncate(2), apply_T_p2_even(f, 2))
    assert lam.as_rational() == 69


def test_Tp2_odd_epsilon_values():
    # eps_5 = 1 and eps_7 = i enter through the middle term scalar
    assert 5 % 4 == 1 and 7 % 4 == 3
    z8 = zeta(1, 4)
    assert (z8 * z8).as_rational() == -1


def test_Tp2_odd_jacobi_index_scalar():
    # for Z with x -> -m x^2 the middle scalar collapses to (m/p)
    for m in (1, 2, 3):
        df = DiscForm.from_gram([[-2 * m]])
        sig = df.signature
        a = df.order
        for p in (3, 5, 7, 11):
            if math.gcd(p, df.level) != 1:
                continue
            exp = (sig + kronecker(-1, a)) % 4
            eps_pow = 1j ** exp if p % 4 == 3 else 1
            scal = eps_pow * kronecker(p, a * 2**sig)
            want = kronecker(m, p)
            assert abs(scal - want) < 1e-12


def test_Tp2_odd_eigenvalue_two_routes(theta_z2):
    f = theta_z2.truncate(9 * 21)
    g_closed = apply_T_p2_odd(f, 3)
    g_engine = apply_T_general(f, 3)
    assert g_closed == g_engine
    lam = eigenvalue(f.truncate(21), g_closed)
    # direct oracle: ratio of the constant coefficients
    z = DfElem((0,))
    assert g_closed.get(z, 0) == lam * f.get(z, 0)
    assert lam.as_rational() is not None


def test_Tp2_odd_rejects_even_signature(theta_a2):
    with pytest.raises(DomainError):
        apply_T_p2_odd(theta_a2.truncate(9), 3)


def test_Tp2_even_rejects_odd_signature(theta_z2):
    with pytest.raises(DomainError):
        apply_T_p2_even(theta_z2.truncate(9), 3)


def test_Tp2_rejects_p_dividing_level(theta_z2):
    with pytest.raises(DomainError):
        apply_T_p2_odd(theta_z2.truncate(16), 2)


# -- sign character and vanishing ------------------------------------------------------------


def test_t_character_generators(forms):
    df = forms["Z2"]
    for (m, n) in ((9, 1), (1, 9), (3, 3), (5, 1)):
        assert t_character(df, t_power(n), m, n) == 1
        assert t_character(df, MetaElem(1, 0, m, 1, 1), m, n) == 1


def test_t_character_matches_symbol(forms):
    rng = random.Random(32)
    for name in ("Z2", "Z4"):
        df = forms[name]
        for (m, n) in ((9, 1), (1, 9), (3, 3), (25, 1)):
            if math.gcd(m * n, df.level) != 1:
                continue
            checked = 0
            while checked < 12:
                g = MetaElem(1, 0, 0, 1)
                for _ in range(4):
                    g = g * (
                        t_power(n * rng.randint(-2, 2))
                        if rng.random() < 0.5
                        else MetaElem(1, 0, m * rng.randint(-2, 2), 1)
                    )
                if g.d % 2 == 0 or g.d <= 0:
                    continue
                assert t_character(df, g, m, n) == kronecker(m * n, g.d)
                checked += 1


def test_t_character_nonresidue_d(forms):
    from weilhecke.hecke import _sign_witness

    df = forms["Z2"]
    gamma = _sign_witness(df, 5, 1)
    assert gamma is not None
    assert gamma.d % 4 in (1, 3)
    assert kronecker(5, gamma.d) == -1
    assert t_character(df, gamma, 5, 1) == -1


def test_t_character_preconditions(forms):
    df = forms["Z2"]
    with pytest.raises(DomainError):
        t_character(df, t_power(1), 2, 1)  # gcd(mn, N) != 1
    with pytest.raises(DomainError):
        t_character(df, t_power(1), 3, 1)  # 3 is not a square mod 4
    with pytest.raises(DomainError):
        t_character(forms["A2"], t_power(1), 1, 1)  # even signature


def test_hecke_vanishes(forms):
    df = forms["Z2"]
    assert hecke_vanishes(df, 1, 1) is False
    assert hecke_vanishes(df, 3, 1) is True
    assert hecke_vanishes(df, 9, 1) is False
    assert hecke_vanishes(df, 1, 4) is False
    assert hecke_vanishes(df, 5, 1) is True
    assert hecke_vanishes(forms["Z4"], 17, 1) is True


# -- eigen utilities ----------------------------------------------------------------------------


def test_eigenvalue_detects_non_eigenform(forms):
    df = forms["Z2"]
    m = df.field_modulus
    z = DfElem((0,))
    o = DfElem((1,))
    f = FourierExpansion(
        df, Fraction(1, 2), 3,
        {(z, Fraction(0)): 1, (z, Fraction(1)): 2, (o, Fraction(1, 4)): 2},
    )
    g = FourierExpansion(
        df, Fraction(1, 2), 3,
        {(z, Fraction(0)): 1, (z, Fraction(1)): 3, (o, Fraction(1, 4)): 2},
    )
    assert eigenvalue(f, f.truncate(2)) is not None
    assert eigenvalue(f, g) is None
    assert not is_eigenform(f, g)
    scaled = FourierExpansion(
        df, Fraction(1, 2), 3,
        {k: CycNum.from_rational(Fraction(7, 2), m) * v for k, v in f.coeffs.items()},
    )
    assert eigenvalue(f, scaled).as_rational() == Fraction(7, 2)
