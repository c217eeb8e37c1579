"""Self-contained verification suite over the built-in corpus.

Each check is exact; a failure means a broken invariant, not a tolerance
issue.  The suite is a faster cousin of the full test suite, intended for
the `verify` subcommand; it returns machine-readable records.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .arith import kronecker, theta_multiplier_sign
from .corpus import GRAM_CORPUS, POSITIVE_DEFINITE, corpus_forms, lattice_signature
from .cyclo import CycNum, sqrt_nat, zeta
from .errors import DomainError, WeilheckeError
from .finquad import DfElem, DiscForm
from .hecke import (
    FourierExpansion,
    apply_T_general,
    apply_T_p2_even,
    apply_T_p2_odd,
    coset_reps,
    eigenvalue,
    hecke_vanishes,
    t_character,
)
from .metaplectic import MetaElem, S, Z, t_power
from .theta import LatticeSpec, theta_series
from .weil import (
    RepMatrix,
    coset_action,
    oa_matrix,
    rd_word_element,
    rho,
    rho_generator,
    rho_qn,
    rho_rd_closed,
    rho_um_closed,
    rho_unit,
    _mult_matrix,
)

_SEED = 20240901


def _rand_sl2(rng, k=5) -> MetaElem:
    g = MetaElem(1, 0, 0, 1)
    for _ in range(k):
        if rng.random() < 0.5:
            g = g * S
        else:
            g = g * t_power(rng.randint(-2, 2))
    return g


def _rand_gamma_n(rng, n, k=4) -> MetaElem:
    g = MetaElem(1, 0, 0, 1)
    for _ in range(k):
        if rng.random() < 0.5:
            g = g * MetaElem(1, n * rng.randint(-2, 2), 0, 1)
        else:
            g = g * MetaElem(1, 0, n * rng.randint(-2, 2), 1)
    return g


def check_milgram(forms) -> str:
    for name, df in forms.items():
        m = df.field_modulus
        want = sqrt_nat(df.order, m) * zeta(df.signature, 8).lift(m)
        if not (df.gauss_sum(1) == want):
            raise WeilheckeError(f"Milgram identity fails for {name}")
        if name in GRAM_CORPUS:
            pos, neg = lattice_signature(GRAM_CORPUS[name])
            if (pos - neg) % 8 != df.signature:
                raise WeilheckeError(f"signature mismatch for {name}")
    return f"{len(forms)} forms"


def check_generator_relations(forms) -> str:
    for name, df in forms.items():
        rs, rt, rz = (rho_generator(df, g) for g in "STZ")
        if not (rs @ rs == rz and rs @ rt @ rs @ rt @ rs @ rt == rz):
            raise WeilheckeError(f"braid relations fail for {name}")
        scal = (-1) ** df.signature  # e(-sig/2)
        if not (rz @ rz == RepMatrix.identity(df).scalar_mul(scal)):
            raise WeilheckeError(f"center relation fails for {name}")
    return f"{len(forms)} forms"


def check_gamma_n_trivial(forms, samples=5) -> str:
    rng = random.Random(_SEED)
    total = 0
    for name, df in forms.items():
        n = df.level
        for _ in range(samples):
            g = _rand_gamma_n(rng, n)
            if df.signature % 2 == 0:
                ok = rho(df, g).is_identity()
            else:
                sgn = theta_multiplier_sign(g.c, g.d)
                ok = rho(df, MetaElem(g.a, g.b, g.c, g.d, sgn)).is_identity()
            if not ok:
                raise WeilheckeError(f"level-subgroup triviality fails for {name}")
            total += 1
    return f"{total} elements"


def check_diagonal_and_shear_oracles(forms) -> str:
    total = 0
    for name, df in forms.items():
        n = df.level
        for d in range(1, n + 1):
            if gcd(d, n) != 1:
                continue
            if not (rho(df, rd_word_element(df, d)) == rho_rd_closed(df, d)):
                raise WeilheckeError(f"diagonal closed form fails for {name}, d={d}")
            total += 1
        for m in range(0, min(2 * n, 8) + 1):
            if not (rho(df, MetaElem(1, 0, m, 1, 1)) == rho_um_closed(df, m)):
                raise WeilheckeError(f"shear closed form fails for {name}, m={m}")
            total += 1
    return f"{total} oracle comparisons"


def check_qn_choices(forms, samples=5) -> str:
    rng = random.Random(_SEED)
    total = 0
    for name, df in forms.items():
        n = df.level
        if n == 1:
            continue
        units = [r for r in range(1, n) if gcd(r, n) == 1]
        for _ in range(samples):
            r1 = rng.choice(units)
            g = _rand_sl2(rng)
            mbar = [[x * r1 % n for x in row] for row in g.matrix]
            r2 = rng.choice([r for r in units if (r * r - r1 * r1) % n == 0])
            lhs, _ = rho_qn(df, mbar, r1)
            rhs, _ = rho_qn(df, mbar, r2)
            t = r1 * pow(r2, -1, n) % n
            k = len(df.orders)
            hm = [[t if i == j else 0 for j in range(k)] for i in range(k)]
            prod = rhs @ oa_matrix(df, hm)
            if df.signature % 2 == 0:
                ok = lhs == prod
            else:
                ok = lhs == prod or lhs == prod.scalar_mul(-1)
            if not ok:
                raise WeilheckeError(f"unit-choice relation fails for {name}")
            total += 1
    return f"{total} random pairs"


def check_coset_welldef(forms, ms=(2, 3), samples=3) -> str:
    rng = random.Random(_SEED)
    total = 0
    for name, df in forms.items():
        if df.order > 8:
            continue
        for m in ms:
            alpha = MetaElem(m * m, 0, 0, 1, 1)
            for _ in range(samples):
                delta = _rand_sl2(rng, 3) * alpha * _rand_sl2(rng, 3)
                coset_action(df, delta, check=True)
                total += 1
    return f"{total} double decompositions"


def check_coset_adjoint(forms) -> str:
    rng = random.Random(_SEED)
    total = 0
    for name, df in forms.items():
        if df.order > 8:
            continue
        m = df.field_modulus
        for mm in (2, 3):
            wa = coset_action(df, MetaElem(mm * mm, 0, 0, 1, 1))
            wb = coset_action(df, MetaElem(1, 0, 0, mm * mm, 1))
            if not (wa == _mult_matrix(df, mm)):
                raise WeilheckeError(f"alpha action wrong for {name}")
            for _ in range(3):
                a = [CycNum.from_rational(rng.randint(-3, 3), m) * zeta(rng.randrange(m), m)
                     for _ in range(df.order)]
                b = [CycNum.from_rational(rng.randint(-3, 3), m) * zeta(rng.randrange(m), m)
                     for _ in range(df.order)]
                lhs = _pairing(wa.apply(a), b)
                rhs = _pairing(a, wb.apply(b))
                if not (lhs == rhs):
                    raise WeilheckeError(f"adjointness fails for {name}")
                total += 1
    return f"{total} random vector pairs"


def _pairing(u, v):
    acc = None
    for x, y in zip(u, v):
        t = x * y.conjugate()
        acc = t if acc is None else acc + t
    return acc


def check_coset_product(forms) -> str:
    rng = random.Random(_SEED)
    total = 0
    for name, df in forms.items():
        if df.order > 6:
            continue
        for (m, n) in ((2, 3), (3, 4)):
            am = MetaElem(m * m, 0, 0, 1, 1)
            an = MetaElem(n * n, 0, 0, 1, 1)
            for _ in range(2):
                g = _rand_sl2(rng, 3) * am * _rand_sl2(rng, 3)
                h = _rand_sl2(rng, 3) * an * _rand_sl2(rng, 3)
                if not (coset_action(df, h) @ coset_action(df, g) == coset_action(df, g * h)):
                    raise WeilheckeError(f"coset product fails for {name}")
                total += 1
    return f"{total} products"


def check_coset_counts() -> str:
    for p in (2, 3, 5, 7):
        if len(coset_reps(p * p, primitive=True)) != p * p + p:
            raise WeilheckeError(f"primitive coset count wrong at p={p}")
        if len(coset_reps(p, primitive=True)) != p + 1:
            raise WeilheckeError(f"determinant-p coset count wrong at p={p}")
    if coset_reps(1) != [((1, 0), (0, 1))]:
        raise WeilheckeError("determinant 1 does not give the identity")
    return "p in {2,3,5,7}"


def check_closed_forms(forms) -> str:
    checked = []
    th = theta_series(LatticeSpec([[2]]), 9 * 2)
    if not (apply_T_general(th, 3) == apply_T_p2_odd(th, 3)):
        raise WeilheckeError("odd closed form disagrees with the coset engine")
    checked.append("Z2/p=3")
    th = theta_series(LatticeSpec([[2, 1], [1, 2]]), 4 * 2)
    if not (apply_T_general(th, 2) == apply_T_p2_even(th, 2)):
        raise WeilheckeError("even closed form disagrees with the coset engine")
    checked.append("A2/p=2")
    return ", ".join(checked)


def check_multiplicativity() -> str:
    th = theta_series(LatticeSpec([[2]]), 72)
    lhs = apply_T_general(apply_T_general(th, 3), 2)
    rhs = apply_T_general(th, 6)
    if not (lhs == rhs):
        raise WeilheckeError("T(4)*T(9)* != T(36)*")
    return "T(4)*T(9)*=T(36)* at input precision 72 (m=2 divides the level)"


def check_odd_sign_character(forms) -> str:
    df = forms["Z2"]
    if not (hecke_vanishes(df, 3, 1) and not hecke_vanishes(df, 9, 1)
            and not hecke_vanishes(df, 1, 1) and hecke_vanishes(df, 5, 1)):
        raise WeilheckeError("vanishing criterion is wrong")
    rng = random.Random(_SEED)
    total = 0
    for _ in range(10):
        g = MetaElem(1, 0, 0, 1)
        for _ in range(4):
            g = g * (t_power(rng.randint(-2, 2)) if rng.random() < 0.5
                     else MetaElem(1, 0, 9 * rng.randint(-2, 2), 1))
        if g.d % 2 == 0:
            continue
        if t_character(df, g, 9, 1) != kronecker(9, g.d):
            raise WeilheckeError("sign character disagrees with the symbol")
        total += 1
    return f"{total} elements on (m,n)=(9,1)"


def check_eigenforms() -> str:
    th = theta_series(LatticeSpec([[2]]), 9 * 3)
    lam = eigenvalue(th.truncate(3), apply_T_general(th, 3))
    if lam is None or lam.as_rational() is None:
        raise WeilheckeError("weight 1/2 theta is not a rational eigenform")
    trivial = DiscForm.from_gram([[0, 1], [1, 0]])
    co = {(DfElem(()), Fraction(0)): 1}
    for n in range(1, 9 * 2):
        co[(DfElem(()), Fraction(n))] = 240 * sum(
            d**3 for d in range(1, n + 1) if n % d == 0
        )
    e4 = FourierExpansion(trivial, 4, 9 * 2, co)
    lam = eigenvalue(e4.truncate(2), apply_T_general(e4, 3))
    if lam is None or lam.as_rational() != (1 + 27 + 729) - 9:
        raise WeilheckeError("weight-4 Eisenstein eigenvalue is wrong")
    return "Z2 theta and the weight-4 Eisenstein form at p=3"


def check_freitag(forms) -> str:
    for name in ("Fp5", "Fp13"):
        df = forms[name]
        p = df.order
        neg = oa_matrix(df, [[-1]])
        for gen in "ST":
            r = rho_generator(df, gen)
            if not (neg @ r == r @ neg):
                raise WeilheckeError(f"negation does not commute on {name}")
        orbits = {frozenset((x, df.neg(x))) for x in df.elements()}
        dim_plus = len(orbits)
        dim_minus = p - dim_plus
        if dim_plus != (p + 1) // 2 or dim_minus != (p - 1) // 2:
            raise WeilheckeError(f"eigenspace dimensions wrong for {name}")
    return "dimensions (p+1)/2 and (p-1)/2 for p in {5, 13}"


CHECKS = [
    ("milgram", lambda forms: check_milgram(forms)),
    ("generator_relations", lambda forms: check_generator_relations(forms)),
    ("level_subgroup_trivial", lambda forms: check_gamma_n_trivial(forms)),
    ("diagonal_shear_oracles", lambda forms: check_diagonal_and_shear_oracles(forms)),
    ("unit_extension_choices", lambda forms: check_qn_choices(forms)),
    ("coset_action_welldef", lambda forms: check_coset_welldef(forms)),
    ("coset_action_adjoint", lambda forms: check_coset_adjoint(forms)),
    ("coset_action_product", lambda forms: check_coset_product(forms)),
    ("coset_counts", lambda forms: check_coset_counts()),
    ("engine_vs_closed_forms", lambda forms: check_closed_forms(forms)),
    ("hecke_multiplicativity", lambda forms: check_multiplicativity()),
    ("odd_sign_character", lambda forms: check_odd_sign_character(forms)),
    ("theta_eigenforms", lambda forms: check_eigenforms()),
    ("negation_eigenspaces", lambda forms: check_freitag(forms)),
]


def run_verification() -> list[dict]:
    """Run every check; returns [{name, ok, detail}] in a fixed order."""
    forms = corpus_forms()
    report = []
    for name, fn in CHECKS:
        try:
            detail = fn(forms)
            report.append({"name": name, "ok": True, "detail": detail})
        except WeilheckeError as exc:
            report.append({"name": name, "ok": False, "detail": str(exc)})
    return report
