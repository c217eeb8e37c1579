"""Hecke operators on truncated Fourier expansions of C[A]-valued forms.

The general operator for diag(m^2, 1) sums the slash action over the
primitive left cosets of determinant m^2 and works for every m, also when
m shares a factor with the level.  For half-integral weight the individual
coset terms involve square roots of coset divisors; the computation
therefore runs in an enlarged cyclotomic field containing them, and the
result is restricted back to the base field whenever possible.  The
closed coefficient formulas for primes prime to the level serve as the
independent second route used by the tests.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .arith import (
    frac_mod1,
    inv_mod,
    is_prime,
    is_square,
    kronecker,
    kronecker_rational,
    lcm,
    odd_radical,
)
from .cyclo import CycNum, e_frac, sqrt_nat, zeta
from .errors import DomainError, PrecisionError, VerificationError
from .finquad import DfElem, DiscForm
from .metaplectic import MetaElem, lift_mod_n
from .weil import RepMatrix, _mult_matrix, coset_action, rho


class FourierExpansion:
    """Truncated q-expansion of a C[A]-valued modular form.

    Coefficients are keyed by (lambda, n) with 0 <= n < prec and
    n = Q(lambda) mod 1.  The weight k satisfies 2k = sig(A) mod 2.
    Zero coefficients are dropped; absent keys read as zero.
    """

    def __init__(self, df: DiscForm, weight, prec, coeffs: dict):
        self.df = df
        self.weight = Fraction(weight)
        self.prec = Fraction(prec)
        if (2 * self.weight).denominator != 1:
            raise DomainError("weight must be a half-integer")
        if (2 * self.weight - df.signature) % 2 != 0:
            raise DomainError(
                "weight parity violates 2k = sig(A) mod 2; the space is zero"
            )
        cleaned: dict[tuple[DfElem, Fraction], CycNum] = {}
        for (lam, n), c in coeffs.items():
            lam = df.element(lam)
            n = Fraction(n)
            if not (0 <= n < self.prec):
                raise DomainError(f"coefficient index n={n} outside [0, prec)")
            if frac_mod1(n - df.q(lam)) != 0:
                raise DomainError(f"key ({lam}, {n}) violates n = Q(lambda) mod 1")
            if isinstance(c, (int, Fraction)):
                c = CycNum.from_rational(c, df.field_modulus)
            if not c.is_zero():
                cleaned[(lam, n)] = c
        self.coeffs = cleaned

    # -- access ----------------------------------------------------------------

    def get(self, lam: DfElem, n) -> CycNum:
        n = Fraction(n)
        c = self.coeffs.get((self.df.element(lam), n))
        if c is None:
            return CycNum.from_rational(0, self.df.field_modulus)
        return c

    def keys_sorted(self):
        return sorted(self.coeffs, key=lambda k: (tuple(k[0]), k[1]))

    def truncate(self, prec) -> "FourierExpansion":
        prec = Fraction(prec)
        if prec > self.prec:
            raise PrecisionError(
                f"cannot extend precision {self.prec} to {prec}"
            )
        kept = {k: v for k, v in self.coeffs.items() if k[1] < prec}
        return FourierExpansion(self.df, self.weight, prec, kept)

    def __eq__(self, other):
        if not isinstance(other, FourierExpansion):
            return NotImplemented
        if (
            self.df != other.df
            or self.weight != other.weight
            or self.prec != other.prec
        ):
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.get(*k) == other.get(*k) for k in keys)

    __hash__ = None

    def __repr__(self):
        return (
            f"FourierExpansion(weight={self.weight}, prec={self.prec}, "
            f"{len(self.coeffs)} coefficients on {self.df!r})"
        )

    def check_center_symmetry(self):
        """Exact relation c(l, n) = i^(2k) e(-sig/4) c(-l, n) forced by the center."""
        m = self.df.field_modulus
        twok = int(2 * self.weight)
        factor = zeta((twok - self.df.signature) % 4, 4).lift(m)
        for (lam, n), c in self.coeffs.items():
            mirrored = self.get(self.df.neg(lam), n)
            if not (c == factor * mirrored):
                raise VerificationError(
                    f"center symmetry fails at ({lam}, {n})"
                )

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "discform": self.df.to_json(),
            "weight": str(self.weight),
            "prec": str(self.prec),
            "coeffs": [
                {
                    "lambda": list(k[0]),
                    "n": str(k[1]),
                    "c": self.coeffs[k].to_json(),
                }
                for k in self.keys_sorted()
            ],
        }

    @staticmethod
    def from_json(obj: dict, df: DiscForm | None = None) -> "FourierExpansion":
        if df is None:
            if "discform" in obj:
                df = DiscForm.from_json(obj["discform"])
            elif "gram" in obj:
                df = DiscForm.from_gram(obj["gram"])
            else:
                raise DomainError("expansion JSON lacks discform/gram data")
        coeffs = {}
        for item in obj["coeffs"]:
            key = (df.element(item["lambda"]), Fraction(item["n"]))
            coeffs[key] = CycNum.from_json(item["c"])
        return FourierExpansion(df, Fraction(obj["weight"]), Fraction(obj["prec"]), coeffs)


# -- coset representatives ------------------------------------------------------------


def coset_reps(det: int, primitive: bool = True) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Upper-triangular representatives (a, b; 0, d), ad = det, 0 <= b < d.

    With primitive=True only matrices with gcd(a, b, d) = 1 are kept; these
    represent the left cosets of the double coset of diag(det, 1).
    """
    if det < 1:
        raise DomainError("determinant must be positive")
    out = []
    for a in range(1, det + 1):
        if det % a:
            continue
        d = det // a
        for b in range(d):
            if primitive and gcd(gcd(a, b), d) != 1:
                continue
            out.append(((a, b), (0, d)))
    return out


# -- the general double coset operator ---------------------------------------------------


def apply_T_general(
    f: FourierExpansion, m: int, out_prec=None
) -> FourierExpansion:
    """T(m^2)* via the primitive coset sum; valid for every positive m.

    Output precision is f.prec / m^2 (or out_prec when given, which must not
    exceed it).  Individual coset terms are computed exactly in the field
    Q(zeta_W) with W = lcm(lcm(8,N), N*m^2, 4*rad_odd(m)); the summed
    coefficients are restricted back to Q(zeta_lcm(8,N)) when they lie there.
    """
    if m < 1:
        raise DomainError("m must be a positive integer")
    df = f.df
    max_out = f.prec / (m * m)
    if out_prec is None:
        out_prec = max_out
    else:
        out_prec = Fraction(out_prec)
        if out_prec > max_out:
            raise PrecisionError(
                f"input precision {f.prec} is insufficient: T({m}^2)* at output "
                f"precision {out_prec} requires input precision {m * m * out_prec}"
            )
    k = f.weight
    base_mod = df.field_modulus
    work_mod = lcm(base_mod, df.level * m * m, 4 * odd_radical(m))
    for c in f.coeffs.values():
        work_mod = lcm(work_mod, c.mod)

    twok2 = int(2 * k) - 2  # m appears only through m^(2k-2)
    m_factor = Fraction(m) ** twok2

    totals: dict[tuple[DfElem, Fraction], CycNum] = {}
    zero = CycNum.from_rational(0, work_mod)
    for (a, b), (_, d) in coset_reps(m * m, primitive=True):
        delta = MetaElem(a, b, 0, d, 1)
        w = coset_action(df, delta)
        # det^(k/2) phi^(-2k) with phi = +sqrt(d), times the m^(k-2) prefactor
        scal = _d_power(d, -k, work_mod) * m_factor
        cols: dict[int, list[tuple[int, CycNum]]] = {}
        for (lam, n), c in f.coeffs.items():
            n_out = n * a / d
            if n_out >= out_prec:
                continue
            j = df.index(lam)
            col = cols.get(j)
            if col is None:
                col = [
                    (i, w.entry(i, j).lift(work_mod))
                    for i in range(df.order)
                    if w.nums[i, j].any()
                ]
                cols[j] = col
            phase = e_frac(frac_mod1(n * b / d), work_mod)
            term = c.lift(work_mod) * phase * scal
            for i, wij in col:
                key = (df.elements()[i], n_out)
                totals[key] = totals.get(key, zero) + wij * term

    out_coeffs: dict[tuple[DfElem, Fraction], CycNum] = {}
    for (lam, n), val in totals.items():
        if val.is_zero():
            continue
        if frac_mod1(n - df.q(lam)) != 0:
            raise VerificationError(
                f"nonzero coefficient at invalid key ({lam}, {n})"
            )
        out_coeffs[(lam, n)] = val
    restricted = _try_restrict_all(out_coeffs, base_mod)
    return FourierExpansion(df, k, out_prec, restricted)


def _d_power(d: int, exponent: Fraction, mod: int) -> CycNum:
    """d^exponent for a positive integer d and half-integer exponent."""
    whole = int(exponent) if exponent.denominator == 1 else int(exponent - Fraction(1, 2))
    out = CycNum.from_rational(Fraction(d) ** whole, mod)
    if exponent.denominator == 2:
        out = out * sqrt_nat(d, mod)
    return out


def _try_restrict_all(coeffs: dict, target_mod: int) -> dict:
    try:
        return {k: v.restrict(target_mod) for k, v in coeffs.items()}
    except DomainError:
        return coeffs


# -- closed coefficient formulas -----------------------------------------------------------


def apply_T_p_even(f: FourierExpansion, p: int, r: int) -> FourierExpansion:
    """b(l, n) = c(r*l, p*n) + p^(k-1) c(l/r, n/p) for p = r^2 mod N, even signature."""
    df = f.df
    if df.signature % 2:
        raise DomainError("this operator needs even signature")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    n_lvl = df.level
    if gcd(r, n_lvl) != 1 or (p - r * r) % n_lvl:
        raise DomainError("need p = r^2 mod N with r a unit")
    out_prec = f.prec / p
    rinv = inv_mod(r, n_lvl)
    scale = Fraction(p) ** (int(f.weight) - 1)
    coeffs = {}
    for lam in df.elements():
        n = df.q(lam)
        while n < out_prec:
            val = f.get(df.smul(r, lam), p * n)
            if _divides(p, n):
                val = val + scale * f.get(df.smul(rinv, lam), n / p)
            if not val.is_zero():
                coeffs[(lam, n)] = val
            n += 1
    return FourierExpansion(df, f.weight, out_prec, coeffs)


def _divides(p: int, n: Fraction) -> bool:
    """Whether ord_p(n) >= 1 for a rational n with denominator prime to p."""
    if n == 0:
        return True
    if n.denominator % p == 0:
        return False
    return n.numerator % p == 0


def apply_T_p2_even(f: FourierExpansion, p: int) -> FourierExpansion:
    """Action of T(p^2)* for p prime to the level, even signature."""
    df = f.df
    if df.signature % 2:
        raise DomainError("this operator needs even signature")
    if not is_prime(p) or gcd(p, df.level) != 1:
        raise DomainError("p must be a prime coprime to the level")
    out_prec = f.prec / (p * p)
    k = int(f.weight)
    mid_scale = (df.gauss_sum(1) / df.gauss_sum(p)) * Fraction(p) ** (k - 2)
    top_scale = Fraction(p) ** (2 * k - 2)
    pinv = inv_mod(p, df.level)
    coeffs = {}
    for lam in df.elements():
        n = df.q(lam)
        while n < out_prec:
            val = f.get(df.smul(p, lam), p * p * n)
            delta = p if _divides(p, n) else 0
            val = val + mid_scale * (delta - 1) * f.get(lam, n)
            if _divides(p, n) and _divides(p, n / p):
                val = val + top_scale * f.get(df.smul(pinv, lam), n / (p * p))
            if not val.is_zero():
                coeffs[(lam, n)] = val
            n += 1
    return FourierExpansion(df, f.weight, out_prec, coeffs)


def apply_T_p2_odd(f: FourierExpansion, p: int) -> FourierExpansion:
    """Action of T(p^2)* for odd p prime to the level, odd signature.

    The middle term carries eps_p^(sig + (-1/|A|)) (p/(|A| 2^sig)) p^(k-3/2)
    times the symbol (-n/p); both exponents k-3/2 and 2k-2 are integers.
    """
    df = f.df
    if df.signature % 2 == 0:
        raise DomainError("this operator needs odd signature")
    if not is_prime(p) or p == 2 or gcd(p, df.level) != 1:
        raise DomainError("p must be an odd prime coprime to the level")
    out_prec = f.prec / (p * p)
    k = f.weight
    mod = df.field_modulus
    exp = (df.signature + kronecker(-1, df.order)) % 4
    if p % 4 == 1:
        eps_pow = CycNum.from_rational(1, mod)
    else:
        eps_pow = zeta(exp * (mod // 4) % mod, mod)
    mid_base = (
        eps_pow
        * kronecker(p, df.order * 2**df.signature)
        * Fraction(p) ** int(k - Fraction(3, 2))
    )
    top_scale = Fraction(p) ** (int(2 * k) - 2)
    pinv = inv_mod(p, df.level)
    coeffs = {}
    for lam in df.elements():
        n = df.q(lam)
        while n < out_prec:
            val = f.get(df.smul(p, lam), p * p * n)
            chi = kronecker_rational(-n, p)
            if chi:
                val = val + mid_base * chi * f.get(lam, n)
            if _divides(p, n) and _divides(p, n / p):
                val = val + top_scale * f.get(df.smul(pinv, lam), n / (p * p))
            if not val.is_zero():
                coeffs[(lam, n)] = val
            n += 1
    return FourierExpansion(df, f.weight, out_prec, coeffs)


# -- the sign character of diagonal double cosets (odd signature) ---------------------------


def t_character(df: DiscForm, gamma: MetaElem, m: int, n: int) -> int:
    """Sign t(gamma) comparing conjugation by diag(m, n) with the inner action.

    gamma must lie in Gamma_0(m) n Gamma^0(n) with determinant one; m, n
    positive and prime to the level.  The value equals the quadratic
    residue symbol (mn/d).
    """
    if df.signature % 2 == 0:
        raise DomainError("the sign character lives in odd signature")
    lvl = df.level
    if m < 1 or n < 1 or gcd(m * n, lvl) != 1:
        raise DomainError("m and n must be positive and coprime to the level")
    if gamma.det != 1 or gamma.c % m or gamma.b % n:
        raise DomainError("gamma must lie in Gamma_0(m) n Gamma^0(n)")
    r = next(
        (r for r in range(1, lvl) if gcd(r, lvl) == 1 and (r * r - m * n) % lvl == 0),
        None,
    )
    if r is None:
        raise DomainError("m*n is not a square modulo the level")
    conj = MetaElem(
        gamma.a, gamma.b * m // n, gamma.c * n // m, gamma.d, 1
    )
    u = n * inv_mod(r, lvl) % lvl
    perm = _mult_matrix(df, u)
    perm_inv = _mult_matrix(df, inv_mod(u, lvl))
    lhs = rho(df, conj)
    rhs = perm @ rho(df, MetaElem(gamma.a, gamma.b, gamma.c, gamma.d, 1)) @ perm_inv
    tmat = lhs @ rhs.conjugate_transpose()
    decomp = tmat.scalar_permutation()
    if decomp is None or decomp[0] != list(range(df.order)):
        raise VerificationError("conjugation comparison is not a scalar")
    scalar = decomp[1].as_rational()
    if scalar not in (1, -1):
        raise VerificationError(f"sign character value {decomp[1]} is not +-1")
    return int(scalar)


def hecke_vanishes(df: DiscForm, m: int, n: int) -> bool:
    """Whether the operator of diag(m, n) kills every form (odd signature).

    True exactly when m*n is not a perfect square; for non-squares prime to
    the level this is certified by exhibiting an element with sign -1.
    """
    if df.signature % 2 == 0:
        raise DomainError("the vanishing criterion lives in odd signature")
    if is_square(m * n):
        return False
    lvl = df.level
    has_root = any(
        gcd(r, lvl) == 1 and (r * r - m * n) % lvl == 0 for r in range(1, lvl + 1)
    )
    if gcd(m * n, lvl) == 1 and has_root:
        # the double coset exists; certify vanishing by a sign -1 witness
        witness = _sign_witness(df, m, n)
        if witness is None:
            raise VerificationError(
                f"no sign witness found for ({m}, {n}) despite non-square m*n"
            )
    return True


def _sign_witness(df: DiscForm, m: int, n: int):
    """An element of Gamma_0(m) n Gamma^0(n) with t = -1, or None."""
    lvl = df.level
    big = lcm(m, n, lvl, 4 * m * n)
    for d0 in range(3, 8 * m * n + 3, 2):
        if gcd(d0, big) != 1 or kronecker(m * n, d0) != -1:
            continue
        lifted = lift_mod_n([[inv_mod(d0, big), 0], [0, d0]], big)
        a, b = lifted[0]
        c, d = lifted[1]
        if d <= 0:
            if c == 0:
                continue
            bump = big if c > 0 else -big  # T^bump preserves all congruences
            while d <= 0:
                b += a * bump
                d += c * bump
        gamma = MetaElem(a, b, c, d, 1)
        if t_character(df, gamma, m, n) == -1:
            return gamma
    return None


# -- eigenform utilities ----------------------------------------------------------------------


def eigenvalue(f: FourierExpansion, g: FourierExpansion) -> CycNum | None:
    """Scalar lam with g = lam * f (compared at g's precision), or None.

    Uses the cross-ratio criterion: every pair of keys must satisfy
    b(x) c(y) = b(y) c(x); equivalently b = lam c at the first key where
    c does not vanish, with matching zero sets.
    """
    if f.df != g.df or f.weight != g.weight:
        return None
    ft = f.truncate(min(f.prec, g.prec))
    gt = g.truncate(ft.prec)
    pivot = next((k for k in ft.keys_sorted() if not ft.coeffs[k].is_zero()), None)
    if pivot is None:
        return None
    lam = gt.get(*pivot) / ft.coeffs[pivot]
    keys = set(ft.coeffs) | set(gt.coeffs)
    for key in keys:
        if not (gt.get(*key) == lam * ft.get(*key)):
            return None
    return lam


def is_eigenform(f: FourierExpansion, g: FourierExpansion) -> bool:
    return eigenvalue(f, g) is not None
