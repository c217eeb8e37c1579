"""The Weil representation of a discriminant form and its extensions.

RepMatrix holds an |A| x |A| matrix over Q(zeta_M), M = lcm(8, N), packed
as an integer coefficient tensor over a common denominator.  Products run
through numpy int64 kernels when the coefficients certifiably fit, and
fall back to exact big-integer arithmetic otherwise, so every result is
exact and canonically reduced.

Group elements are evaluated through generator words; the closed forms
for R_d, U^m and the lower-triangular-prime character are independent
oracles used by the test suite.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, isqrt

import numpy as np

from .arith import inv_mod, is_prime, kronecker
from .cyclo import CycNum, _field
from .errors import DomainError, VerificationError
from .finquad import DfElem, DiscForm
from .metaplectic import MetaElem, snf_sl2, word_decompose

_INT64_SAFE = 2**62


def _np_max(arr) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(x)) for x in arr.flat)
    return int(np.abs(arr).max())


def _gcd_reduce(arr, den: int) -> int:
    g = den
    if arr.dtype == object:
        for x in arr.flat:
            g = gcd(g, abs(int(x)))
            if g == 1:
                return 1
        return g
    flat = np.abs(arr.reshape(-1))
    nz = flat[flat != 0]
    if nz.size:
        g = gcd(g, int(np.gcd.reduce(nz)))
    return g


class RepMatrix:
    """Matrix over Q(zeta_M) whose columns are the images of the basis e_lambda."""

    __slots__ = ("df", "mod", "nums", "den")

    def __init__(self, df: DiscForm, nums, den: int, mod: int | None = None):
        self.df = df
        self.mod = df.field_modulus if mod is None else mod
        if den < 0:
            den, nums = -den, -nums
        g = _gcd_reduce(nums, den)
        if g > 1:
            nums = nums // g
            den //= g
        self.nums = nums
        self.den = den

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def identity(df: DiscForm) -> "RepMatrix":
        n, deg = df.order, _field(df.field_modulus).deg
        nums = np.zeros((n, n, deg), dtype=np.int64)
        for i in range(n):
            nums[i, i, 0] = 1
        return RepMatrix(df, nums, 1)

    @staticmethod
    def from_entries(df: DiscForm, grid) -> "RepMatrix":
        """Build from a square grid of CycNum values (lifted to lcm(8, N))."""
        m = df.field_modulus
        n = df.order
        deg = _field(m).deg
        lifted = [[grid[i][j].lift(m) for j in range(n)] for i in range(n)]
        den = reduce(lambda a, b: a * b // gcd(a, b),
                     (x.den for row in lifted for x in row), 1)
        big = any(
            abs(c) * (den // x.den) >= _INT64_SAFE
            for row in lifted for x in row for c in x.num
        )
        nums = np.zeros((n, n, deg), dtype=object if big else np.int64)
        for i in range(n):
            for j in range(n):
                x = lifted[i][j]
                f = den // x.den
                for k, c in enumerate(x.num):
                    nums[i, j, k] = c * f
        return RepMatrix(df, nums, den)

    @staticmethod
    def perm_scalar(df: DiscForm, images: list[int], scalar: CycNum) -> "RepMatrix":
        """Matrix sending e_(lambda_j) to scalar * e_(lambda_images[j])."""
        m = df.field_modulus
        s = scalar.lift(m)
        n, deg = df.order, _field(m).deg
        big = any(abs(c) >= _INT64_SAFE for c in s.num)
        nums = np.zeros((n, n, deg), dtype=object if big else np.int64)
        vec = np.array(s.num, dtype=nums.dtype)
        for j in range(n):
            nums[images[j], j, :] = vec
        return RepMatrix(df, nums, s.den)

    # -- access ----------------------------------------------------------------

    @property
    def size(self) -> int:
        return self.df.order

    def entry(self, i: int, j: int) -> CycNum:
        return CycNum(self.mod, tuple(int(x) for x in self.nums[i, j]), self.den)

    def entries(self) -> list[list[CycNum]]:
        n = self.size
        return [[self.entry(i, j) for j in range(n)] for i in range(n)]

    def __eq__(self, other):
        if not isinstance(other, RepMatrix):
            return NotImplemented
        return (
            self.df == other.df
            and self.mod == other.mod
            and self.den == other.den
            and self.nums.tolist() == other.nums.tolist()
        )

    __hash__ = None

    def is_identity(self) -> bool:
        return self == RepMatrix.identity(self.df)

    def __repr__(self):
        return f"RepMatrix({self.df!r}, den={self.den})"

    # -- algebra ------------------------------------------------------------------

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        if self.df != other.df or self.mod != other.mod:
            raise DomainError("matrices belong to different contexts")
        fld = _field(self.mod)
        n, deg = self.size, fld.deg
        a, b = self.nums, other.nums
        ma, mb = _np_max(a), _np_max(b)
        bound = ma * mb * n * deg * fld.red_max * (2 * deg - 1)
        if a.dtype != object and b.dtype != object and bound < _INT64_SAFE:
            conv = np.zeros((n, n, 2 * deg - 1), dtype=np.int64)
            for k in range(deg):
                sl = a[:, :, k]
                if sl.any():
                    conv[:, :, k:k + deg] += np.einsum("ik,kjb->ijb", sl, b)
            out = np.tensordot(conv, fld.red_np[: 2 * deg - 1], axes=([2], [0]))
        else:
            ao = a.astype(object)
            bo = b.astype(object).reshape(n, n * deg)
            conv = np.zeros((n, n, 2 * deg - 1), dtype=object)
            for k in range(deg):
                sl = ao[:, :, k]
                if sl.any():
                    conv[:, :, k:k + deg] += np.dot(sl, bo).reshape(n, n, deg)
            red = fld.red_np[: 2 * deg - 1].astype(object)
            out = np.dot(conv.reshape(n * n, 2 * deg - 1), red).reshape(n, n, deg)
        return RepMatrix(self.df, out, self.den * other.den, self.mod)

    def conjugate_transpose(self) -> "RepMatrix":
        fld = _field(self.mod)
        mat = fld.galois_matrix(-1)
        a = self.nums
        if a.dtype != object and _np_max(a) * fld.red_max * fld.deg < _INT64_SAFE:
            out = np.tensordot(a.transpose(1, 0, 2), mat, axes=([2], [0]))
        else:
            n, deg = self.size, fld.deg
            at = a.transpose(1, 0, 2).astype(object).reshape(n * n, deg)
            out = np.dot(at, mat.astype(object)).reshape(n, n, deg)
        return RepMatrix(self.df, out, self.den, self.mod)

    def scalar_mul(self, s) -> "RepMatrix":
        if isinstance(s, (int, Fraction)):
            s = CycNum.from_rational(s, self.mod)
        s = s.lift(self.mod)
        fld = _field(self.mod)
        n, deg = self.size, fld.deg
        # row k of smat is the reduction of x^k * s(x)
        svec = np.array(s.num, dtype=np.int64)
        smat_rows = []
        for k in range(deg):
            smat_rows.append(svec @ fld.red_np[k:k + deg])
        smat = np.array(smat_rows, dtype=np.int64)
        a = self.nums
        if a.dtype != object and _np_max(a) * _np_max(smat) * deg < _INT64_SAFE:
            out = np.tensordot(a, smat, axes=([2], [0]))
        else:
            at = a.astype(object).reshape(n * n, deg)
            out = np.dot(at, smat.astype(object)).reshape(n, n, deg)
        return RepMatrix(self.df, out, self.den * s.den, self.mod)

    def col_zeta_scale(self, exponents: list[int]) -> "RepMatrix":
        """Right-multiply by diag(zeta^e_j): scale column j by zeta^(e_j)."""
        fld = _field(self.mod)
        deg = fld.deg
        a = self.nums
        out = np.zeros_like(a)
        big = a.dtype == object or _np_max(a) * fld.red_max * deg >= _INT64_SAFE
        for j, e in enumerate(exponents):
            e %= self.mod
            rot = fld.red_np[e:e + deg]
            col = a[:, j, :]
            if big:
                out[:, j, :] = np.dot(col.astype(object), rot.astype(object))
            else:
                out[:, j, :] = col @ rot
        return RepMatrix(self.df, out, self.den, self.mod)

    def apply(self, vec: list[CycNum]) -> list[CycNum]:
        """Image of a C[A] vector (coefficients indexed like the elements)."""
        n = self.size
        out = []
        for i in range(n):
            acc = CycNum.from_rational(0, self.mod)
            for j in range(n):
                acc = acc + self.entry(i, j) * vec[j]
            out.append(acc)
        return out

    # -- predicates ------------------------------------------------------------------

    def is_unitary(self) -> bool:
        return (self @ self.conjugate_transpose()).is_identity()

    def scalar_permutation(self) -> tuple[list[int], CycNum] | None:
        """Decompose as scalar * permutation if possible: (images, scalar)."""
        n = self.size
        images = []
        scalar = None
        for j in range(n):
            rows = [i for i in range(n) if self.nums[:, j, :][i].any()]
            if len(rows) != 1:
                return None
            images.append(rows[0])
            val = self.entry(rows[0], j)
            if scalar is None:
                scalar = val
            elif not (scalar == val):
                return None
        if scalar is None:
            return None
        return images, scalar

    # -- serialization ---------------------------------------------------------------

    def to_json(self, approx: bool = False) -> dict:
        out = {
            "size": self.size,
            "modulus": self.mod,
            "entries": [[self.entry(i, j).to_json() for j in range(self.size)]
                        for i in range(self.size)],
        }
        if approx:
            out["entries_approx"] = [
                [[z.real, z.imag] for z in (self.entry(i, j).embed() for j in range(self.size))]
                for i in range(self.size)
            ]
        return out


# -- cached generator data ---------------------------------------------------------


def _tables(df: DiscForm):
    """(tq, tb): integer exponent tables M*Q(l) and M*B(l, mu) mod M."""
    cache = df._rho_cache
    if "tables" not in cache:
        m = df.field_modulus
        els = df.elements()
        tq = [q.numerator * (m // q.denominator) % m for q in (df.q(x) for x in els)]
        tb = [[0] * df.order for _ in range(df.order)]
        for i, x in enumerate(els):
            for j in range(i, df.order):
                v = df.b(x, els[j])
                t = v.numerator * (m // v.denominator) % m
                tb[i][j] = t
                tb[j][i] = t
        cache["tables"] = (tq, tb)
    return cache["tables"]


def _gen_matrix(df: DiscForm, name: str) -> RepMatrix:
    cache = df._rho_cache
    key = ("gen", name)
    if key not in cache:
        m = df.field_modulus
        fld = _field(m)
        n, deg = df.order, fld.deg
        tq, tb = _tables(df)
        els = df.elements()
        if name == "T":
            nums = np.zeros((n, n, deg), dtype=np.int64)
            for j in range(n):
                nums[j, j, :] = fld.red_np[tq[j]]
            mat = RepMatrix(df, nums, 1)
        elif name == "S":
            scal = df.gauss_sum(1).conjugate()  # sqrt|A| e(-sig/8), integral coeffs
            svec = np.array(scal.num, dtype=np.int64)
            nums = np.zeros((n, n, deg), dtype=np.int64)
            for i in range(n):
                for j in range(n):
                    e = (-tb[j][i]) % m
                    nums[i, j, :] = svec @ fld.red_np[e:e + deg]
            mat = RepMatrix(df, nums, df.order * scal.den)
        elif name == "Z":
            z = (-df.signature * (m // 4)) % m
            images = [df.index(df.neg(x)) for x in els]
            mat = RepMatrix.perm_scalar(df, images, CycNum(m, fld.reduce_exponent(z)))
        else:
            raise DomainError(f"unknown generator {name!r}")
        cache[key] = mat
    return cache[key]


def rho_generator(df: DiscForm, name: str) -> RepMatrix:
    """Value of the representation on the generator T, S or Z."""
    if name not in ("T", "S", "Z"):
        raise DomainError("generator must be one of T, S, Z")
    return _gen_matrix(df, name)


def _z_power(df: DiscForm, j: int) -> RepMatrix:
    j %= 4
    cache = df._rho_cache
    key = ("zpow", j)
    if key not in cache:
        out = RepMatrix.identity(df)
        for _ in range(j):
            out = out @ _gen_matrix(df, "Z")
        cache[key] = out
    return cache[key]


def rho(df: DiscForm, g: MetaElem) -> RepMatrix:
    """Evaluate the representation on a metaplectic element of determinant 1.

    The matrix part is decomposed into a generator word; the word fixes the
    principal-branch value and the carried sign contributes e(-sig/2).
    """
    if g.det != 1:
        raise DomainError("representation values need determinant 1")
    word = word_decompose(g.matrix)
    tq, _ = _tables(df)
    m = df.field_modulus
    out = None  # None stands for the identity
    for tok in word.tokens:
        if tok[0] == "T":
            exps = [tok[1] * t % m for t in tq]
            if out is None:
                out = RepMatrix.identity(df).col_zeta_scale(exps)
            else:
                out = out.col_zeta_scale(exps)
        elif tok[0] == "S":
            s = _gen_matrix(df, "S")
            out = s if out is None else out @ s
        else:
            z = _z_power(df, tok[1])
            out = z if out is None else out @ z
    if out is None:
        out = RepMatrix.identity(df)
    if g.sign == -1:
        out = out.scalar_mul(_e8(df, -4 * df.signature))  # e(-sig/2)
    return out


def _e8(df: DiscForm, eighths: int) -> CycNum:
    """e(eighths/8) inside the working field of df."""
    m = df.field_modulus
    return CycNum(m, _field(m).reduce_exponent(eighths * (m // 8) % m))


def rho_unit(df: DiscForm, r: int) -> CycNum:
    """Scalar g(A)/g_r(A) by which (r*I, r) acts; a character of the units mod N."""
    if gcd(r, df.level) != 1:
        raise DomainError(f"{r} is not a unit modulo the level {df.level}")
    return df.gauss_sum(1) / df.gauss_sum(r)


def rho_qn(df: DiscForm, mbar, r: int) -> tuple[RepMatrix, MetaElem]:
    """Value on the pair (mbar mod N, r) with det(mbar) = r^2 mod N.

    Returns the matrix together with the determinant-one lift whose word
    evaluation fixed the sign (only relevant in odd signature, where the
    value is canonical up to the tracked +-1).
    """
    n = df.level
    if n == 1:
        return RepMatrix.identity(df), MetaElem(1, 0, 0, 1)
    mbar = [[x % n for x in row] for row in mbar]
    det = (mbar[0][0] * mbar[1][1] - mbar[0][1] * mbar[1][0]) % n
    if gcd(r, n) != 1 or det != (r * r) % n:
        raise DomainError("determinant is not congruent to r^2 mod N")
    rinv = inv_mod(r, n)
    m1 = [[x * rinv % n for x in row] for row in mbar]
    from .metaplectic import lift_mod_n

    lift = lift_mod_n(m1, n)
    elem = MetaElem(lift[0][0], lift[0][1], lift[1][0], lift[1][1], 1)
    return rho(df, elem).scalar_mul(rho_unit(df, r)), elem


def rho_rd_closed(df: DiscForm, d: int) -> RepMatrix:
    """Closed form for diagonal classes: e_l -> (g_d/g) e_(d*l), d a unit mod N."""
    if gcd(d, df.level) != 1:
        raise DomainError(f"{d} is not a unit modulo the level {df.level}")
    scalar = df.gauss_sum(d) / df.gauss_sum(1)
    images = [df.index(df.smul(d, x)) for x in df.elements()]
    return RepMatrix.perm_scalar(df, images, scalar)


def rd_word_element(df: DiscForm, d: int) -> MetaElem:
    """The product S T^d S^(-1) T^a S T^d with a*d = 1 mod N."""
    from .metaplectic import S, t_power

    if gcd(d, df.level) != 1:
        raise DomainError(f"{d} is not a unit modulo the level {df.level}")
    a = inv_mod(d, df.level) if df.level > 1 else 1
    return S * t_power(d) * S.inverse() * t_power(a) * S * t_power(d)


def rho_um_closed(df: DiscForm, m: int) -> RepMatrix:
    """Closed form for lower-triangular shears U^m = S T^(-m) S^(-1).

    Entry (nu, l) is |A|^(-1) * sum over mu of e(-m Q(mu) + B(mu, l - nu)).
    """
    mod = df.field_modulus
    fld = _field(mod)
    n, deg = df.order, fld.deg
    tq, tb = _tables(df)
    els = df.elements()
    nums = np.zeros((n, n, deg), dtype=np.int64)
    for i in range(n):  # row: nu
        for j in range(n):  # column: lambda
            hist = [0] * mod
            for k in range(n):
                e = (-m * tq[k] + tb[k][j] - tb[k][i]) % mod
                hist[e] += 1
            vec = np.zeros(deg, dtype=np.int64)
            for e, cnt in enumerate(hist):
                if cnt:
                    vec += cnt * fld.red_np[e]
            nums[i, j, :] = vec
    return RepMatrix(df, nums, df.order)


def chi_closed(df: DiscForm, g: MetaElem) -> CycNum:
    """Scalar of the action on classes with N | b and N | c: rho(g) e_l = chi e_(d*l).

    Computed by word evaluation and verified to have scalar-times-permutation
    shape.  For lower-left prime shapes in odd signature the value is
    cross-checked against the explicit character formula.
    """
    n = df.level
    if g.b % n or g.c % n:
        raise DomainError("both off-diagonal entries must be divisible by the level")
    if df.signature % 2 and g.d % 2 == 0:
        raise DomainError("odd signature needs an odd lower-right entry")
    mat = rho(df, g)
    decomp = mat.scalar_permutation()
    if decomp is None:
        raise VerificationError("value is not a scalar times a permutation")
    images, scalar = decomp
    expected = [df.index(df.smul(g.d, x)) for x in df.elements()]
    if images != expected:
        raise VerificationError("permutation is not multiplication by d")
    if (
        df.signature % 2
        and g.sign == 1
        and g.d > 2
        and is_prime(g.d)
        and gcd(g.d, n) == 1
    ):
        if not (scalar == _chi_prime_closed(df, g.c, g.d)):
            raise VerificationError("character value disagrees with the closed form")
    return scalar


def _chi_prime_closed(df: DiscForm, c: int, p: int) -> CycNum:
    """eps_p^(1 - (-1/|A|) - sig) (c/p) (p/(|A| 2^sig)) for odd prime p."""
    m = df.field_modulus
    exp = (1 - kronecker(-1, df.order) - df.signature) % 4
    if p % 4 == 1:
        eps_pow = CycNum.from_rational(1, m)
    else:
        eps_pow = CycNum(m, _field(m).reduce_exponent(exp * (m // 4) % m))
    sign = kronecker(c, p) * kronecker(p, df.order * 2**df.signature)
    return eps_pow * sign


def oa_matrix(df: DiscForm, h) -> RepMatrix:
    """Permutation action e_l -> e_(h^(-1) l) of an isometry h given on generators."""
    if not df.is_isometry(h):
        raise DomainError("matrix does not define an isometry")
    els = df.elements()
    perm = [df.index(df.apply_matrix(h, x)) for x in els]
    inv = [0] * len(perm)
    for j, i in enumerate(perm):
        inv[i] = j
    return RepMatrix.perm_scalar(
        df, [inv[j] for j in range(len(els))], CycNum.from_rational(1, df.field_modulus)
    )


def _mult_matrix(df: DiscForm, m: int) -> RepMatrix:
    """The linear map e_l -> e_(m*l) (not invertible unless gcd(m,|A|)=1)."""
    images = [df.index(df.smul(m, x)) for x in df.elements()]
    return RepMatrix.perm_scalar(
        df, images, CycNum.from_rational(1, df.field_modulus)
    )


def coset_action(df: DiscForm, delta: MetaElem, check: bool = False) -> RepMatrix:
    """Right action of an integral primitive delta with square determinant.

    Writes delta = gamma * diag(m^2, 1) * gamma' inside the metaplectic group
    via the elementary divisor decomposition and returns the matrix of
    e_l -> e_l | delta (columns are images; the map can be non-invertible).
    With check=True the result is recomputed from a second, independent
    decomposition and both must agree exactly.
    """
    m2 = delta.det
    m = isqrt(m2)
    if m * m != m2:
        raise DomainError("determinant must be a perfect square")
    mat = delta.matrix
    if gcd(gcd(mat[0][0], mat[0][1]), gcd(mat[1][0], mat[1][1])) != 1:
        raise DomainError("matrix is not primitive; use its primitive part")
    out = _coset_action_once(df, delta, m)
    if check:
        from .metaplectic import S, t_power

        nu = t_power(1) * S
        nup = S * t_power(-1)
        second = _coset_action_conjugated(df, delta, m, nu, nup)
        if not (out == second):
            raise VerificationError("coset action depends on the decomposition")
    return out


def _decompose_through_alpha(delta: MetaElem, m: int) -> tuple[MetaElem, MetaElem]:
    """gamma, gamma' in the metaplectic group with gamma*(diag(m^2,1),1)*gamma' = delta."""
    u, v, _ = snf_sl2(delta.matrix)
    # U D V = diag(1, m^2) and diag(1, m^2) = S^(-1) diag(m^2, 1) S
    uinv = ((u[1][1], -u[0][1]), (-u[1][0], u[0][0]))
    sm = ((0, -1), (1, 0))
    sminv = ((0, 1), (-1, 0))
    gmat = _mat2_mul(uinv, sminv)
    gpmat = _mat2_mul(sm, _adj(v))
    gamma = MetaElem(gmat[0][0], gmat[0][1], gmat[1][0], gmat[1][1], 1)
    gammap = MetaElem(gpmat[0][0], gpmat[0][1], gpmat[1][0], gpmat[1][1], 1)
    alpha = MetaElem(m * m, 0, 0, 1, 1)
    prod = gamma * alpha * gammap
    if prod.matrix != delta.matrix:
        raise VerificationError("elementary divisor decomposition failed")
    if prod.sign != delta.sign:
        gamma = gamma * (MetaElem(-1, 0, 0, -1, 1) ** 2)  # absorb Z^2
    return gamma, gammap


def _adj(v):
    return ((v[1][1], -v[0][1]), (-v[1][0], v[0][0]))


def _mat2_mul(x, y):
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def _coset_action_once(df: DiscForm, delta: MetaElem, m: int) -> RepMatrix:
    gamma, gammap = _decompose_through_alpha(delta, m)
    return _slash_triple(df, gamma, m, gammap)


def _coset_action_conjugated(df, delta, m, nu, nup) -> RepMatrix:
    inner = nu * delta * nup
    g2, g2p = _decompose_through_alpha(inner, m)
    return _slash_triple(df, nu.inverse() * g2, m, g2p * nup.inverse())


def _slash_triple(df: DiscForm, gamma: MetaElem, m: int, gammap: MetaElem) -> RepMatrix:
    left = rho(df, gamma).conjugate_transpose()  # rho(gamma)^(-1), by unitarity
    right = rho(df, gammap).conjugate_transpose()
    return right @ _mult_matrix(df, m) @ left
