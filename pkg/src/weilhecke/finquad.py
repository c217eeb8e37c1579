"""Finite quadratic modules (discriminant forms) of even lattices.

A DiscForm is a finite abelian group in elementary divisor form together
with a Q/Z-valued quadratic form Q and its polarization B.  It is built
either from the Gram matrix of a non-degenerate even lattice or directly
from (orders, qdiag) data.  All arithmetic is exact; the signature is the
residue mod 8 pinned down by Milgram's formula
sum_l e(Q(l)) = sqrt(|A|) * e(sig/8).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

from .arith import divisors, frac_mod1, inv_mod, lcm
from .cyclo import CycNum, sqrt_nat, zeta
from .errors import DomainError
from .linalg import mat_inverse, smith_normal_form, symmetric_signature

#: refuse exhaustive checks beyond this group order
DESK_ORDER_BOUND = 10**4


class DfElem(tuple):
    """Element of a DiscForm: canonical residue vector, one entry per generator."""

    __slots__ = ()

    def __new__(cls, residues):
        return super().__new__(cls, tuple(int(r) for r in residues))

    def __repr__(self):
        return f"DfElem{tuple(self)}"


class DiscForm:
    """A finite abelian group with a nondegenerate Q/Z-valued quadratic form."""

    def __init__(self, orders, qdiag, bmat, signature_hint: int | None = None):
        orders = tuple(int(d) for d in orders)
        if any(d < 2 for d in orders):
            raise DomainError("elementary divisors must be >= 2")
        for i in range(len(orders) - 1):
            if orders[i + 1] % orders[i]:
                raise DomainError("elementary divisors must form a chain d1 | d2 | ...")
        self.orders = orders
        self.qdiag = tuple(frac_mod1(Fraction(q)) for q in qdiag)
        self.bmat = tuple(tuple(frac_mod1(Fraction(b)) for b in row) for row in bmat)
        k = len(orders)
        if len(self.qdiag) != k or len(self.bmat) != k or any(len(r) != k for r in self.bmat):
            raise DomainError("qdiag/bmat arity does not match the orders")
        for i in range(k):
            for j in range(k):
                if self.bmat[i][j] != self.bmat[j][i]:
                    raise DomainError("B must be symmetric")
                if frac_mod1(orders[i] * self.bmat[i][j]) != 0:
                    raise DomainError("B is not well defined on the generators")
            if frac_mod1(2 * self.qdiag[i] - self.bmat[i][i]) != 0:
                raise DomainError("B(g,g) must equal 2*Q(g) mod 1")

        self.order = 1
        for d in orders:
            self.order *= d
        if self.order > DESK_ORDER_BOUND:
            raise DomainError(f"group order {self.order} exceeds the supported bound")

        self._elements = [DfElem(t) for t in itertools.product(*(range(d) for d in orders))]
        self._index = {e: i for i, e in enumerate(self._elements)}
        self._qvals = [self._q_of(e) for e in self._elements]

        self._check_nondegenerate()
        self.level = self._compute_level()
        self.field_modulus = lcm(8, self.level)
        self.signature = self._signature_by_milgram()
        if signature_hint is not None and signature_hint % 8 != self.signature:
            raise DomainError(
                f"Milgram signature {self.signature} contradicts the lattice signature "
                f"{signature_hint % 8}"
            )
        if self.signature % 2 and self.level % 4:
            raise DomainError("odd-signature forms must have level divisible by 4")
        self._rho_cache: dict = {}
        self._gram = None
        self._snf_u = None
        self._snf_u_inv = None
        self._kept = None

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_gram(gram) -> "DiscForm":
        """Discriminant form L'/L of the even lattice with the given Gram matrix."""
        g = [[int(x) for x in row] for row in gram]
        n = len(g)
        if any(len(row) != n for row in g):
            raise DomainError("Gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise DomainError("Gram matrix must be symmetric")
            if g[i][i] % 2:
                raise DomainError("not an even lattice")
        if n == 0:
            form = DiscForm((), (), (), signature_hint=0)
            form._gram = ()
            form._snf_u = ()
            form._snf_u_inv = ()
            form._kept = ()
            return form
        pos, neg = _signature_or_degenerate(g)
        u, _, d = smith_normal_form(g)
        det = 1
        for x in d:
            det *= x
        # H[i][j] = B(gamma_i, gamma_j) before reduction mod 1, for the
        # generators gamma_i corresponding to the SNF residue coordinates
        ugu = [[sum(u[i][a] * g[a][b] * u[j][b] for a in range(n) for b in range(n))
                for j in range(n)] for i in range(n)]
        h = mat_inverse(ugu)
        kept = [i for i in range(n) if d[i] > 1]
        orders = [d[i] for i in kept]
        qdiag = [frac_mod1(Fraction(h[i][i], 2)) for i in kept]
        bmat = [[frac_mod1(h[i][j]) for j in kept] for i in kept]
        form = DiscForm(orders, qdiag, bmat, signature_hint=pos - neg)
        if form.order != det:
            raise DomainError("group order does not match |det G|")
        form._gram = tuple(tuple(row) for row in g)
        form._snf_u = tuple(tuple(row) for row in u)
        form._snf_u_inv = tuple(
            tuple(int(x) for x in row) for row in _int_inverse(u)
        )
        form._kept = tuple(kept)
        return form

    @staticmethod
    def from_orders(orders, qdiag, bmat=None) -> "DiscForm":
        """Direct construction; bmat defaults to the diagonal polarization 2*qdiag."""
        orders = tuple(int(d) for d in orders)
        qdiag = tuple(Fraction(q) for q in qdiag)
        if bmat is None:
            bmat = [
                [frac_mod1(2 * qdiag[i]) if i == j else Fraction(0)
                 for j in range(len(orders))]
                for i in range(len(orders))
            ]
        return DiscForm(orders, qdiag, bmat)

    # -- identity -------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, DiscForm)
            and self.orders == other.orders
            and self.qdiag == other.qdiag
            and self.bmat == other.bmat
        )

    def __hash__(self):
        return hash((self.orders, self.qdiag, self.bmat))

    def __repr__(self):
        return (
            f"DiscForm(orders={self.orders}, |A|={self.order}, level={self.level}, "
            f"signature={self.signature})"
        )

    # -- elements ---------------------------------------------------------------

    def elements(self) -> list[DfElem]:
        return list(self._elements)

    def zero(self) -> DfElem:
        return DfElem((0,) * len(self.orders))

    def element(self, residues) -> DfElem:
        if len(residues) != len(self.orders):
            raise DomainError("residue vector has wrong arity")
        return DfElem(r % d for r, d in zip(residues, self.orders))

    def index(self, x: DfElem) -> int:
        return self._index[x]

    def neg(self, x: DfElem) -> DfElem:
        return DfElem((-r) % d for r, d in zip(x, self.orders))

    def add(self, x: DfElem, y: DfElem) -> DfElem:
        return DfElem((a + b) % d for a, b, d in zip(x, y, self.orders))

    def smul(self, t: int, x: DfElem) -> DfElem:
        return DfElem((t * r) % d for r, d in zip(x, self.orders))

    # -- the forms ----------------------------------------------------------------

    def _q_of(self, x: DfElem) -> Fraction:
        total = Fraction(0)
        k = len(self.orders)
        for i in range(k):
            if x[i]:
                total += x[i] * x[i] * self.qdiag[i]
                for j in range(i + 1, k):
                    if x[j]:
                        total += x[i] * x[j] * self.bmat[i][j]
        return frac_mod1(total)

    def q(self, x: DfElem) -> Fraction:
        """Q(x) in [0, 1)."""
        if len(x) != len(self.orders):
            raise DomainError("residue vector has wrong arity")
        return self._qvals[self._index[DfElem(r % d for r, d in zip(x, self.orders))]]

    def b(self, x: DfElem, y: DfElem) -> Fraction:
        """B(x, y) = Q(x+y) - Q(x) - Q(y) in [0, 1)."""
        if len(x) != len(self.orders) or len(y) != len(self.orders):
            raise DomainError("residue vector has wrong arity")
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        total += xi * yj * self.bmat[i][j]
        return frac_mod1(total)

    def forms(self, x: DfElem, y: DfElem | None = None) -> Fraction:
        return self.q(x) if y is None else self.b(x, y)

    # -- invariants -----------------------------------------------------------------

    def _check_nondegenerate(self):
        gens = [self.element(tuple(int(i == j) for j in range(len(self.orders))))
                for i in range(len(self.orders))]
        radical = [
            x for x in self._elements if all(self.b(x, g) == 0 for g in gens)
        ]
        if len(radical) != 1:
            raise DomainError("quadratic form is degenerate")

    def _compute_level(self) -> int:
        n = 1
        for q in self._qvals:
            n = lcm(n, q.denominator)
        return n

    def _signature_by_milgram(self) -> int:
        m = self.field_modulus
        g1 = self.gauss_sum(1)
        root = sqrt_nat(self.order, m)
        for s in range(8):
            if g1 == root * zeta(s, 8).lift(m):
                return s
        raise DomainError("degenerate form: Milgram comparison failed")

    def gauss_sum(self, d: int = 1) -> CycNum:
        """g_d = sum over A of e(d * Q(lambda)), exact in Q(zeta_{lcm(8,N)})."""
        m = self.field_modulus
        hist = [0] * m
        for q in self._qvals:
            hist[(d * q.numerator * (m // q.denominator)) % m] += 1
        out = CycNum.from_rational(0, m)
        for e, cnt in enumerate(hist):
            if cnt:
                out = out + cnt * zeta(e, m)
        return out

    # -- subgroup structure ------------------------------------------------------------

    def preimages_mul(self, x: DfElem, m: int) -> set[DfElem]:
        """{mu in A : m * mu = x}; empty when x is not an m-th multiple."""
        if len(x) != len(self.orders):
            raise DomainError("residue vector has wrong arity")
        per_component = []
        for r, d in zip(x, self.orders):
            g = gcd(m % d if m % d else d, d)
            if r % g:
                return set()
            base = (r // g) * inv_mod((m // g) % (d // g), d // g) % (d // g)
            per_component.append([base + t * (d // g) for t in range(g)])
        return {DfElem(t) for t in itertools.product(*per_component)}

    def sub_groups(self, n: int) -> tuple[list[DfElem], list[DfElem]]:
        """(A_n, A^n): the n-torsion and the subgroup of n-th multiples."""
        tor = []
        for d in self.orders:
            g = gcd(n, d)
            tor.append([t * (d // g) for t in range(g)])
        a_n = [DfElem(t) for t in itertools.product(*tor)]
        img = []
        for d in self.orders:
            g = gcd(n, d)
            img.append([t * g for t in range(d // g)])
        a_pow = [DfElem(t) for t in itertools.product(*img)]
        return a_n, a_pow

    def is_isometry(self, h) -> bool:
        """Whether the integer matrix h on generators defines an isometry of (A, Q)."""
        k = len(self.orders)
        h = [[int(x) for x in row] for row in h]
        if len(h) != k or any(len(r) != k for r in h):
            raise DomainError("isometry matrix has wrong shape")
        # well-definedness: h(d_i * gamma_i) must vanish
        for i in range(k):
            for j in range(k):
                if (self.orders[i] * h[j][i]) % self.orders[j]:
                    raise DomainError("map is not well defined on the group")
        image = set()
        for x in self._elements:
            y = self.apply_matrix(h, x)
            image.add(y)
            if self.q(y) != self.q(x):
                return False
        return len(image) == self.order

    def apply_matrix(self, h, x: DfElem) -> DfElem:
        k = len(self.orders)
        return DfElem(
            sum(h[j][i] * x[i] for i in range(k)) % self.orders[j] for j in range(k)
        )

    # -- lattice data (present when built from a Gram matrix) -----------------------------

    def dual_vector_label(self, v) -> DfElem:
        """Class in A of the dual vector G^(-1) v, for integer coordinates v."""
        if self._snf_u is None:
            raise DomainError("no lattice data attached to this form")
        n = len(self._snf_u)
        w = [sum(self._snf_u[i][j] * v[j] for j in range(n)) for i in range(n)]
        return DfElem(
            w[i] % self.orders[pos] for pos, i in enumerate(self._kept)
        )

    def coset_representative(self, x: DfElem) -> list[Fraction]:
        """Rational coordinates (in the lattice basis) of a representative of x."""
        if self._snf_u is None:
            raise DomainError("no lattice data attached to this form")
        n = len(self._snf_u)
        w = [0] * n
        for pos, i in enumerate(self._kept):
            w[i] = x[pos]
        v = [sum(self._snf_u_inv[i][j] * w[j] for j in range(n)) for i in range(n)]
        ginv = mat_inverse(self._gram)
        return [sum(ginv[i][j] * v[j] for j in range(n)) for i in range(n)]

    # -- serialization ----------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "orders": list(self.orders),
            "qdiag": [str(q) for q in self.qdiag],
            "bmat": [[str(b) for b in row] for row in self.bmat],
            "order": self.order,
            "level": self.level,
            "signature": self.signature,
        }

    @staticmethod
    def from_json(obj: dict) -> "DiscForm":
        if "gram" in obj:
            return DiscForm.from_gram(obj["gram"])
        orders = obj["orders"]
        qdiag = [Fraction(s) for s in obj["qdiag"]]
        if "bmat" in obj:
            bmat = [[Fraction(s) for s in row] for row in obj["bmat"]]
            return DiscForm(orders, qdiag, bmat)
        return DiscForm.from_orders(orders, qdiag)


def _signature_or_degenerate(g) -> tuple[int, int]:
    try:
        return symmetric_signature(g)
    except DomainError:
        raise DomainError("degenerate lattice") from None


def _int_inverse(u):
    """Inverse of a unimodular integer matrix, with integer entries."""
    inv = mat_inverse(u)
    out = []
    for row in inv:
        out_row = []
        for x in row:
            if x.denominator != 1:
                raise DomainError("matrix is not unimodular")
            out_row.append(int(x))
        out.append(out_row)
    return out
