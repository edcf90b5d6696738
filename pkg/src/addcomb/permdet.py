"""Permanents, determinants and checkers for determinant/permanent identities.

Matrices are plain lists of rows.  Entries may be Python ints (optionally
reduced in a :class:`~addcomb.polyring.CoefficientRing`) or
:class:`~addcomb.polyring.SparsePoly` instances; every routine here is
division-free so it works over any commutative ring.

The checkers evaluate both sides of an identity independently: the left
side by literal coefficient extraction from an expanded polynomial, the
right side from a closed form.  They return a report and never assert.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Any, Sequence

from .errors import InconsistencyError, PreconditionError
from .polyring import INTEGERS, CoefficientRing, DegreeCap, SparsePoly, extract, mul_capped, vandermonde_factors

LEIBNIZ_MAX_N = 6


# -- permutations -----------------------------------------------------------

def sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of ``0..n-1`` given by its images."""
    n = len(perm)
    seen = [False] * n
    s = 1
    for i in range(n):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p o q`` (apply q first)."""
    return tuple(p[q[i]] for i in range(len(q)))


def _square(A) -> int:
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError(f"matrix is not square ({n} rows, row lengths {[len(r) for r in A]})")
    return n


def _one_like(A):
    for row in A:
        for a in row:
            if isinstance(a, SparsePoly):
                return SparsePoly.one(a.nvars, a.ring)
    return 1


def _finish(value, ring):
    if ring is None or isinstance(value, SparsePoly):
        return value
    return ring(value)


# -- permanent --------------------------------------------------------------

def permanent_leibniz(A, ring: CoefficientRing | None = None):
    """Sum over all permutations of the products ``a[i][sigma(i)]``."""
    n = _square(A)
    total = 0 * _one_like(A)
    for sigma in permutations(range(n)):
        term = _one_like(A)
        for i in range(n):
            term = term * A[i][sigma[i]]
        total = total + term
    return _finish(total, ring)


def permanent_ryser(A, ring: CoefficientRing | None = None) -> int:
    """Inclusion-exclusion over column subsets, visited in Gray-code order.

    ``per(A) = (-1)^n sum_S (-1)^{|S|} prod_i sum_{j in S} a_ij``; consecutive
    subsets differ in one column, so each step updates the n row sums.
    """
    n = _square(A)
    if n == 0:
        return _finish(1, ring)
    p = ring.modulus if ring is not None else None
    rows = [list(r) for r in A]
    row_sums = [0] * n
    total = 0
    gray = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray ^= 1 << j
        if gray >> j & 1:
            for i in range(n):
                row_sums[i] += rows[i][j]
        else:
            for i in range(n):
                row_sums[i] -= rows[i][j]
        prod = 1
        for s in row_sums:
            prod *= s
            if p is not None:
                prod %= p
            if not prod:
                break
        if bin(gray).count("1") % 2:
            total -= prod
        else:
            total += prod
    if n % 2:
        total = -total
    return _finish(total, ring)


def permanent(A, ring: CoefficientRing | None = None):
    """Permanent of a square matrix.

    Integer entries go through Ryser's formula; polynomial entries through
    the Leibniz sum.
    """
    _square(A)
    if isinstance(_one_like(A), SparsePoly):
        return permanent_leibniz(A, ring)
    return permanent_ryser(A, ring)


# -- determinant ------------------------------------------------------------

def determinant_leibniz(A, ring: CoefficientRing | None = None):
    n = _square(A)
    total = 0 * _one_like(A)
    for sigma in permutations(range(n)):
        term = _one_like(A) * sign(sigma)
        for i in range(n):
            term = term * A[i][sigma[i]]
        total = total + term
    return _finish(total, ring)


def determinant_bird(A, ring: CoefficientRing | None = None):
    """Division-free determinant by Bird's iteration (O(n^4) ring operations).

    Let mu(X) keep the strict upper triangle of X, zero the lower triangle,
    and put ``-(X[i+1][i+1] + ... + X[n-1][n-1])`` on the diagonal.  Iterating
    ``X <- mu(X) A`` n-1 times from ``X = A`` gives ``det A = (-1)^(n-1) X[0][0]``.
    """
    n = _square(A)
    if n == 0:
        return _finish(1, ring)
    zero = 0 * _one_like(A)
    X = [list(r) for r in A]
    for _ in range(n - 1):
        mu = [[zero] * n for _ in range(n)]
        tail = zero
        for i in range(n - 1, -1, -1):
            mu[i][i] = -tail
            tail = tail + X[i][i]
            for j in range(i + 1, n):
                mu[i][j] = X[i][j]
        X = [[sum((mu[i][t] * A[t][j] for t in range(i, n)), zero) for j in range(n)] for i in range(n)]
        if ring is not None:
            X = [[_finish(v, ring) for v in row] for row in X]
    d = X[0][0]
    return _finish(d if n % 2 else -d, ring)


def determinant(A, ring: CoefficientRing | None = None):
    n = _square(A)
    if n <= LEIBNIZ_MAX_N:
        return determinant_leibniz(A, ring)
    return determinant_bird(A, ring)


def matmul(A, B):
    n = len(A)
    return [[sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))] for i in range(n)]


# -- identity checkers ------------------------------------------------------

@dataclass
class IdentityReport:
    identity: str
    lhs: Any
    rhs: Any
    equal: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        def enc(v):
            if isinstance(v, SparsePoly):
                return str(v)
            if isinstance(v, dict):
                return {k: enc(w) for k, w in v.items()}
            if isinstance(v, (list, tuple)):
                return [enc(w) for w in v]
            return v
        return {"identity": self.identity, "lhs": enc(self.lhs), "rhs": enc(self.rhs),
                "equal": self.equal, "details": enc(self.details)}


@dataclass(frozen=True)
class ExponentProfile:
    """Targets ``k`` (one per variable), row exponents ``m`` and the Vandermonde flag ``delta``."""

    k: tuple[int, ...]
    m: tuple[int, ...]
    delta: int = 0

    def __post_init__(self):
        if len(self.k) != len(self.m):
            raise PreconditionError(f"k has {len(self.k)} entries, m has {len(self.m)}")
        if self.delta not in (0, 1):
            raise PreconditionError(f"delta must be 0 or 1, got {self.delta}")
        if any(v < 0 for v in self.k + self.m):
            raise PreconditionError("exponents must be nonnegative")

    @classmethod
    def uniform(cls, k: int, m: Sequence[int], delta: int = 0) -> "ExponentProfile":
        return cls((k,) * len(m), tuple(m), delta)

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def M(self) -> int:
        return sum(self.m) + self.delta * math.comb(self.n, 2)

    @property
    def excess(self) -> int:
        """Exponent of the power of ``x_1 + ... + x_n``."""
        return sum(self.k) - self.M

    @property
    def uniform_k(self) -> int | None:
        return self.k[0] if self.k and len(set(self.k)) == 1 else None


def _weighted_matrix(A, rows_exp: Sequence[int], nvars: int, ring=INTEGERS):
    """Entries ``a_ij * x_j**rows_exp[i]`` as polynomials in x_1..x_n."""
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            e = [0] * nvars
            e[j] = rows_exp[i]
            row.append(SparsePoly({tuple(e): A[i][j]}, nvars, ring))
        out.append(row)
    return out


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise InconsistencyError(f"{what}: {num}/{den} is not an integer")
    return q


def _leading_sum(A, prof: ExponentProfile, use_sign: bool) -> int:
    """Right side of the general (part (i)) formulas.

    ``use_sign`` selects the determinant version; for the permanent version
    the delta=1 sign is eps(sigma sigma') instead of eps(sigma').
    """
    n = prof.n
    E = prof.excess
    total = 0
    for sigma in permutations(range(n)):
        d = [prof.k[sigma[i]] - prof.m[i] for i in range(n)]
        if min(d, default=0) < 0:
            continue
        if prof.delta:
            if len(set(d)) != n:
                continue
            dset = set(d)
            den = 1
            for di in d:
                for j in range(di):
                    if j not in dset:
                        den *= di - j
            order = tuple(sorted(range(n), key=d.__getitem__))
            s = sign(order) if use_sign else sign(compose(sigma, order))
        else:
            den = math.prod(math.factorial(di) for di in d)
            s = sign(sigma) if use_sign else 1
        N_sigma = _exact_div(math.factorial(E), den, f"N_sigma for sigma={sigma}")
        total += s * N_sigma * math.prod(A[i][sigma[i]] for i in range(n))
    return total


def _closed_form(A, prof: ExponentProfile, det_first: bool):
    """Part (ii) closed form, or None when the profile is outside its hypotheses.

    ``det_first`` is True for the determinant-on-the-left family.
    """
    k = prof.uniform_k
    m = prof.m
    n = prof.n
    if k is None or list(m) != sorted(m) or (m and m[-1] > k):
        return None
    if prof.delta == 0:
        E = k * n - sum(m)
        mult = _exact_div(math.factorial(E), math.prod(math.factorial(k - mi) for mi in m), "closed form ratio")
        return mult * (determinant(A) if det_first else permanent(A))
    if len(set(m)) != n:
        return None
    E = k * n - math.comb(n, 2) - sum(m)
    if E < 0:
        return None
    den = 1
    for i in range(n):
        later = set(m[i + 1:])
        for j in range(m[i] + 1, k + 1):
            if j not in later:
                den *= j - m[i]
    mult = _exact_div(math.factorial(E), den, "closed form ratio")
    s = -1 if math.comb(n, 2) % 2 else 1
    return s * mult * (permanent(A) if det_first else determinant(A))


def _duality(A, prof: ExponentProfile, det_first: bool) -> IdentityReport:
    n = _square(A)
    if n != prof.n:
        raise PreconditionError(f"matrix is {n}x{n}, profile has n={prof.n}")
    if prof.excess < 0:
        raise PreconditionError(f"sum of k ({sum(prof.k)}) is below M ({prof.M})")
    W = _weighted_matrix(A, prof.m, n)
    head = determinant(W) if det_first else permanent(W)
    if prof.delta:
        for fac in vandermonde_factors(range(n), n):
            head = mul_capped(head, fac, DegreeCap(prof.k))
    lhs = extract(head, dict(enumerate(prof.k)), [((1,) * n, prof.excess)]).constant_term()
    general = _leading_sum(A, prof, use_sign=det_first)
    closed = _closed_form(A, prof, det_first)
    equal = lhs == general and (closed is None or closed == lhs)
    name = ("3.1" if det_first else "3.2") + ("(i)" if closed is None else "(ii)")
    return IdentityReport(name, lhs, general, equal,
                          {"closed_form": closed, "k": list(prof.k), "m": list(prof.m), "delta": prof.delta})


def check_duality_31(A, prof: ExponentProfile) -> IdentityReport:
    """Coefficient identities for ``|a_ij x_j^{m_i}| * V^delta * (x_1+...+x_n)^E``.

    ``rhs`` holds the general permutation-sum formula; ``details['closed_form']``
    the factorial-ratio form times det(A) (delta=0) or per(A) (delta=1) when
    k is uniform and m is sorted, else None.
    """
    return _duality(A, prof, det_first=True)


def check_duality_32(A, prof: ExponentProfile) -> IdentityReport:
    """Permanent dual of :func:`check_duality_31` (per and det swap roles)."""
    return _duality(A, prof, det_first=False)


SYMMETRY_IDENTITIES = {
    "3.5": (determinant, determinant),
    "3.6": (permanent, determinant),
    "3.7": (determinant, permanent),
    "3.8": (permanent, permanent),
}


def check_symmetry_33(A, k: int, l: Sequence[int], m: Sequence[int]) -> dict[str, IdentityReport]:
    """Swap symmetry of ``[x^k] F(a_ij x_j^{l_i}) G(x_j^{m_i}) (x_1+...+x_n)^N`` in (l, m).

    F and G range over {det, per}; one report per combination.
    """
    n = _square(A)
    if len(l) != n or len(m) != n:
        raise PreconditionError("l and m must have one entry per row")
    N = k * n - sum(l) - sum(m)
    if N < 0:
        raise PreconditionError(f"N = kn - sum(l+m) = {N} < 0")
    ones = [[1] * n for _ in range(n)]
    target = {i: k for i in range(n)}
    cap = DegreeCap((k,) * n)

    def side(outer, inner, first, second):
        f = outer(_weighted_matrix(A, first, n))
        g = inner(_weighted_matrix(ones, second, n))
        return extract(mul_capped(f, g, cap), target, [((1,) * n, N)]).constant_term()

    reports = {}
    for name, (outer, inner) in SYMMETRY_IDENTITIES.items():
        lhs = side(outer, inner, l, m)
        rhs = side(outer, inner, m, l)
        reports[name] = IdentityReport(name, lhs, rhs, lhs == rhs, {"k": k, "l": list(l), "m": list(m), "N": N})
    return reports


LEMMA21_MAX_N = 4
LEMMA21_MAX_M = 5


def check_lemma_21(B: Sequence[Sequence[int]]) -> IdentityReport:
    """Signed sum over ``(sigma_1..sigma_{m-1})`` of products of column-product differences.

    ``B`` has m rows and n columns.  For odd m the right side is the product
    of all row Vandermondes; for even m the last row's Vandermonde is replaced
    by the permanent ``per(b_{m,j}^{i-1})``.
    """
    m = len(B)
    if m < 1:
        raise PreconditionError("need at least one row")
    n = len(B[0])
    if any(len(r) != n for r in B):
        raise PreconditionError("ragged array")
    if n > LEMMA21_MAX_N or m > LEMMA21_MAX_M:
        raise PreconditionError(f"enumeration cap is n <= {LEMMA21_MAX_N}, m <= {LEMMA21_MAX_M}")
    perms = [(p, sign(p)) for p in permutations(range(n))]
    last = B[m - 1]
    lhs = 0
    for choice in product(perms, repeat=m - 1):
        s = 1
        cols = list(last)
        for (p, sp), row in zip(choice, B):
            s *= sp
            for j in range(n):
                cols[j] *= row[p[j]]
        term = s
        for i in range(n):
            for j in range(i + 1, n):
                term *= cols[j] - cols[i]
                if not term:
                    break
            if not term:
                break
        lhs += term

    def vdm(row):
        return math.prod(row[j] - row[i] for i in range(n) for j in range(i + 1, n))

    if m % 2:
        rhs = math.prod(vdm(row) for row in B)
        extra = None
    else:
        extra = permanent([[b ** i for b in last] for i in range(n)])
        rhs = extra * math.prod(vdm(row) for row in B[:-1])
    return IdentityReport("2.1" if m % 2 else "2.1-even", lhs, rhs, lhs == rhs,
                          {"m": m, "n": n, "last_row_permanent": extra})


def lemma22_polynomial(n: int, c: Sequence[int] | None = None, ring: CoefficientRing = INTEGERS,
                       truncate: bool = False) -> SparsePoly:
    """``prod_{i<j} (x_j-x_i)(y_j-y_i)(c_j x_j y_j - c_i x_i y_i)``.

    Variables are ordered x_1..x_n, y_1..y_n, then c_1..c_n when ``c`` is None
    (symbolic); with numeric ``c`` the arity is 2n.  ``truncate`` drops terms
    of degree above n-1 in any x or y, which keeps the coefficient of
    ``x^{n-1} y^{n-1}`` but nothing else.
    """
    symbolic = c is None
    nv = 3 * n if symbolic else 2 * n
    factors = vandermonde_factors(range(n), nv, ring) + vandermonde_factors(range(n, 2 * n), nv, ring)
    for i in range(n):
        for j in range(i + 1, n):
            factors.append(_cxy(j, n, nv, c, ring) - _cxy(i, n, nv, c, ring))
    cap = [n - 1 if truncate else None] * (2 * n) + [None] * (nv - 2 * n)
    out = SparsePoly.one(nv, ring)
    for f in factors:
        out = mul_capped(out, f, cap)
    return out


def _cxy(i, n, nv, c, ring):
    e = [0] * nv
    e[i] = 1
    e[n + i] = 1
    if c is None:
        e[2 * n + i] = 1
        return SparsePoly({tuple(e): 1}, nv, ring)
    return SparsePoly({tuple(e): c[i]}, nv, ring)


def check_lemma_22(n: int, c: Sequence[int] | None = None, ring: CoefficientRing = INTEGERS) -> IdentityReport:
    """``[x^{n-1} y^{n-1}]`` of :func:`lemma22_polynomial` versus ``prod_{i<j}(c_j - c_i)``."""
    f = lemma22_polynomial(n, c, ring, truncate=True)
    lhs = extract(f, {i: n - 1 for i in range(2 * n)})
    if c is None:
        rhs = SparsePoly.one(3 * n, ring)
        for fac in vandermonde_factors(range(2 * n, 3 * n), 3 * n, ring):
            rhs = rhs * fac
    else:
        lhs = lhs.constant_term()
        rhs = ring(math.prod(c[j] - c[i] for i in range(n) for j in range(i + 1, n)))
    return IdentityReport("2.2", lhs, rhs, lhs == rhs, {"n": n, "symbolic": c is None})
