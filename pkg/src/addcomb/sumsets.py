"""Restricted sumsets over prime fields and their polynomial-method certificates.

Contents:

* :class:`SumsetParams` with the derived constants K, L (sumset exclusion
  budgets) and the normalizer N = K0 * L0 of the coefficient formula;
* :func:`lemma41_coefficient`, the target coefficient of
  ``prod_{i<j} (c_j x_j y_j - c_i x_i y_i)(x_j^m - x_i^m)(y_j^h - y_i^h)
  * (sum x)^K (sum y)^L`` by direct extraction or in closed form;
* witness searches for the field statement (distinct ``a_i b_i c_i``,
  ``P_i(a_i)``, ``Q_i(b_i)``, excluded sums) and its group analogue;
* the sumset-size bounds with a permanent restriction, the SDR with nonzero
  permanent, and the sumset with forbidden differences;
* the coefficient identity with ``(x_j - x_i)^(2m-1) (x_j y_j - x_i y_i)``.

Polynomials ``P_i`` are coefficient lists in increasing degree
(``[a_0, a_1, ..., a_m]``).  Every search returns the lexicographically first
qualifying tuple by position in the given sets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import Budget, InconsistencyError, PreconditionError
from .groups import GroupSpec
from .nullstellensatz import GridFamily
from .permdet import permanent
from .polyring import (INTEGERS, CoefficientRing, IntegersModP, SparsePoly, extract, format_poly, mul_capped,
                       vandermonde_factors)


def _vdm(values) -> int:
    n = len(values)
    return math.prod(values[j] - values[i] for i in range(n) for j in range(i + 1, n))


def _as_integer(q: Fraction, what: str) -> int:
    if q.denominator != 1:
        raise InconsistencyError(f"{what} = {q} is not an integer")
    return q.numerator


@dataclass(frozen=True)
class SumsetParams:
    h: int
    k: int
    l: int
    m: int
    n: int

    def __post_init__(self):
        for name in ("h", "k", "l", "m", "n"):
            if getattr(self, name) < 1:
                raise PreconditionError(f"{name} must be a positive integer")
        if self.k - 1 < self.m * (self.n - 1):
            raise PreconditionError(f"need k-1 >= m(n-1): k={self.k}, m={self.m}, n={self.n}")
        if self.l - 1 < self.h * (self.n - 1):
            raise PreconditionError(f"need l-1 >= h(n-1): l={self.l}, h={self.h}, n={self.n}")

    @classmethod
    def minimal(cls, h: int, m: int, n: int, extra: int = 0) -> "SumsetParams":
        """Smallest k, l allowed for (h, m, n), plus ``extra``."""
        return cls(h, m * (n - 1) + 1 + extra, h * (n - 1) + 1 + extra, m, n)

    @property
    def pairs(self) -> int:
        return math.comb(self.n, 2)

    @property
    def K(self) -> int:
        return (self.k - 1) * self.n - (self.m + 1) * self.pairs

    @property
    def L(self) -> int:
        return (self.l - 1) * self.n - (self.h + 1) * self.pairs

    @staticmethod
    def _normalizer(top: int, step: int, n: int) -> int:
        q = Fraction(1, step ** math.comb(n, 2))
        for r in range(n):
            q *= Fraction(math.factorial(top - r * step), math.factorial(r))
        return _as_integer(q, "normalizer")

    @property
    def K0(self) -> int:
        return self._normalizer(self.k - 1, self.m, self.n)

    @property
    def L0(self) -> int:
        return self._normalizer(self.l - 1, self.h, self.n)

    @property
    def N(self) -> int:
        q = Fraction(1, (self.h * self.m) ** self.pairs)
        for r in range(self.n):
            q *= Fraction(math.factorial(self.k - 1 - r * self.m) * math.factorial(self.l - 1 - r * self.h),
                          math.factorial(r) ** 2)
        N = _as_integer(q, "N")
        if N != self.K0 * self.L0:
            raise InconsistencyError(f"N = {N} differs from K0*L0 = {self.K0 * self.L0}")
        return N

    @property
    def closed_form_multiplier(self) -> int:
        """K! L! / N, required to be an exact integer."""
        num = math.factorial(self.K) * math.factorial(self.L)
        q, r = divmod(num, self.N)
        if r:
            raise InconsistencyError(f"K!L!/N = {num}/{self.N} is not an integer")
        return q

    def as_dict(self) -> dict:
        return {"h": self.h, "k": self.k, "l": self.l, "m": self.m, "n": self.n, "K": self.K, "L": self.L}


# -- coefficient formula ------------------------------------------------------

def _xy_layout(n: int, symbolic: bool):
    """Variable positions: x_1..x_n, y_1..y_n, then c_1..c_n if symbolic."""
    nv = 3 * n if symbolic else 2 * n
    return nv, list(range(n)), list(range(n, 2 * n)), list(range(2 * n, 3 * n))


def _cxy_factors(n: int, nv: int, c, ring, xs, ys, cs):
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            terms = {}
            for idx, sgn in ((j, 1), (i, -1)):
                e = [0] * nv
                e[xs[idx]] = 1
                e[ys[idx]] = 1
                if c is None:
                    e[cs[idx]] = 1
                    terms[tuple(e)] = sgn
                else:
                    terms[tuple(e)] = terms.get(tuple(e), 0) + sgn * c[idx]
            out.append(SparsePoly(terms, nv, ring))
    return out


def lemma41_polynomial(params: SumsetParams, c: Sequence[int] | None = None,
                       ring: CoefficientRing = INTEGERS) -> SparsePoly:
    """The difference-factor part, capped at x <= k-1 and y <= l-1.

    The powers ``(sum x)^K (sum y)^L`` are left out; :func:`lemma41_coefficient`
    reads their coefficients off directly.
    """
    n = params.n
    nv, xs, ys, cs = _xy_layout(n, c is None)
    factors = _cxy_factors(n, nv, c, ring, xs, ys, cs)
    factors += vandermonde_factors(xs, nv, ring, params.m)
    factors += vandermonde_factors(ys, nv, ring, params.h)
    cap = [params.k - 1] * n + [params.l - 1] * n + [None] * (nv - 2 * n)
    out = SparsePoly.one(nv, ring)
    for f in factors:
        out = mul_capped(out, f, cap)
    return out


def _project(f: SparsePoly, positions: Sequence[int]) -> SparsePoly:
    return SparsePoly({tuple(e[p] for p in positions): v for e, v in f.items()}, len(positions), f.ring)


def lemma41_coefficient(params: SumsetParams, c: Sequence[int] | None = None, mode: str = "direct",
                        ring: CoefficientRing = INTEGERS):
    """``[x^{k-1} y^{l-1}]`` of the coefficient polynomial.

    ``c=None`` keeps c_1..c_n symbolic and returns a polynomial in them;
    otherwise a ring element.  ``mode`` is ``"direct"`` (expansion and
    extraction) or ``"closed"`` (``K! L! / N * prod_{i<j} (c_j - c_i)``).
    """
    n = params.n
    if c is not None and len(c) != n:
        raise PreconditionError(f"need {n} values of c")
    if mode == "direct":
        nv, xs, ys, cs = _xy_layout(n, c is None)
        f = lemma41_polynomial(params, c, ring)
        target = {i: params.k - 1 for i in xs} | {i: params.l - 1 for i in ys}
        form_x = [1 if i in xs else 0 for i in range(nv)]
        form_y = [1 if i in ys else 0 for i in range(nv)]
        g = extract(f, target, [(form_x, params.K), (form_y, params.L)])
        return _project(g, cs) if c is None else g.constant_term()
    if mode == "closed":
        mult = params.closed_form_multiplier
        if c is None:
            v = SparsePoly.one(n, ring)
            for fac in vandermonde_factors(range(n), n, ring):
                v = v * fac
            return v.scale(mult)
        return ring(mult * _vdm([int(x) for x in c]))
    raise ValueError(f"unknown mode {mode!r}")


# -- field witness ------------------------------------------------------------

def poly_eval(coeffs: Sequence[int], x: int, ring: CoefficientRing) -> int:
    acc = 0
    for a in reversed(coeffs):
        acc = acc * x + a
    return ring(acc)


@dataclass(frozen=True)
class FieldInstance:
    p: int
    A: tuple[tuple[int, ...], ...]
    B: tuple[tuple[int, ...], ...]
    c: tuple[int, ...]
    P: tuple[tuple[int, ...], ...]
    Q: tuple[tuple[int, ...], ...]
    S: frozenset = frozenset()
    T: frozenset = frozenset()

    @classmethod
    def build(cls, p, A, B, c, P=None, Q=None, S=(), T=(), m=1, h=1) -> "FieldInstance":
        """Normalize inputs mod p; P, Q default to ``x^m`` and ``x^h``."""
        n = len(c)
        P = P if P is not None else [[0] * m + [1]] * n
        Q = Q if Q is not None else [[0] * h + [1]] * n
        red = lambda s: tuple(int(v) % p for v in s)  # noqa: E731
        return cls(int(p), tuple(red(s) for s in A), tuple(red(s) for s in B), red(c),
                   tuple(red(s) for s in P), tuple(red(s) for s in Q),
                   frozenset(red(S)), frozenset(red(T)))

    @property
    def ring(self) -> CoefficientRing:
        return IntegersModP(self.p)

    @property
    def n(self) -> int:
        return len(self.c)

    def as_dict(self) -> dict:
        return {"p": self.p, "A": [list(s) for s in self.A], "B": [list(s) for s in self.B],
                "c": list(self.c), "P": [list(s) for s in self.P], "Q": [list(s) for s in self.Q],
                "S": sorted(self.S), "T": sorted(self.T)}


def _degree(coeffs, ring) -> int:
    d = -1
    for i, a in enumerate(coeffs):
        if ring(a):
            d = i
    return d


def validate_field_instance(inst: FieldInstance, params: SumsetParams) -> None:
    """Raise :class:`PreconditionError` naming the first violated hypothesis."""
    try:
        ring = inst.ring
    except ValueError as exc:
        raise PreconditionError(f"field size: {exc}") from None
    n = params.n
    if inst.n != n:
        raise PreconditionError(f"c has {inst.n} entries, params say n={n}")
    if len(inst.A) != n or len(inst.B) != n or len(inst.P) != n or len(inst.Q) != n:
        raise PreconditionError("need n sets A_i, B_i and n polynomials P_i, Q_i")
    if inst.p <= max(params.K, params.L):
        raise PreconditionError(f"characteristic {inst.p} must exceed max(K, L) = {max(params.K, params.L)}")
    for i, s in enumerate(inst.A):
        if len(set(s)) != params.k or len(s) != params.k:
            raise PreconditionError(f"|A_{i + 1}| must be k = {params.k} distinct field elements")
    for i, s in enumerate(inst.B):
        if len(set(s)) != params.l or len(s) != params.l:
            raise PreconditionError(f"|B_{i + 1}| must be l = {params.l} distinct field elements")
    if len(set(inst.c)) != n:
        raise PreconditionError(f"c_1..c_n must be distinct, got {list(inst.c)}")
    for name, polys, deg in (("P", inst.P, params.m), ("Q", inst.Q, params.h)):
        for i, f in enumerate(polys):
            if _degree(f, ring) != deg or ring(f[deg]) != 1:
                raise PreconditionError(f"{name}_{i + 1} must be monic of degree {deg}")
    if len(inst.S) > params.K:
        raise PreconditionError(f"|S| = {len(inst.S)} exceeds K = {params.K}")
    if len(inst.T) > params.L:
        raise PreconditionError(f"|T| = {len(inst.T)} exceeds L = {params.L}")


@dataclass(frozen=True)
class Witness:
    a: tuple
    b: tuple

    def as_list(self) -> list:
        return list(self.a) + list(self.b)


def _distinct_tuples(sets, key, budget, keep=lambda t: True):
    """Tuples from ``product(*sets)`` (in order) whose ``key`` values are pairwise distinct."""
    n = len(sets)
    chosen: list = []
    keys: list = []

    def rec(i):
        if i == n:
            t = tuple(chosen)
            if keep(t):
                yield t
            return
        for x in sets[i]:
            budget.tick()
            kx = key(i, x)
            if kx in keys:
                continue
            chosen.append(x)
            keys.append(kx)
            yield from rec(i + 1)
            chosen.pop()
            keys.pop()

    return rec(0)


def theorem12_witness(inst: FieldInstance, params: SumsetParams, budget: int | Budget | None = None) -> Witness:
    """First ``(a, b)`` with distinct ``a_i b_i c_i``, ``P_i(a_i)``, ``Q_i(b_i)`` and sums outside S, T."""
    validate_field_instance(inst, params)
    budget = budget if isinstance(budget, Budget) else Budget(budget)
    ring = inst.ring
    n = params.n
    a_iter = _distinct_tuples(inst.A, lambda i, x: poly_eval(inst.P[i], x, ring), budget,
                              lambda t: ring(sum(t)) not in inst.S)
    for a in a_iter:
        ac = [ring(x * y) for x, y in zip(a, inst.c)]
        products: list[int] = []
        qvals: list[int] = []
        chosen: list[int] = []

        def rec(i):
            if i == n:
                return ring(sum(chosen)) not in inst.T
            for y in inst.B[i]:
                budget.tick()
                qv = poly_eval(inst.Q[i], y, ring)
                pr = ring(ac[i] * y)
                if qv in qvals or pr in products:
                    continue
                qvals.append(qv)
                products.append(pr)
                chosen.append(y)
                if rec(i + 1):
                    return True
                qvals.pop()
                products.pop()
                chosen.pop()
            return False

        if rec(0):
            return Witness(tuple(a), tuple(chosen))
    raise InconsistencyError("no witness found although every hypothesis holds")


def check_theorem12_witness(w: Witness, inst: FieldInstance) -> dict[str, bool]:
    """Independent clause-by-clause recheck of a field witness."""
    ring = inst.ring
    n = inst.n
    a, b = [ring(x) for x in w.a], [ring(y) for y in w.b]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return {
        "a_in_A": len(a) == n and all(x in s for x, s in zip(a, inst.A)),
        "b_in_B": len(b) == n and all(y in s for y, s in zip(b, inst.B)),
        "products_distinct": all(ring(a[i] * b[i] * inst.c[i]) != ring(a[j] * b[j] * inst.c[j]) for i, j in pairs),
        "P_distinct": all(poly_eval(inst.P[i], a[i], ring) != poly_eval(inst.P[j], a[j], ring) for i, j in pairs),
        "Q_distinct": all(poly_eval(inst.Q[i], b[i], ring) != poly_eval(inst.Q[j], b[j], ring) for i, j in pairs),
        "sum_a_not_in_S": ring(sum(a)) not in inst.S,
        "sum_b_not_in_T": ring(sum(b)) not in inst.T,
    }


def _univariate_in(coeffs, var: int, nv: int, ring) -> SparsePoly:
    terms = {}
    for d, a in enumerate(coeffs):
        e = [0] * nv
        e[var] = d
        terms[tuple(e)] = a
    return SparsePoly(terms, nv, ring)


def theorem12_polynomial(inst: FieldInstance, params: SumsetParams) -> SparsePoly:
    """The fully expanded certificate polynomial over GF(p) in x_1..x_n, y_1..y_n.

    Its nonvanishing at a grid point is equivalent to the witness conditions
    together with ``sum a != 0`` when ``|S| < K`` (and likewise for b), since
    the padding factor ``(sum x)^(K-|S|)`` vanishes there.
    """
    ring = inst.ring
    n = params.n
    nv = 2 * n
    xs, ys = list(range(n)), list(range(n, nv))
    factors = []
    for i in range(n):
        for j in range(i + 1, n):
            factors.append(_univariate_in(inst.P[j], xs[j], nv, ring) - _univariate_in(inst.P[i], xs[i], nv, ring))
            factors.append(_univariate_in(inst.Q[j], ys[j], nv, ring) - _univariate_in(inst.Q[i], ys[i], nv, ring))
    factors += _cxy_factors(n, nv, inst.c, ring, xs, ys, None)
    sx = SparsePoly.linear_form([1] * n + [0] * n, ring)
    sy = SparsePoly.linear_form([0] * n + [1] * n, ring)
    factors += [sx] * (params.K - len(inst.S)) + [sx - a for a in sorted(inst.S)]
    factors += [sy] * (params.L - len(inst.T)) + [sy - b for b in sorted(inst.T)]
    out = SparsePoly.one(nv, ring)
    for f in factors:
        out = mul_capped(out, f, None)
    return out


def theorem12_grid(inst: FieldInstance, params: SumsetParams) -> GridFamily:
    return GridFamily(list(inst.A) + list(inst.B), [params.k - 1] * params.n + [params.l - 1] * params.n)


# -- group witness ------------------------------------------------------------

@dataclass(frozen=True)
class GroupInstance:
    group: GroupSpec
    A: tuple
    B: tuple
    c: tuple
    S: frozenset = frozenset()  # forbidden n-element sets {a_1..a_n}
    T: frozenset = frozenset()

    @classmethod
    def build(cls, group, A, B, c, S=(), T=()) -> "GroupInstance":
        return cls(group, tuple(tuple(s) for s in A), tuple(tuple(s) for s in B), tuple(c),
                   frozenset(frozenset(x) for x in S), frozenset(frozenset(x) for x in T))


def validate_group_instance(inst: GroupInstance, params: SumsetParams) -> None:
    g = inst.group
    if not getattr(g, "has_cyclic_torsion", False):
        raise PreconditionError("the group must have cyclic torsion")
    n = params.n
    for a in [x for s in inst.A + inst.B for x in s] + list(inst.c):
        g.check(a)
    if len(inst.A) != n or len(inst.B) != n or len(inst.c) != n:
        raise PreconditionError("need n sets A_i, B_i and n elements c_i")
    for i, s in enumerate(inst.A):
        if len(s) != params.k or len(set(s)) != params.k:
            raise PreconditionError(f"|A_{i + 1}| must be k = {params.k}")
    for i, s in enumerate(inst.B):
        if len(s) != params.l or len(set(s)) != params.l:
            raise PreconditionError(f"|B_{i + 1}| must be l = {params.l}")
    if len(set(inst.c)) != n:
        raise PreconditionError("c_1..c_n must be distinct")
    for name, fam, bound in (("S", inst.S, params.K), ("T", inst.T, params.L)):
        if any(len(x) != n for x in fam):
            raise PreconditionError(f"members of {name} must be {n}-element sets")
        if len(fam) > bound:
            raise PreconditionError(f"|{name}| = {len(fam)} exceeds {bound}")


def theorem13_witness(inst: GroupInstance, params: SumsetParams, budget: int | Budget | None = None) -> Witness:
    """First ``(a, b)`` with distinct ``a_i+b_i+c_i``, ``m a_i``, ``h b_i`` and ``{a_i} not in S``, ``{b_i} not in T``."""
    validate_group_instance(inst, params)
    budget = budget if isinstance(budget, Budget) else Budget(budget)
    g = inst.group
    n = params.n
    a_iter = _distinct_tuples(inst.A, lambda i, x: g.scale(params.m, x), budget,
                              lambda t: frozenset(t) not in inst.S)
    for a in a_iter:
        ac = [g.add(x, y) for x, y in zip(a, inst.c)]
        b_iter = _distinct_tuples(inst.B, lambda i, y: g.scale(params.h, y), budget,
                                  lambda t: frozenset(t) not in inst.T
                                  and len({g.add(u, v) for u, v in zip(ac, t)}) == n)
        for b in b_iter:
            return Witness(tuple(a), tuple(b))
    raise InconsistencyError("no group witness found although every hypothesis holds")


def check_theorem13_witness(w: Witness, inst: GroupInstance, params: SumsetParams) -> dict[str, bool]:
    g = inst.group
    n = params.n
    a, b = w.a, w.b
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    tot = [g.add(g.add(a[i], b[i]), inst.c[i]) for i in range(n)]
    return {
        "a_in_A": all(x in s for x, s in zip(a, inst.A)),
        "b_in_B": all(y in s for y, s in zip(b, inst.B)),
        "sums_distinct": all(tot[i] != tot[j] for i, j in pairs),
        "m_multiples_distinct": all(g.scale(params.m, a[i]) != g.scale(params.m, a[j]) for i, j in pairs),
        "h_multiples_distinct": all(g.scale(params.h, b[i]) != g.scale(params.h, b[j]) for i, j in pairs),
        "a_set_not_in_S": frozenset(a) not in inst.S,
        "b_set_not_in_T": frozenset(b) not in inst.T,
    }


# -- sumset size bounds -------------------------------------------------------

@dataclass
class SumsetReport:
    sumset: list[int]
    bound: int
    tuples_checked: int
    extra: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.sumset)

    @property
    def bound_met(self) -> bool:
        return self.size >= self.bound

    def as_dict(self) -> dict:
        return {"sumset": self.sumset, "size": self.size, "bound": self.bound,
                "bound_met": self.bound_met, "tuples_checked": self.tuples_checked, **self.extra}


def power_permanent(values: Sequence[int], ring: CoefficientRing) -> int:
    """``per(v_j^(i-1))`` for the given column values."""
    n = len(values)
    return permanent([[pow(v, i, ring.modulus) if ring.modulus else v ** i for v in values] for i in range(n)],
                     ring)


def theorem51_sumset(A_sets: Sequence[Sequence[int]], P_polys: Sequence[Sequence[int]], m: int, p: int) -> SumsetReport:
    """Sums of SDRs of the A_i whose permanent ``per(P_j(a_j)^(i-1))`` is nonzero.

    Bound: ``(k-1)n - (m+1) C(n,2) + 1``.
    """
    ring = IntegersModP(p)
    n = len(A_sets)
    if n < 1:
        raise PreconditionError("need at least one set")
    A = [tuple(ring(a) for a in s) for s in A_sets]
    k = len(A[0])
    if any(len(s) != k or len(set(s)) != k for s in A):
        raise PreconditionError(f"every A_i must have k = {k} distinct elements")
    if len(P_polys) != n:
        raise PreconditionError(f"need {n} polynomials")
    if k - 1 < m * (n - 1):
        raise PreconditionError(f"need k-1 >= m(n-1): k={k}, m={m}, n={n}")
    K = (k - 1) * n - (m + 1) * math.comb(n, 2)
    if p <= K:
        raise PreconditionError(f"characteristic {p} must exceed (k-1)n-(m+1)C(n,2) = {K}")
    lead = []
    for i, f in enumerate(P_polys):
        if _degree(f, ring) > m:
            raise PreconditionError(f"P_{i + 1} has degree above m = {m}")
        lead.append(ring(f[m]) if len(f) > m else 0)
    if len(set(lead)) != n:
        raise PreconditionError(f"coefficients of x^{m} must be distinct, got {lead}")
    sums: set[int] = set()
    checked = 0
    for t in product(*A):
        if len(set(t)) != n:
            continue
        s = ring(sum(t))
        if s in sums:
            continue
        checked += 1
        if power_permanent([poly_eval(P_polys[j], t[j], ring) for j in range(n)], ring):
            sums.add(s)
    return SumsetReport(sorted(sums), K + 1, checked, {"k": k, "m": m, "n": n, "p": p})


def corollary51_sdr(A_sets: Sequence[Sequence[int]], b: Sequence[int], p: int) -> tuple[int, ...]:
    """First SDR ``a`` of the A_i with ``per((a_j b_j)^(i-1)) != 0``."""
    ring = IntegersModP(p)
    n = len(b)
    bs = [ring(x) for x in b]
    if len(set(bs)) != n:
        raise PreconditionError(f"b must have {n} distinct elements, got {b}")
    A = [tuple(ring(a) for a in s) for s in A_sets]
    if len(A) != n or any(len(s) != n or len(set(s)) != n for s in A):
        raise PreconditionError(f"need {n} sets of exactly {n} distinct elements")
    budget = Budget()
    for a in _distinct_tuples(A, lambda i, x: x, budget):
        if power_permanent([ring(x * y) for x, y in zip(a, bs)], ring):
            return a
    raise InconsistencyError("no SDR with nonzero permanent although b is a set")


def theorem14_check(A_sets: Sequence[Sequence[int]], B_sets: Sequence[Sequence[int]], c: Sequence[int],
                    forbidden: dict[tuple[int, int], Sequence[int]] | None, m: int, p: int) -> SumsetReport:
    """Sumset of tuples with ``a_i - a_j`` outside ``forbidden[i, j]`` and distinct ``a_i b_i c_i``.

    ``b`` is the SDR of the B_i chosen by :func:`corollary51_sdr` against
    ``c``.  Pairs are 0-based ``(i, j)`` with ``i < j``.  Bound:
    ``(k-1-m(n-1))n + 1``.
    """
    ring = IntegersModP(p)
    n = len(c)
    A = [tuple(ring(a) for a in s) for s in A_sets]
    if len(A) != n or len(B_sets) != n:
        raise PreconditionError(f"need {n} sets A_i and B_i")
    k = len(A[0])
    if any(len(s) != k or len(set(s)) != k for s in A):
        raise PreconditionError(f"every A_i must have k = {k} distinct elements")
    if k - 1 < m * (n - 1):
        raise PreconditionError(f"need k-1 >= m(n-1): k={k}, m={m}, n={n}")
    N = (k - 1 - m * (n - 1)) * n
    if p <= max(m * n, N):
        raise PreconditionError(f"characteristic {p} must exceed max(mn, N) = {max(m * n, N)}")
    forb = {(i, j): set() for i in range(n) for j in range(i + 1, n)}
    for (i, j), vals in (forbidden or {}).items():
        if not 0 <= i < j < n:
            raise PreconditionError(f"forbidden-difference key {(i, j)} is not a pair i < j")
        forb[(i, j)] = {ring(v) for v in vals}
        if len(forb[(i, j)]) >= 2 * m:
            raise PreconditionError(f"|S_{i + 1}{j + 1}| = {len(forb[(i, j)])} is not below 2m = {2 * m}")
    b = corollary51_sdr(B_sets, c, p)
    bc = [ring(x * y) for x, y in zip(b, c)]
    sums: set[int] = set()
    checked = 0
    for t in product(*A):
        s = ring(sum(t))
        if s in sums:
            continue
        checked += 1
        ok = True
        for (i, j), bad in forb.items():
            if ring(t[i] - t[j]) in bad or ring(t[i] * bc[i]) == ring(t[j] * bc[j]):
                ok = False
                break
        if ok:
            sums.add(s)
    return SumsetReport(sorted(sums), N + 1, checked,
                        {"b": list(b), "k": k, "m": m, "n": n, "p": p,
                         "forbidden": {f"{i},{j}": sorted(v) for (i, j), v in forb.items()}})


# -- power-difference identity --------------------------------------------------

@dataclass
class Lemma51Report:
    lhs: SparsePoly
    rhs: SparsePoly
    constant: int
    equal: bool

    def as_dict(self) -> dict:
        names = [f"y{i + 1}" for i in range(self.lhs.nvars)]
        return {"lhs": format_poly(self.lhs, names), "rhs": format_poly(self.rhs, names),
                "constant": self.constant, "equal": self.equal}


def lemma51_constant(k: int, m: int, n: int) -> int:
    N = (k - 1 - m * (n - 1)) * n
    q = Fraction(math.factorial(m * n) * math.factorial(N), math.factorial(m) ** n * math.factorial(n))
    for r in range(n):
        q *= Fraction(math.factorial(r * m), math.factorial(k - 1 - r * m))
    sgn = -1 if (m * math.comb(n, 2)) % 2 else 1
    return sgn * _as_integer(q, "factorial ratio")


LEMMA51_LIMITS = {"n": 3, "m": 2, "k": 5}


def lemma51_check(k: int, m: int, n: int, y: Sequence[int] | None = None) -> Lemma51Report:
    """``[x^{k-1}] prod_{i<j} (x_j-x_i)^{2m-1} (x_j y_j - x_i y_i) (sum x)^N`` against
    the factorial constant times ``per(y_j^(i-1))``, as polynomials in y (or at ``y``)."""
    if min(k, m, n) < 1 or k - 1 < m * (n - 1):
        raise PreconditionError(f"need positive k, m, n with k-1 >= m(n-1); got k={k}, m={m}, n={n}")
    if n > LEMMA51_LIMITS["n"] or m > LEMMA51_LIMITS["m"] or k > LEMMA51_LIMITS["k"] + m * (n - 1):
        raise PreconditionError(f"outside desk-scale limits {LEMMA51_LIMITS}")
    N = (k - 1 - m * (n - 1)) * n
    nv = 2 * n
    xs, ys = list(range(n)), list(range(n, nv))
    cap = [k - 1] * n + [None] * n
    factors = []
    for i in range(n):
        for j in range(i + 1, n):
            ex_j, ex_i = [0] * nv, [0] * nv
            ex_j[j], ex_i[i] = 1, 1
            diff = SparsePoly({tuple(ex_j): 1, tuple(ex_i): -1}, nv)
            factors += [diff] * (2 * m - 1)
            ex_j[n + j], ex_i[n + i] = 1, 1
            factors.append(SparsePoly({tuple(ex_j): 1, tuple(ex_i): -1}, nv))
    f = SparsePoly.one(nv)
    for fac in factors:
        f = mul_capped(f, fac, cap)
    lhs = _project(extract(f, {i: k - 1 for i in xs}, [([1] * n + [0] * n, N)]), ys)
    const = lemma51_constant(k, m, n)
    yv = SparsePoly.gens(n)
    rhs = permanent([[v ** i for v in yv] for i in range(n)]).scale(const)
    if y is not None:
        point = dict(enumerate(int(v) for v in y))
        lhs, rhs = lhs.substitute(point), rhs.substitute(point)
    return Lemma51Report(lhs, rhs, const, lhs == rhs)
