"""Distinct-column-sum orderings of m subsets of an abelian group.

Given sets A_1..A_m of size n, find listings a_i1..a_in of each A_i so the
column sums sum_i a_ij are pairwise distinct.  For odd m and cyclic torsion
such listings always exist.  The solver fixes the last row in input order
(reordering columns shows this loses nothing) and backtracks over
permutations of the other rows, pruning on column collisions while the final
free row is filled in.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from itertools import permutations
from typing import Any, Sequence

from .errors import Budget, InconsistencyError, PreconditionError
from .polyring import INTEGERS, CoefficientRing


@dataclass(frozen=True)
class SubsetFamily:
    group: Any  # GroupSpec, TorsionProduct or anything with add/neg/zero
    sets: tuple[tuple, ...]

    def __init__(self, group, sets: Sequence[Sequence]):
        sets = tuple(tuple(group.check(a) if hasattr(group, "check") else a for a in s) for s in sets)
        if not sets:
            raise PreconditionError("need at least one set")
        n = len(sets[0])
        if n < 1:
            raise PreconditionError("sets must be nonempty")
        for i, s in enumerate(sets):
            if len(s) != n:
                raise PreconditionError(f"ragged family: A_1 has {n} elements, A_{i + 1} has {len(s)}")
            if len(set(s)) != n:
                raise PreconditionError(f"A_{i + 1} has repeated elements")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "sets", sets)

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def n(self) -> int:
        return len(self.sets[0])


@dataclass(frozen=True)
class OrderingSolution:
    table: tuple[tuple, ...]
    column_sums: tuple

    @property
    def m(self) -> int:
        return len(self.table)

    @property
    def n(self) -> int:
        return len(self.table[0]) if self.table else 0


def _column_sums(group, table):
    n = len(table[0])
    return tuple(reduce(group.add, (row[j] for row in table), group.zero) for j in range(n))


def _guaranteed(fam: SubsetFamily) -> bool:
    return fam.m % 2 == 1 and bool(getattr(fam.group, "has_cyclic_torsion", False))


def find_ordering(fam: SubsetFamily, budget: int | Budget | None = None,
                  guarantee: bool = True) -> OrderingSolution | None:
    """Lexicographically first solution (rows compared in order, elements by value).

    Returns None once the whole space is exhausted.  When m is odd and the
    group has cyclic torsion that cannot happen, and
    :class:`~addcomb.errors.InconsistencyError` is raised instead (set
    ``guarantee=False`` to get the raw answer).
    """
    budget = budget if isinstance(budget, Budget) else Budget(budget)
    g = fam.group
    m, n = fam.m, fam.n
    last = fam.sets[-1]
    free_rows = [sorted(s) for s in fam.sets[:-1]]

    def fill_last(r, partial):
        # Column-by-column assignment of the final free row with collision pruning.
        row = free_rows[r]
        used = [False] * n
        chosen = []
        sums = set()

        def rec(j):
            if j == n:
                return True
            for t in range(n):
                if used[t]:
                    continue
                budget.tick()
                s = g.add(partial[j], row[t])
                if s in sums:
                    continue
                used[t] = True
                sums.add(s)
                chosen.append(row[t])
                if rec(j + 1):
                    return True
                chosen.pop()
                sums.discard(s)
                used[t] = False
            return False

        return tuple(chosen) if rec(0) else None

    def rows_from(r, partial):
        if r == m - 2:
            tail = fill_last(r, partial)
            return None if tail is None else [tail]
        for perm in permutations(free_rows[r]):
            budget.tick()
            rest = rows_from(r + 1, [g.add(p, x) for p, x in zip(partial, perm)])
            if rest is not None:
                return [perm] + rest
        return None

    if m == 1:
        found = []
    else:
        found = rows_from(0, list(last))
    if found is None:
        if guarantee and _guaranteed(fam):
            raise InconsistencyError(f"no ordering found for an odd family over {g}")
        return None
    table = tuple(tuple(r) for r in found) + (tuple(last),)
    return OrderingSolution(table, _column_sums(g, table))


def verify_ordering(sol: OrderingSolution, fam: SubsetFamily) -> bool:
    """Recompute everything from the table; stored column sums are ignored."""
    if sol.m != fam.m or any(len(row) != fam.n for row in sol.table):
        raise ValueError(f"solution shape {sol.m}x{sol.n} does not match family {fam.m}x{fam.n}")
    for row, s in zip(sol.table, fam.sets):
        if Counter(row) != Counter(s):
            return False
    sums = _column_sums(fam.group, sol.table)
    return len(set(sums)) == fam.n


def complete_to_zero_sum(sol: OrderingSolution, fam: SubsetFamily) -> tuple:
    """The row that makes every column sum vanish: the negated column sums."""
    if not verify_ordering(sol, fam):
        raise PreconditionError("not a valid ordering for this family")
    g = fam.group
    return tuple(g.neg(s) for s in _column_sums(g, sol.table))


def find_ordering_even(fam: SubsetFamily, budget: int | Budget | None = None,
                       strict: bool = True) -> OrderingSolution | None:
    """Even m with every element of the last set of odd order.

    First orders A_1..A_{m-1} (an odd family), then searches a numbering of
    A_m against those column sums.  If that prefix admits no numbering, falls
    back to a full search.  ``strict=False`` skips the precondition checks so
    the parity obstructions can be probed; the answer may then be None.
    """
    budget = budget if isinstance(budget, Budget) else Budget(budget)
    g = fam.group
    if strict:
        if fam.m % 2:
            raise PreconditionError(f"m = {fam.m} is odd; use find_ordering")
        bad = [a for a in fam.sets[-1] if math.isinf(g.element_order(a)) or g.element_order(a) % 2 == 0]
        if bad:
            raise PreconditionError(f"elements of even or infinite order in the last set: {[str(a) for a in bad]}")
    if fam.m == 1:
        return find_ordering(fam, budget, guarantee=False)
    prefix = SubsetFamily(g, fam.sets[:-1])
    head = find_ordering(prefix, budget, guarantee=strict)
    if head is not None:
        for perm in permutations(sorted(fam.sets[-1])):
            budget.tick()
            sums = [g.add(s, a) for s, a in zip(head.column_sums, perm)]
            if len(set(sums)) == fam.n:
                table = head.table + (tuple(perm),)
                return OrderingSolution(table, _column_sums(g, table))
    sol = find_ordering(fam, budget, guarantee=False)
    if sol is None and strict and getattr(g, "has_cyclic_torsion", False):
        raise InconsistencyError("no ordering found although the last set has only odd-order elements")
    return sol


# -- multiplicative variants --------------------------------------------------

class Multiplicative:
    """The multiplicative monoid of Z/qZ (or Z) viewed through the solver's ``add``."""

    has_cyclic_torsion = False

    def __init__(self, modulus: int | None = None):
        self.modulus = modulus

    @property
    def zero(self) -> int:
        return 1

    def add(self, a: int, b: int) -> int:
        return a * b if self.modulus is None else a * b % self.modulus


def is_regular(subset: Sequence[int], modulus: int | None = None) -> bool:
    """All differences of distinct elements are units (of Z/qZ, or of Z)."""
    for i, a in enumerate(subset):
        for b in subset[i + 1:]:
            d = a - b
            if modulus is None:
                if abs(d) != 1:
                    return False
            elif math.gcd(d % modulus, modulus) != 1:
                return False
    return True


def find_product_ordering(sets: Sequence[Sequence[int]], modulus: int | None = None,
                          budget: int | None = None) -> OrderingSolution | None:
    """Listings of regular subsets so the column products are distinct.

    Existence is guaranteed for odd m when every set is regular.
    """
    if modulus is not None:
        sets = [[a % modulus for a in s] for s in sets]
    fam = SubsetFamily(Multiplicative(modulus), sets)
    sol = find_ordering(fam, budget, guarantee=False)
    if sol is None and fam.m % 2 and all(is_regular(s, modulus) for s in fam.sets):
        raise InconsistencyError("regular odd family without a distinct-product ordering")
    return sol


def find_sdr_product_ordering(A_sets: Sequence[Sequence[int]], B_sets: Sequence[Sequence[int]],
                              c: Sequence[int], ring: CoefficientRing = INTEGERS,
                              budget: int | Budget | None = None) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """SDRs ``a`` of the A_i and ``b`` of the B_i with ``a_i b_i c_i`` pairwise distinct.

    Lexicographically first pair by position in the given sets.  A solution
    always exists for distinct ``c``; exhausting the search raises
    :class:`~addcomb.errors.InconsistencyError`.
    """
    budget = budget if isinstance(budget, Budget) else Budget(budget)
    n = len(c)
    A = [[ring(a) for a in s] for s in A_sets]
    B = [[ring(b) for b in s] for s in B_sets]
    c = [ring(x) for x in c]
    if len(A) != n or len(B) != n:
        raise PreconditionError(f"need {n} A-sets and {n} B-sets")
    for name, fam in (("A", A), ("B", B)):
        for i, s in enumerate(fam):
            if len(s) != n or len(set(s)) != n:
                raise PreconditionError(f"{name}_{i + 1} must have exactly {n} distinct elements")
    if len(set(c)) != n:
        raise PreconditionError(f"c must be pairwise distinct, got {c}")

    def sdrs(fam):
        chosen: list[int] = []

        def rec(i):
            if i == n:
                yield tuple(chosen)
                return
            for x in fam[i]:
                budget.tick()
                if x in chosen:
                    continue
                chosen.append(x)
                yield from rec(i + 1)
                chosen.pop()

        return rec(0)

    for a in sdrs(A):
        ac = [ring(x * y) for x, y in zip(a, c)]
        products: list[int] = []

        def rec_b(i, used):
            if i == n:
                return ()
            for y in B[i]:
                budget.tick()
                if y in used:
                    continue
                p = ring(ac[i] * y)
                if p in products:
                    continue
                products.append(p)
                rest = rec_b(i + 1, used | {y})
                if rest is not None:
                    return (y,) + rest
                products.pop()
            return None

        b = rec_b(0, frozenset())
        if b is not None:
            return a, b
    raise InconsistencyError("no SDR pair with distinct products; distinct c guarantees one")


def verify_sdr_products(a, b, A_sets, B_sets, c, ring: CoefficientRing = INTEGERS) -> bool:
    n = len(c)
    if len(a) != n or len(b) != n:
        return False
    if any(ring(x) not in {ring(v) for v in s} for x, s in zip(a, A_sets)):
        return False
    if any(ring(y) not in {ring(v) for v in s} for y, s in zip(b, B_sets)):
        return False
    if len({ring(x) for x in a}) != n or len({ring(y) for y in b}) != n:
        return False
    return len({ring(x * y * z) for x, y, z in zip(a, b, c)}) == n
