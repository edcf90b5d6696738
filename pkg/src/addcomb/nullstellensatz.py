"""Coefficient certificates and grid-witness search for the Combinatorial Nullstellensatz.

If ``deg f == k_1 + ... + k_n``, the coefficient of ``x_1^k_1 ... x_n^k_n`` in
``f`` is nonzero and ``|A_i| > k_i``, then ``f`` does not vanish on the grid
``A_1 x ... x A_n``.  :func:`certify` checks the hypotheses, extracts the
coefficient and then finds the lexicographically first nonvanishing point.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .errors import Budget, InconsistencyError, PreconditionError
from .polyring import SparsePoly


class DegreeTooLarge(PreconditionError):
    pass


class GridTooSmall(PreconditionError):
    pass


@dataclass(frozen=True)
class GridFamily:
    sets: tuple[tuple[int, ...], ...]
    target_degrees: tuple[int, ...]

    def __init__(self, sets: Sequence[Sequence[int]], target_degrees: Sequence[int] | None = None):
        sets = tuple(tuple(int(a) for a in s) for s in sets)
        if target_degrees is None:
            target_degrees = tuple(len(s) - 1 for s in sets)
        target_degrees = tuple(int(k) for k in target_degrees)
        if len(target_degrees) != len(sets):
            raise PreconditionError(f"{len(sets)} sets but {len(target_degrees)} target degrees")
        for i, s in enumerate(sets):
            if len(set(s)) != len(s):
                raise PreconditionError(f"grid set {i} has repeated elements: {s}")
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "target_degrees", target_degrees)

    @property
    def n(self) -> int:
        return len(self.sets)

    def reduced(self, modulus: int | None) -> "GridFamily":
        if modulus is None:
            return self
        return GridFamily([[a % modulus for a in s] for s in self.sets], self.target_degrees)

    def check_sizes(self):
        for i, (s, k) in enumerate(zip(self.sets, self.target_degrees)):
            if len(s) <= k:
                raise GridTooSmall(f"|A_{i + 1}| = {len(s)} is not larger than k_{i + 1} = {k}")


@dataclass(frozen=True)
class Certificate:
    coefficient: int
    total_degree: int
    degree_matches: bool
    witness: tuple[int, ...] | None
    evaluations: int = 0

    @property
    def claims_nonzero(self) -> bool:
        return bool(self.coefficient) and self.degree_matches

    def as_dict(self) -> dict:
        return {"coefficient": self.coefficient, "total_degree": self.total_degree,
                "degree_matches": self.degree_matches, "claims_nonzero": self.claims_nonzero,
                "witness": None if self.witness is None else list(self.witness),
                "evaluations": self.evaluations}


def witness_search(f: SparsePoly, grid: GridFamily, budget: int | Budget | None = None) -> tuple[int, ...] | None:
    """First grid point (lexicographic by position in each set) where ``f`` is nonzero.

    Returns None when every point was checked and ``f`` vanishes on all of
    them; raises :class:`~addcomb.errors.BudgetExceeded` when the evaluation
    cap runs out first.
    """
    if grid.n != f.nvars:
        raise PreconditionError(f"grid has {grid.n} sets, polynomial has {f.nvars} variables")
    if not isinstance(budget, Budget):
        budget = Budget(budget)
    grid = grid.reduced(f.ring.modulus)
    for point in product(*grid.sets):
        budget.tick()
        if f.evaluate(point):
            return point
    return None


def certify(f: SparsePoly, grid: GridFamily, budget: int | None = None) -> Certificate:
    if grid.n != f.nvars:
        raise PreconditionError(f"grid has {grid.n} sets, polynomial has {f.nvars} variables")
    grid.check_sizes()
    target = sum(grid.target_degrees)
    deg = f.total_degree()
    if deg > target:
        raise DegreeTooLarge(f"deg f = {deg} exceeds k_1 + ... + k_n = {target}")
    c = f.coeff(grid.target_degrees)
    if not c or deg != target:
        return Certificate(c, deg, deg == target, None)
    counter = Budget(budget)
    w = witness_search(f, grid, counter)
    if w is None:
        raise InconsistencyError(
            f"nonzero coefficient {c} at {grid.target_degrees} but f vanishes on the whole grid")
    if not f.evaluate(w):
        raise InconsistencyError(f"witness {w} does not re-evaluate to a nonzero value")
    return Certificate(c, deg, True, w, counter.used)
