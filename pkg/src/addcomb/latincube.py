"""Latin cubes, Cayley addition cubes of Z/N and Latin-transversal search.

A *line* of an n x n x n cube fixes two coordinates.  Two cells share a line
exactly when they agree in at least two coordinates, so a transversal is a
set of n cells that pairwise agree in at most one coordinate.  Cells may
share a single coordinate; the stricter "permutation-aligned" shape (no
shared coordinate at all) is available through ``aligned=True``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .errors import Budget, InconsistencyError, PreconditionError

Cell = tuple[int, int, int]


def _lines_ok(entries, n) -> bool:
    for a, b in product(range(n), repeat=2):
        if len({entries[a][b][c] for c in range(n)}) != n:
            return False
        if len({entries[a][c][b] for c in range(n)}) != n:
            return False
        if len({entries[c][a][b] for c in range(n)}) != n:
            return False
    return True


@dataclass(frozen=True)
class Cube:
    entries: tuple[tuple[tuple, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if any(len(plane) != n or any(len(row) != n for row in plane) for plane in self.entries):
            raise PreconditionError("cube must be n x n x n")

    @classmethod
    def from_nested(cls, nested) -> "Cube":
        return cls(tuple(tuple(tuple(row) for row in plane) for plane in nested))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, cell: Cell):
        i, j, k = cell
        return self.entries[i][j][k]

    @property
    def latin(self) -> bool:
        """No symbol repeats along any line."""
        return _lines_ok(self.entries, self.n)

    def symbols(self) -> set:
        return {v for plane in self.entries for row in plane for v in row}

    def to_nested(self) -> list:
        return [[list(row) for row in plane] for plane in self.entries]


def cayley_cube(N: int) -> Cube:
    """Entry ``(i, j, k)`` is ``(i + j + k) mod N``."""
    if N < 1:
        raise PreconditionError(f"N must be positive, got {N}")
    return Cube(tuple(tuple(tuple((i + j + k) % N for k in range(N)) for j in range(N)) for i in range(N)))


def subcube(c: Cube, A: Sequence[int], B: Sequence[int], C: Sequence[int]) -> Cube:
    """Restriction to ``A x B x C`` (index sets are used in increasing order)."""
    idx = []
    for name, s in (("A", A), ("B", B), ("C", C)):
        s = sorted(int(v) for v in s)
        if len(set(s)) != len(s):
            raise PreconditionError(f"index set {name} has repeats")
        if s and (s[0] < 0 or s[-1] >= c.n):
            raise PreconditionError(f"index set {name} out of range for a cube of side {c.n}")
        idx.append(s)
    if not len(idx[0]) == len(idx[1]) == len(idx[2]):
        raise PreconditionError(f"index sets have sizes {[len(s) for s in idx]}")
    if not idx[0]:
        raise PreconditionError("index sets must be nonempty")
    sub = Cube(tuple(tuple(tuple(c.entries[i][j][k] for k in idx[2]) for j in idx[1]) for i in idx[0]))
    # Restricting lines of a Latin cube can only remove symbols.
    if c.latin and not sub.latin:
        raise InconsistencyError("subcube of a Latin cube has a repeated symbol on a line")
    return sub


@dataclass(frozen=True)
class Transversal:
    cells: tuple[Cell, ...]
    values: tuple

    def as_dict(self) -> dict:
        return {"cells": [list(c) for c in self.cells], "values": list(self.values)}


def find_latin_transversal(c: Cube, budget: int | Budget | None = None,
                           aligned: bool = False) -> Transversal | None:
    """Lexicographically first Latin transversal (cells listed in increasing order).

    Cells are tried in increasing lexicographic order, so the first complete
    set found is the lexicographically least one.  Occupancy of the three
    coordinate-pair planes and of the symbols is tracked in integer bitsets.
    With ``aligned=True`` the cells must also pairwise differ in every
    coordinate.  Returns None after an exhaustive search.
    """
    budget = budget if isinstance(budget, Budget) else Budget(budget)
    n = c.n
    sym = {v: t for t, v in enumerate(sorted(c.symbols(), key=repr))}
    cells = [(i, j, k) for i in range(n) for j in range(n) for k in range(n)]
    code = [sym[c.entries[i][j][k]] for (i, j, k) in cells]
    chosen: list[int] = []

    # Bit (a*n + b) in ij/ik/jk marks an occupied line; with ``aligned`` the
    # single-coordinate masks are used instead.
    def rec(start, ij, ik, jk, vals, xs, ys, zs):
        if len(chosen) == n:
            return True
        # Every remaining pick must come after ``start``; stop if too few cells remain.
        for pos in range(start, len(cells) - (n - len(chosen) - 1)):
            i, j, k = cells[pos]
            if aligned:
                if not len(chosen) and i != 0:
                    # The aligned transversal uses every first coordinate once; cell 0 has i = 0.
                    return False
                if xs >> i & 1 or ys >> j & 1 or zs >> k & 1:
                    continue
            b_ij, b_ik, b_jk = 1 << (i * n + j), 1 << (i * n + k), 1 << (j * n + k)
            if ij & b_ij or ik & b_ik or jk & b_jk:
                continue
            v = 1 << code[pos]
            if vals & v:
                continue
            budget.tick()
            chosen.append(pos)
            if rec(pos + 1, ij | b_ij, ik | b_ik, jk | b_jk, vals | v,
                   xs | 1 << i, ys | 1 << j, zs | 1 << k):
                return True
            chosen.pop()
        return False

    if not rec(0, 0, 0, 0, 0, 0, 0, 0):
        return None
    picked = tuple(cells[p] for p in chosen)
    return Transversal(picked, tuple(c[cell] for cell in picked))


@dataclass(frozen=True)
class TransversalCheck:
    is_transversal: bool
    is_latin: bool
    reason: str = ""

    def __bool__(self):
        return self.is_transversal and self.is_latin


def verify_transversal(t: Transversal, c: Cube) -> TransversalCheck:
    """Recheck every cell and stored value against the cube.

    Truthiness is "Latin transversal"; the fields tell apart a plain
    transversal with a repeated symbol from a non-transversal.
    """
    n = c.n
    cells = [tuple(cell) for cell in t.cells]
    for cell in cells:
        if len(cell) != 3 or any(not 0 <= x < n for x in cell):
            raise PreconditionError(f"cell {cell} is outside the cube of side {n}")
    if len(cells) != n:
        return TransversalCheck(False, False, f"{len(cells)} cells, expected {n}")
    for a, b in combinations(cells, 2):
        if sum(x == y for x, y in zip(a, b)) >= 2:
            return TransversalCheck(False, False, f"cells {a} and {b} share a line")
    values = [c[cell] for cell in cells]
    if tuple(t.values) != tuple(values):
        return TransversalCheck(True, False, "stored values disagree with the cube")
    if len(set(values)) != n:
        return TransversalCheck(True, False, "repeated symbol")
    return TransversalCheck(True, True)


def isotope(c: Cube, row_perm: Sequence[int], col_perm: Sequence[int], file_perm: Sequence[int],
            symbol_map: dict) -> Cube:
    """Entry ``(i, j, k)`` becomes ``symbol_map[c[row_perm[i], col_perm[j], file_perm[k]]]``."""
    n = c.n
    return Cube(tuple(tuple(tuple(symbol_map[c.entries[row_perm[i]][col_perm[j]][file_perm[k]]]
                                  for k in range(n)) for j in range(n)) for i in range(n)))


def perturbed_latin_cube(n: int, seed: int) -> Cube:
    """Random isotope of the Cayley cube of Z/n.

    Axes and symbols are relabelled by independent uniform permutations, so
    the result is Latin.  This is NOT a uniform sampler of Latin cubes: it
    only reaches the isotopy class of the cyclic cube.
    """
    if n < 1:
        raise PreconditionError(f"n must be positive, got {n}")
    rng = random.Random(seed)
    perms = []
    for _ in range(4):
        p = list(range(n))
        rng.shuffle(p)
        perms.append(p)
    return isotope(cayley_cube(n), perms[0], perms[1], perms[2], dict(enumerate(perms[3])))
