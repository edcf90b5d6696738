from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from addcomb.errors import BudgetExceeded, PreconditionError
from addcomb.latincube import (Cube, Transversal, cayley_cube, find_latin_transversal, isotope,
                               perturbed_latin_cube, subcube, verify_transversal)


def brute_force(cube, aligned=False):
    n = cube.n
    cells = list(product(range(n), repeat=3))
    for pick in combinations(cells, n):
        if any(sum(x == y for x, y in zip(a, b)) >= (1 if aligned else 2) for a, b in combinations(pick, 2)):
            continue
        if len({cube[c] for c in pick}) == n:
            return pick
    return None


def test_cayley_cube_entries():
    assert cayley_cube(1).to_nested() == [[[0]]]
    c2 = cayley_cube(2)
    assert c2[1, 1, 1] == 1 and c2[0, 1, 1] == 0
    c3 = cayley_cube(3)
    assert c3.latin
    for a, b in product(range(3), repeat=2):
        assert {c3[a, b, k] for k in range(3)} == {c3[a, k, b] for k in range(3)} == {0, 1, 2}


def test_subcube_examples():
    c4 = cayley_cube(4)
    assert subcube(c4, range(4), range(4), range(4)) == c4
    s = subcube(c4, [0, 1], [0, 1], [0, 1])
    assert s.n == 2 and s[0, 0, 0] == 0 and s[1, 1, 1] == 3
    assert subcube(c4, [2], [3], [1]).to_nested() == [[[2]]]
    with pytest.raises(PreconditionError):
        subcube(c4, [0, 1], [0], [0, 1])


def test_transversal_examples():
    t = find_latin_transversal(cayley_cube(2))
    assert t.cells == ((0, 0, 0), (1, 1, 1)) and t.values == (0, 1)
    assert verify_transversal(t, cayley_cube(2))
    one = find_latin_transversal(Cube.from_nested([[[7]]]))
    assert one.cells == ((0, 0, 0),) and one.values == (7,)


def test_z4_subcube_transversals():
    s = subcube(cayley_cube(4), [0, 1], [0, 1], [0, 1])
    literal = find_latin_transversal(s)
    assert literal.cells == ((0, 0, 0), (0, 1, 1)) and literal.values == (0, 2)
    aligned = find_latin_transversal(s, aligned=True)
    assert aligned.cells == ((0, 0, 0), (1, 1, 1)) and aligned.values == (0, 3)
    assert verify_transversal(literal, s) and verify_transversal(aligned, s)


def test_verifier_distinguishes_failures():
    c2 = cayley_cube(2)
    shared = verify_transversal(Transversal(((0, 0, 0), (0, 0, 1)), (0, 1)), c2)
    assert not shared.is_transversal and not shared
    repeated = verify_transversal(Transversal(((0, 0, 0), (0, 1, 1)), (0, 0)), c2)
    assert repeated.is_transversal and not repeated.is_latin and not repeated
    lied = verify_transversal(Transversal(((0, 0, 0), (1, 1, 1)), (0, 0)), c2)
    assert not lied


cubes = st.builds(perturbed_latin_cube, st.integers(1, 4), st.integers(0, 2 ** 32))


@given(cubes)
def test_mutations_are_judged_by_definition(cube):
    t = find_latin_transversal(cube)
    assert verify_transversal(t, cube)
    n = cube.n
    for pos, axis, shift in product(range(n), range(3), range(1, n)):
        cells = [list(c) for c in t.cells]
        cells[pos][axis] = (cells[pos][axis] + shift) % n
        cells = tuple(tuple(c) for c in cells)
        moved = Transversal(cells, tuple(cube[c] for c in cells))
        ok = len(set(cells)) == n and all(sum(x == y for x, y in zip(a, b)) <= 1 for a, b in combinations(cells, 2))
        ok = ok and len(set(moved.values)) == n
        assert bool(verify_transversal(moved, cube)) == ok
    for pos in range(n):
        vals = list(t.values)
        vals[pos] = "x"
        assert not verify_transversal(Transversal(t.cells, tuple(vals)), cube)


@given(cubes, st.booleans())
def test_search_matches_brute_force(cube, aligned):
    if cube.n > 3:
        return
    t = find_latin_transversal(cube, aligned=aligned)
    expect = brute_force(cube, aligned)
    assert (t is None) == (expect is None)
    if t is not None:
        assert t.cells == expect


def test_brute_force_agrees_on_all_small_subcubes():
    c4 = cayley_cube(4)
    for n in (1, 2, 3):
        for A, B, C in product(combinations(range(4), n), repeat=3):
            s = subcube(c4, A, B, C)
            for aligned in (False, True):
                t = find_latin_transversal(s, aligned=aligned)
                assert t.cells == brute_force(s, aligned)


def test_non_latin_cube_may_have_none():
    flat = Cube.from_nested([[[0, 0], [0, 0]], [[0, 0], [0, 0]]])
    assert find_latin_transversal(flat) is None


def test_budget():
    with pytest.raises(BudgetExceeded):
        find_latin_transversal(cayley_cube(6), budget=2)


def test_perturbed_cubes():
    assert perturbed_latin_cube(4, 11) == perturbed_latin_cube(4, 11)
    assert all(perturbed_latin_cube(n, s).latin for n in range(1, 6) for s in range(20))
    ident = [0, 1]
    assert isotope(cayley_cube(2), ident, ident, ident, {0: 0, 1: 1}) == cayley_cube(2)
