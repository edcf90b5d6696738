import math
from itertools import product

import pytest
from hypothesis import given, strategies as st

from addcomb.errors import PreconditionError
from addcomb.groups import (GroupElement, GroupSpec, TorsionProduct, add, element_order, format_element,
                            format_spec, iter_box, klein_four_group, parse_element, parse_group, sum_all)


def test_add_reduces_torsion():
    G = GroupSpec(0, 5)
    assert add(G, G.cyclic(3), G.cyclic(4)) == G.cyclic(2)


def test_add_free_inverse():
    G = GroupSpec(1, 1)
    assert add(G, G.element([7]), G.element([-7])) == G.zero


def test_add_componentwise():
    G = GroupSpec(1, 4)
    assert add(G, G.element([1], 3), G.element([2], 3)) == G.element([3], 2)


def test_element_orders():
    assert element_order(GroupSpec(0, 6), GroupSpec(0, 6).cyclic(2)) == 3
    assert element_order(GroupSpec(1, 1), GroupSpec(1, 1).element([1])) == math.inf
    assert element_order(GroupSpec(0, 9), GroupSpec(0, 9).zero) == 1


def test_sum_all_examples():
    Z4, Z5 = GroupSpec(0, 4), GroupSpec(0, 5)
    assert sum_all(Z4, Z4.elements()) == Z4.cyclic(2)
    assert sum_all(Z5, Z5.elements()) == Z5.zero
    assert sum_all(Z5, []) == Z5.zero


@pytest.mark.parametrize("N", [2, 4, 6, 8, 10])
def test_sum_of_even_cyclic_group_is_the_involution(N):
    G = GroupSpec(0, N)
    involutions = [a for a in G.elements() if element_order(G, a) == 2]
    assert involutions == [G.cyclic(N // 2)]
    assert sum_all(G, G.elements()) == involutions[0]


@pytest.mark.parametrize("N", range(1, 13))
def test_group_laws_exhaustive_finite(N):
    G = GroupSpec(0, N)
    els = G.elements()
    for a in els:
        assert G.add(a, G.zero) == a
        assert G.add(a, G.neg(a)) == G.zero
        assert N % element_order(G, a) == 0
        for b in els:
            assert G.add(a, b) == G.add(b, a)


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_group_laws_exhaustive_rank_one(N):
    G = GroupSpec(1, N)
    box = list(iter_box(G, 3))
    assert len(box) == 7 * N
    for a, b in product(box, repeat=2):
        assert G.add(a, b) == G.add(b, a)
        assert G.add(a, G.neg(a)) == G.zero
    for a, b, c in product(box[:: max(1, len(box) // 8)], repeat=3):
        assert G.add(G.add(a, b), c) == G.add(a, G.add(b, c))


elements = st.tuples(st.integers(-5, 5), st.integers(0, 11))


@given(st.integers(1, 12), elements, elements, elements)
def test_associativity_random(N, x, y, z):
    G = GroupSpec(1, N)
    a, b, c = (G.element([u], v) for u, v in (x, y, z))
    assert G.add(G.add(a, b), c) == G.add(a, G.add(b, c))


@given(st.integers(1, 30), st.integers(-40, 40), st.integers(0, 60))
def test_scale_matches_repeated_addition(N, t, k):
    G = GroupSpec(0, N)
    a = G.cyclic(t)
    acc = G.zero
    for _ in range(k):
        acc = G.add(acc, a)
    assert G.scale(k, a) == acc


def test_text_round_trip():
    G = GroupSpec(2, 4)
    a = G.element([3, -1], 2)
    assert format_element(a) == "r:3,-1;t:2"
    assert parse_element(G, format_element(a)) == a
    assert format_spec(G) == "Z^2 x Z/4"
    assert parse_group("Z^2 x Z/4") == G
    assert parse_group("Z/6") == GroupSpec(0, 6)
    assert parse_element(GroupSpec(0, 6), 8) == GroupSpec(0, 6).cyclic(2)


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_group("Q/3")
    with pytest.raises(ValueError):
        parse_element(GroupSpec(1, 3), "r:1,2;t:0")


def test_check_rejects_foreign_elements():
    with pytest.raises(PreconditionError):
        GroupSpec(0, 5).check(GroupElement((1,), 0))


def test_klein_fixture_has_noncyclic_torsion():
    K = klein_four_group()
    assert not K.has_cyclic_torsion
    assert parse_group("Z/2 x Z/2") == K
    assert all(K.element_order(a) <= 2 for a in K.elements())
    assert TorsionProduct([2, 3]).has_cyclic_torsion
