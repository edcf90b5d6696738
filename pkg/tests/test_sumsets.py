import math
from itertools import combinations, product

import pytest
import sympy
from hypothesis import given, strategies as st

from addcomb import sweeps
from addcomb.errors import PreconditionError
from addcomb.groups import GroupSpec
from addcomb.nullstellensatz import certify, witness_search
from addcomb.polyring import SparsePoly
from addcomb.sumsets import (FieldInstance, GroupInstance, SumsetParams, check_theorem12_witness,
                             check_theorem13_witness, corollary51_sdr, lemma41_coefficient, lemma51_check,
                             lemma51_constant, Witness, theorem12_grid, theorem12_polynomial, theorem12_witness,
                             theorem13_witness, theorem14_check, theorem51_sumset)

params_strategy = st.builds(SumsetParams.minimal, st.integers(1, 3), st.integers(1, 3), st.integers(1, 4),
                            st.integers(0, 3))


def test_params_validation():
    with pytest.raises(PreconditionError):
        SumsetParams(1, 1, 2, 1, 2)
    p = SumsetParams.minimal(1, 1, 2)
    assert (p.k, p.l, p.K, p.L) == (2, 2, 0, 0)


@given(params_strategy)
def test_nonnegative_lengths(p):
    assert p.K >= (p.m - 1) * math.comb(p.n, 2)
    assert p.L >= (p.h - 1) * math.comb(p.n, 2)
    assert p.N == p.K0 * p.L0


@pytest.mark.parametrize("k,l,m,h", [(1, 1, 1, 1), (3, 2, 2, 1), (4, 4, 1, 2)])
def test_lemma41_single_variable(k, l, m, h):
    p = SumsetParams(h, k, l, m, 1)
    assert lemma41_coefficient(p, [5]) == lemma41_coefficient(p, [5], "closed") == 1
    assert p.closed_form_multiplier == 1


def test_lemma41_smallest_pair():
    p = SumsetParams.minimal(1, 1, 2)
    c1, c2 = SparsePoly.gens(2)
    assert lemma41_coefficient(p) == lemma41_coefficient(p, mode="closed") == c2 - c1


def test_lemma41_against_sympy():
    p = SumsetParams(1, 3, 3, 1, 2)
    x1, x2, y1, y2 = sympy.symbols("x1 x2 y1 y2")
    c = (0, 1)
    f = (x2 - x1) * (y2 - y1) * (c[1] * x2 * y2 - c[0] * x1 * y1) * (x1 + x2) ** p.K * (y1 + y2) ** p.L
    expect = sympy.Poly(sympy.expand(f), x1, x2, y1, y2).coeff_monomial(x1 ** 2 * x2 ** 2 * y1 ** 2 * y2 ** 2)
    assert lemma41_coefficient(p, c) == lemma41_coefficient(p, c, "closed") == expect


@pytest.mark.parametrize("params", list(sweeps.lemma41_grid()), ids=str)
def test_lemma41_grid(params):
    assert lemma41_coefficient(params) == lemma41_coefficient(params, mode="closed")


def test_theorem12_examples():
    p1 = SumsetParams(1, 3, 2, 1, 1)
    inst = FieldInstance.build(5, [[0, 1, 2]], [[0, 3]], [1], S=[0, 1], T=[3])
    w = theorem12_witness(inst, p1)
    assert all(check_theorem12_witness(w, inst).values())
    assert w.a == (2,) and w.b == (0,)
    p2 = SumsetParams.minimal(1, 1, 2)
    inst = FieldInstance.build(5, [[0, 1], [2, 3]], [[0, 1], [2, 3]], [1, 2])
    w = theorem12_witness(inst, p2)
    assert all(check_theorem12_witness(w, inst).values())
    with pytest.raises(PreconditionError):
        theorem12_witness(FieldInstance.build(5, [[0, 1], [2, 3]], [[0, 1], [2, 3]], [1, 1]), p2)


@given(st.data())
def test_theorem12_witnesses_are_valid(data):
    params, p = data.draw(st.sampled_from(list(sweeps.theorem12_desk_grid())))
    seed = data.draw(st.integers(0, 2 ** 32))
    inst = sweeps.random_field_instance(sweeps.trial_rng(seed, 0), params, p, saturate=False)
    w = theorem12_witness(inst, params)
    assert all(check_theorem12_witness(w, inst).values())
    f = theorem12_polynomial(inst, params)
    grid = theorem12_grid(inst, params)
    cert = certify(f, grid)
    assert cert.claims_nonzero
    assert cert.coefficient == lemma41_coefficient(params, inst.c, "closed", inst.ring)
    found = witness_search(f, grid)
    clauses = check_theorem12_witness(Witness(found[:params.n], found[params.n:]), inst)
    assert all(clauses.values())


def test_theorem13_examples():
    Z7 = GroupSpec(0, 7)
    g = Z7.cyclic
    p1 = SumsetParams(1, 2, 2, 1, 1)
    inst = GroupInstance.build(Z7, [[g(0), g(1)]], [[g(2), g(3)]], [g(4)])
    assert all(check_theorem13_witness(theorem13_witness(inst, p1), inst, p1).values())
    p2 = SumsetParams.minimal(1, 1, 2)
    inst = GroupInstance.build(Z7, [[g(0), g(1)], [g(2), g(3)]], [[g(0), g(1)], [g(2), g(3)]], [g(1), g(2)])
    w = theorem13_witness(inst, p2)
    assert all(check_theorem13_witness(w, inst, p2).values())
    crowded = GroupInstance.build(Z7, inst.A, inst.B, inst.c, S=[[g(0), g(2)]])
    with pytest.raises(PreconditionError):
        theorem13_witness(crowded, p2)


@given(st.data())
def test_theorem13_random_groups(data):
    N = data.draw(st.integers(3, 9))
    G = GroupSpec(data.draw(st.integers(0, 1)), N)
    params = data.draw(st.sampled_from([SumsetParams.minimal(1, 1, 2), SumsetParams.minimal(1, 1, 2, 1),
                                        SumsetParams.minimal(2, 1, 2), SumsetParams(1, 2, 2, 1, 1)]))
    n = params.n
    if G.free_rank:
        elems = st.builds(lambda u, t: G.element([u], t), st.integers(-2, 2), st.integers(0, N - 1))
    else:
        elems = st.builds(G.cyclic, st.integers(0, N - 1))
    A = [data.draw(st.lists(elems, min_size=params.k, max_size=params.k, unique=True)) for _ in range(n)]
    B = [data.draw(st.lists(elems, min_size=params.l, max_size=params.l, unique=True)) for _ in range(n)]
    c = data.draw(st.lists(elems, min_size=n, max_size=n, unique=True))
    tuples = [frozenset(t) for t in product(*A) if len(set(t)) == n]
    S = data.draw(st.lists(st.sampled_from(tuples), max_size=params.K, unique=True)) if tuples and params.K else []
    inst = GroupInstance.build(G, A, B, c, S=S)
    w = theorem13_witness(inst, params)
    assert all(check_theorem13_witness(w, inst, params).values())


def sumset_oracle(A, admissible, p):
    return sorted({sum(t) % p for t in product(*A) if admissible(t)})


def power_per(values, p):
    n = len(values)
    return sympy.Matrix(n, n, lambda i, j: values[j] ** i).per() % p


def test_theorem51_examples():
    rep = theorem51_sumset([[0, 3, 5]], [[0, 1]], 1, 7)
    assert rep.sumset == [0, 3, 5] and rep.bound == 3 and rep.bound_met
    rep = theorem51_sumset([[0, 1], [2, 3]], [[0, 1], [0, 2]], 1, 7)
    assert rep.bound == 1 and rep.bound_met
    rep = theorem51_sumset([[0, 1, 2], [0, 1, 2]], [[0, 1], [0, 2]], 1, 11)
    assert rep.bound == 3 and rep.size >= 3


@given(st.data())
def test_theorem51_matches_enumeration(data):
    n, k, m, p = data.draw(st.sampled_from(list(sweeps.theorem51_grid())))
    inst = sweeps.random_theorem51_instance(sweeps.trial_rng(data.draw(st.integers(0, 10 ** 6)), 0), n, k, m, p)
    rep = theorem51_sumset(inst["A"], inst["P"], m, p)

    def ok(t):
        vals = [sum(c * x ** i for i, c in enumerate(inst["P"][j])) % p for j, x in enumerate(t)]
        return len(set(t)) == n and power_per(vals, p) != 0

    assert rep.sumset == sumset_oracle(inst["A"], ok, p)
    assert rep.bound_met


def test_corollary51_examples():
    assert corollary51_sdr([[4]], [3], 5) == (4,)
    assert corollary51_sdr([[1, 2], [3, 4]], [1, 2], 5) == (1, 3)
    with pytest.raises(PreconditionError):
        corollary51_sdr([[1, 2], [3, 4]], [2, 2], 5)


@given(st.sampled_from([5, 7, 11]), st.integers(1, 3), st.data())
def test_corollary51_first_sdr(p, n, data):
    A = [data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n, unique=True)) for _ in range(n)]
    b = data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n, unique=True))
    a = corollary51_sdr(A, b, p)
    first = next(t for t in product(*A) if len(set(t)) == n and power_per([x * y % p for x, y in zip(t, b)], p))
    assert a == first


def test_theorem14_examples():
    rep = theorem14_check([[0, 2, 4]], [[3]], [2], {}, 1, 5)
    assert rep.sumset == [0, 2, 4] and rep.bound == 3
    rep = theorem14_check([[0, 1], [2, 3]], [[1, 2], [3, 4]], [1, 2], {(0, 1): []}, 1, 5)
    assert rep.bound == 1 and rep.bound_met
    rep = theorem14_check([[0, 1, 2], [0, 1, 2]], [[1, 2], [3, 4]], [1, 2], {(0, 1): [0]}, 1, 7)
    assert rep.bound == 3 and rep.bound_met


@given(st.data())
def test_theorem14_matches_enumeration(data):
    n, k, m, p = data.draw(st.sampled_from(list(sweeps.theorem14_grid())))
    inst = sweeps.random_theorem14_instance(sweeps.trial_rng(data.draw(st.integers(0, 10 ** 6)), 0), n, k, m, p)
    rep = theorem14_check(inst["A"], inst["B"], inst["c"], inst["forbidden"], m, p)
    b, c = rep.extra["b"], inst["c"]

    def ok(t):
        for i, j in combinations(range(n), 2):
            if (t[i] - t[j]) % p in inst["forbidden"][(i, j)]:
                return False
            if (t[i] * b[i] * c[i] - t[j] * b[j] * c[j]) % p == 0:
                return False
        return True

    assert rep.sumset == sumset_oracle(inst["A"], ok, p)
    assert rep.bound_met


def test_theorem14_rejects_large_forbidden_sets():
    with pytest.raises(PreconditionError):
        theorem14_check([[0, 1, 2], [0, 1, 2]], [[1, 2], [3, 4]], [1, 2], {(0, 1): [0, 1]}, 1, 7)


def test_lemma51_examples():
    r = lemma51_check(3, 1, 1)
    assert r.equal and r.lhs == r.rhs == SparsePoly.one(1)
    r = lemma51_check(2, 1, 2)
    y1, y2 = SparsePoly.gens(2)
    assert r.equal and r.lhs == -(y1 + y2) and r.constant == -1
    assert lemma51_check(3, 2, 2).equal


@pytest.mark.parametrize("k,m,n", list(sweeps.lemma51_grid()))
def test_lemma51_grid(k, m, n):
    assert lemma51_check(k, m, n).equal
    assert lemma51_check(k, m, n, y=[2, 3, 5][:n]).equal


def test_lemma51_constant_against_sympy():
    x1, x2, y1, y2 = sympy.symbols("x1 x2 y1 y2")
    k, m = 4, 1
    N = (k - 1 - m) * 2
    f = (x2 - x1) ** (2 * m - 1) * (x2 * y2 - x1 * y1) * (x1 + x2) ** N
    got = sympy.Poly(sympy.expand(f), x1, x2).coeff_monomial(x1 ** 3 * x2 ** 3)
    assert sympy.expand(got - lemma51_constant(k, m, 2) * (y1 + y2)) == 0
