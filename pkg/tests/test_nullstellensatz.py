import pytest
from hypothesis import given, strategies as st

from addcomb.errors import BudgetExceeded, PreconditionError
from addcomb.nullstellensatz import DegreeTooLarge, GridFamily, GridTooSmall, certify, witness_search
from addcomb.permdet import lemma22_polynomial
from addcomb.polyring import IntegersModP, SparsePoly


def test_linear_certificate():
    x = SparsePoly.variable(0, 1)
    cert = certify(x, GridFamily([[0, 1]], [1]))
    assert cert.coefficient == 1 and cert.claims_nonzero and cert.witness == (1,)


def test_difference_certificate():
    x1, x2 = SparsePoly.gens(2)
    f = x1 - x2
    cert = certify(f, GridFamily([[0, 1], [0, 1]], [1, 0]))
    # (1, 0) is also a witness; (0, 1) precedes it in the full grid order
    assert cert.coefficient == 1 and cert.witness == (0, 1)
    assert f.evaluate((1, 0)) != 0


def test_sdr_product_polynomial_certificate():
    F5 = IntegersModP(5)
    f = lemma22_polynomial(2, [1, 2], F5)
    grid = GridFamily([[0, 1]] * 4, [1, 1, 1, 1])
    cert = certify(f, grid)
    assert cert.coefficient == 1 and cert.claims_nonzero
    assert cert.witness == (0, 1, 0, 1)
    assert witness_search(f, grid) == cert.witness


def test_truncated_polynomial_only_keeps_the_target_coefficient():
    f = lemma22_polynomial(2, [1, 2])
    g = lemma22_polynomial(2, [1, 2], truncate=True)
    assert f.coeff((1, 1, 1, 1)) == g.coeff((1, 1, 1, 1)) == 1
    assert f.total_degree() == 4 and g != f


def test_search_examples():
    grid = GridFamily([[3, 1], [2, 0]])
    assert witness_search(SparsePoly.one(2), grid) == (3, 2)
    assert witness_search(SparsePoly.zero(2), grid) is None


def test_budget_distinct_from_exhaustion():
    grid = GridFamily([[0, 1, 2]] * 3)
    with pytest.raises(BudgetExceeded):
        witness_search(SparsePoly.zero(3), grid, budget=5)
    assert witness_search(SparsePoly.zero(3), grid, budget=27) is None


def test_hypothesis_violations_are_distinct():
    x1, x2 = SparsePoly.gens(2)
    with pytest.raises(DegreeTooLarge):
        certify(x1 ** 2 * x2, GridFamily([[0, 1], [0, 1]], [1, 1]))
    with pytest.raises(GridTooSmall):
        certify(x1 * x2, GridFamily([[0], [0, 1]], [1, 1]))
    assert issubclass(DegreeTooLarge, PreconditionError) and issubclass(GridTooSmall, PreconditionError)


def test_zero_coefficient_makes_no_claim():
    x1, x2 = SparsePoly.gens(2)
    cert = certify(x1 ** 2 - x2 ** 2, GridFamily([[0, 1], [0, 1]], [1, 1]))
    assert cert.coefficient == 0 and not cert.claims_nonzero and cert.witness is None
    cert = certify(x1, GridFamily([[0, 1], [0, 1]], [1, 1]))
    assert not cert.degree_matches and not cert.claims_nonzero


@st.composite
def certified_instances(draw):
    p = draw(st.sampled_from([3, 5, 7, 11]))
    n = draw(st.integers(1, 3))
    sizes = [draw(st.integers(1, min(4, p))) for _ in range(n)]
    sets = [draw(st.lists(st.integers(0, p - 1), min_size=s, max_size=s, unique=True)) for s in sizes]
    k = tuple(s - 1 for s in sizes)
    total = sum(k)
    terms = {k: draw(st.integers(1, p - 1))}
    for _ in range(draw(st.integers(0, 6))):
        e = tuple(draw(st.integers(0, total)) for _ in range(n))
        if sum(e) <= total and e != k:
            terms[e] = draw(st.integers(0, p - 1))
    return SparsePoly(terms, n, IntegersModP(p)), GridFamily(sets, k)


@given(certified_instances())
def test_nonzero_coefficient_forces_a_witness(inst):
    f, grid = inst
    cert = certify(f, grid)
    assert cert.claims_nonzero
    w = cert.witness
    assert all(a in s for a, s in zip(w, grid.sets))
    assert f.evaluate(w) % f.ring.modulus != 0
    assert certify(f, grid) == cert
