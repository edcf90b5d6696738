import math
from itertools import permutations, product

import pytest
import sympy
from hypothesis import given, strategies as st

from addcomb.errors import PreconditionError
from addcomb.permdet import (ExponentProfile, check_duality_31, check_duality_32, check_lemma_21, check_lemma_22,
                             check_symmetry_33, determinant, determinant_bird, determinant_leibniz, matmul,
                             permanent, permanent_leibniz, permanent_ryser, sign)
from addcomb.polyring import IntegersModP, SparsePoly

ints = st.integers(-6, 6)


def matrices(n_min=1, n_max=4):
    return st.integers(n_min, n_max).flatmap(lambda n: st.lists(st.lists(ints, min_size=n, max_size=n),
                                                                 min_size=n, max_size=n))


def sympy_dual(A, k, m, delta, det_first):
    """[x^k] F(a_ij x_j^m_i) * V^delta * (sum x)^E by plain sympy expansion."""
    n = len(A)
    xs = sympy.symbols(f"x1:{n + 1}")
    W = sympy.Matrix(n, n, lambda i, j: A[i][j] * xs[j] ** m[i])
    head = W.det(method="berkowitz") if det_first else W.per()
    E = sum(k) - sum(m) - delta * math.comb(n, 2)
    V = sympy.prod([xs[j] - xs[i] for i in range(n) for j in range(i + 1, n)]) if delta else 1
    poly = sympy.Poly(sympy.expand(head * V * sum(xs) ** E), *xs)
    return poly.coeff_monomial(sympy.prod([x ** e for x, e in zip(xs, k)]))


def sympy_symmetry(A, k, l, m, outer, inner):
    n = len(A)
    xs = sympy.symbols(f"x1:{n + 1}")
    F = sympy.Matrix(n, n, lambda i, j: A[i][j] * xs[j] ** l[i])
    G = sympy.Matrix(n, n, lambda i, j: xs[j] ** m[i])
    f = F.det(method="berkowitz") if outer == "det" else F.per()
    g = G.det(method="berkowitz") if inner == "det" else G.per()
    N = k * n - sum(l) - sum(m)
    poly = sympy.Poly(sympy.expand(f * g * sum(xs) ** N), *xs)
    return poly.coeff_monomial(sympy.prod([x ** k for x in xs]))


def test_permanent_examples():
    assert permanent([[1, 2], [3, 4]]) == 10
    assert permanent([[1] * 3] * 3) == 6
    assert permanent([[1, 2, 3], [0, 0, 0], [4, 5, 6]]) == 0


def test_determinant_examples():
    c1, c2 = SparsePoly.gens(2)
    assert determinant([[1, 1], [c1, c2]]) == c2 - c1
    assert determinant([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert determinant([[1, 2], [3, 4]]) == -2


def test_sign():
    assert sign((0, 1, 2)) == 1 and sign((1, 0, 2)) == -1 and sign((1, 2, 0)) == 1


@given(matrices(1, 7))
def test_ryser_equals_leibniz(A):
    assert permanent_ryser(A) == permanent_leibniz(A)


@given(matrices(1, 7), st.sampled_from([2, 5, 7]))
def test_ryser_mod_p(A, p):
    assert permanent_ryser(A, IntegersModP(p)) == permanent_leibniz(A) % p


@given(matrices(1, 7))
def test_bird_equals_leibniz(A):
    assert determinant_bird(A) == determinant_leibniz(A)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(*[st.lists(st.lists(ints, min_size=n, max_size=n),
                                                                 min_size=n, max_size=n)] * 2)))
def test_determinant_multiplicative(AB):
    A, B = AB
    assert determinant(matmul(A, B)) == determinant(A) * determinant(B)


@given(matrices())
def test_permanent_and_determinant_agree_mod_2(A):
    assert (permanent(A) - determinant(A)) % 2 == 0
    if len(A) == 1:
        assert permanent(A) == determinant(A) == A[0][0]


def test_duality_trivial_case():
    for check in (check_duality_31, check_duality_32):
        r = check([[5]], ExponentProfile.uniform(0, [0]))
        assert r.lhs == r.rhs == 5 and r.equal
        assert check([[-3]], ExponentProfile((2,), (1,))).lhs == -3


@given(st.lists(ints, min_size=4, max_size=4))
def test_duality_small_examples(flat):
    A = [flat[:2], flat[2:]]
    r = check_duality_31(A, ExponentProfile.uniform(1, [0, 1]))
    assert r.equal and r.lhs == sympy_dual(A, (1, 1), (0, 1), 0, True)
    r = check_duality_32(A, ExponentProfile.uniform(1, [0, 1]))
    assert r.equal and r.lhs == permanent(A) == sympy_dual(A, (1, 1), (0, 1), 0, False)
    r = check_duality_32(A, ExponentProfile.uniform(2, [0, 1]))
    assert r.equal and r.lhs == sympy_dual(A, (2, 2), (0, 1), 0, False) == 3 * permanent(A)
    r = check_duality_32(A, ExponentProfile.uniform(2, [0, 1], delta=1))
    assert r.equal and r.lhs == sympy_dual(A, (2, 2), (0, 1), 1, False) == -determinant(A)
    r = check_duality_31(A, ExponentProfile.uniform(2, [0, 1], delta=1))
    assert r.equal and r.lhs == sympy_dual(A, (2, 2), (0, 1), 1, True)
    assert r.lhs == -permanent(A)


profiles = st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(0, 3), min_size=n, max_size=n),
    st.lists(st.integers(0, 3), min_size=n, max_size=n), st.integers(0, 1)))


@given(profiles, st.data())
def test_duality_matches_sympy(prof, data):
    n, k, m, delta = prof
    if sum(k) - sum(m) - delta * math.comb(n, 2) < 0:
        return
    A = data.draw(st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n, max_size=n))
    P = ExponentProfile(tuple(k), tuple(m), delta)
    r31, r32 = check_duality_31(A, P), check_duality_32(A, P)
    assert r31.equal and r32.equal
    assert r31.lhs == sympy_dual(A, k, m, delta, True)
    assert r32.lhs == sympy_dual(A, k, m, delta, False)


def test_duality_rejects_negative_excess():
    with pytest.raises(PreconditionError):
        check_duality_31([[1, 0], [0, 1]], ExponentProfile.uniform(0, [1, 1]))


@given(st.lists(ints, min_size=4, max_size=4))
def test_symmetry_examples(flat):
    A = [flat[:2], flat[2:]]
    reps = check_symmetry_33(A, 2, [0, 1], [0, 1])
    assert all(r.equal for r in reps.values())
    reps = check_symmetry_33(A, 3, [0, 2], [1, 1])
    assert reps["3.5"].equal and reps["3.8"].equal
    assert reps["3.5"].lhs == sympy_symmetry(A, 3, [0, 2], [1, 1], "det", "det")
    assert reps["3.8"].rhs == sympy_symmetry(A, 3, [1, 1], [0, 2], "per", "per")


def test_symmetry_n1():
    reps = check_symmetry_33([[4]], 2, [1], [0])
    assert all(r.equal and r.lhs == 4 for r in reps.values())


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n, max_size=n), st.integers(0, 3),
    st.lists(st.integers(0, 3), min_size=n, max_size=n), st.lists(st.integers(0, 3), min_size=n, max_size=n))))
def test_symmetry_matches_sympy(case):
    A, k, l, m = case
    if k * len(A) - sum(l) - sum(m) < 0:
        return
    reps = check_symmetry_33(A, k, l, m)
    names = {"3.5": ("det", "det"), "3.6": ("per", "det"), "3.7": ("det", "per"), "3.8": ("per", "per")}
    for name, (outer, inner) in names.items():
        assert reps[name].equal
        assert reps[name].lhs == sympy_symmetry(A, k, l, m, outer, inner)


def test_lemma21_trivial_n1():
    r = check_lemma_21([[3], [4], [5]])
    assert r.lhs == r.rhs == 1


def lemma21_oracle(B):
    m, n = len(B), len(B[0])
    total = 0
    for sigmas in product(permutations(range(n)), repeat=m - 1):
        s = math.prod(sign(p) for p in sigmas)
        cols = [B[m - 1][j] * math.prod(B[r][p[j]] for r, p in enumerate(sigmas)) for j in range(n)]
        total += s * sympy.Matrix(n, n, lambda i, j: cols[j] ** i).det()
    return total


@given(st.lists(st.lists(ints, min_size=2, max_size=2), min_size=3, max_size=3))
def test_lemma21_odd_rows(B):
    r = check_lemma_21(B)
    assert r.equal
    assert r.lhs == lemma21_oracle(B) == math.prod(row[1] - row[0] for row in B)


@given(st.lists(st.lists(ints, min_size=2, max_size=2), min_size=2, max_size=2))
def test_lemma21_even_rows(B):
    r = check_lemma_21(B)
    assert r.equal and r.identity == "2.1-even"
    assert r.lhs == (B[1][0] + B[1][1]) * (B[0][1] - B[0][0])


def test_lemma21_exhaustive_grid():
    for flat in product(range(4), repeat=6):
        assert check_lemma_21([flat[0:2], flat[2:4], flat[4:6]]).equal


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_lemma21_random_n3(B):
    assert check_lemma_21(B).equal


def test_lemma21_size_cap():
    with pytest.raises(PreconditionError):
        check_lemma_21([[1] * 5] * 3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lemma22_symbolic(n):
    assert check_lemma_22(n).equal


@given(st.lists(st.integers(-9, 9), min_size=3, max_size=3))
def test_lemma22_numeric(c):
    r = check_lemma_22(3, c)
    assert r.equal and r.lhs == (c[1] - c[0]) * (c[2] - c[0]) * (c[2] - c[1])


@given(st.sampled_from([3, 5, 7]), st.integers(1, 4), st.data())
def test_alon_permanent_lemma(p, n, data):
    A = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n))
    if permanent(A, IntegersModP(p)) == 0:
        return
    b = data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
    S = [data.draw(st.lists(st.integers(0, p - 1), min_size=2, max_size=2, unique=True)) for _ in range(n)]
    assert any(all(sum(A[i][j] * x[j] for j in range(n)) % p != b[i] for i in range(n)) for x in product(*S))
