"""Acceptance criteria: each runs its full suite at the stated scale and time limit."""
import time

import pytest

from addcomb import sweeps
from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance


def judge(number, title, limit, run):
    t0 = time.perf_counter()
    results = run()
    elapsed = time.perf_counter() - t0
    results = results if isinstance(results, list) else [results]
    passed = sum(r.passed for r in results)
    total = sum(r.total for r in results)
    ok = all(r.ok for r in results) and elapsed < limit
    verdict = "PASS" if ok else "FAIL"
    ACCEPTANCE_LINES.append(f"[{verdict}] {number:>2}. {title}: {passed}/{total} in {elapsed:.1f}s (limit {limit}s)")
    for r in results:
        assert r.ok, (r.name, r.failures(3))
    assert elapsed < limit


def test_distinct_sum_orderings():
    judge(1, "odd-m orderings in Z/N, N=2..6, n<=3", 60,
          lambda: [sweeps.sweep_theorem11(range(2, 7), 3, reduced=True),
                   sweeps.sweep_theorem11(range(2, 7), 3, reduced=False)])


def test_parity_and_klein_obstructions():
    judge(2, "even-m full-group and Klein families have no ordering", 5, sweeps.sweep_counterexamples)


def test_cayley_subcube_transversals():
    judge(3, "every Cayley subcube for N<=5 has a Latin transversal", 120, lambda: sweeps.sweep_corollary11(5))


def test_identity_suite():
    judge(4, "product, duality and symmetry identities (100 random each + n=2 grid)", 120,
          lambda: sweeps.sweep_identities(seed=7, trials=100, grid=True))


def test_sdr_products():
    judge(5, "SDR product coefficient (symbolic n<=3) and 50 field instances", 60,
          lambda: sweeps.sweep_lemma22(seed=0, trials=50))


def test_coefficient_closed_form_grid():
    judge(6, "direct coefficient = closed form, n<=3, m,h<=2, minimal and +1", 120, sweeps.sweep_lemma41)


def test_power_difference_grid():
    judge(7, "power-difference coefficient identity, n<=3, m<=2", 60, sweeps.sweep_lemma51)


def test_sumset_bounds():
    judge(8, "restricted sumset lower bounds, n=2,3, p in 5..13, 20 families", 300,
          lambda: sweeps.sweep_bounds(seed=0, families=20))


def test_certificate_cross_check():
    judge(9, "certificate coefficient nonzero and witnesses agree", 120, lambda: sweeps.sweep_crosscheck(seed=0))


def test_engine_oracles():
    judge(10, "Ryser = Leibniz (n<=7, 200) and capped = uncapped (100)", 30,
          lambda: sweeps.sweep_engine(seed=0, perm_trials=200, cap_trials=100))
