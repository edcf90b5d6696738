"""Deterministic test sweeps: seeded instance generators and suite drivers.

Randomness comes from numpy's PCG64 generator seeded with
``SeedSequence([seed, trial])``, so trial ``t`` of a sweep sees the same
stream no matter how trials are distributed over workers.  Results are
collected in trial order.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from typing import Callable

import numpy as np

from . import latincube as lc
from .errors import InconsistencyError
from .groups import GroupSpec, klein_four_group
from .nullstellensatz import certify
from .orderings import (SubsetFamily, find_ordering, find_ordering_even, find_sdr_product_ordering,
                        verify_ordering, verify_sdr_products)
from .permdet import (ExponentProfile, check_duality_31, check_duality_32, check_lemma_21, check_lemma_22,
                      check_symmetry_33, permanent_leibniz, permanent_ryser)
from .polyring import INTEGERS, DegreeCap, IntegersModP, SparsePoly, mul_capped
from .sumsets import (FieldInstance, SumsetParams, check_theorem12_witness, lemma41_coefficient, lemma51_check,
                      theorem12_grid, theorem12_polynomial, theorem12_witness, theorem14_check, theorem51_sumset)

PRIMES = (5, 7, 11, 13)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(trial)])))


@dataclass
class SweepResult:
    name: str
    outcomes: list[tuple[bool, dict]] = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def total(self) -> int:
        return len(self.outcomes)

    @property
    def passed(self) -> int:
        return sum(ok for ok, _ in self.outcomes)

    @property
    def failed(self) -> int:
        return self.total - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.total > 0

    def failures(self, limit: int = 10) -> list[dict]:
        return [d for ok, d in self.outcomes if not ok][:limit]

    def as_dict(self, timing: bool = False) -> dict:
        out = {"sweep": self.name, "total": self.total, "passed": self.passed, "failed": self.failed,
               "ok": self.ok, "flags": self.flags, "failures": self.failures()}
        if timing:
            out["elapsed_s"] = round(self.elapsed, 3)
        return out


def _run(tasks: list[tuple[Callable, tuple]], workers: int = 1) -> list[tuple[bool, dict]]:
    if workers <= 1 or len(tasks) < 2:
        return [fn(*args) for fn, args in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args) for fn, args in tasks]
        return [f.result() for f in futures]


def _timed(name, tasks, workers, flags=None) -> SweepResult:
    t0 = time.perf_counter()
    res = SweepResult(name, _run(tasks, workers), flags or {})
    res.elapsed = time.perf_counter() - t0
    return res


# -- distinct-sum orderings -----------------------------------------------------

def canonical_translate(subset: tuple[int, ...], N: int) -> tuple[int, ...]:
    """Least sorted translate of a subset of Z/N (translation-class representative)."""
    return min(tuple(sorted((a - t) % N for a in subset)) for t in subset)


def _ordering_trial(N: int, sets: tuple) -> tuple[bool, dict]:
    G = GroupSpec(0, N)
    fam = SubsetFamily(G, [[G.cyclic(a) for a in s] for s in sets])
    detail = {"N": N, "sets": [list(s) for s in sets]}
    try:
        sol = find_ordering(fam)
    except InconsistencyError as exc:
        return False, {**detail, "error": str(exc)}
    ok = sol is not None and verify_ordering(sol, fam)
    return ok, detail


def theorem11_families(N: int, n_max: int = 3, reduced: bool = True):
    """All triples of n-subsets of Z/N for n <= n_max.

    ``reduced`` keeps one representative per translation class of each set
    and one ordering of the three sets (row permutations and translations
    both preserve solvability).
    """
    for n in range(1, min(n_max, N) + 1):
        subsets = list(combinations(range(N), n))
        if reduced:
            reps = sorted({canonical_translate(s, N) for s in subsets})
            yield from combinations_with_replacement(reps, 3)
        else:
            yield from product(subsets, repeat=3)


def sweep_theorem11(Ns=range(2, 7), n_max: int = 3, reduced: bool = True, workers: int = 1) -> SweepResult:
    tasks = [(_ordering_trial, (N, fam)) for N in Ns for fam in theorem11_families(N, n_max, reduced)]
    return _timed("theorem-1.1", tasks, workers, {"symmetry_reduced": reduced, "N": list(Ns), "n_max": n_max})


def _negative_trial(kind: str, N: int, m: int) -> tuple[bool, dict]:
    if kind == "klein":
        K = klein_four_group()
        fam = SubsetFamily(K, [[(0, 0), (0, 1)], [(0, 0), (1, 0)]] + [[(0, 0), (1, 1)]] * (m - 2))
        sol = find_ordering(fam)
        return sol is None, {"case": "klein", "m": m, "found": sol is not None}
    G = GroupSpec(0, N)
    fam = SubsetFamily(G, [G.elements()] * m)
    plain = find_ordering(fam, guarantee=False)
    even = find_ordering_even(fam, strict=False)
    return plain is None and even is None, {"case": "full-group", "N": N, "m": m}


def sweep_counterexamples(workers: int = 1) -> SweepResult:
    tasks = [(_negative_trial, ("full", N, m)) for N in (2, 4) for m in (2, 4)]
    tasks += [(_negative_trial, ("klein", 0, m)) for m in (3, 5)]
    return _timed("counterexamples", tasks, workers)


# -- Latin cubes ------------------------------------------------------------------

def _subcube_trial(N: int, A: tuple, B: tuple, C: tuple) -> tuple[bool, dict]:
    sub = lc.subcube(lc.cayley_cube(N), A, B, C)
    found = {}
    for aligned in (False, True):
        t = lc.find_latin_transversal(sub, aligned=aligned)
        found["aligned" if aligned else "literal"] = t is not None and bool(lc.verify_transversal(t, sub))
    return all(found.values()), {"N": N, "A": list(A), "B": list(B), "C": list(C), **found}


def sweep_corollary11(N_max: int = 5, workers: int = 1) -> SweepResult:
    tasks = [(_subcube_trial, (N, A, B, C)) for N in range(1, N_max + 1) for n in range(1, N + 1)
             for A, B, C in product(list(combinations(range(N), n)), repeat=3)]
    return _timed("corollary-1.1", tasks, workers, {"N_max": N_max, "transversal_shapes": ["literal", "aligned"]})


def _random_cube_trial(seed: int, trial: int, n_max: int) -> tuple[bool, dict]:
    rng = trial_rng(seed, trial)
    n = int(rng.integers(1, n_max + 1))
    cube_seed = int(rng.integers(0, 2 ** 63))
    cube = lc.perturbed_latin_cube(n, cube_seed)
    t = lc.find_latin_transversal(cube)
    ok = cube.latin and t is not None and bool(lc.verify_transversal(t, cube))
    return ok, {"trial": trial, "n": n, "cube_seed": cube_seed,
                "transversal": None if t is None else t.as_dict()}


def sweep_latin_probe(seed: int = 0, trials: int = 1000, n_max: int = 5, workers: int = 1) -> SweepResult:
    tasks = [(_random_cube_trial, (seed, t, n_max)) for t in range(trials)]
    return _timed("latin-probe", tasks, workers, {"sampler": "isotopes of the cyclic cube (non-uniform)"})


# -- identities ---------------------------------------------------------------------

def random_matrix(rng, n: int, lo: int = -5, hi: int = 5) -> list[list[int]]:
    return [[int(v) for v in row] for row in rng.integers(lo, hi + 1, size=(n, n))]


def random_profile(rng, n: int) -> ExponentProfile:
    """Uniform-k profile satisfying the closed-form hypotheses, or a free k-vector."""
    delta = int(rng.integers(0, 2))
    if rng.random() < 0.5:
        k = int(rng.integers(max(n - 1, 0) * delta, 4 + 1))
        if delta:
            m = sorted(int(v) for v in rng.choice(k + 1, size=n, replace=False)) if k + 1 >= n else None
        else:
            m = sorted(int(v) for v in rng.integers(0, k + 1, size=n))
        if m is not None and k * n - sum(m) - delta * math.comb(n, 2) >= 0:
            return ExponentProfile.uniform(k, m, delta)
    while True:
        k = tuple(int(v) for v in rng.integers(0, 5, size=n))
        m = tuple(int(v) for v in rng.integers(0, 4, size=n))
        prof = ExponentProfile(k, m, delta)
        if prof.excess >= 0:
            return prof


def identity_instance(which: str, rng, n: int | None = None):
    """Random arguments for one checker; ``n`` defaults to a random size."""
    if which == "2.1":
        n = n or int(rng.integers(1, 4))
        m = int(rng.choice([2, 3, 5]))
        return {"B": [[int(v) for v in row] for row in rng.integers(-4, 5, size=(m, n))]}
    if which in ("3.1", "3.2"):
        n = n or int(rng.integers(1, 4))
        prof = random_profile(rng, n)
        return {"A": random_matrix(rng, n), "k": list(prof.k), "m": list(prof.m), "delta": prof.delta}
    if which == "3.3":
        n = n or int(rng.integers(1, 4))
        k = int(rng.integers(0, 4))
        while True:
            l = [int(v) for v in rng.integers(0, k + 2, size=n)]
            m = [int(v) for v in rng.integers(0, k + 2, size=n)]
            if k * n - sum(l) - sum(m) >= 0:
                break
        return {"A": random_matrix(rng, n), "k": k, "l": l, "m": m}
    if which == "2.2":
        n = n or int(rng.integers(1, 4))
        return {"n": n, "c": [int(v) for v in rng.integers(-9, 10, size=n)]}
    raise ValueError(f"unknown identity {which!r}")


def run_identity(which: str, args: dict) -> tuple[bool, dict]:
    if which == "2.1":
        r = check_lemma_21(args["B"])
        return r.equal, {**args, **r.as_dict()}
    if which in ("3.1", "3.2"):
        prof = ExponentProfile(tuple(args["k"]), tuple(args["m"]), args["delta"])
        r = (check_duality_31 if which == "3.1" else check_duality_32)(args["A"], prof)
        return r.equal, {**args, **r.as_dict()}
    if which == "3.3":
        reps = check_symmetry_33(args["A"], args["k"], args["l"], args["m"])
        return all(r.equal for r in reps.values()), {**args, "reports": {k: r.as_dict() for k, r in reps.items()}}
    if which == "2.2":
        r = check_lemma_22(args["n"], args["c"])
        return r.equal, {**args, **r.as_dict()}
    raise ValueError(f"unknown identity {which!r}")


def _identity_trial(which: str, seed: int, trial: int, n: int | None) -> tuple[bool, dict]:
    args = identity_instance(which, trial_rng(seed, trial), n)
    ok, detail = run_identity(which, args)
    return ok, {"which": which, "trial": trial, **detail}


def _grid_trial(which: str, args: dict) -> tuple[bool, dict]:
    ok, detail = run_identity(which, args)
    return ok, {"which": which, "grid": True, **detail}


def identity_grid(which: str):
    """Exhaustive small-entry n=2 cases for each identity family."""
    if which == "2.1":
        for flat in product(range(4), repeat=6):
            yield {"B": [list(flat[0:2]), list(flat[2:4]), list(flat[4:6])]}
        for flat in product(range(3), repeat=4):
            yield {"B": [list(flat[0:2]), list(flat[2:4])]}
        return
    mats = [[list(f[:2]), list(f[2:])] for f in product((-1, 0, 1, 2), repeat=4)]
    if which in ("3.1", "3.2"):
        profiles = [(1, (0, 1), 0), (2, (0, 1), 1), (2, (0, 2), 0), (3, (1, 2), 1), (2, (1, 1), 0)]
        profiles += [((2, 1), (1, 0), 1), ((0, 3), (0, 1), 0), ((3, 1), (2, 0), 1)]
        for A in mats:
            for k, m, d in profiles:
                kk = list(k) if isinstance(k, tuple) else [k, k]
                yield {"A": A, "k": kk, "m": list(m), "delta": d}
        return
    if which == "3.3":
        for A in mats:
            for k, l, m in [(2, (0, 1), (0, 1)), (3, (0, 2), (1, 1)), (2, (1, 0), (0, 2)), (1, (0, 1), (0, 0))]:
                yield {"A": A, "k": k, "l": list(l), "m": list(m)}
        return
    raise ValueError(which)


def sweep_identities(seed: int = 7, trials: int = 100, grid: bool = True, workers: int = 1,
                     which=("2.1", "3.1", "3.2", "3.3")) -> SweepResult:
    tasks = [(_identity_trial, (w, seed, t, None)) for w in which for t in range(trials)]
    if grid:
        tasks += [(_grid_trial, (w, args)) for w in which if w != "2.2" for args in identity_grid(w)]
    return _timed("identities", tasks, workers, {"trials_per_identity": trials, "grid": grid})


# -- products of SDRs -----------------------------------------------------------

def sdr_instance(rng) -> dict:
    p = int(rng.choice(PRIMES))
    n = int(rng.integers(1, 4))
    A = [sorted(int(v) for v in rng.choice(p, size=n, replace=False)) for _ in range(n)]
    B = [sorted(int(v) for v in rng.choice(p, size=n, replace=False)) for _ in range(n)]
    c = [int(v) for v in rng.choice(p, size=n, replace=False)]
    return {"p": p, "A": A, "B": B, "c": c}


def _sdr_trial(seed: int, trial: int) -> tuple[bool, dict]:
    inst = sdr_instance(trial_rng(seed, trial))
    ring = IntegersModP(inst["p"])
    try:
        a, b = find_sdr_product_ordering(inst["A"], inst["B"], inst["c"], ring)
    except InconsistencyError as exc:
        return False, {**inst, "error": str(exc)}
    ok = verify_sdr_products(a, b, inst["A"], inst["B"], inst["c"], ring)
    return ok, {"trial": trial, **inst, "a": list(a), "b": list(b)}


def _lemma22_symbolic(n: int) -> tuple[bool, dict]:
    r = check_lemma_22(n)
    return r.equal, r.as_dict()


def sweep_lemma22(seed: int = 0, trials: int = 50, workers: int = 1) -> SweepResult:
    tasks = [(_lemma22_symbolic, (n,)) for n in (1, 2, 3)]
    tasks += [(_sdr_trial, (seed, t)) for t in range(trials)]
    return _timed("lemma-2.2", tasks, workers)


# -- coefficient formulas -----------------------------------------------------------

def lemma41_grid():
    for n in (1, 2, 3):
        for m in (1, 2):
            for h in (1, 2):
                for extra in (0, 1):
                    yield SumsetParams.minimal(h, m, n, extra)


def _lemma41_trial(params: SumsetParams) -> tuple[bool, dict]:
    try:
        direct = lemma41_coefficient(params, None, "direct")
        closed = lemma41_coefficient(params, None, "closed")
        mult = params.closed_form_multiplier
    except InconsistencyError as exc:
        return False, {**params.as_dict(), "error": str(exc)}
    return direct == closed, {**params.as_dict(), "N": params.N, "multiplier": mult,
                              "direct": str(direct), "closed": str(closed)}


def sweep_lemma41(workers: int = 1) -> SweepResult:
    return _timed("lemma-4.1", [(_lemma41_trial, (p,)) for p in lemma41_grid()], workers)


def lemma51_grid():
    for n in (1, 2, 3):
        for m in (1, 2):
            base = m * (n - 1) + 1
            for k in range(base, base + 3):
                yield k, m, n


def _lemma51_trial(k: int, m: int, n: int) -> tuple[bool, dict]:
    try:
        r = lemma51_check(k, m, n)
    except InconsistencyError as exc:
        return False, {"k": k, "m": m, "n": n, "error": str(exc)}
    return r.equal, {"k": k, "m": m, "n": n, **r.as_dict()}


def sweep_lemma51(workers: int = 1) -> SweepResult:
    return _timed("lemma-5.1", [(_lemma51_trial, a) for a in lemma51_grid()], workers)


# -- sumset bounds ----------------------------------------------------------------

def theorem51_grid():
    """(n, k, m, p) tuples with k-1 >= m(n-1) and p > K."""
    for n, ks in ((2, (2, 3, 4)), (3, (3, 4))):
        for m in (1, 2):
            for k in ks:
                if k - 1 < m * (n - 1) or k > 13:
                    continue
                K = (k - 1) * n - (m + 1) * math.comb(n, 2)
                for p in PRIMES:
                    if p > K and p >= k:
                        yield n, k, m, p


def random_theorem51_instance(rng, n, k, m, p) -> dict:
    A = [sorted(int(v) for v in rng.choice(p, size=k, replace=False)) for _ in range(n)]
    leads = [int(v) for v in rng.choice(p, size=n, replace=False)]
    P = [[int(v) for v in rng.integers(0, p, size=m)] + [leads[j]] for j in range(n)]
    return {"A": A, "P": P, "m": m, "p": p}


def _theorem51_trial(seed: int, index: int, n: int, k: int, m: int, p: int) -> tuple[bool, dict]:
    inst = random_theorem51_instance(trial_rng(seed, index), n, k, m, p)
    rep = theorem51_sumset(inst["A"], inst["P"], m, p)
    return rep.bound_met, {"theorem": "5.1", **inst, "size": rep.size, "bound": rep.bound}


def theorem14_grid():
    for n, ks in ((2, (2, 3, 4)), (3, (3, 4))):
        for m in (1, 2):
            for k in ks:
                if k - 1 < m * (n - 1):
                    continue
                N = (k - 1 - m * (n - 1)) * n
                for p in PRIMES:
                    if p > max(m * n, N) and p >= max(k, n):
                        yield n, k, m, p


def random_theorem14_instance(rng, n, k, m, p) -> dict:
    A = [sorted(int(v) for v in rng.choice(p, size=k, replace=False)) for _ in range(n)]
    B = [sorted(int(v) for v in rng.choice(p, size=n, replace=False)) for _ in range(n)]
    c = [int(v) for v in rng.choice(p, size=n, replace=False)]
    forbidden = {}
    for i in range(n):
        for j in range(i + 1, n):
            size = int(rng.integers(0, 2 * m))
            forbidden[(i, j)] = sorted(int(v) for v in rng.choice(p, size=size, replace=False))
    return {"A": A, "B": B, "c": c, "forbidden": forbidden, "m": m, "p": p}


def _theorem14_trial(seed: int, index: int, n: int, k: int, m: int, p: int) -> tuple[bool, dict]:
    inst = random_theorem14_instance(trial_rng(seed, index), n, k, m, p)
    rep = theorem14_check(inst["A"], inst["B"], inst["c"], inst["forbidden"], m, p)
    detail = {**inst, "forbidden": {f"{i},{j}": v for (i, j), v in inst["forbidden"].items()}}
    return rep.bound_met, {"theorem": "1.4", **detail, "size": rep.size, "bound": rep.bound}


def sweep_bounds(seed: int = 0, families: int = 20, workers: int = 1) -> SweepResult:
    tasks = []
    idx = 0
    for tup in theorem51_grid():
        for _ in range(families):
            tasks.append((_theorem51_trial, (seed, idx, *tup)))
            idx += 1
    for tup in theorem14_grid():
        for _ in range(families):
            tasks.append((_theorem14_trial, (seed, idx, *tup)))
            idx += 1
    return _timed("bounds", tasks, workers, {"families_per_tuple": families, "primes": list(PRIMES)})


# -- cross-check with the Nullstellensatz engine ----------------------------------

def theorem12_desk_grid():
    for n in (1, 2):
        for m in (1, 2):
            for h in (1, 2):
                for extra in (0, 1):
                    params = SumsetParams.minimal(h, m, n, extra)
                    for p in (5, 7, 11):
                        if p > max(params.K, params.L) and p >= max(params.k, params.l, n):
                            yield params, p


def random_field_instance(rng, params: SumsetParams, p: int, saturate: bool = True) -> FieldInstance:
    n = params.n

    def subset(size):
        return sorted(int(v) for v in rng.choice(p, size=size, replace=False))

    def monic(deg):
        return [int(v) for v in rng.integers(0, p, size=deg)] + [1]

    S = subset(params.K) if saturate else subset(int(rng.integers(0, params.K + 1)))
    T = subset(params.L) if saturate else subset(int(rng.integers(0, params.L + 1)))
    return FieldInstance.build(p, [subset(params.k) for _ in range(n)], [subset(params.l) for _ in range(n)],
                               subset(n), [monic(params.m) for _ in range(n)], [monic(params.h) for _ in range(n)],
                               S, T)


def _cross_trial(seed: int, index: int, params: SumsetParams, p: int) -> tuple[bool, dict]:
    rng = trial_rng(seed, index)
    inst = random_field_instance(rng, params, p, saturate=True)
    w = theorem12_witness(inst, params)
    clauses = check_theorem12_witness(w, inst)
    f = theorem12_polynomial(inst, params)
    cert = certify(f, theorem12_grid(inst, params))
    closed = lemma41_coefficient(params, inst.c, "closed", inst.ring)
    agree = cert.witness is not None and tuple(cert.witness) == tuple(w.as_list())
    ok = all(clauses.values()) and cert.claims_nonzero and cert.coefficient == closed and agree
    return ok, {"params": params.as_dict(), "instance": inst.as_dict(), "witness": w.as_list(),
                "certificate": cert.as_dict(), "closed_form_mod_p": closed, "clauses": clauses}


def sweep_crosscheck(seed: int = 0, per_tuple: int = 3, workers: int = 1) -> SweepResult:
    tasks = []
    idx = 0
    for params, p in theorem12_desk_grid():
        for _ in range(per_tuple):
            tasks.append((_cross_trial, (seed, idx, params, p)))
            idx += 1
    return _timed("cross-check", tasks, workers, {"S_T_saturated": True})


# -- engine oracles -----------------------------------------------------------------

def _permanent_trial(seed: int, trial: int) -> tuple[bool, dict]:
    rng = trial_rng(seed, trial)
    n = int(rng.integers(1, 8))
    A = random_matrix(rng, n, -6, 6)
    a, b = permanent_ryser(A), permanent_leibniz(A)
    return a == b, {"n": n, "ryser": a, "leibniz": b}


def random_poly(rng, nvars: int, nterms: int, max_exp: int = 3, ring=INTEGERS) -> SparsePoly:
    terms = {}
    for _ in range(nterms):
        e = tuple(int(v) for v in rng.integers(0, max_exp + 1, size=nvars))
        terms[e] = terms.get(e, 0) + int(rng.integers(-9, 10))
    return SparsePoly(terms, nvars, ring)


def _capped_trial(seed: int, trial: int) -> tuple[bool, dict]:
    rng = trial_rng(seed, trial)
    nv = int(rng.integers(1, 5))
    factors = [random_poly(rng, nv, int(rng.integers(1, 7)), 2) for _ in range(int(rng.integers(2, 5)))]
    cap = tuple(int(v) for v in rng.integers(0, 5, size=nv))
    capped = SparsePoly.one(nv)
    full = SparsePoly.one(nv)
    for f in factors:
        capped = mul_capped(capped, f, DegreeCap(cap))
        full = full * f
    ok = all(capped.coeff(e) == full.coeff(e) for e in product(*(range(c + 1) for c in cap)))
    ok = ok and all(DegreeCap(cap).admits(e) for e in capped.terms)
    return ok, {"nvars": nv, "cap": list(cap)}


def sweep_engine(seed: int = 0, perm_trials: int = 200, cap_trials: int = 100, workers: int = 1) -> SweepResult:
    tasks = [(_permanent_trial, (seed, t)) for t in range(perm_trials)]
    tasks += [(_capped_trial, (seed, t)) for t in range(cap_trials)]
    return _timed("engine", tasks, workers)


SWEEPS = {
    "theorem-1.1": sweep_theorem11,
    "counterexamples": sweep_counterexamples,
    "corollary-1.1": sweep_corollary11,
    "latin-probe": sweep_latin_probe,
    "identities": sweep_identities,
    "lemma-2.2": sweep_lemma22,
    "lemma-4.1": sweep_lemma41,
    "lemma-5.1": sweep_lemma51,
    "bounds": sweep_bounds,
    "cross-check": sweep_crosscheck,
    "engine": sweep_engine,
}
