"""Command-line front end.

Every command writes one JSON report.  Exit codes: 0 verified success,
1 input error, 2 verified negative (no solution / not found), 3 budget
exhausted, 4 internal inconsistency or failed verification.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from itertools import product
from pathlib import Path
from typing import Any

from . import __version__
from . import latincube as lc
from . import sweeps
from .errors import BudgetExceeded, InconsistencyError, PreconditionError
from .groups import GroupSpec, parse_group
from .nullstellensatz import GridFamily, certify, witness_search
from .orderings import SubsetFamily, complete_to_zero_sum, find_ordering, find_ordering_even, verify_ordering
from .permdet import permanent_leibniz
from .polyring import INTEGERS, IntegersModP, format_poly, parse_poly
from .sumsets import (FieldInstance, GroupInstance, SumsetParams, check_theorem12_witness,
                      check_theorem13_witness, corollary51_sdr, theorem12_witness, theorem13_witness,
                      theorem14_check, theorem51_sumset)

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3, 4


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    budget: int | None = None
    out: str | None = None
    timing: bool = False


@dataclass
class Report:
    command: str
    status: str
    exit_code: int
    config: dict
    inputs_digest: str
    result: Any = None
    verification: dict = field(default_factory=dict)
    version: str = __version__
    timing: dict | None = None
    out: str | None = field(default=None, repr=False)

    def to_json(self) -> str:
        data = asdict(self)
        del data["out"]
        if data["timing"] is None:
            del data["timing"]
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


@dataclass
class Outcome:
    exit_code: int
    result: Any
    verification: dict
    inputs: Any


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def digest(command: str, inputs) -> str:
    blob = json.dumps({"command": command, "inputs": inputs}, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _fmt(group, a):
    if isinstance(group, GroupSpec) and group.free_rank == 0:
        return a.torsion_part
    return group.format_element(a)


def _group(text: str):
    try:
        return parse_group(text)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


# -- find-ordering ----------------------------------------------------------------

def cmd_find_ordering(args, cfg: RunConfig) -> Outcome:
    group = _group(args.group)
    raw = _load_json(args.sets)
    if not isinstance(raw, list) or not all(isinstance(s, list) for s in raw):
        raise InputError("sets file must hold a JSON list of lists")
    fam = SubsetFamily(group, [[group.parse_element(v) for v in s] for s in raw])
    inputs = {"group": str(group), "sets": raw, "even_last_odd_order": args.even_last_odd_order}
    if args.even_last_odd_order:
        sol = find_ordering_even(fam, cfg.budget)
    else:
        sol = find_ordering(fam, cfg.budget)
    if sol is None:
        return Outcome(EXIT_NEGATIVE, {"solution": None}, {"exhaustive": True}, inputs)
    verified = verify_ordering(sol, fam)
    result = {"table": [[_fmt(group, a) for a in row] for row in sol.table],
              "column_sums": [_fmt(group, a) for a in sol.column_sums]}
    if verified:
        result["zero_sum_row"] = [_fmt(group, a) for a in complete_to_zero_sum(sol, fam)]
    return Outcome(EXIT_OK if verified else EXIT_INTERNAL, result, {"verify_ordering": verified}, inputs)


# -- latin ----------------------------------------------------------------------------

def _transversal_entry(cube: lc.Cube, cfg: RunConfig, aligned: bool) -> tuple[bool, dict]:
    t = lc.find_latin_transversal(cube, cfg.budget, aligned=aligned)
    if t is None:
        return False, {"transversal": None}
    chk = lc.verify_transversal(t, cube)
    return True, {"transversal": t.as_dict(),
                  "verification": {"is_transversal": chk.is_transversal, "is_latin": chk.is_latin,
                                   "reason": chk.reason}}


def cmd_latin(args, cfg: RunConfig) -> Outcome:
    if args.random_cube is not None:
        if args.random_cube < 1:
            raise InputError("--random-cube needs a positive order")
        trials = args.trials or 1
        entries, all_found, all_ok = [], True, True
        for trial in range(trials):
            rng = sweeps.trial_rng(cfg.seed, trial)
            cube_seed = int(rng.integers(0, 2 ** 63))
            cube = lc.perturbed_latin_cube(args.random_cube, cube_seed)
            found, entry = _transversal_entry(cube, cfg, args.aligned)
            all_found &= found
            all_ok &= (not found) or (entry["verification"]["is_transversal"] and entry["verification"]["is_latin"])
            entries.append({"trial": trial, "cube_seed": cube_seed, "cube_is_latin": cube.latin, **entry})
        inputs = {"random_cube": args.random_cube, "trials": trials, "aligned": args.aligned}
        code = EXIT_INTERNAL if not all_ok else (EXIT_OK if all_found else EXIT_NEGATIVE)
        return Outcome(code, {"trials": entries}, {"all_found": all_found, "all_verified": all_ok}, inputs)
    if args.cube is not None:
        nested = _load_json(args.cube)
        cube = lc.Cube.from_nested(nested)
        inputs = {"cube": nested, "aligned": args.aligned}
    elif args.N is not None and args.subcube:
        A, B, C = (_load_json(p) for p in args.subcube)
        if args.N < 1:
            raise InputError("--N must be positive")
        cube = lc.subcube(lc.cayley_cube(args.N), A, B, C)
        inputs = {"N": args.N, "A": A, "B": B, "C": C, "aligned": args.aligned}
    else:
        raise InputError("give --N with --subcube A B C, --cube FILE, or --random-cube n")
    found, entry = _transversal_entry(cube, cfg, args.aligned)
    result = {"n": cube.n, "cube_is_latin": cube.latin, **entry}
    if not found:
        return Outcome(EXIT_NEGATIVE, result, {"exhaustive": True}, inputs)
    ver = result.pop("verification")
    ok = ver["is_transversal"] and ver["is_latin"]
    return Outcome(EXIT_OK if ok else EXIT_INTERNAL, result, ver, inputs)


# -- check-identity -------------------------------------------------------------------

def cmd_check_identity(args, cfg: RunConfig) -> Outcome:
    trials = args.trials or 1
    reports = []
    for trial in range(trials):
        inst = sweeps.identity_instance(args.which, sweeps.trial_rng(cfg.seed, trial), args.n)
        ok, detail = sweeps.run_identity(args.which, inst)
        reports.append({"trial": trial, "equal": ok, **detail})
    equal = sum(r["equal"] for r in reports)
    inputs = {"which": args.which, "n": args.n, "trials": trials}
    return Outcome(EXIT_OK if equal == trials else EXIT_INTERNAL, {"trials": reports},
                   {"equal": equal, "total": trials}, inputs)


# -- cn-witness -------------------------------------------------------------------------

def cmd_cn_witness(args, cfg: RunConfig) -> Outcome:
    try:
        poly_text = Path(args.poly).read_text()
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {args.poly}") from exc
    raw = _load_json(args.grid)
    if isinstance(raw, dict):
        grid = GridFamily(raw["sets"], raw.get("degrees"))
    else:
        grid = GridFamily(raw)
    ring = IntegersModP(args.field) if args.field else INTEGERS
    f = parse_poly(poly_text, grid.n, ring)
    grid = grid.reduced(ring.modulus)
    inputs = {"poly": format_poly(f), "grid": [list(s) for s in grid.sets],
              "degrees": list(grid.target_degrees), "field": args.field}
    cert = certify(f, grid, cfg.budget)
    result = {"certificate": cert.as_dict(), "polynomial": format_poly(f)}
    witness = cert.witness
    if witness is None:
        witness = witness_search(f, grid, cfg.budget)
        result["search_witness"] = None if witness is None else list(witness)
    if witness is None:
        return Outcome(EXIT_NEGATIVE, result, {"exhaustive": True}, inputs)
    value = f.evaluate(witness)
    in_grid = all(w in s for w, s in zip(witness, grid.sets))
    ver = {"witness_in_grid": in_grid, "value_nonzero": bool(value), "value": value}
    return Outcome(EXIT_OK if in_grid and value else EXIT_INTERNAL, result, ver, inputs)


# -- sumset ----------------------------------------------------------------------------------

def sumset_by_definition(A_sets, p: int, admissible) -> list[int]:
    """Sums of all tuples in the product of the A_i accepted by ``admissible`` (no pruning)."""
    return sorted({sum(t) % p for t in product(*A_sets) if admissible(t)})


def _poly_value(coeffs, x, p):
    return sum(c * x ** i for i, c in enumerate(coeffs)) % p


def _power_matrix_permanent(values, p):
    n = len(values)
    return permanent_leibniz([[v ** i for v in values] for i in range(n)]) % p


def _need_field(args, params: dict) -> int:
    p = args.field or params.get("p")
    if not p:
        raise InputError("this theorem needs --field p (or \"p\" in the params file)")
    return int(p)


def _sumset_12(args, params, cfg, rng):
    prm = SumsetParams(*(int(params[key]) for key in ("h", "k", "l", "m", "n")))
    p = _need_field(args, params)
    if "A" in params:
        inst = FieldInstance.build(p, params["A"], params["B"], params["c"], params.get("P"), params.get("Q"),
                                   params.get("S", ()), params.get("T", ()), prm.m, prm.h)
    else:
        inst = sweeps.random_field_instance(rng, prm, p, saturate=False)
    w = theorem12_witness(inst, prm, cfg.budget)
    clauses = check_theorem12_witness(w, inst)
    result = {"params": prm.as_dict(), "instance": inst.as_dict(), "witness": {"a": list(w.a), "b": list(w.b)}}
    return result, clauses


def _sumset_13(args, params, cfg, rng):
    prm = SumsetParams(*(int(params[key]) for key in ("h", "k", "l", "m", "n")))
    group = _group(args.group or params.get("group", ""))
    el = group.parse_element
    if "A" in params:
        inst = GroupInstance.build(group, [[el(v) for v in s] for s in params["A"]],
                                   [[el(v) for v in s] for s in params["B"]], [el(v) for v in params["c"]],
                                   [[el(v) for v in s] for s in params.get("S", [])],
                                   [[el(v) for v in s] for s in params.get("T", [])])
    else:
        elems = group.elements()
        pick = lambda size: [elems[int(i)] for i in sorted(rng.choice(len(elems), size=size, replace=False))]  # noqa: E731
        inst = GroupInstance.build(group, [pick(prm.k) for _ in range(prm.n)], [pick(prm.l) for _ in range(prm.n)],
                                   pick(prm.n))
    w = theorem13_witness(inst, prm, cfg.budget)
    clauses = check_theorem13_witness(w, inst, prm)
    fmt = lambda xs: [_fmt(group, a) for a in xs]  # noqa: E731
    result = {"params": prm.as_dict(), "group": str(group),
              "instance": {"A": [fmt(s) for s in inst.A], "B": [fmt(s) for s in inst.B], "c": fmt(inst.c),
                           "S": sorted(sorted(fmt(s)) for s in inst.S), "T": sorted(sorted(fmt(s)) for s in inst.T)},
              "witness": {"a": fmt(w.a), "b": fmt(w.b)}}
    return result, clauses


def _sumset_51(args, params, cfg, rng):
    p = _need_field(args, params)
    if "A" in params:
        A, P, m = params["A"], params["P"], int(params["m"])
    else:
        inst = sweeps.random_theorem51_instance(rng, int(params["n"]), int(params["k"]), int(params["m"]), p)
        A, P, m = inst["A"], inst["P"], inst["m"]
    rep = theorem51_sumset(A, P, m, p)
    n = len(A)

    def admissible(t):
        if len(set(x % p for x in t)) != n:
            return False
        return _power_matrix_permanent([_poly_value(P[j], t[j] % p, p) for j in range(n)], p) != 0

    recomputed = sumset_by_definition(A, p, admissible)
    result = {"A": A, "P": P, "m": m, "p": p, **rep.as_dict()}
    return result, {"sumset_recomputed": recomputed == rep.sumset, "bound_met": len(recomputed) >= rep.bound}


def _sumset_14(args, params, cfg, rng):
    p = _need_field(args, params)
    if "A" in params:
        A, B, c, m = params["A"], params["B"], params["c"], int(params["m"])
        forbidden = {tuple(int(x) - 1 for x in key.split(",")): v for key, v in params.get("forbidden", {}).items()}
    else:
        inst = sweeps.random_theorem14_instance(rng, int(params["n"]), int(params["k"]), int(params["m"]), p)
        A, B, c, m, forbidden = inst["A"], inst["B"], inst["c"], inst["m"], inst["forbidden"]
    rep = theorem14_check(A, B, c, forbidden, m, p)
    n = len(A)
    b = rep.extra["b"]
    bad = {key: {v % p for v in vals} for key, vals in forbidden.items()}

    def admissible(t):
        for i in range(n):
            for j in range(i + 1, n):
                if (t[i] - t[j]) % p in bad.get((i, j), ()):
                    return False
                if (t[i] * b[i] * c[i] - t[j] * b[j] * c[j]) % p == 0:
                    return False
        return True

    recomputed = sumset_by_definition(A, p, admissible)
    sdr_ok = all(x % p in {v % p for v in s} for x, s in zip(b, B)) and len({x % p for x in b}) == n
    sdr_ok = sdr_ok and _power_matrix_permanent([x * y % p for x, y in zip(b, c)], p) != 0
    result = {"A": A, "B": B, "c": c, "m": m, "p": p, **rep.as_dict()}
    return result, {"sumset_recomputed": recomputed == rep.sumset, "bound_met": len(recomputed) >= rep.bound,
                    "sdr_valid": sdr_ok}


def _sumset_c51(args, params, cfg, rng):
    p = _need_field(args, params)
    if "A" in params:
        A, b = params["A"], params["b"]
    else:
        inst = sweeps.sdr_instance(rng)
        p = inst["p"] if not (args.field or params.get("p")) else p
        A, b = [[v % p for v in s] for s in inst["A"]], [v % p for v in inst["c"]]
    a = corollary51_sdr(A, b, p)
    n = len(b)
    ok = all(x in {v % p for v in s} for x, s in zip(a, A)) and len(set(a)) == n
    per = _power_matrix_permanent([x * y % p for x, y in zip(a, b)], p)
    return {"A": A, "b": b, "p": p, "sdr": list(a)}, {"sdr_valid": ok, "permanent_nonzero": per != 0,
                                                      "permanent": per}


_SUMSET = {"1.2": _sumset_12, "1.3": _sumset_13, "1.4": _sumset_14, "5.1": _sumset_51, "c5.1": _sumset_c51}


def cmd_sumset(args, cfg: RunConfig) -> Outcome:
    params = _load_json(args.params)
    if not isinstance(params, dict):
        raise InputError("params file must hold a JSON object")
    rng = sweeps.trial_rng(cfg.seed, 0)
    try:
        result, ver = _SUMSET[args.theorem](args, params, cfg, rng)
    except KeyError as exc:
        raise InputError(f"params file is missing {exc}") from exc
    inputs = {"theorem": args.theorem, "params": params, "field": args.field, "group": args.group}
    ok = all(v for key, v in ver.items() if isinstance(v, bool))
    return Outcome(EXIT_OK if ok else EXIT_INTERNAL, result, ver, inputs)


# -- sweep ---------------------------------------------------------------------------------------

def _sweep_kwargs(args, cfg: RunConfig) -> dict:
    name, kw = args.name, {"workers": args.workers}
    if name == "theorem-1.1":
        if args.N:
            kw["Ns"] = range(2, args.N + 1)
        kw["reduced"] = not args.full
    elif name == "corollary-1.1":
        if args.N:
            kw["N_max"] = args.N
    elif name in ("latin-probe", "identities", "lemma-2.2"):
        kw["seed"] = cfg.seed
        if args.trials:
            kw["trials"] = args.trials
        if name == "latin-probe" and args.N:
            kw["n_max"] = args.N
    elif name == "bounds":
        kw["seed"] = cfg.seed
        if args.trials:
            kw["families"] = args.trials
    elif name == "cross-check":
        kw["seed"] = cfg.seed
        if args.trials:
            kw["per_tuple"] = args.trials
    elif name == "engine":
        kw["seed"] = cfg.seed
        if args.trials:
            kw["perm_trials"] = args.trials
            kw["cap_trials"] = max(1, args.trials // 2)
    return kw


def cmd_sweep(args, cfg: RunConfig) -> Outcome:
    if args.name not in sweeps.SWEEPS:
        raise InputError(f"unknown sweep {args.name!r}; choose from {sorted(sweeps.SWEEPS)}")
    if args.workers < 1:
        raise InputError("--workers must be positive")
    kw = _sweep_kwargs(args, cfg)
    res = sweeps.SWEEPS[args.name](**kw)
    inputs = {"name": args.name, **{k: (list(v) if isinstance(v, range) else v) for k, v in kw.items()
                                    if k != "workers"}}
    out = res.as_dict()
    return Outcome(EXIT_OK if res.ok else EXIT_INTERNAL, out, {"passed": res.passed, "total": res.total}, inputs)


# -- driver ----------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="max search nodes / evaluations")
    common.add_argument("--out", default=None, help="also write the report to this file")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")

    parser = _Parser(prog="addcomb", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("find-ordering", parents=[common], help="distinct-sum ordering of a subset family")
    p.add_argument("--group", required=True)
    p.add_argument("--sets", required=True)
    p.add_argument("--even-last-odd-order", action="store_true")
    p.set_defaults(handler=cmd_find_ordering)

    p = sub.add_parser("latin", parents=[common], help="Latin transversal of a cube")
    p.add_argument("--N", type=int)
    p.add_argument("--subcube", nargs=3, metavar=("A", "B", "C"))
    p.add_argument("--cube")
    p.add_argument("--random-cube", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--aligned", action="store_true", help="require the alphabet-aligned transversal shape")
    p.set_defaults(handler=cmd_latin)

    p = sub.add_parser("check-identity", parents=[common], help="evaluate both sides of an identity")
    p.add_argument("--which", required=True, choices=["2.1", "2.2", "3.1", "3.2", "3.3"])
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int)
    p.set_defaults(handler=cmd_check_identity)

    p = sub.add_parser("cn-witness", parents=[common], help="Nullstellensatz certificate and witness")
    p.add_argument("--poly", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--field", type=int)
    p.set_defaults(handler=cmd_cn_witness)

    p = sub.add_parser("sumset", parents=[common], help="restricted sumset witnesses and bounds")
    p.add_argument("--theorem", required=True, choices=sorted(_SUMSET))
    p.add_argument("--params", required=True)
    p.add_argument("--field", type=int)
    p.add_argument("--group")
    p.set_defaults(handler=cmd_sumset)

    p = sub.add_parser("sweep", parents=[common], help="run a named verification sweep")
    p.add_argument("name")
    p.add_argument("--N", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--full", action="store_true", help="disable symmetry reduction (theorem-1.1)")
    p.set_defaults(handler=cmd_sweep)
    return parser


def run(argv: list[str]) -> tuple[int, Report]:
    command = argv[0] if argv else ""
    cfg = RunConfig(command)
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(args.command, args.seed, args.budget, args.out, args.timing)
        if cfg.budget is not None and cfg.budget < 0:
            raise InputError("--budget must be non-negative")
        outcome = args.handler(args, cfg)
        code, result, ver, inputs = outcome.exit_code, outcome.result, outcome.verification, outcome.inputs
    except BudgetExceeded as exc:
        code, result, ver, inputs = EXIT_BUDGET, {"error": str(exc)}, {}, None
    except InconsistencyError as exc:
        code, result, ver, inputs = EXIT_INTERNAL, {"error": str(exc)}, {}, None
    except (InputError, PreconditionError, ValueError, TypeError, KeyError) as exc:
        code, result, ver, inputs = EXIT_INPUT, {"error": f"{type(exc).__name__}: {exc}"}, {}, None
    status = {EXIT_OK: "verified", EXIT_INPUT: "input-error", EXIT_NEGATIVE: "no-solution",
              EXIT_BUDGET: "budget-exhausted", EXIT_INTERNAL: "inconsistent"}[code]
    report = Report(cfg.command, status, code, {"seed": cfg.seed, "budget": cfg.budget},
                    digest(cfg.command, inputs if inputs is not None else argv[1:]), result, ver, out=cfg.out)
    if cfg.timing:
        report.timing = {"elapsed_s": round(time.perf_counter() - t0, 4)}
    return code, report


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    code, report = run(argv)
    text = report.to_json()
    sys.stdout.write(text)
    if report.out:
        Path(report.out).write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
