"""Run every named sweep and write one JSON report per sweep.

    python3 scripts/run_sweeps.py --out results/ --seed 0 --workers 4
"""
import argparse
import json
import time
from pathlib import Path

from addcomb import sweeps


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--only", nargs="*", default=None, help="subset of sweep names")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    names = args.only or list(sweeps.SWEEPS)
    seeded = {"latin-probe", "identities", "lemma-2.2", "bounds", "cross-check", "engine"}
    failed = []
    for name in names:
        kw = {"workers": args.workers}
        if name in seeded:
            kw["seed"] = args.seed
        t0 = time.perf_counter()
        res = sweeps.SWEEPS[name](**kw)
        dt = time.perf_counter() - t0
        (out / f"{name}.json").write_text(json.dumps(res.as_dict(), indent=2, sort_keys=True) + "\n")
        print(f"{name:16s} {res.passed:6d}/{res.total:<6d} {'ok' if res.ok else 'FAILED':6s} {dt:7.2f}s")
        if not res.ok:
            failed.append(name)
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
