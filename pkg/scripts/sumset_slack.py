"""How far above the guaranteed lower bound do restricted sumsets land?

For each grid tuple the smallest observed |C| (distinct-value permanent
condition) and |S| (forbidden differences) over random families is printed
next to the bound.  A slack of 0 means the bound was attained.

    python3 scripts/sumset_slack.py --families 50 --seed 1
"""
import argparse

from addcomb import sweeps
from addcomb.sumsets import theorem14_check, theorem51_sumset


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--families", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'kind':6s} {'n':>2s} {'k':>2s} {'m':>2s} {'p':>3s} {'bound':>5s} {'min':>4s} {'slack':>5s}")
    idx = 0
    for n, k, m, p in sweeps.theorem51_grid():
        sizes = []
        for _ in range(args.families):
            inst = sweeps.random_theorem51_instance(sweeps.trial_rng(args.seed, idx), n, k, m, p)
            idx += 1
            rep = theorem51_sumset(inst["A"], inst["P"], m, p)
            sizes.append(rep.size)
        print(f"{'perm':6s} {n:2d} {k:2d} {m:2d} {p:3d} {rep.bound:5d} {min(sizes):4d} {min(sizes) - rep.bound:5d}")
    for n, k, m, p in sweeps.theorem14_grid():
        sizes = []
        for _ in range(args.families):
            inst = sweeps.random_theorem14_instance(sweeps.trial_rng(args.seed, idx), n, k, m, p)
            idx += 1
            rep = theorem14_check(inst["A"], inst["B"], inst["c"], inst["forbidden"], m, p)
            sizes.append(rep.size)
        print(f"{'diff':6s} {n:2d} {k:2d} {m:2d} {p:3d} {rep.bound:5d} {min(sizes):4d} {min(sizes) - rep.bound:5d}")


if __name__ == "__main__":
    main()
