"""Run the solver over the seeded random grid and print one row per cell.

    python scripts/solver_grid.py --seeds 50 --ks 2,3,4
"""
import argparse
import time

from necklace.divisions import verify
from necklace.errors import SearchExhausted
from necklace.instances import compositions, random_instance
from necklace.solver import SolverConfig, is_prime, solve


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, default=50)
    parser.add_argument("--ks", default="2,3,4")
    parser.add_argument("--dims", default="1,2")
    parser.add_argument("--ns", default="1,2,3")
    parser.add_argument("--grid", type=int, default=8, help="max cells per axis")
    parser.add_argument("--restarts", type=int, default=32)
    args = parser.parse_args()
    config = SolverConfig(restarts=args.restarts)

    print(f"{'d':>2} {'n':>2} {'k':>2} {'solved':>7} {'exhausted':>9} {'total s':>8} {'worst s':>8}")
    for d in map(int, args.dims.split(",")):
        for n in map(int, args.ns.split(",")):
            for k in map(int, args.ks.split(",")):
                comps = list(compositions(n * (k - 1), d))
                tol = config.tolerance if is_prime(k) else config.composite_tolerance
                solved = exhausted = 0
                worst = 0.0
                start = time.perf_counter()
                for s in range(args.seeds):
                    m = comps[s % len(comps)]
                    inst = random_instance(1000 * s + 7, n, d, k, args.grid, m)
                    t = time.perf_counter()
                    try:
                        div = solve(inst.measures, k, m, config)
                    except SearchExhausted as exc:
                        exhausted += 1
                        print(f"   exhausted: seed index {s}, m={m}: {exc}")
                        continue
                    worst = max(worst, time.perf_counter() - t)
                    solved += verify(div, inst.measures, tol, m).passed
                total = time.perf_counter() - start
                print(f"{d:>2} {n:>2} {k:>2} {solved:>7} {exhausted:>9} {total:>8.2f} {worst:>8.2f}",
                      flush=True)


if __name__ == "__main__":
    main()
