"""Compare the exact bead-necklace search with the continuous solver on every small necklace.

    python scripts/necklace_oracle.py --max-beads 12 --colors 3 --all
"""
import argparse
import time
from collections import Counter

from necklace.divisions import verify
from necklace.instances import bead_necklaces
from necklace.measures import bead_necklace_to_measures
from necklace.solver import solve, solve_discrete_1d


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-beads", type=int, default=12)
    parser.add_argument("--colors", type=int, default=3)
    parser.add_argument("--ks", default="2,3")
    parser.add_argument("--all", action="store_true",
                        help="do not identify a necklace with its reversal")
    args = parser.parse_args()

    for k in map(int, args.ks.split(",")):
        start = time.perf_counter()
        cuts_used = Counter()
        failures = 0
        count = 0
        for beads in bead_necklaces(args.max_beads, args.colors, k, up_to_reversal=not args.all):
            count += 1
            n = max(beads)
            split = solve_discrete_1d(beads, k)
            cuts_used[(n, len(split.cuts))] += 1
            measures = bead_necklace_to_measures(beads)
            div = solve(measures, k, (n * (k - 1),))
            if not verify(div, measures, 1e-6, (n * (k - 1),)).passed:
                failures += 1
                print("continuous solver failed on", "".join(chr(64 + c) for c in beads))
        elapsed = time.perf_counter() - start
        print(f"k={k}: {count} necklaces, {failures} failures, {elapsed:.1f} s")
        for (n, used), num in sorted(cuts_used.items()):
            print(f"   n={n}: {num:>6} necklaces need exactly {used} cuts (bound {n * (k - 1)})")


if __name__ == "__main__":
    main()
