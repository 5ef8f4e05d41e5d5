"""Tabulate cell counts, GF(2) Betti numbers, Euler characteristics and shelling data.

    python scripts/rainbow_tables.py --k 2,3 square simplex:3
"""
import argparse

from necklace import rainbow
from necklace.polytope import parse_polytope

BASES = ["point", "simplex:1", "simplex:2", "simplex:3", "square", "polygon:5", "xpoly:2",
         "prod:simplex:2,simplex:1"]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--k", default="2,3")
    parser.add_argument("bases", nargs="*", default=BASES, help="polytope specs, e.g. cube:3")
    args = parser.parse_args()
    bases = args.bases
    ks = [int(x) for x in args.k.split(",")]

    header = f"{'base':<26} {'k':>2} {'cells':<22} {'reduced betti':<20} {'chi':>6} {'formula':>8} {'spheres':>8}"
    print(header)
    print("-" * len(header))
    for spec in bases:
        base = parse_polytope(spec)
        for k in ks:
            cx = rainbow.build(base, k)
            hom = rainbow.homology_mod2(cx)
            euler = rainbow.euler_report(base, k)
            shell = rainbow.lex_shelling_check(base, k)
            flag = "" if euler.agree else "  (differs)"
            print(f"{spec:<26} {k:>2} {str(cx.counts()):<22} {str(hom.reduced):<20} "
                  f"{euler.direct:>6} {euler.formula:>8} {shell.sphere_count:>8}{flag}")


if __name__ == "__main__":
    main()
