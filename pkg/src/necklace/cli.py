"""Command-line entry point: ``necklace solve|verify|complex|necklace1d|gen``.

Exit codes: 0 success, 1 search exhausted or verification failed, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from . import rainbow
from .divisions import Division, verify
from .errors import NecklaceError, SearchExhausted
from .instances import Instance, random_instance
from .measures import bead_necklace_to_measures
from .polytope import parse_polytope
from .solver import SolverConfig, is_prime, solve, solve_discrete_1d

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


class InputError(Exception):
    pass


def _line_of(text: str, key: str) -> int:
    match = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, match.start()) + 1 if match else 1


def _load(path: str, parse, keys=("k", "m", "measures", "cuts", "labels")):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}:1: cannot read file: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return parse(obj)
    except NecklaceError as exc:
        msg = str(exc)
        line = 1
        for key in keys:
            if key in msg:
                line = _line_of(text, key)
                break
        raise InputError(f"{path}:{line}: {msg}") from exc


def _emit(payload: dict, as_json: bool, table_lines) -> None:
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for line in table_lines:
            print(line)


def _mass_table(report) -> list:
    lines = []
    if not report.masses:
        return lines
    k = len(report.masses[0])
    lines.append("measure " + " ".join(f"{'color ' + str(c):>12}" for c in range(1, k + 1)))
    for j, row in enumerate(report.masses, start=1):
        lines.append(f"{j:>7} " + " ".join(f"{x:>12.9f}" for x in row))
    return lines


def _report_lines(report) -> list:
    status = "PASS" if report.passed else "FAIL"
    lines = [
        f"status        {status}",
        f"residual norm {report.residual:.3e} (tolerance {report.tolerance:g})",
        f"cut counts    {list(report.cut_counts)}"
        + ("" if report.expected_counts is None else f" (expected {list(report.expected_counts)})"),
    ]
    lines += _mass_table(report)
    for j, c, dev in report.deviations():
        lines.append(f"deviation: measure {j}, color {c}: {dev:+.3e}")
    return lines


def cmd_solve(args) -> int:
    inst = _load(args.instance, Instance.from_json)
    config = SolverConfig(tolerance=args.tol, restarts=args.restarts, budget=args.budget,
                          seed=args.seed, workers=args.workers)
    try:
        division = solve(inst.measures, inst.k, inst.m, config)
        code = EXIT_OK
    except SearchExhausted as exc:
        logging.getLogger(__name__).warning("%s", exc)
        division = exc.best
        code = EXIT_FAIL
    report = None
    if division is not None:
        tol = args.tol if is_prime(inst.k) else max(args.tol, config.composite_tolerance)
        report = verify(division, inst.measures, tol, inst.m)
        if args.out:
            Path(args.out).write_text(json.dumps(division.to_json(), indent=2) + "\n")
    payload = {
        "status": "solved" if code == EXIT_OK else "search_exhausted",
        "division": None if division is None else division.to_json(),
        "report": None if report is None else report.to_json(),
    }
    lines = [f"status        {payload['status']}"]
    if division is not None:
        lines += [f"cuts          {[list(c) for c in division.cuts.cuts]}",
                  f"labels        {list(division.labels)}"]
        lines += _report_lines(report)[1:]
    _emit(payload, args.json, lines)
    return code


def cmd_verify(args) -> int:
    inst = _load(args.instance, Instance.from_json)
    division = _load(args.division, Division.from_json)
    if division.dimension != inst.measures.dimension:
        raise InputError(
            f"{args.division}:{1}: division has dimension {division.dimension}, "
            f"instance has dimension {inst.measures.dimension}"
        )
    if division.k != inst.k:
        raise InputError(f"{args.division}:1: division has k={division.k}, instance has k={inst.k}")
    report = verify(division, inst.measures, args.tol, inst.m)
    _emit(report.to_json(), args.json, _report_lines(report))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_complex(args) -> int:
    if args.analysis == "connectivity":
        if not args.m:
            raise InputError("connectivity needs --m, e.g. --m 1,1")
        m = [int(x) for x in args.m.split(",")]
        out = rainbow.connectivity_report(m, args.k, args.max_cells)
        lines = [f"{key:<22}{value}" for key, value in out.items()]
        _emit(out, args.json, lines)
        return EXIT_OK if out["pure"] and out["low_homology_vanishes"] else EXIT_FAIL
    if not args.polytope:
        raise InputError("--polytope is required")
    base = parse_polytope(args.polytope)
    if args.analysis == "euler":
        out = rainbow.euler_report(base, args.k).to_json()
        lines = [f"euler_direct   {out['euler_direct']}",
                 f"euler_formula  {out['euler_formula']}",
                 f"agree          {out['agree']}"]
        if out["note"]:
            lines.append(f"note           {out['note']}")
        _emit(out, args.json, lines)
        return EXIT_OK
    if args.analysis == "homology":
        cx = rainbow.build(base, args.k, args.max_cells)
        hom = rainbow.homology_mod2(cx)
        out = {"polytope": base.name, "k": args.k, "cell_counts": list(cx.counts()),
               "betti": hom.betti, "reduced_betti": hom.reduced, "euler": hom.euler()}
        lines = [f"cells per dimension  {out['cell_counts']}"]
        lines += [f"B_{i} (reduced)        {b}" for i, b in enumerate(hom.reduced)]
        lines.append(f"euler characteristic {hom.euler()}")
        _emit(out, args.json, lines)
        return EXIT_OK
    if args.analysis == "shelling":
        rep = rainbow.lex_shelling_check(base, args.k)
        out = rep.to_json()
        kinds = rep.kinds()
        lines = [f"top cells      {len(rep.steps)}",
                 f"first          {kinds['first']}",
                 f"type (a)       {kinds['a']}",
                 f"type (b)       {kinds['b']}",
                 f"sphere count   {rep.sphere_count}",
                 f"verified       {rep.ok}"]
        lines += [f"failure: {f}" for f in rep.failures]
        _emit(out, args.json, lines)
        return EXIT_OK if rep.ok else EXIT_FAIL
    if args.analysis == "action":
        out = rainbow.zp_action_check(rainbow.build(base, args.k, args.max_cells), args.k)
        _emit(out, args.json, [f"{key:<10}{value}" for key, value in out.items()])
        return EXIT_OK
    if args.analysis == "crosscheck":
        out = rainbow.sphere_count_crosscheck(base, args.k, args.max_cells)
        _emit(out, args.json, [f"{key:<20}{value}" for key, value in out.items()])
        return EXIT_OK
    raise InputError(f"unknown analysis {args.analysis!r}")


def cmd_necklace1d(args) -> int:
    beads = args.beads
    if re.fullmatch(r"[0-9,\s]+", beads):
        beads = [int(x) for x in beads.replace(" ", "").split(",") if x]
    split = solve_discrete_1d(beads, args.k)
    measures = bead_necklace_to_measures(beads)
    division = split.to_division(len(measures[0].values), args.k)
    report = verify(division, measures, 1e-12)
    out = {"cuts_after_bead": list(split.cuts), "thieves": list(split.thieves),
           "division": division.to_json(), "residual_norm": report.residual}
    lines = [f"cuts after beads {list(split.cuts)}",
             f"piece thieves    {list(split.thieves)}",
             f"residual norm    {report.residual:.3e}"]
    _emit(out, args.json, lines)
    return EXIT_OK


def cmd_gen(args) -> int:
    m = None
    if args.m:
        m = tuple(int(x) for x in args.m.split(","))
    inst = random_instance(args.seed, args.n, args.d, args.k, args.grid, m)
    text = json.dumps(inst.to_json(), sort_keys=True, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="necklace", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tol=1e-6):
        p.add_argument("--tol", type=float, default=tol)
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("solve", help="find a fair division for an instance file")
    p.add_argument("instance")
    p.add_argument("--out", help="write the division JSON here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a division against an instance")
    p.add_argument("instance")
    p.add_argument("division")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("complex", help="rainbow complex analyses")
    p.add_argument("analysis", choices=["euler", "homology", "shelling", "action",
                                        "crosscheck", "connectivity"])
    p.add_argument("--polytope")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", help="simplex dimensions for connectivity, e.g. 1,1")
    p.add_argument("--max-cells", type=int, default=rainbow.MAX_CELLS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("necklace1d", help="exact split of a bead necklace")
    p.add_argument("beads", help='letters ("AABB") or comma-separated color ids')
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_necklace1d)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--grid", type=int, default=8, help="max cells per axis")
    p.add_argument("--m", help="per-axis cut counts; default deals n(k-1) cuts evenly")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NecklaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
