"""Command-line front end.

Exit codes: 0 success, 1 acceptance failure, 2 usage error, 3 size guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import bbsets, series
from .cayley import GeneratorSet, build_subgraph, density_report, symmetric_property_check
from .forest import enumerate_forests, enumerate_marked_forests
from .interval import Interval
from .series import GuardError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


def _interval_json(iv: Interval) -> dict:
    return iv.to_json()


def _dump(obj, out) -> None:
    json.dump(obj, out, indent=2, sort_keys=True)
    out.write("\n")


def cmd_series(args, out) -> int:
    table = series.series(args.kind, args.k, args.n)
    out.write(table.to_csv())
    return EXIT_OK


def cmd_xi(args, out) -> int:
    _dump(series.xi(args.k, args.tol).to_json(), out)
    return EXIT_OK


def cmd_limits(args, out) -> int:
    k, tol = args.k, args.tol
    bb_prime = series.density_limit_bb_prime(k, tol)
    thm2 = series.density_limit_thm2(k, tol)
    payload = {
        "k": k,
        "xi": series.xi(k, tol).to_json(),
        "density_limit_bb": _interval_json(series.density_limit_bb(k, tol)),
        "density_limit_bb_three": _interval_json(series.density_limit_bb_three(k, tol)),
        "density_limit_bb_prime": _interval_json(bb_prime),
        "density_limit_thm2": _interval_json(thm2),
        "p_at_xi": _interval_json(series.p_at_xi(k, tol)),
        "p_limit": _interval_json(series.p_limit()),
        "bb_prime_gt_3_5": bb_prime.certainly_gt(3.5),
        "bb_prime_gt_3_5004": bb_prime.certainly_gt(3.5004),
        "thm2_gt_5": thm2.certainly_gt(5),
        "thm2_gt_5_0008": thm2.certainly_gt(5.0008),
    }
    if args.min_k:
        payload["min_k_bb_prime_gt_3_5"] = series.minimal_k_exceeding(3.5)
        payload["min_k_thm2_gt_5"] = series.minimal_k_exceeding(5, series.density_limit_thm2)
    _dump(payload, out)
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    if args.marked:
        for v in enumerate_marked_forests(args.n, args.k):
            out.write(str(v) + "\n")
    else:
        for trees in enumerate_forests(args.n, args.k):
            out.write(" ".join(str(t) for t in trees) + "\n")
    return EXIT_OK


def cmd_graph(args, out) -> int:
    gens = GeneratorSet.parse(args.gens)
    g = build_subgraph(enumerate_marked_forests(args.n, args.k), gens, args.k)
    report = density_report(g)
    payload = {"n": args.n, "k": args.k, "gens": gens.name, **report.to_json()}
    payload["symmetric_property"] = symmetric_property_check(g)
    if args.edges:
        with open(args.edges, "w") as fh:
            fh.write(g.export_edges())
    _dump(payload, out)
    return EXIT_OK


def cmd_special(args, out) -> int:
    occ = [o.to_json() for o in bbsets.find_special_occurrences(args.n, args.k)]
    _dump({"n": args.n, "k": args.k, "count": len(occ), "occurrences": occ}, out)
    return EXIT_OK


def cmd_surgery(args, out) -> int:
    gens = GeneratorSet.parse(args.gens)
    _dump(bbsets.surgery_json(args.n, args.k, gens), out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .verify import run_all

    results = run_all(args.workers)
    for r in results:
        out.write(r.line() + "\n")
        if args.verbose or not r.ok:
            for d in r.details:
                out.write(f"    {d}\n")
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thompson-density",
        description="Marked forests, Belk-Brown sets and density bounds for Thompson's group F.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="coefficient table as CSV")
    p.add_argument("--kind", choices=sorted(series.SERIES), required=True)
    p.add_argument("--k", type=_nonneg, required=True)
    p.add_argument("--n", type=_nonneg, default=64, help="truncation order")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("xi", help="certified enclosure of the root of Phi_k = 1")
    p.add_argument("--k", type=_nonneg, required=True)
    p.add_argument("--tol", type=float, default=1e-13)
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("limits", help="limit densities at height bound k")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--min-k", action="store_true", help="also report the smallest k beating 3.5 and 5")
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("enumerate", help="list forests or marked forests")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_nonneg, default=None)
    p.add_argument("--marked", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    for name, func, default_gens in (("graph", cmd_graph, "x0x1"), ("surgery", cmd_surgery, "x0x1")):
        p = sub.add_parser(name, help=f"{name} report for BB(n, k)")
        p.add_argument("--n", type=_positive, required=True)
        p.add_argument("--k", type=_nonneg if name == "graph" else _positive, required=True)
        p.add_argument("--gens", choices=["x0x1", "x0x1x2"], default=default_gens)
        if name == "graph":
            p.add_argument("--edges", metavar="FILE", help="also write the edge list here")
        p.set_defaults(func=func)

    p = sub.add_parser("special", help="special occurrences in BB(n, k)")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.set_defaults(func=cmd_special)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--workers", type=_positive, default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
