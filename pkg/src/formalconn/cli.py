"""Command-line surface: verify, canonicalize, invariants.

verify runs the claim suite over a parameter grid and exits 0 exactly
when every requested check passes; with --out it writes the JSON report,
a CSV summary next to it, and per-type polygon and pole figures.  The
other two commands operate on connection files produced by this package
(or by hand, following the published schema).
"""

import argparse
import csv
import os
import sys
from fractions import Fraction

from . import serialize, suite
from .errors import FormalConnError
from .newton import (
    adjoint_irregularity,
    connection_slope,
    irregular_branches,
    matrix_irregularity,
)
from .opers import canonicalize as canonicalize_conn
from .connection import monodromy_type


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError("not an exact rational: %r" % text) from exc


def _build_parser():
    p = argparse.ArgumentParser(
        prog="formalconn",
        description="exact local invariants and canonical forms of formal "
                    "connections for the simple types",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run claim-level verification jobs")
    v.add_argument("--claim", default="all",
                   help="claim id or comma list; default all")
    v.add_argument("--type", dest="letter", default=None,
                   help="series letter A|B|C|D|G")
    v.add_argument("--rank", type=int, default=None)
    v.add_argument("--lambda", dest="lam", type=_fraction, action="append",
                   default=None, help="extra eigenvalue parameter p/q; "
                   "repeatable; added to the default grid {1, 2, 1/3}")
    v.add_argument("--rep", choices=["adjoint", "defining"], default=None)
    v.add_argument("--trunc", type=int, default=None,
                   help="working truncation order, recorded in the report")
    v.add_argument("--point", dest="points", type=_fraction, action="append",
                   default=None, help="marked point for the level checks; repeatable")
    v.add_argument("--out", default=None, help="report JSON path")
    v.add_argument("--no-figures", action="store_true",
                   help="skip figure rendering on the report path")

    c = sub.add_parser("canonicalize", help="reduce a connection file to "
                       "its canonical coefficients")
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--out", default=None, help="canonical form JSON path")

    i = sub.add_parser("invariants", help="print residue, slope, "
                       "irregularity and exponent data of a connection file")
    i.add_argument("--in", dest="infile", required=True)
    i.add_argument("--rep", choices=["adjoint", "defining"], default=None)
    return p


def _verify_config(args):
    cfg = suite.default_config()
    if args.claim != "all":
        cfg["claims"] = sorted(set(args.claim.split(",")))
    if args.letter is not None:
        if args.rank is None:
            raise SystemExit("--type needs --rank")
        cfg["types"] = ["%s%d" % (args.letter.upper(), args.rank)]
    elif args.rank is not None:
        raise SystemExit("--rank needs --type")
    if args.lam:
        grid = list(cfg["lambdas"])
        for lam in args.lam:
            if lam not in grid:
                grid.append(lam)
        cfg["lambdas"] = grid
    if args.points:
        cfg["points"] = list(args.points)
    if args.rep is not None:
        cfg["rep"] = args.rep
    if args.trunc is not None:
        cfg["trunc"] = args.trunc
    return cfg


def _write_report_files(args, cfg, reports, passed):
    out = args.out
    payload = {
        "schema": serialize.SCHEMA,
        "config": serialize.jsonable(
            {k: v for k, v in cfg.items()}),
        "pass": passed,
        "reports": [r.to_json() for r in reports],
    }
    serialize.dump(payload, out)
    stem, _ = os.path.splitext(out)
    with open(stem + ".csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["claim", "parameters", "pass", "error"])
        for r in reports:
            w.writerow([
                r.claim,
                ";".join("%s=%s" % kv for kv in sorted(
                    (k, v) for k, v in serialize.jsonable(r.parameters).items())),
                "pass" if r.passed else "fail",
                r.error or "",
            ])
    made = [out, stem + ".csv"]
    if not args.no_figures:
        from .connection import frenkel_gross_connection
        from .plots import newton_polygon_figure, pole_pattern_figure

        lam = cfg["lambdas"][0]
        for name in cfg["types"]:
            try:
                conn = frenkel_gross_connection(name, lam, at="infinity")
                made.append(newton_polygon_figure(
                    conn, "%s_polygon_%s.png" % (stem, name),
                    title="%s at infinity, parameter %s" % (name, lam)))
                oper, _ = canonicalize_conn(conn)
                made.append(pole_pattern_figure(
                    oper, "%s_poles_%s.png" % (stem, name),
                    title="%s canonical poles at infinity" % name))
            except FormalConnError as exc:
                print("figure for %s skipped: %s" % (name, exc), file=sys.stderr)
    return made


def _cmd_verify(args):
    cfg = _verify_config(args)
    reports = suite.run_suite(cfg)
    passed = suite.suite_passed(reports)
    for r in reports:
        tag = "PASS" if r.passed else "FAIL"
        params = serialize.jsonable(r.parameters)
        detail = " ".join("%s=%s" % kv for kv in params.items())
        line = "[%s] %s %s" % (tag, r.claim, detail)
        if r.error:
            line += "  (%s)" % r.error
        print(line)
    print("%d/%d checks passed" % (sum(r.passed for r in reports), len(reports)))
    if args.out:
        for path in _write_report_files(args, cfg, reports, passed):
            print("wrote", path)
    return 0 if passed else 1


def _cmd_canonicalize(args):
    conn = serialize.connection_from_json(serialize.load(args.infile))
    oper, _ = canonicalize_conn(conn)
    payload = serialize.oper_to_json(oper)
    if args.out:
        serialize.dump(payload, args.out)
        print("wrote", args.out)
    else:
        import json

        json.dump(payload, sys.stdout, indent=1)
        print()
    profile = oper.pole_profile()
    print("pole profile:", profile, "slope:", oper.slope())
    return 0


def _cmd_invariants(args):
    conn = serialize.connection_from_json(serialize.load(args.infile))
    rep = args.rep
    print("coordinate:", conn.variable)
    print("pole order:", conn.pole_order())
    if conn.is_regular_singular():
        if conn.structured:
            print("monodromy:", monodromy_type(conn))
        else:
            print("monodromy: regular singular (matrix input; residue "
                  "classification needs the structured form)")
    slope = connection_slope(conn, rep)
    print("slope:", slope)
    if conn.structured:
        print("adjoint irregularity:", adjoint_irregularity(conn))
    else:
        print("irregularity:", matrix_irregularity(conn.matrix()))
    for b in irregular_branches(conn, rep):
        terms = "(not split over a supported tower)"
        if b.leading_terms:
            terms = ", ".join(
                "%s * v^%s" % (repr(c), e) for c, e in b.leading_terms
            )
        print("branch: valuation %s multiplicity %d slope %s exponents %s"
              % (b.root_valuation, b.multiplicity, b.slope, terms))
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "canonicalize":
            return _cmd_canonicalize(args)
        return _cmd_invariants(args)
    except FormalConnError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
