"""Command-line front end.

Subcommands: ``law-check`` (run law suites, one JSON report per line),
``apply-law`` (evaluate a distributive law on a finite valuation over a
hyperspace), ``interp`` (denote a program and query a fork), ``canon``
(canonicalize a generated convex set), ``report`` (summarize report streams).

Exit codes: 0 all checks pass, 1 failing reports, 2 usage or schema errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import harness, weaklaw
from .convex import canonicalize_generators
from .errors import ForgeError, SchemaError
from .harness import ALL_LAWS, LawReport, run_suites
from .interp import denote_program, query_fork
from .io_schemas import (
    SCHEMA,
    format_fraction,
    genset_json,
    load_json,
    parse_genset,
    parse_model,
    parse_monotone_map,
    parse_mu,
    parse_poset,
    parse_program,
)

MAX_POINTS = 8
LAW_OF_HYPER = {"S": weaklaw.SHARP, "H": weaklaw.FLAT, "QL": weaklaw.NATURAL,
                "Lens": weaklaw.LENS_LAW}


def _common(sub):
    sub.add_argument("--seed", type=int, default=0, help="u64 seed for instance generation")
    sub.add_argument("--budget", type=int, default=50, help="random instances per law")
    sub.add_argument("--max-points", type=int, default=MAX_POINTS,
                     help="refuse posets larger than this (default 8)")
    sub.add_argument("--format", choices=("json", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="monad-forge")
    subs = ap.add_subparsers(dest="command", required=True)

    lc = subs.add_parser("law-check", help="run law suites against a poset")
    lc.add_argument("--law", default="all",
                    help="all, or one of: " + ", ".join(ALL_LAWS))
    lc.add_argument("--poset", required=True, help="poset JSON file ('-' for stdin)")
    _common(lc)

    al = subs.add_parser("apply-law", help="apply a weak distributive law")
    al.add_argument("--law", choices=("sharp", "flat", "natural", "lens"), default=None)
    al.add_argument("--mu", required=True, help="mu JSON file ('-' for stdin)")
    al.add_argument("--poset", default=None, help="poset JSON (optional if embedded in mu file)")
    _common(al)

    it = subs.add_parser("interp", help="denote a program and query a fork")
    it.add_argument("--program", required=True, help="program JSON file ('-' for stdin)")
    it.add_argument("--h", required=True, help="monotone map JSON file")
    it.add_argument("--at", required=True, help="start point")
    it.add_argument("--poset", default=None, help="poset JSON (optional if embedded)")
    _common(it)

    cn = subs.add_parser("canon", help="canonicalize a generated convex set")
    cn.add_argument("--input", required=True, help="generated-set JSON file ('-' for stdin)")
    cn.add_argument("--poset", required=True)
    _common(cn)

    rp = subs.add_parser("report", help="summarize a law-report stream")
    rp.add_argument("--input", default="-", help="JSON-lines report file ('-' for stdin)")
    _common(rp)
    return ap


def _load_poset(args, doc=None):
    if args.poset is not None:
        model = parse_model(load_json(args.poset))
        p = model["poset"]
    elif doc is not None and "poset" in doc:
        p = parse_poset(doc["poset"])
    else:
        raise SchemaError("no poset given (use --poset or embed one)")
    if len(p.elements) > args.max_points:
        raise SchemaError(
            f"poset has {len(p.elements)} points, over the --max-points {args.max_points} guard")
    return p


def _emit_reports(reports: list[LawReport], fmt: str) -> int:
    failures = 0
    for r in reports:
        if fmt == "json":
            print(json.dumps(r.to_json(), sort_keys=True))
        else:
            mark = {"pass": "ok  ", "fail": "FAIL", "skip": "skip"}[r.verdict]
            print(f"[{mark}] {r.suite:16s} {r.law:26s} checks={r.checks:6d} "
                  f"{r.elapsed_ms:9.1f}ms")
            if r.verdict != "pass" and r.instance:
                print(f"       instance: {json.dumps(r.instance, default=str)}")
            if r.verdict == "fail" and r.certificate:
                print(f"       certificate: {json.dumps(r.certificate, default=str)}")
        failures += r.verdict == "fail"
    if fmt == "text":
        total = len(reports)
        print(f"-- {total} laws, {failures} failing")
    return 1 if failures else 0


def cmd_law_check(args) -> int:
    p = _load_poset(args)
    laws = ALL_LAWS if args.law == "all" else [args.law]
    for law in laws:
        if law not in ALL_LAWS:
            raise SchemaError(f"unknown law {law!r}; choose from {', '.join(ALL_LAWS)}")
    reports = run_suites(laws, p, budget=args.budget, seed=args.seed)
    return _emit_reports(reports, args.format)


def cmd_apply_law(args) -> int:
    doc = load_json(args.mu)
    p = _load_poset(args, doc)
    body = doc.get("mu", doc)
    hyper, mu = parse_mu(body, p)
    law = args.law or doc.get("law")
    if law is None:
        law = LAW_OF_HYPER[hyper]
    if "law" in doc and args.law and doc["law"] != args.law:
        raise SchemaError(f"--law {args.law} conflicts with the file's law {doc['law']!r}")
    expected = LAW_OF_HYPER[hyper]
    if law != expected:
        raise SchemaError(f"law {law!r} does not match atom shape ({expected!r} expected)")
    result = weaklaw.lambda_apply(law, p, mu)
    out = genset_json(result)
    if mu.kind == "general":
        out["note"] = "unnormalized (general-kind) input"
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_interp(args) -> int:
    doc = load_json(args.program)
    p = _load_poset(args, doc)
    prog = parse_program(doc.get("program", doc), p)
    h = parse_monotone_map(load_json(args.h), p)
    if args.at not in p.elements:
        raise SchemaError(f"unknown start point {args.at!r}")
    family = denote_program(p, prog)
    lo, hi = query_fork(family, args.at, h)
    print(json.dumps({"schema": SCHEMA, "lower": format_fraction(lo),
                      "upper": format_fraction(hi)}, sort_keys=True))
    return 0


def cmd_canon(args) -> int:
    p = _load_poset(args)
    s = parse_genset(load_json(args.input), p)
    print(json.dumps(genset_json(canonicalize_generators(s)), sort_keys=True))
    return 0


def cmd_report(args) -> int:
    raw = sys.stdin.read() if args.input == "-" else open(args.input).read()
    reports = []
    for i, line in enumerate(filter(None, map(str.strip, raw.splitlines()))):
        try:
            reports.append(LawReport.from_json(json.loads(line)))
        except (json.JSONDecodeError, KeyError) as exc:
            raise SchemaError(f"bad report line {i + 1}: {exc}")
    by_verdict = {"pass": 0, "fail": 0, "skip": 0}
    for r in reports:
        by_verdict[r.verdict] = by_verdict.get(r.verdict, 0) + 1
    print(json.dumps({"schema": SCHEMA, "laws": len(reports), **by_verdict}, sort_keys=True))
    return 1 if by_verdict.get("fail") else 0


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    handler = {
        "law-check": cmd_law_check,
        "apply-law": cmd_apply_law,
        "interp": cmd_interp,
        "canon": cmd_canon,
        "report": cmd_report,
    }[args.command]
    try:
        return handler(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
