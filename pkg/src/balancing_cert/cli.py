"""Command line interface.

Exit codes: 0 success / complete, 1 verification or completeness failure,
2 precision cap exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .pipeline import (
    CASES,
    GAPS,
    PRINTED_M,
    bound_table_json,
    derive_upper_bound,
    full_certificate,
    outcome_json,
    real_json,
    run_reduction,
)
from .realnum import DEFAULT_PRECISION, DEFAULT_PRECISION_CAP, PrecisionError, format_decimal
from .search import SearchBounds, Solution, a1_bound, solve, verify

EXIT_OK, EXIT_FAIL, EXIT_PRECISION = 0, 1, 2

_COLUMNS = ("n1", "n2", "a1", "a2", "a3")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # defined on the main parser and on every subcommand so they may come
    # before or after the subcommand; SUPPRESS keeps the subparser from
    # overwriting a value given earlier
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--precision", type=int, default=d(DEFAULT_PRECISION),
                        help="initial working precision in bits (default 256)")
    parser.add_argument("--precision-cap", type=int, default=d(DEFAULT_PRECISION_CAP),
                        help="hard cap on precision escalation (default 65536)")
    parser.add_argument("--jobs", type=int, default=d(1), help="worker processes for the search")
    parser.add_argument("--paper-constants", action="store_true", default=d(False),
                        help="use the article's M = 7.9e59 and grids starting at the side-condition gaps")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="balancing-cert",
        description="Solve B_n1 + B_n2 = 2^a1 + 2^a2 + 2^a3 and certify completeness.")
    _global_flags(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="exhaustive search below a cutoff")
    p.add_argument("--k", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--n1-max", type=int, required=True)
    p.add_argument("--a1-max", default="auto", help="'auto' or an integer")
    p.add_argument("--format", choices=("json", "csv", "table"), default="table")
    _global_flags(p, suppress=True)

    p = sub.add_parser("verify", help="check one solution exactly")
    p.add_argument("--k", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--solution", required=True, help="n1,n2,a1[,a2[,a3]]")
    _global_flags(p, suppress=True)

    p = sub.add_parser("bounds", help="upper-bound table and absolute bound on n1")
    p.add_argument("--format", choices=("json", "text"), default="text")
    _global_flags(p, suppress=True)

    p = sub.add_parser("reduce", help="Baker-Davenport reduction table and final bound")
    p.add_argument("--M", dest="M", default=None, help="decimal value for M (default: computed)")
    p.add_argument("--format", choices=("json", "text"), default="text")
    _global_flags(p, suppress=True)

    p = sub.add_parser("certify", help="full certificate; exit 0 iff complete")
    p.add_argument("--out", default=None, help="write the JSON here instead of stdout")
    _global_flags(p, suppress=True)
    return ap


def _parse_M(text: str) -> int:
    try:
        x = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SystemExit(f"error: --M expects a decimal number, got {text!r}")
    if x < 1:
        raise SystemExit("error: --M must be at least 1")
    return -((-x.numerator) // x.denominator)


def cmd_search(args) -> int:
    if args.n1_max < 1:
        print("error: --n1-max must be positive", file=sys.stderr)
        return EXIT_FAIL
    a1_max = a1_bound(args.n1_max) if args.a1_max == "auto" else int(args.a1_max)
    try:
        sols = solve(args.k, SearchBounds(args.n1_max, a1_max), jobs=args.jobs)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    cols = _COLUMNS[: 2 + args.k]
    if args.format == "csv":
        lines = [",".join(cols)] + [",".join(map(str, s.as_tuple())) for s in sols]
        sys.stdout.write("\n".join(lines) + "\n")
    elif args.format == "json":
        doc = {"k": str(args.k), "n1_max": str(args.n1_max), "a1_max": str(a1_max),
               "solutions": [[str(v) for v in s.as_tuple()] for s in sols]}
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        rows = [cols] + [tuple(map(str, s.as_tuple())) for s in sols]
        widths = [max(len(r[i]) for r in rows) for i in range(len(cols))]
        for r in rows:
            print("  ".join(v.rjust(w) for v, w in zip(r, widths)))
        print(f"{len(sols)} solution(s) with n1 <= {args.n1_max}, a1 <= {a1_max}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        values = [int(v) for v in args.solution.split(",")]
        if len(values) != args.k + 2:
            raise ValueError(f"expected {args.k + 2} integers for k={args.k}")
        sol = Solution.from_tuple(values)
    except ValueError as exc:
        print(f"invalid solution: {exc}", file=sys.stderr)
        return EXIT_FAIL
    ok = verify(sol)
    print(f"{sol} {'holds' if ok else 'FAILS'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bounds(args) -> int:
    ub = derive_upper_bound(args.precision)
    if args.format == "json":
        doc = {"bound_table": bound_table_json(ub),
               "n1_upper": {"printed_reading": real_json(ub.n1_upper, 4),
                            "strict": real_json(ub.n1_upper_strict, 4)}}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    label = {"a1-a2": "(a1-a2) log 2", "a1-a3": "(a1-a3) log 2", "n1-n2": "(n1-n2) log alpha"}
    rows = [("upper bound of", *CASES)]
    for g in GAPS:
        rows.append((label[g], *(str(ub.table[c][g][1]) for c in CASES)))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    for r in rows:
        print(" | ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    print(f"n1 log alpha < {ub.steps[7]}")
    print(f"n1 < {format_decimal(ub.n1_upper.upper, 4)} (lemma with log n1)")
    print(f"n1 < {format_decimal(ub.n1_upper_strict.upper, 4)} (lemma with 1 + log n1)")
    return EXIT_OK


def cmd_reduce(args) -> int:
    if args.M is not None:
        M = _parse_M(args.M)
    elif args.paper_constants:
        M = PRINTED_M
    else:
        M = derive_upper_bound(args.precision).M
    run = run_reduction(M, args.precision, args.precision_cap, printed_grids=args.paper_constants)
    if args.format == "json":
        doc = {"M": str(M),
               "table": {c: {g: str(v) for g, v in run.table[c].items()} for c in CASES},
               "final_n1_bound": str(run.final_n1_bound),
               "steps": {str(s): {g: outcome_json(o) for g, o in res.items()}
                         for s, res in run.outcomes.items()}}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    print(f"M = {M}")
    rows = [("upper bound of", *CASES)] + [(g, *(str(run.table[c][g]) for c in CASES)) for g in GAPS]
    for r in rows:
        print(" | ".join(v.ljust(14 if i == 0 else 4) for i, v in enumerate(r)).rstrip())
    for s, res in run.outcomes.items():
        for g, o in res.items():
            eps = o.min_epsilon if o.min_epsilon is not None else o.epsilon
            print(f"step {s}: {g} <= {o.w_bound}  (q index {o.convergent_used.index}, "
                  f"eps >= {format_decimal(eps, 6, up=False)}, members {o.members})")
    print(f"final: n1 <= {run.final_n1_bound}")
    return EXIT_OK


def cmd_certify(args) -> int:
    cert = full_certificate(precision=args.precision, cap=args.precision_cap, jobs=args.jobs,
                            printed_constants=args.paper_constants)
    text = cert.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"verdict: {cert.verdict}")
        for clause in cert.data["verdict"]["failing"]:
            print(f"  failing: {clause}")
    else:
        sys.stdout.write(text)
    return EXIT_OK if cert.verdict == "complete" else EXIT_FAIL


COMMANDS = {"search": cmd_search, "verify": cmd_verify, "bounds": cmd_bounds,
            "reduce": cmd_reduce, "certify": cmd_certify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except PrecisionError as exc:
        print(f"precision cap exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
