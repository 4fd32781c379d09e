"""``sidonlab`` command line.

Exit codes: 0 success, 1 domain error (invalid parameter, non-Sidon input),
2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import core, io, primes, search
from .constructions import construct

log = logging.getLogger("sidonlab")

FAMILY_CHOICES = ("bose", "singer", "erdos-turan", "mian-chowla")
REPORT_CHOICES = ("element-errors", "power-sum", "discrepancy", "ding", "counting")


class DomainError(Exception):
    pass


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers in {text!r}") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sidonlab", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a Sidon set and write it as a set file")
    p.add_argument("--family", required=True, choices=FAMILY_CHOICES)
    p.add_argument("--param", required=True, type=int)
    p.add_argument("--out", default="-")

    p = sub.add_parser("verify", help="check a set file for the Sidon property")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--method", default="auto", choices=("auto", "sums", "differences", "sorted"))

    p = sub.add_parser("search", help="exact S(n) by branch and bound")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--n", type=int)
    target.add_argument("--range", type=_range, help="table mode, A..B inclusive")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="bracket", action="store_false")
    mode.add_argument("--bracket", dest="bracket", action="store_true")
    p.set_defaults(bracket=False)
    p.add_argument("--lex-witness", action="store_true")
    p.add_argument("--limit", type=int, default=search.DEFAULT_LIMIT)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default="-")

    p = sub.add_parser("analyze", help="error measurements on a set file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--report", required=True, choices=REPORT_CHOICES)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--fraction", type=float, default=0.01)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default="-")

    p = sub.add_parser("exceptions", help="exceptional n from large prime gaps")
    p.add_argument("--N", dest="N", type=int, required=True)
    p.add_argument("--out", default="-")

    p = sub.add_parser("primes", help="write all primes up to a limit")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--out", default="-")

    p = sub.add_parser("gaps", help="large-gap sum and gap exponent statistics")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--out", default="-")

    p = sub.add_parser("suite", help="run every check and write the composite report")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--json-only", action="store_true")
    p.add_argument("--budget", type=float, default=None, help="seconds before stopping early")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="suite-out")
    return ap


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "verbose"}


def _workers(args) -> int:
    return args.workers if args.workers is not None else primes.worker_count()


def cmd_construct(args) -> int:
    if args.param < 1:
        raise DomainError("--param must be positive")
    A = construct(args.family, args.param)
    io.write_output(args.out, io.format_set(A))
    return 0


def cmd_verify(args) -> int:
    A = io.read_set(args.infile, verify=False)
    res = core.verify_sidon(A.elements, method=args.method)
    if res.ok:
        print(f"ok: {len(A)} elements, n={A.n}")
        return 0
    a, b, c, d = res.witness
    print(f"not Sidon: {a} + {b} = {c} + {d}")
    print(f"witness {a} {b} {c} {d}")
    return 1


def cmd_search(args) -> int:
    if args.n is not None:
        if args.bracket:
            data = search.defect_record(args.n, exact=False)
            env = io.typed_report("defect_record", data, _config(args))
        else:
            res = search.max_sidon(args.n, limit=args.limit, lex_witness=args.lex_witness,
                                   workers=_workers(args))
            env = io.typed_report("search_result", res, _config(args))
        io.write_output(args.out, io.dumps(env))
        return 0
    lo, hi = args.range
    if lo < 1 or hi < lo:
        raise DomainError(f"invalid range {lo}..{hi}")
    rows = search.defect_table(range(lo, hi + 1), exact=not args.bracket, limit=args.limit,
                               workers=_workers(args))
    if args.format == "csv":
        io.write_output(args.out, io.to_csv(rows))
    else:
        io.write_output(args.out, io.dumps(io.typed_report("defect_table", rows, _config(args))))
    return 0


def cmd_analyze(args) -> int:
    A = io.read_set(args.infile)
    if args.report == "element-errors":
        summary = core.element_errors(A)
        records, env = summary.records, io.typed_report("element_errors", summary, _config(args))
    elif args.report == "power-sum":
        rec = core.power_sum(A, args.ell)
        records, env = [rec], io.typed_report("power_sum", rec, _config(args))
    elif args.report == "discrepancy":
        sweep = core.discrepancy_sweep(A)
        records, env = sweep.reports, io.typed_report("discrepancy_sweep", sweep, _config(args))
    elif args.report == "ding":
        rep = core.ding_condition(A, args.fraction)
        records, env = [rep], io.typed_report("ding_condition", rep, _config(args))
    else:
        t = args.t if args.t is not None else A.n + 1
        env = io.report("counting_function", {"t": t, "count": core.counting_function(A, t)},
                        _config(args))
        records = None
    if args.format == "csv":
        if records is None:
            raise DomainError("the counting report has no CSV form")
        io.write_output(args.out, io.to_csv(records))
    else:
        io.write_output(args.out, io.dumps(env))
    return 0


def cmd_exceptions(args) -> int:
    if args.N < 1:
        raise DomainError("--N must be positive")
    table = primes.sieve(max(2, math.isqrt(args.N + 1) + 1))
    rep = primes.exceptional_set(args.N, table)
    io.write_output(args.out, io.dumps(io.typed_report("exceptional_set", rep, _config(args))))
    return 0


def cmd_primes(args) -> int:
    table = primes.sieve(args.limit)
    body = "\n".join(map(str, table.tolist()))
    io.write_output(args.out, f"# limit={args.limit}\n# count={len(table)}\n{body}\n")
    log.info("%d primes up to %d", len(table), args.limit)
    return 0


def cmd_gaps(args) -> int:
    table = primes.sieve(max(100, args.x))
    data = {
        "large_gap_sum": io.to_jsonable(primes.heath_brown_sum(table, args.x)),
        "gap_exponent": io.to_jsonable(primes.gap_exponent_report(table)),
    }
    io.write_output(args.out, io.dumps(io.report("gaps", data, _config(args))))
    return 0


def cmd_suite(args) -> int:
    from .suite import run_suite

    result = run_suite(quick=args.quick, budget=args.budget, seed=args.seed)
    out = Path(args.out_dir)
    tables = result.pop("tables")
    io.write_output(out / "report.json", io.dumps(io.report("suite", result, _config(args))))
    if not args.json_only:
        for name, rows in tables.items():
            io.write_output(out / f"{name}.csv", io.to_csv(rows))
    for c in result["checks"]:
        status = "PASS" if c.passed else "FAIL"
        print(f"[{status}] {c.id:2d} {c.name}: {c.observed}")
    if not result["complete"]:
        print("report incomplete: time budget exhausted")
    return 0 if result["all_passed"] else 1


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "search": cmd_search,
    "analyze": cmd_analyze,
    "exceptions": cmd_exceptions,
    "primes": cmd_primes,
    "gaps": cmd_gaps,
    "suite": cmd_suite,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (DomainError, ValueError, OSError) as exc:
        print(f"sidonlab: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
