# This file is part of ternary.
#
# SPDX-License-Identifier: MIT

"""Command line front end of the ternary solver and auditor.

Subcommands: solve, scan, verify, cf, order, gap, family. Results go to stdout, as text or as JSON
with --json; events are logged to stderr.

Exit codes: 0 ok, 1 usage or invalid input, 2 I/O failure, 3 invariant or check violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ternary.diophantine import (
    LemmaReport,
    ScanConfig,
    Triple,
    cf_log_ratio,
    enumerate_solutions,
    least_pm1,
    load_settings,
    scan_range,
    solve_diff,
    solve_sum,
    two_solution_family,
    verify_report,
)
from ternary.diophantine.exceptions import (
    InvariantViolationError,
    LemmaViolationError,
    ReportFormatError,
    TernaryError,
)
from ternary.diophantine.lemmas import check_gap_diff, check_gap_sum
from ternary.diophantine.scanner import SUITES

_CONFIGURATION_FILE = Path(__file__).parent.joinpath("config.toml").absolute()

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VIOLATION = 3

logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with EXIT_USAGE, argparse would use 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(body: dict, as_json: bool, text: str):
    if as_json:
        print(json.dumps(body, indent=2, sort_keys=True))
    else:
        print(text)


def _report_text(report: LemmaReport) -> str:
    lines = [f"{report.lemma} ({'applicable' if report.applicable else 'not applicable'})"]
    for verdict in report.preconditions:
        lines.append(f"  requires {verdict.name}: {verdict.holds}")
    for verdict in report.conclusions:
        mark = "asserted" if verdict.asserted else "diagnostic"
        lines.append(f"  {verdict.name}: {verdict.holds} ({mark})")
    if report.witness is not None:
        lines.append(f"  witness t = {report.witness.t}")
    return "\n".join(lines)


def cmd_solve(args, settings) -> int:
    cap = args.cap if args.cap is not None else settings.cap
    solution_set = enumerate_solutions(Triple(args.a, args.b, args.c), cap, settings.precision)
    if not solution_set.complete:
        logger.warning(
            "Cap %d is below the exponent ceiling %d, larger solutions are not searched",
            cap,
            solution_set.bound,
        )
    lines = [
        f"N{solution_set.triple} = {solution_set.count} with exponents up to "
        f"{solution_set.effective_cap} (ceiling {solution_set.bound})"
    ]
    t = solution_set.triple
    for s in solution_set.solutions:
        lines.append(f"  {t.a}^{s.x} + {t.b}^{s.y} = {t.c}^{s.z}")
    _emit(solution_set.to_dict(), args.json, "\n".join(lines))
    return EXIT_OK


def cmd_scan(args, settings) -> int:
    config = ScanConfig(
        amax=args.amax,
        bmax=args.bmax,
        cmax=args.cmax,
        out=args.out,
        cap=args.cap if args.cap is not None else settings.cap,
        jobs=args.jobs if args.jobs is not None else settings.jobs,
        odd_c=args.odd_c,
        suites=tuple(args.suites) if args.suites else SUITES,
        precision=settings.precision,
        factoring=settings.factoring,
        progress=not args.no_progress,
    )
    report = scan_range(config)
    text = (
        f"{report.records} triples scanned, max N = {report.max_n}\n"
        f"N >= 2: {report.multi_solution}\n"
        f"N >= 3: {report.witnesses}\n"
        f"results written to {config.out}"
    )
    _emit(report.to_dict(), args.json, text)
    return EXIT_OK


def cmd_verify(args, settings) -> int:
    result = verify_report(args.input, precision=settings.precision)
    lines = [f"{result.path}: {result.records} records, {'OK' if result.ok else 'FAIL'}"]
    lines.extend(f"  line {line}: {problem}" for line, problem in result.problems)
    _emit(result.to_dict(), args.json, "\n".join(lines))
    return EXIT_OK if result.ok else EXIT_VIOLATION


def cmd_cf(args, settings) -> int:
    cf = cf_log_ratio(args.c, args.b, args.count, settings.precision)
    body = cf.to_dict()
    lines = [f"log {args.c} / log {args.b} = [{', '.join(map(str, body['quotients']))}, ...]"]
    lines.extend(
        f"  p{conv['index']}/q{conv['index']} = {conv['p']}/{conv['q']}"
        for conv in body["convergents"]
    )
    _emit(body, args.json, "\n".join(lines))
    return EXIT_OK


def cmd_order(args, settings) -> int:
    record = least_pm1(args.r, args.s, settings.factoring)
    body = record.to_dict()
    cofactor = f"f = {body['f']}" if "f" in body else f"f has about {body['f_bits']} bits"
    text = (
        f"{args.r}^{record.n1} = {record.delta1:+d} (mod {args.s}), "
        f"n1 = {record.n1}, delta1 = {record.delta1:+d}, {cofactor}"
    )
    _emit(body, args.json, text)
    return EXIT_OK


def cmd_gap(args, settings) -> int:
    solve, check, sign = (
        (solve_sum, check_gap_sum, "+") if args.kind == "sum" else (solve_diff, check_gap_diff, "-")
    )
    pairs = solve(args.u, args.v, args.k, args.cap)
    body = {
        "kind": args.kind,
        "u": args.u,
        "v": args.v,
        "k": args.k,
        "pairs": [pair.as_list() for pair in pairs],
    }
    lines = [f"{args.u}^l {sign} {args.v}^m = {args.k}: {body['pairs']}"]
    report = None
    if len(pairs) == 2:
        report = check(args.u, args.v, args.k, *pairs)
        body["report"] = report.to_dict()
        lines.append(_report_text(report))
    _emit(body, args.json, "\n".join(lines))
    if report is not None and not report.ok:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_family(args, settings) -> int:
    triple, solutions = two_solution_family(args.k)
    body = {
        "k": args.k,
        "triple": list(triple.as_tuple()),
        "solutions": [solution.as_list() for solution in solutions],
        "verified": all(solution.solves(triple) for solution in solutions),
    }
    lines = [f"k = {args.k}: {triple}"]
    lines.extend(
        f"  {triple.a}^{s.x} + {triple.b}^{s.y} = {triple.c}^{s.z}" for s in solutions
    )
    _emit(body, args.json, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="ternary", description=__doc__.splitlines()[0])
    parser.add_argument("--config", type=Path, default=_CONFIGURATION_FILE)
    parser.add_argument(
        "--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"), default=None
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name, handler, help_text):
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        sub.add_argument("--json", action="store_true", help="print JSON instead of text")
        return sub

    sub = command("solve", cmd_solve, "solutions of a^x + b^y = c^z")
    sub.add_argument("--a", type=int, required=True)
    sub.add_argument("--b", type=int, required=True)
    sub.add_argument("--c", type=int, required=True)
    sub.add_argument("--cap", type=int)

    sub = command("scan", cmd_scan, "scan a box of triples into a JSON Lines file")
    sub.add_argument("--amax", type=int, required=True)
    sub.add_argument("--bmax", type=int, required=True)
    sub.add_argument("--cmax", type=int, required=True)
    sub.add_argument("--cap", type=int)
    sub.add_argument("--jobs", type=int)
    sub.add_argument("--out", type=Path, required=True)
    sub.add_argument("--odd-c", action="store_true", help="only odd c")
    sub.add_argument("--suites", nargs="+", choices=SUITES)
    sub.add_argument("--no-progress", action="store_true")

    sub = command("verify", cmd_verify, "re-validate a scan file")
    sub.add_argument("--in", dest="input", type=Path, required=True)

    sub = command("cf", cmd_cf, "certified continued fraction of log c / log b")
    sub.add_argument("--c", type=int, required=True)
    sub.add_argument("--b", type=int, required=True)
    sub.add_argument("--count", type=int, required=True)

    sub = command("order", cmd_order, "least n1 with r^n1 = +-1 (mod s)")
    sub.add_argument("--r", type=int, required=True)
    sub.add_argument("--s", type=int, required=True)

    sub = command("gap", cmd_gap, "solutions of u^l +- v^m = k and their gap report")
    sub.add_argument("--kind", choices=("sum", "diff"), required=True)
    sub.add_argument("--u", type=int, required=True)
    sub.add_argument("--v", type=int, required=True)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--cap", type=int, default=64)

    sub = command("family", cmd_family, "the two-solution triple (2, 2^k - 1, 2^k + 1)")
    sub.add_argument("--k", type=int, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(args.config)
    except TernaryError as exc:
        print(f"ternary: {exc.msg}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=args.log_level or settings.log_level.upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        return args.handler(args, settings)
    except (InvariantViolationError, LemmaViolationError, ReportFormatError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc.msg)
        return EXIT_VIOLATION
    except TernaryError as exc:
        logger.error("%s: %s", type(exc).__name__, exc.msg)
        return EXIT_USAGE
    except OSError as exc:
        logger.error("I/O failure: %s", exc)
        return EXIT_IO


# If called as a script
if __name__ == "__main__":
    sys.exit(main())
