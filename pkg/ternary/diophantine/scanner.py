# This file is part of ternary.
#
# SPDX-License-Identifier: MIT
"""
Batch scanning of triple ranges and verification of persisted scans.

Every pairwise coprime triple of a box is solved, every solution is carried to the three readings
of the equation and the structural checks are run on them. Records are written in lexicographic
order of (a, b, c) whatever the number of worker processes.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations
from math import gcd
from pathlib import Path

from tqdm import tqdm

from ternary.diophantine.config import (
    DEFAULT_FACTORING,
    DEFAULT_PRECISION,
    FactoringBudget,
    Precision,
)
from ternary.diophantine.congruence import check_cofactor_gcd, check_pair_congruence
from ternary.diophantine.contfrac import cf_log_ratio
from ternary.diophantine.equation import (
    enumerate_solutions,
    gelfond_bound,
    is_family_member,
    map_solution,
    transformed_instances,
)
from ternary.diophantine.exceptions import (
    InvariantViolationError,
    LemmaViolationError,
    ReportFormatError,
    TernaryError,
    ValidationError,
)
from ternary.diophantine.lemmas import (
    LARGE_BASE,
    check_convergent_pair_x,
    check_convergent_pair_y,
    check_convergent_x,
    check_convergent_y,
    check_gap_diff,
    check_gap_sum,
    check_same_z,
    check_three_solutions,
)
from ternary.diophantine.report import LemmaReport
from ternary.diophantine.store import (
    FAILURE,
    HEADER,
    RECORD,
    SUMMARY,
    JsonLinesScanStore,
    ScanStore,
)
from ternary.diophantine.triple import (
    ExponentPair,
    Solution,
    TransformedInstance,
    TransformedSolution,
    Triple,
)

logger = logging.getLogger(__name__)

SUITES = ("congruence", "gap", "convergent", "three-solutions")

ASSUMPTIONS = {"log_base": "natural", "exponent_ceiling": "6500*(ln max)^3"}


@dataclass(frozen=True)
class ScanConfig:
    """
    What to scan and how.

    Attributes
    ----------
    amax, bmax, cmax: int
        Inclusive upper bounds of the bases, each at least 2. Lower bounds are 2.
    out: Path
        The JSON Lines file receiving the results.
    cap: int
        Exponent cap of the solution search.
    jobs: int
        Number of worker processes, 1 runs in process.
    odd_c: bool
        Restrict the scan to odd c.
    suites: tuple[str, ...]
        Structural check families to run, a subset of ``SUITES``.
    precision: Precision
    factoring: FactoringBudget
    progress: bool
        Show a progress bar on stderr.
    """

    amax: int
    bmax: int
    cmax: int
    out: Path
    cap: int = 50
    jobs: int = 1
    odd_c: bool = False
    suites: tuple[str, ...] = SUITES
    precision: Precision = DEFAULT_PRECISION
    factoring: FactoringBudget = DEFAULT_FACTORING
    progress: bool = False

    def __post_init__(self):
        for name in ("amax", "bmax", "cmax"):
            if getattr(self, name) < 2:
                raise ValidationError(f"{name} must be at least 2, got {getattr(self, name)}.")
        if self.cap < 1:
            raise ValidationError(f"cap must be positive, got {self.cap}.")
        if self.jobs < 1:
            raise ValidationError(f"jobs must be positive, got {self.jobs}.")
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValidationError(f"Unknown check suites {sorted(unknown)}, known: {SUITES}.")
        object.__setattr__(self, "out", Path(self.out))
        object.__setattr__(self, "suites", tuple(self.suites))

    def to_dict(self) -> dict:
        return {
            "amax": self.amax,
            "bmax": self.bmax,
            "cmax": self.cmax,
            "cap": self.cap,
            "jobs": self.jobs,
            "odd_c": self.odd_c,
            "suites": list(self.suites),
            "out": str(self.out),
            "start_precision_bits": self.precision.start_bits,
            "max_precision_bits": self.precision.max_bits,
        }


@dataclass(frozen=True)
class ScanRecord:
    """
    Outcome of one triple.

    Attributes
    ----------
    triple: Triple
    cap: int
    effective_cap: int
    bound: int
        The exponent ceiling of the triple.
    solutions: tuple[Solution, ...]
        Sorted by (z, y, x).
    lemmas: tuple[dict, ...]
        Summaries of the structural checks run on the triple.
    """

    triple: Triple
    cap: int
    effective_cap: int
    bound: int
    solutions: tuple[Solution, ...]
    lemmas: tuple[dict, ...] = ()

    @property
    def n(self) -> int:
        return len(self.solutions)

    @property
    def complete(self) -> bool:
        return self.cap >= self.bound

    @property
    def flags(self) -> dict:
        return {
            "odd_c_bound_ok": self.triple.c % 2 == 0 or self.n <= 2,
            "three_solution_witness": self.n >= 3,
            "family_member": is_family_member(self.triple),
        }

    @property
    def symmetric_key(self) -> tuple[int, int, int]:
        """Shared by (a, b, c) and (b, a, c)."""
        return min(self.triple.a, self.triple.b), max(self.triple.a, self.triple.b), self.triple.c

    @property
    def violations(self) -> list[dict]:
        return [summary for summary in self.lemmas if summary["violations"]]

    def invariant_problems(self) -> list[str]:
        """Record-level facts that no correct scan can break."""
        problems = []
        if not self.flags["odd_c_bound_ok"]:
            problems.append(f"c = {self.triple.c} is odd but N = {self.n}")
        if self.n >= 3 and (self.triple.c % 2 == 1 or self.triple.max >= LARGE_BASE):
            problems.append(f"N = {self.n} needs 2 | c and max < 10^62")
        return problems

    def to_dict(self) -> dict:
        return {
            "a": self.triple.a,
            "b": self.triple.b,
            "c": self.triple.c,
            "cap": self.cap,
            "effective_cap": self.effective_cap,
            "bound": self.bound,
            "complete": self.complete,
            "solutions": [solution.as_list() for solution in self.solutions],
            "n": self.n,
            "lemmas": list(self.lemmas),
            "flags": self.flags,
            "symmetric_key": list(self.symmetric_key),
        }

    @classmethod
    def from_dict(cls, body: dict, line: int) -> ScanRecord:
        """
        Rebuild a record from its persisted form, ignoring the derived fields.

        Raises
        ------
        ReportFormatError
            If a field is missing or has the wrong shape.
        ValidationError
            If the bases or exponents are out of range.
        """
        try:
            triple = Triple(body["a"], body["b"], body["c"])
            solutions = tuple(Solution(*exponents) for exponents in body["solutions"])
            lemmas = tuple(body["lemmas"])
            for summary in lemmas:
                if not isinstance(summary, dict) or "lemma" not in summary:
                    raise ValueError(f"malformed check summary {summary!r}")
                if not isinstance(summary["violations"], list):
                    raise ValueError(f"malformed check summary {summary!r}")
            return cls(
                triple,
                int(body["cap"]),
                int(body["effective_cap"]),
                int(body["bound"]),
                solutions,
                lemmas,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ReportFormatError(f"line {line} is not a valid record: {exc!r}", line) from exc


@dataclass
class ScanReport:
    """Aggregate of a scan, written as its summary line."""

    records: int = 0
    max_n: int = 0
    incomplete: int = 0
    multi_solution: list[list[int]] = field(default_factory=list)
    witnesses: list[list[int]] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)

    def add(self, record: ScanRecord):
        self.records += 1
        self.max_n = max(self.max_n, record.n)
        if not record.complete:
            self.incomplete += 1
        if record.n >= 2:
            self.multi_solution.append(list(record.triple.as_tuple()))
        if record.n >= 3:
            self.witnesses.append(list(record.triple.as_tuple()))
        for summary in record.violations:
            self.violations.append({"triple": list(record.triple.as_tuple()), **summary})

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "records": self.records,
            "max_n": self.max_n,
            "incomplete": self.incomplete,
            "multi_solution": self.multi_solution,
            "witnesses": self.witnesses,
            "violations": self.violations,
            "ok": self.ok,
        }


def candidate_triples(amax: int, bmax: int, cmax: int, odd_c: bool = False) -> Iterator[Triple]:
    """Pairwise coprime triples of [2, amax] x [2, bmax] x [2, cmax] in lexicographic order."""
    for a in range(2, amax + 1):
        for b in range(2, bmax + 1):
            if gcd(a, b) != 1:
                continue
            for c in range(2, cmax + 1):
                if odd_c and c % 2 == 0:
                    continue
                if gcd(a, c) == 1 and gcd(b, c) == 1:
                    yield Triple(a, b, c)


def _summarize(report: LemmaReport, inst: TransformedInstance) -> dict:
    return {**report.summary(), "instance": list(inst.as_tuple())}


def _audit_instance(
    inst: TransformedInstance,
    mapped: list[TransformedSolution],
    suites: tuple[str, ...],
    budget: FactoringBudget,
) -> list[LemmaReport]:
    reports = []
    lowest = min(solution.Z for solution in mapped)
    ordered = sorted(mapped, key=lambda solution: (solution.Z, solution.Y, solution.X))

    if "congruence" in suites:
        reports.append(check_same_z(inst, mapped))
        for first, second in combinations(ordered, 2):
            reports.append(check_pair_congruence(inst, first, second))
            if first.Z < second.Z and first.Z == lowest:
                reports.append(check_cofactor_gcd(inst, first, second, mapped, budget))

    if "gap" in suites:
        gap_check = check_gap_sum if inst.lam > 0 else check_gap_diff
        for first, second in combinations(ordered, 2):
            if first.Z == second.Z:
                k = inst.C**first.Z
                pairs = ExponentPair(first.X, first.Y), ExponentPair(second.X, second.Y)
                reports.append(gap_check(inst.A, inst.B, k, *pairs))

    if "three-solutions" in suites and len(ordered) >= 3:
        for group in combinations(ordered, 3):
            if group[0].Z == lowest:
                reports.append(check_three_solutions(inst, *group, solutions=mapped, budget=budget))
    return reports


def _audit_convergents(
    t: Triple, solutions: tuple[Solution, ...], precision: Precision
) -> list[LemmaReport]:
    over_b = cf_log_ratio(t.c, t.b, 2, precision)
    over_a = cf_log_ratio(t.c, t.a, 2, precision)
    reports = []
    for solution in solutions:
        reports.append(check_convergent_y(t, solution, over_b, precision))
        reports.append(check_convergent_x(t, solution, over_a, precision))
    for first, second in combinations(solutions, 2):
        reports.append(check_convergent_pair_y(t, first, second, over_b, precision))
        reports.append(check_convergent_pair_x(t, first, second, over_a, precision))
    return reports


def audit_triple(
    t: Triple,
    cap: int,
    suites: tuple[str, ...] = SUITES,
    precision: Precision = DEFAULT_PRECISION,
    budget: FactoringBudget = DEFAULT_FACTORING,
) -> ScanRecord:
    """
    Solve one triple and run the selected structural checks on its solutions.

    Parameters
    ----------
    t : Triple
    cap : int
        Exponent cap of the solution search.
    suites : tuple[str, ...]
        Check families to run.
    precision : Precision
    budget : FactoringBudget

    Returns
    -------
    ScanRecord
        With one summary per check run, violations included.
    """
    started = time.perf_counter()
    solution_set = enumerate_solutions(t, cap, precision)
    solutions = solution_set.solutions
    summaries = []
    if solutions:
        for inst in transformed_instances(t):
            mapped = [map_solution(inst, solution) for solution in solutions]
            summaries.extend(
                _summarize(report, inst)
                for report in _audit_instance(inst, mapped, suites, budget)
            )
        if "convergent" in suites:
            reading = transformed_instances(t)[0]
            summaries.extend(
                _summarize(report, reading)
                for report in _audit_convergents(t, solutions, precision)
            )
    logger.debug("Audited %s in %.3fs", t, time.perf_counter() - started)
    return ScanRecord(
        t,
        cap,
        solution_set.effective_cap,
        solution_set.bound,
        solutions,
        tuple(summaries),
    )


def _records(config: ScanConfig, triples: list[Triple], executor) -> Iterable[ScanRecord]:
    worker = partial(
        audit_triple,
        cap=config.cap,
        suites=config.suites,
        precision=config.precision,
        budget=config.factoring,
    )
    if executor is None:
        return map(worker, triples)
    # Executor.map yields in submission order
    return executor.map(worker, triples, chunksize=max(1, len(triples) // (8 * config.jobs)))


def scan_range(config: ScanConfig, store: ScanStore | None = None) -> ScanReport:
    """
    Scan every pairwise coprime triple of the configured box.

    Parameters
    ----------
    config : ScanConfig
    store : ScanStore | None
        Sink of the results, a JsonLinesScanStore on ``config.out`` when missing.

    Returns
    -------
    ScanReport
        The aggregate, also written as the last line of the store.

    Raises
    ------
    LemmaViolationError
        If an asserted conclusion of a check is false. The store is closed with a failure marker.
    InvariantViolationError
        If a record breaks a record-level invariant or a check hits an impossible state.
    OSError
        If the store cannot be written.
    """
    if store is None:
        store = JsonLinesScanStore(config.out)
    triples = list(candidate_triples(config.amax, config.bmax, config.cmax, config.odd_c))
    logger.info(
        "Scanning %d triples with cap %d on %d job(s)", len(triples), config.cap, config.jobs
    )
    report = ScanReport()
    warned = False
    failure = None
    with store:
        store.write_header(config.to_dict(), {**ASSUMPTIONS, "cap": config.cap})
        executor = ProcessPoolExecutor(max_workers=config.jobs) if config.jobs > 1 else None
        try:
            with tqdm(total=len(triples), unit="triple", disable=not config.progress) as progress:
                for record in _records(config, triples, executor):
                    store.write_record(record.to_dict())
                    report.add(record)
                    progress.update()
                    if not record.complete and not warned:
                        logger.warning(
                            "Cap %d is below the exponent ceiling (%d for %s), "
                            "records are flagged incomplete",
                            config.cap,
                            record.bound,
                            record.triple,
                        )
                        warned = True
                    failure = _failure_of(record)
                    if failure is not None:
                        break
        except TernaryError as exc:
            logger.error("Scan aborted after %d records: %s", report.records, exc.msg)
            store.write_failure(
                {"error": type(exc).__name__, "message": exc.msg, "records": report.records}
            )
            raise
        finally:
            if executor is not None:
                executor.shutdown(cancel_futures=True)

        if failure is not None:
            entry, error = failure
            logger.error("Scan failed on %s", error.msg)
            store.write_failure(entry)
            raise error

        store.write_summary(report.to_dict())
    logger.info(
        "Scanned %d triples: max N = %d, %d with N >= 2, %d with N >= 3",
        report.records,
        report.max_n,
        len(report.multi_solution),
        len(report.witnesses),
    )
    return report


def _failure_of(record: ScanRecord) -> tuple[dict, TernaryError] | None:
    triple = list(record.triple.as_tuple())
    problems = record.invariant_problems()
    if problems:
        message = f"{record.triple}: {'; '.join(problems)}"
        entry = {"error": "InvariantViolationError", "triple": triple, "problems": problems}
        return entry, InvariantViolationError(message, {"triple": triple})
    if record.violations:
        names = [
            f"{summary['lemma']}: {', '.join(summary['violations'])}"
            for summary in record.violations
        ]
        message = f"{record.triple}: {'; '.join(names)}"
        entry = {"error": "LemmaViolationError", "triple": triple, "violations": record.violations}
        return entry, LemmaViolationError(message, record.violations)
    return None


@dataclass
class VerifyResult:
    """
    Verdict on a persisted scan.

    Attributes
    ----------
    path: Path
    records: int
        Number of records read.
    problems: list[tuple[int, str]]
        (line number, description) of every inconsistency found.
    """

    path: Path
    records: int = 0
    problems: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_dict(self) -> dict:
        return {
            "path": str(self.path),
            "records": self.records,
            "ok": self.ok,
            "problems": [{"line": line, "problem": problem} for line, problem in self.problems],
        }


def _record_problems(record: ScanRecord, body: dict, precision: Precision) -> list[str]:
    problems = []
    for solution in record.solutions:
        if not solution.solves(record.triple):
            problems.append(f"{solution.as_list()} does not solve {record.triple}")
        elif max(solution.as_list()) > record.effective_cap:
            problems.append(f"{solution.as_list()} exceeds the cap {record.effective_cap}")
    keys = [solution.sort_key for solution in record.solutions]
    if keys != sorted(set(keys)):
        problems.append("solutions are not sorted by (z, y, x) or repeat")
    if body.get("n") != record.n:
        problems.append(f"n = {body.get('n')} but {record.n} solutions are listed")
    bound = gelfond_bound(record.triple, precision)
    if record.bound != bound or record.effective_cap != min(record.cap, bound):
        problems.append(f"exponent ceiling or effective cap disagree with the ceiling {bound}")
    if body.get("complete") != record.complete:
        problems.append("complete flag disagrees with cap and ceiling")
    if body.get("flags") != record.flags:
        problems.append(f"flags {body.get('flags')} disagree with the solutions")
    problems.extend(record.invariant_problems())
    for summary in record.violations:
        problems.append(f"{summary['lemma']} violated: {', '.join(summary['violations'])}")
    return problems


def verify_report(
    path: Path, store: ScanStore | None = None, precision: Precision = DEFAULT_PRECISION
) -> VerifyResult:
    """
    Re-validate a completed scan from its raw solutions.

    Solutions are substituted back, N and the flags are recomputed and every N >= 3 record is
    checked for an even c. Reading is side-effect free, so the verdict is idempotent.

    Parameters
    ----------
    path : Path
        The scan file.
    store : ScanStore | None
        Source of the entries, a JsonLinesScanStore on ``path`` when missing.
    precision : Precision
        Used to recompute the exponent ceilings.

    Returns
    -------
    VerifyResult
        Every problem found, with the line it was found on.

    Raises
    ------
    ReportFormatError
        If a line is truncated or not a JSON entry. Records of the wrong shape are
        reported as problems of their line instead.
    OSError
        If the file cannot be read.
    """
    if store is None:
        store = JsonLinesScanStore(path)
    result = VerifyResult(Path(path))
    entries = store.load_all()
    if not entries or entries[0][1]["type"] != HEADER:
        result.problems.append((1, "the scan does not start with a header"))

    previous = None
    max_n = 0
    closing = None
    for line, entry in entries:
        kind = entry["type"]
        if closing is not None:
            result.problems.append((line, f"{kind} entry after the closing {closing[1]['type']}"))
            continue
        if kind == HEADER:
            if line != 1:
                result.problems.append((line, "header repeated"))
            continue
        if kind in (SUMMARY, FAILURE):
            closing = line, entry
            continue
        if kind != RECORD:
            continue
        try:
            record = ScanRecord.from_dict(entry, line)
        except (ValidationError, ReportFormatError) as exc:
            result.problems.append((line, f"corrupt record: {exc.msg}"))
            continue
        result.records += 1
        max_n = max(max_n, record.n)
        key = record.triple.as_tuple()
        if previous is not None and key <= previous:
            result.problems.append((line, f"triple {record.triple} is out of order"))
        previous = key
        for problem in _record_problems(record, entry, precision):
            result.problems.append((line, f"triple {record.triple}: {problem}"))

    if closing is None:
        last = entries[-1][0] if entries else 1
        result.problems.append((last, "the scan has no summary, it did not complete"))
    elif closing[1]["type"] == FAILURE:
        result.problems.append((closing[0], f"the scan failed: {closing[1].get('error')}"))
    else:
        line, summary = closing
        if summary.get("records") != result.records or summary.get("max_n") != max_n:
            result.problems.append((line, "summary disagrees with the records"))

    if result.ok:
        logger.info("%s: %d records verified", path, result.records)
    else:
        logger.warning("%s: %d problem(s) found", path, len(result.problems))
    return result
