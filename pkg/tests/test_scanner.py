# This file is part of ternary.
#
# SPDX-License-Identifier: MIT

import json

import pytest

from ternary.diophantine import scanner
from ternary.diophantine.exceptions import (
    InvariantViolationError,
    LemmaViolationError,
    ReportFormatError,
    ValidationError,
)
from ternary.diophantine.scanner import (
    ScanConfig,
    ScanRecord,
    audit_triple,
    candidate_triples,
    scan_range,
    verify_report,
)
from ternary.diophantine.store import JsonLinesScanStore, ScanStore
from ternary.diophantine.triple import Solution, Triple


class MemoryScanStore(ScanStore):
    def __init__(self):
        self.entries = []
        self.closed = 0

    def close(self):
        self.closed += 1

    def write_header(self, config, assumptions):
        self.entries.append({"type": "header", "config": config, "assumptions": assumptions})

    def write_record(self, record):
        self.entries.append({**record, "type": "record"})

    def write_summary(self, summary):
        self.entries.append({**summary, "type": "summary"})

    def write_failure(self, failure):
        self.entries.append({**failure, "type": "failure"})

    def load_all(self):
        return list(enumerate(self.entries, start=1))


def _records(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    return [json.loads(line) for line in lines if '"type":"record"' in line]


def _by_triple(records):
    return {(record["a"], record["b"], record["c"]): record for record in records}


def test_candidate_triples():
    triples = list(candidate_triples(5, 5, 5))
    assert triples == sorted(triples, key=Triple.as_tuple)
    assert Triple(2, 3, 5) in triples and Triple(3, 5, 2) in triples
    assert all(t.c % 2 == 1 for t in candidate_triples(6, 6, 6, odd_c=True))
    assert list(candidate_triples(3, 3, 3)) == []


@pytest.mark.parametrize(
    "overrides",
    [{"amax": 1}, {"cmax": 0}, {"cap": 0}, {"jobs": 0}, {"suites": ("congruence", "nope")}],
)
def test_scan_config_validation(tmp_path, overrides):
    arguments = {"amax": 5, "bmax": 5, "cmax": 5, "out": tmp_path / "scan.jsonl", **overrides}
    with pytest.raises(ValidationError):
        ScanConfig(**arguments)


def test_audit_three_solution_triple():
    record = audit_triple(Triple(3, 5, 2), 50)
    assert record.n == 3
    assert record.flags == {
        "odd_c_bound_ok": True,
        "three_solution_witness": True,
        "family_member": False,
    }
    assert record.violations == []
    assert record.invariant_problems() == []
    lemmas = {summary["lemma"] for summary in record.lemmas}
    assert lemmas >= {
        "same-z",
        "pair-congruence",
        "cofactor-gcd",
        "gap-diff",
        "three-solutions",
        "convergent-pair-y",
    }
    three = [
        summary
        for summary in record.lemmas
        if summary["lemma"] == "three-solutions" and summary["instance"] == [3, 5, 2, 1]
    ]
    assert three == [
        {"lemma": "three-solutions", "applicable": True, "violations": [], "instance": [3, 5, 2, 1]}
    ]


def test_audit_without_solutions_runs_nothing():
    record = audit_triple(Triple(3, 5, 7), 20)
    assert record.n == 0
    assert record.lemmas == ()


def test_audit_selected_suites():
    record = audit_triple(Triple(3, 5, 2), 50, suites=("gap",))
    assert {summary["lemma"] for summary in record.lemmas} == {"gap-diff"}


def test_record_round_trip_ignores_derived_fields():
    record = audit_triple(Triple(2, 3, 5), 30)
    body = json.loads(json.dumps(record.to_dict()))
    rebuilt = ScanRecord.from_dict(body, 2)
    assert rebuilt.to_dict() == body
    assert rebuilt.symmetric_key == (2, 3, 5)


def test_record_with_missing_field():
    with pytest.raises(ReportFormatError) as info:
        ScanRecord.from_dict({"a": 2, "b": 3, "c": 5}, 7)
    assert info.value.line == 7


def test_scan_box(tmp_path):
    config = ScanConfig(10, 10, 10, tmp_path / "scan.jsonl", cap=30)
    report = scan_range(config)
    records = _by_triple(_records(config.out))
    assert report.records == len(records) == len(list(candidate_triples(10, 10, 10)))
    assert report.ok
    assert [3, 5, 2] in report.witnesses and [5, 3, 2] in report.witnesses
    assert all(c % 2 == 0 for _, _, c in report.witnesses)
    assert records[(3, 5, 2)]["n"] == 3
    assert records[(3, 5, 2)]["flags"]["three_solution_witness"]
    assert records[(2, 3, 5)]["n"] == 2
    assert records[(2, 3, 5)]["flags"]["family_member"]
    assert report.incomplete == report.records
    assert all(record["n"] <= 2 for record in records.values() if record["c"] % 2)
    assert verify_report(config.out).ok


def test_scan_odd_c(tmp_path):
    report = scan_range(ScanConfig(10, 10, 10, tmp_path / "odd.jsonl", cap=30, odd_c=True))
    assert report.max_n == 2
    assert report.witnesses == []


def test_scan_is_deterministic(tmp_path):
    outputs = []
    for name, jobs in (("first", 1), ("second", 1), ("parallel", 2)):
        config = ScanConfig(7, 7, 7, tmp_path / f"{name}.jsonl", cap=20, jobs=jobs)
        scan_range(config)
        outputs.append(config.out.read_text(encoding="utf-8").splitlines()[1:])
    assert outputs[0] == outputs[1] == outputs[2]


def test_scan_into_custom_store(tmp_path):
    store = MemoryScanStore()
    report = scan_range(ScanConfig(5, 5, 5, tmp_path / "unused.jsonl", cap=20), store)
    assert [entry["type"] for entry in store.entries[:1] + store.entries[-1:]] == [
        "header",
        "summary",
    ]
    assert store.entries[0]["assumptions"]["cap"] == 20
    assert not (tmp_path / "unused.jsonl").exists()
    assert verify_report(tmp_path / "unused.jsonl", store).ok
    assert report.records == len(store.entries) - 2


def _broken_audit(record_of):
    def audit(t, cap, suites, precision, budget):
        record = audit_triple(t, cap, suites, precision, budget)
        return record_of(record) if t == Triple(2, 3, 5) else record

    return audit


@pytest.mark.parametrize("error", [OSError("disk full"), KeyboardInterrupt()])
def test_scan_closes_the_store_on_any_error(tmp_path, monkeypatch, error):
    def interrupted(record):
        raise error

    monkeypatch.setattr(scanner, "audit_triple", _broken_audit(interrupted))
    store = MemoryScanStore()
    with pytest.raises(type(error)):
        scan_range(ScanConfig(5, 5, 5, tmp_path / "unused.jsonl", cap=20), store)
    assert store.closed == 1
    assert store.entries[0]["type"] == "header"
    assert all(entry["type"] != "summary" for entry in store.entries)


def test_scan_closes_the_file_on_any_error(tmp_path, monkeypatch):
    def interrupted(record):
        raise OSError("disk full")

    monkeypatch.setattr(scanner, "audit_triple", _broken_audit(interrupted))
    store = JsonLinesScanStore(tmp_path / "scan.jsonl")
    with pytest.raises(OSError):
        scan_range(ScanConfig(5, 5, 5, store.path, cap=20), store)
    lines = store.path.read_text(encoding="utf-8").splitlines()
    assert [json.loads(line)["type"] for line in lines] == ["header"]
    problems = [problem for _, problem in verify_report(store.path).problems]
    assert any("no summary" in problem for problem in problems)


def test_scan_stops_on_lemma_violation(tmp_path, monkeypatch):
    def violated(record):
        summary = {"lemma": "gap-sum", "applicable": True, "violations": ["witness t"]}
        return ScanRecord(
            record.triple,
            record.cap,
            record.effective_cap,
            record.bound,
            record.solutions,
            (summary,),
        )

    monkeypatch.setattr(scanner, "audit_triple", _broken_audit(violated))
    config = ScanConfig(5, 5, 5, tmp_path / "scan.jsonl", cap=20)
    with pytest.raises(LemmaViolationError):
        scan_range(config)
    entries = [json.loads(line) for line in config.out.read_text(encoding="utf-8").splitlines()]
    assert entries[-1]["type"] == "failure"
    assert entries[-1]["triple"] == [2, 3, 5]
    assert entries[-2]["type"] == "record" and entries[-2]["a"] == 2
    result = verify_report(config.out)
    assert not result.ok
    assert any("failed" in problem for _, problem in result.problems)


def test_scan_stops_on_invariant_violation(tmp_path, monkeypatch):
    def odd_c_with_three(record):
        extra = record.solutions + (Solution(9, 9, 9),)
        return ScanRecord(record.triple, record.cap, record.effective_cap, record.bound, extra)

    monkeypatch.setattr(scanner, "audit_triple", _broken_audit(odd_c_with_three))
    config = ScanConfig(5, 5, 5, tmp_path / "scan.jsonl", cap=20)
    with pytest.raises(InvariantViolationError):
        scan_range(config)
    last = json.loads(config.out.read_text(encoding="utf-8").splitlines()[-1])
    assert last["error"] == "InvariantViolationError"


def test_verify_finds_corruption(tmp_path):
    config = ScanConfig(5, 5, 5, tmp_path / "scan.jsonl", cap=20)
    scan_range(config)
    lines = config.out.read_text(encoding="utf-8").splitlines()
    target = next(
        i for i, line in enumerate(lines) if line.startswith('{"a":2,"b":3,"bound"')
    )
    body = json.loads(lines[target])
    assert body["c"] == 5
    body["solutions"][1] = [4, 2, 3]
    lines[target] = json.dumps(body)
    config.out.write_text("\n".join(lines) + "\n", encoding="utf-8")

    result = verify_report(config.out)
    assert not result.ok
    assert {line for line, _ in result.problems} == {target + 1}
    assert verify_report(config.out).to_dict() == result.to_dict()


@pytest.mark.parametrize(
    "field, value",
    [
        ("solutions", [[1, 1]]),
        ("solutions", [1]),
        ("cap", "many"),
        ("lemmas", [["gap-sum"]]),
        ("lemmas", [{"lemma": "gap-sum", "violations": "witness t"}]),
    ],
)
def test_verify_reports_malformed_records_by_line(tmp_path, field, value):
    config = ScanConfig(5, 5, 5, tmp_path / "scan.jsonl", cap=20)
    scan_range(config)
    lines = config.out.read_text(encoding="utf-8").splitlines()
    body = json.loads(lines[1])
    body[field] = value
    lines[1] = json.dumps(body)
    config.out.write_text("\n".join(lines) + "\n", encoding="utf-8")

    result = verify_report(config.out)
    assert not result.ok
    assert [line for line, problem in result.problems if "corrupt record" in problem] == [2]
    assert result.records == len(lines) - 3


def test_verify_finds_disorder_and_missing_summary(tmp_path):
    config = ScanConfig(5, 5, 5, tmp_path / "scan.jsonl", cap=20)
    scan_range(config)
    lines = config.out.read_text(encoding="utf-8").splitlines()
    lines[1], lines[2] = lines[2], lines[1]
    config.out.write_text("\n".join(lines[:-1]) + "\n", encoding="utf-8")
    problems = [problem for _, problem in verify_report(config.out).problems]
    assert any("out of order" in problem for problem in problems)
    assert any("no summary" in problem for problem in problems)


def test_verify_rejects_truncated_file(tmp_path):
    config = ScanConfig(5, 5, 5, tmp_path / "scan.jsonl", cap=20)
    scan_range(config)
    content = config.out.read_text(encoding="utf-8")
    config.out.write_text(content.rstrip("\n")[:-3], encoding="utf-8")
    with pytest.raises(ReportFormatError) as info:
        verify_report(config.out)
    assert info.value.line >= 2


@pytest.mark.slow
def test_scan_up_to_thirty(tmp_path):
    config = ScanConfig(30, 30, 30, tmp_path / "scan.jsonl", cap=30, jobs=1)
    report = scan_range(config)
    assert report.ok
    assert all(c % 2 == 0 for _, _, c in report.witnesses)
    records = _by_triple(_records(config.out))
    assert records[(3, 5, 2)]["n"] == records[(5, 3, 2)]["n"] == 3
    assert all(record["n"] <= 2 for record in records.values() if record["c"] % 2)
    assert verify_report(config.out).ok
