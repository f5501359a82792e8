# This file is part of ternary.
#
# SPDX-License-Identifier: MIT

import json

import pytest

from ternary.diophantine.exceptions import ReportFormatError
from ternary.diophantine.store import JsonLinesScanStore, encode_entry


def test_encode_entry_is_canonical():
    assert encode_entry({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_round_trip(tmp_path):
    path = tmp_path / "nested" / "scan.jsonl"
    with JsonLinesScanStore(path) as store:
        store.write_header({"amax": 5}, {"cap": 10})
        store.write_record({"a": 2, "b": 3, "c": 5})
        store.write_summary({"records": 1})
    entries = JsonLinesScanStore(path).load_all()
    assert [line for line, _ in entries] == [1, 2, 3]
    assert [entry["type"] for _, entry in entries] == ["header", "record", "summary"]
    header = entries[0][1]
    assert header["config"] == {"amax": 5}
    assert header["assumptions"] == {"cap": 10}
    assert "created" in header
    assert entries[1][1] == {"a": 2, "b": 3, "c": 5, "type": "record"}


def test_header_truncates_previous_content(tmp_path):
    path = tmp_path / "scan.jsonl"
    path.write_text("stale\n", encoding="utf-8")
    store = JsonLinesScanStore(path)
    store.write_header({}, {})
    store.write_failure({"error": "Boom"})
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    assert json.loads(lines[1]) == {"error": "Boom", "type": "failure"}


@pytest.mark.parametrize(
    "content, line",
    [
        ('{"type":"header"}\n{"type":"rec', 2),
        ('{"type":"header"}\nnot json\n', 2),
        ('{"type":"header"}\n{"type":"other"}\n', 2),
        ("[1, 2]\n", 1),
    ],
)
def test_unreadable_entries(tmp_path, content, line):
    path = tmp_path / "scan.jsonl"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ReportFormatError) as info:
        JsonLinesScanStore(path).load_all()
    assert info.value.line == line


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        JsonLinesScanStore(tmp_path / "absent.jsonl").load_all()
