# This file is part of ternary.
#
# SPDX-License-Identifier: MIT
"""
Persistence of scan results as JSON Lines.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from collections.abc import Iterator
from datetime import datetime, timezone
from pathlib import Path

from ternary.diophantine.exceptions import ReportFormatError

HEADER = "header"
RECORD = "record"
SUMMARY = "summary"
FAILURE = "failure"
ENTRY_TYPES = (HEADER, RECORD, SUMMARY, FAILURE)


def encode_entry(entry: dict) -> str:
    """One line of the store: sorted keys, compact separators, no trailing newline."""
    return json.dumps(entry, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class ScanStore(ABC):
    """
    Abstract class for a sink of scan results.

    A store receives one header, then records in scan order, then a single closing entry that is
    either a summary or a failure marker.
    """

    def __enter__(self) -> ScanStore:
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def close(self) -> None:
        """Release whatever the store holds open. Closing twice is harmless."""

    @abstractmethod
    def write_header(self, config: dict, assumptions: dict) -> None:
        """
        Open the store with the scan configuration.

        Parameters
        ----------
        config : dict
            The scan configuration, JSON serializable.
        assumptions : dict
            Conventions the records depend on (logarithm base, cap, exponent ceiling).
        """

    @abstractmethod
    def write_record(self, record: dict) -> None:
        """
        Append one scan record.

        Parameters
        ----------
        record : dict
            The record body, JSON serializable.
        """

    @abstractmethod
    def write_summary(self, summary: dict) -> None:
        """
        Close a completed scan with its aggregate.

        Parameters
        ----------
        summary : dict
            The aggregate, JSON serializable.
        """

    @abstractmethod
    def write_failure(self, failure: dict) -> None:
        """
        Close a failed scan, keeping everything written so far.

        Parameters
        ----------
        failure : dict
            What failed and where.
        """

    @abstractmethod
    def load_all(self) -> list[tuple[int, dict]]:
        """
        Load every entry of the store.

        Returns
        -------
        list[tuple[int, dict]]
            A list of (1-based line number, entry) pairs in store order.

        Raises
        ------
        ReportFormatError
            If an entry cannot be parsed.
        """


class JsonLinesScanStore(ScanStore):
    """
    An implementation of ScanStore writing one JSON document per line. Every line is flushed when
    written, so an interrupted scan leaves a prefix of complete lines.
    """

    def __init__(self, path: Path) -> None:
        """
        Parameters
        ----------
        path : Path
            The file backing the store. Writing truncates it.
        """
        self.__path = Path(path)
        self.__stream = None

    @property
    def path(self) -> Path:
        return self.__path

    def close(self) -> None:
        if self.__stream is not None:
            self.__stream.close()
            self.__stream = None

    def __append(self, entry_type: str, body: dict) -> None:
        if self.__stream is None:
            self.__path.parent.mkdir(parents=True, exist_ok=True)
            self.__stream = open(self.__path, "w", encoding="utf-8")
        self.__stream.write(encode_entry({**body, "type": entry_type}) + "\n")
        self.__stream.flush()

    def write_header(self, config: dict, assumptions: dict) -> None:
        """
        Open the store with the scan configuration.

        Parameters
        ----------
        config : dict
            See documentation in ScanStore.
        assumptions : dict
            See documentation in ScanStore.
        """
        self.close()
        created = datetime.now(timezone.utc).isoformat()
        self.__append(HEADER, {"created": created, "config": config, "assumptions": assumptions})

    def write_record(self, record: dict) -> None:
        self.__append(RECORD, record)

    def write_summary(self, summary: dict) -> None:
        self.__append(SUMMARY, summary)
        self.close()

    def write_failure(self, failure: dict) -> None:
        self.__append(FAILURE, failure)
        self.close()

    def iter_entries(self) -> Iterator[tuple[int, dict]]:
        """
        Stream the entries of the file.

        Raises
        ------
        ReportFormatError
            On a line that is not a JSON object with a known ``type``.
        """
        with open(self.__path, encoding="utf-8") as stream:
            for number, line in enumerate(stream, start=1):
                if not line.endswith("\n"):
                    raise ReportFormatError(f"line {number} is truncated", number)
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ReportFormatError(
                        f"line {number} is not valid JSON: {exc.msg}", number
                    ) from exc
                if not isinstance(entry, dict) or entry.get("type") not in ENTRY_TYPES:
                    raise ReportFormatError(f"line {number} has no known entry type", number)
                yield number, entry

    def load_all(self) -> list[tuple[int, dict]]:
        return list(self.iter_entries())
