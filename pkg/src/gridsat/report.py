"""Versioned report stream shared by every subcommand.

Structured mode writes one JSON document per line. The first line is a
header carrying the format tag and the run configuration; every later line
is a record with a ``kind`` field. Keys are sorted and no timing data is
recorded, so identical configurations give byte-identical output.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from typing import Any, TextIO

FORMAT_TAG = "gridsat-report v1"


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def point_text(f) -> str:
    return " ".join(map(str, f))


@dataclass
class Report:
    command: str
    config: dict = field(default_factory=dict)
    records: list[dict] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    def add(self, record: dict, *text: str) -> None:
        self.records.append(record)
        self.lines.extend(text)

    def say(self, *text: str) -> None:
        self.lines.extend(text)

    def structured(self) -> str:
        head = {"format": FORMAT_TAG, "command": self.command, "config": self.config}
        return "".join(dumps(d) + "\n" for d in [head, *self.records])

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)

    def write(self, json_mode: bool, out: TextIO | None = None) -> None:
        out = out or sys.stdout
        out.write(self.structured() if json_mode else self.text())
        out.flush()


def parse_stream(text: str) -> tuple[dict, list[dict]]:
    """Split a structured stream into its header and records (format checked)."""
    docs = [json.loads(line) for line in text.splitlines() if line.strip()]
    if not docs or docs[0].get("format") != FORMAT_TAG:
        raise ValueError(f"not a {FORMAT_TAG} stream")
    return docs[0], docs[1:]
