"""Deterministic report model shared by every command.

A report is a titled table: a list of column names, rows of plain cells
(str, int, bool or None) and a status.  Rationals are stored as "p/q"
strings before they reach a report, so emission never prints decimals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List

from .errors import ParseError
from .linalg import format_rational

STATUSES = ("PASS", "FAIL", "INCONCLUSIVE")
EXIT_CODES = {"PASS": 0, "FAIL": 1, "INCONCLUSIVE": 2}


def cell(value: Any):
    """Coerce a value to a JSON-stable cell."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return "{" + ", ".join(str(cell(v)) for v in value) + "}"
    return str(value)


def _text(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


@dataclass
class Report:
    command: str
    columns: List[str]
    rows: List[list] = field(default_factory=list)
    status: str = "PASS"
    notes: List[str] = field(default_factory=list)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} cells, expected {len(self.columns)}")
        self.rows.append([cell(v) for v in values])

    def worsen(self, status: str) -> None:
        """Raise the status to the more severe of the two (FAIL > INCONCLUSIVE > PASS)."""
        order = {"PASS": 0, "INCONCLUSIVE": 1, "FAIL": 2}
        if order[status] > order[self.status]:
            self.status = status

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_dict(self) -> dict:
        return {"command": self.command, "columns": list(self.columns), "rows": [list(r) for r in self.rows],
                "status": self.status, "notes": list(self.notes)}


def emit(report: Report, fmt: str = "table") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    cells = [[_text(v) for v in row] for row in report.rows]
    widths = [len(c) for c in report.columns]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]

    def line(values):
        return "  ".join(v.ljust(w) for v, w in zip(values, widths)).rstrip()

    out = [line(report.columns)]
    out.extend(line(row) for row in cells)
    return "\n".join(out) + "\n"


def parse_report(text: str) -> Report:
    """Inverse of emit(..., "json")."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid report JSON at line {exc.lineno}: {exc.msg}") from exc
    try:
        rep = Report(doc["command"], list(doc["columns"]), [list(r) for r in doc["rows"]],
                     doc["status"], list(doc["notes"]))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"report is missing a field: {exc}") from exc
    if rep.status not in STATUSES:
        raise ParseError(f"unknown status {rep.status!r}")
    return rep
