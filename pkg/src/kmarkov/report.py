"""Verification reports: JSON for machines, aligned columns for people, CSV tables."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction


def jsonable(value):
    """Integers and fractions become decimal strings; containers recurse."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


@dataclass
class Report:
    name: str
    params: dict
    ok: bool
    summary: dict = field(default_factory=dict)
    columns: list[str] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)
    asserted: bool = True

    def to_dict(self) -> dict:
        return {
            "report": self.name,
            "params": self.params,
            "ok": self.ok,
            "asserted": self.asserted,
            "summary": self.summary,
            "columns": self.columns,
            "rows": self.rows,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def to_text(self) -> str:
        lines = [f"{self.name}: {'ok' if self.ok else 'FAILED'}" + ("" if self.asserted else " (informational)")]
        for k, v in self.params.items():
            lines.append(f"  {k} = {v}")
        for k, v in self.summary.items():
            lines.append(f"  {k}: {v}")
        if self.rows and self.columns:
            table = [self.columns] + [[str(r.get(c, "")) for c in self.columns] for r in self.rows]
            widths = [max(len(row[i]) for row in table) for i in range(len(self.columns))]
            for row in table:
                lines.append("  " + "  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
        return "\n".join(lines) + "\n"


def table_csv(rows: list[tuple[int, int, int, int]]) -> str:
    """Rows (k, p, q, value) as CSV with a header line."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "p", "q", "value"])
    for row in rows:
        w.writerow([str(v) for v in row])
    return buf.getvalue()
