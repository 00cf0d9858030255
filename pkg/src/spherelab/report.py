"""CSV experiment reports with a versioned metadata header.

Layout::

    # schema=spherelab-report/1
    # tool=spherelab 0.1.0
    # timestamp=2026-01-01T00:00:00+00:00
    # config={"N": 2, ...}
    col_a,col_b,...
    ...data rows...
    # summary key=value

Floats are written with 17 significant digits (``.16e``), so two runs with
the same configuration differ only on the timestamp line.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

SCHEMA_VERSION = "spherelab-report/1"
SUPPORTED_SCHEMAS = (SCHEMA_VERSION,)
TIMESTAMP_KEY = "timestamp"


class ReportSchemaError(ValueError):
    """Raised when a report carries a missing or unknown schema tag."""


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.16e}"
    if hasattr(v, "dtype"):
        return format_value(v.item())
    return str(v)


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class ExperimentReport:
    """Rows of one experiment plus its config echo and summary block."""

    kind: str
    columns: tuple
    rows: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    summary: list = field(default_factory=list)
    tool_version: str = ""
    timestamp: str = field(default_factory=_utc_now)

    def add_row(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"{self.kind} row has {len(values)} values, schema has {len(self.columns)}")
        self.rows.append(tuple(values))

    def add_summary(self, key: str, value):
        self.summary.append((key, value))

    def summary_dict(self) -> dict:
        return dict(self.summary)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# schema={SCHEMA_VERSION}\n")
        buf.write(f"# kind={self.kind}\n")
        buf.write(f"# tool={self.tool_version}\n")
        buf.write(f"# {TIMESTAMP_KEY}={self.timestamp}\n")
        buf.write(f"# config={json.dumps(self.config, sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([format_value(v) for v in row])
        for key, value in self.summary:
            buf.write(f"# summary {key}={format_value(value)}\n")
        return buf.getvalue()

    def summary_text(self) -> str:
        lines = [f"{self.kind}: {len(self.rows)} rows"]
        width = max((len(k) for k, _ in self.summary), default=0)
        for key, value in self.summary:
            shown = f"{value:.6g}" if isinstance(value, float) else str(value)
            lines.append(f"  {key:<{width}}  {shown}")
        return "\n".join(lines)

    def write(self, path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")


def strip_timestamp(text: str) -> str:
    """Report text without its timestamp header line."""
    return "".join(line for line in text.splitlines(keepends=True)
                   if not line.startswith(f"# {TIMESTAMP_KEY}="))


def read_report(source) -> ExperimentReport:
    """Parse report text (or a path to it).  Values are returned as strings."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# schema="):
        raise ReportSchemaError("report has no schema tag on its first line")
    schema = lines[0].partition("=")[2]
    if schema not in SUPPORTED_SCHEMAS:
        raise ReportSchemaError(f"unsupported report schema {schema!r}; this reader knows {SUPPORTED_SCHEMAS}")
    meta = {}
    body = []
    summary = []
    for line in lines[1:]:
        if line.startswith("# summary "):
            key, _, value = line[len("# summary "):].partition("=")
            summary.append((key, value))
        elif line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        else:
            body.append(line)
    table = list(csv.reader(body))
    if not table:
        raise ValueError("report has no column header")
    return ExperimentReport(
        kind=meta.get("kind", ""),
        columns=tuple(table[0]),
        rows=[tuple(r) for r in table[1:]],
        config=json.loads(meta.get("config", "{}")),
        summary=summary,
        tool_version=meta.get("tool", ""),
        timestamp=meta.get(TIMESTAMP_KEY, ""),
    )
