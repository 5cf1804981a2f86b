"""Report emission: CSV, JSON, and a minimal SVG bar rendering.

Output is byte-stable: column order is fixed by the caller (or the
first row), floats go through Python's shortest-repr formatting, and
the SVG is assembled from deterministic templates.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict
from pathlib import Path
from typing import Iterable, List, Mapping, Optional, Sequence

from .scenarios import GroupRateRow

FORMATS = ("csv", "json", "svg")


def group_rate_dicts(rows: Iterable[GroupRateRow]) -> List[dict]:
    return [asdict(row) for row in rows]


def _svg_bars(rows: Sequence[Mapping], columns: Sequence[str]) -> str:
    label_key = "group" if rows and "group" in rows[0] else columns[0]
    value_key = "rate"
    if not rows or value_key not in rows[0]:
        numeric = [
            c for c in columns if rows and isinstance(rows[0][c], (int, float))
        ]
        value_key = numeric[-1] if numeric else columns[-1]
    bar_h, gap, width = 18, 6, 420
    max_value = max((abs(float(r[value_key])) for r in rows), default=1.0) or 1.0
    parts = []
    height = len(rows) * (bar_h + gap) + gap
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + 180}" height="{height}">'
    )
    for i, row in enumerate(rows):
        y = gap + i * (bar_h + gap)
        w = round(width * abs(float(row[value_key])) / max_value, 2)
        parts.append(
            f'<rect x="160" y="{y}" width="{w}" height="{bar_h}" fill="#4878a8"/>'
        )
        parts.append(
            f'<text x="155" y="{y + bar_h - 4}" text-anchor="end" '
            f'font-family="monospace" font-size="12">{row[label_key]} '
            f"({row[value_key]!r})</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_report(
    rows: Sequence[Mapping],
    fmt: str,
    path,
    columns: Optional[Sequence[str]] = None,
) -> Path:
    """Write rows to path in the requested format and return the path."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}")
    rows = [dict(r) for r in rows]
    if columns is None:
        if not rows:
            raise ValueError("columns are required when rows are empty")
        columns = list(rows[0].keys())
    path = Path(path)
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    elif fmt == "json":
        payload = [{c: row[c] for c in columns} for row in rows]
        path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", "utf-8")
    else:
        path.write_text(_svg_bars(rows, columns), "utf-8")
    return path
