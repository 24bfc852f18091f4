"""Shared output helpers: 12-significant-digit numbers, CSV/JSON tables."""

from __future__ import annotations

import json
from pathlib import Path


def fmt(x) -> str:
    """Decimal text for one number: integers verbatim, floats to 12 significant digits."""
    if isinstance(x, bool):
        raise TypeError("bool is not a numeric cell")
    if isinstance(x, int):
        return str(x)
    f = float(x)
    if f.is_integer() and abs(f) < 1e15:
        return str(int(f))
    return format(f, ".12g")


def round12(x: float) -> float:
    """Round to 12 significant digits (JSON serialisation boundary)."""
    return float(format(float(x), ".12g"))


def write_table(path, columns: list[str], rows, output_format: str = "csv") -> None:
    """Write a numeric table as CSV (default) or as a columns/rows JSON object."""
    path = Path(path)
    if output_format == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(fmt(cell) for cell in row) for row in rows)
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
    elif output_format == "json":
        obj = {"columns": columns, "rows": [[_json_cell(cell) for cell in row] for row in rows]}
        write_json(path, obj)
    else:
        raise ValueError(f"unknown output format {output_format!r} (expected csv or json)")


def _json_cell(x):
    if isinstance(x, int):
        return x
    return round12(x)


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="ascii")
