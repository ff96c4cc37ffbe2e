"""Deterministic JSON and CSV output for reports."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

from config.constants import ERROR_REPORT_WRITE
from core.errors import ReportIOError


def _plain(value: Any) -> Any:
    """Reports as JSON-ready values; non-finite floats become the strings inf, -inf and nan."""
    if hasattr(value, "to_dict"):
        return _plain(value.to_dict())
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if math.isfinite(value):
            return value
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, complex):
        return {"re": _plain(value.real), "im": _plain(value.imag)}
    if hasattr(value, "item"):
        return _plain(value.item())
    return str(value)


def to_json(results: Any) -> str:
    """Sorted keys; floats in shortest round-trip form."""
    return json.dumps(_plain(results), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else _plain(value)
    return str(value)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(value) for value in row])
    return buffer.getvalue()


def write_text(path: Path, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise ReportIOError(ERROR_REPORT_WRITE.format(path=path, details=exc), str(path)) from exc
    return path


def emit_report(
    results: Any,
    out_dir: Path,
    name: str,
    csv_tables: dict[str, tuple[Sequence[str], Iterable[Sequence[Any]]]] | None = None,
    csv_text: dict[str, str] | None = None,
) -> list[Path]:
    """Write ``<name>.json`` plus one ``<name>_<suffix>.csv`` per table; returns the written paths."""
    out_dir = Path(out_dir)
    written = [write_text(out_dir / f"{name}.json", to_json(results if results is not None else []))]
    for suffix, (header, rows) in sorted((csv_tables or {}).items()):
        written.append(write_text(out_dir / f"{name}_{suffix}.csv", to_csv(header, rows)))
    for suffix, text in sorted((csv_text or {}).items()):
        written.append(write_text(out_dir / f"{name}_{suffix}.csv", text))
    return written
