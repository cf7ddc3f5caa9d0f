"""Report files with atomic write semantics."""

from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path
from typing import TextIO

from .errors import DomainError
from .reports import COLUMNS, Report

FORMATS = ("csv", "json")


def _ensure_dir(path: Path) -> None:
    path.mkdir(parents=True, exist_ok=True)


def _atomic_write(path: Path, text: str) -> None:
    _ensure_dir(path.parent)
    tmp_path = path.with_suffix(path.suffix + f".tmp-{os.getpid()}")
    try:
        with tmp_path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_path, path)
    finally:
        if tmp_path.exists():
            tmp_path.unlink()


def _check_format(fmt: str) -> str:
    fmt = fmt.lower()
    if fmt not in FORMATS:
        raise DomainError(f"unknown report format {fmt!r}; expected one of {', '.join(FORMATS)}")
    return fmt


def _metadata_value(value: object) -> str:
    return json.dumps(value, sort_keys=True) if isinstance(value, (dict, list)) else str(value)


def render_report(report: Report, fmt: str = "csv") -> str:
    """CSV carries metadata as leading ``# key=value`` lines; JSON keeps row notes too."""
    fmt = _check_format(fmt)
    if fmt == "json":
        return json.dumps(report.as_dict(), ensure_ascii=True, indent=2, sort_keys=True) + "\n"
    buffer = io.StringIO()
    for key in sorted(report.metadata):
        buffer.write(f"# {key}={_metadata_value(report.metadata[key])}\n")
    writer = csv.DictWriter(buffer, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in report.rows:
        writer.writerow(row.as_row())
    return buffer.getvalue()


def write_report(report: Report, path: str | Path, fmt: str = "csv") -> Path:
    path = Path(path)
    _atomic_write(path, render_report(report, fmt))
    return path


def _parse_csv(handle: TextIO) -> dict:
    metadata = {}
    lines = []
    for line in handle:
        if line.startswith("# "):
            key, _, value = line[2:].rstrip("\n").partition("=")
            metadata[key] = value
        else:
            lines.append(line)
    rows = list(csv.DictReader(lines))
    return {"metadata": metadata, "rows": rows}


def read_report(path: str | Path) -> dict:
    """Rows come back as the formatted strings that were written."""
    path = Path(path)
    if not path.exists():
        raise DomainError(f"report {path} does not exist")
    with path.open("r", encoding="utf-8", newline="") as handle:
        if path.suffix.lower() == ".json":
            data = json.load(handle)
        else:
            data = _parse_csv(handle)
    if not isinstance(data, dict) or not isinstance(data.get("rows"), list):
        raise DomainError(f"{path} is not a report")
    return data
