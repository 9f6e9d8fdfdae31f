#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
CSV artifacts.

Every artifact starts with ``#``-prefixed metadata lines (a JSON echo of the
full configuration), followed by a header row and data rows. Floats are
rendered with 17 significant digits so the files round-trip exactly. If the
writer is left through an exception, a trailing ``# INCOMPLETE`` line is
written before the exception propagates.
"""

import csv
import io
import json
import sys
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Sequence, TextIO

from loguru import logger

INCOMPLETE_MARKER = "# INCOMPLETE"


def format_value(value: Any) -> str:
    """Render one CSV cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) or hasattr(value, "dtype"):
        return format(float(value), ".17g")
    return str(value)


class ArtifactWriter:
    """Row writer with a fixed column count."""

    def __init__(self, handle: TextIO, columns: Sequence[str]):
        self._handle = handle
        self._writer = csv.writer(handle, lineterminator="\n")
        self.columns = list(columns)
        self.n_rows = 0
        self._writer.writerow(self.columns)

    def row(self, values: Sequence[Any]):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, expected {len(self.columns)}")
        self._writer.writerow([format_value(v) for v in values])
        self.n_rows += 1

    def rows(self, rows):
        for values in rows:
            self.row(values)

    def comment(self, text: str):
        self._handle.write(f"# {text}\n")


@contextmanager
def csv_artifact(out_path: str, columns: Sequence[str],
                 metadata: Optional[Dict[str, Any]] = None) -> Iterator[ArtifactWriter]:
    """
    Open a CSV artifact for writing.

    Args:
        out_path: File path, or "-" for stdout
        columns: Header row
        metadata: JSON-serialisable run description written as comment lines
    """
    handle = sys.stdout if out_path == "-" else open(out_path, "w", encoding="utf-8", newline="")
    try:
        if metadata:
            for key in sorted(metadata):
                handle.write(f"# {key}: {json.dumps(metadata[key], sort_keys=True, default=str)}\n")
        writer = ArtifactWriter(handle, columns)
        try:
            yield writer
        except BaseException:
            handle.write(INCOMPLETE_MARKER + "\n")
            logger.warning(f"Artifact {out_path} marked incomplete after {writer.n_rows} rows")
            raise
    finally:
        if handle is sys.stdout:
            handle.flush()
        else:
            handle.close()


class CsvArtifact(NamedTuple):
    metadata: Dict[str, Any]
    columns: List[str]
    rows: List[List[Any]]
    complete: bool

    def column(self, name: str) -> List[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def _parse_cell(cell: str) -> Any:
    if cell == "":
        return None
    try:
        return float(cell)
    except ValueError:
        return cell


def read_csv_artifact(source: str, is_text: bool = False) -> CsvArtifact:
    """
    Read an artifact written by ``csv_artifact``.

    Args:
        source: File path, or the CSV text itself with is_text=True

    Returns:
        CsvArtifact with metadata, header, rows (numbers as float) and the completeness flag

    Raises:
        ValueError: If a row's column count differs from the header
    """
    if is_text:
        text = source
    else:
        with open(source, "r", encoding="utf-8") as handle:
            text = handle.read()

    metadata: Dict[str, Any] = {}
    complete = True
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            if line.strip() == INCOMPLETE_MARKER:
                complete = False
                continue
            key, sep, value = line[1:].strip().partition(": ")
            if sep:
                try:
                    metadata[key] = json.loads(value)
                except json.JSONDecodeError:
                    metadata[key] = value
            continue
        body.append(line)

    reader = csv.reader(io.StringIO("\n".join(body)))
    columns = next(reader, [])
    rows = []
    for number, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(columns):
            raise ValueError(f"data row {number} has {len(row)} columns, expected {len(columns)}")
        rows.append([_parse_cell(cell) for cell in row])
    return CsvArtifact(metadata, columns, rows, complete)
