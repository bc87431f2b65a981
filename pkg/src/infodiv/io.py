"""Readers for CSV samples and JSON distributions.

Malformed input is a hard error that names the offending line; no row is
ever skipped silently.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import TextIO

from .distribution import JointDistribution, TripleDistribution
from .errors import DataFormatError, EmptySample


def _open_text(source) -> TextIO:
    if hasattr(source, "read"):
        return source
    return open(Path(source), newline="", encoding="utf-8")


def read_csv_table(source) -> tuple[tuple[str, ...], list[tuple[str, ...]]]:
    """Header and rows of a categorical CSV file.

    ``source`` is a path or an open text stream.

    Raises
    ------
    DataFormatError
        On a missing or duplicated header, a row of the wrong width or an
        empty cell; the message carries the 1-based line number.
    EmptySample
        If there are no data rows.
    """
    fh = _open_text(source)
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError("line 1: missing header row") from None
        except csv.Error as exc:
            raise DataFormatError(f"line {reader.line_num}: {exc}") from None
        header = tuple(h.strip() for h in header)
        if not header or any(not h for h in header):
            raise DataFormatError("line 1: empty column name")
        if len(set(header)) != len(header):
            raise DataFormatError("line 1: duplicate column names")
        rows = []
        try:
            for row in reader:
                line = reader.line_num
                if not row:
                    raise DataFormatError(f"line {line}: blank line")
                if len(row) != len(header):
                    raise DataFormatError(f"line {line}: expected {len(header)} fields, got {len(row)}")
                row = tuple(v.strip() for v in row)
                if any(not v for v in row):
                    raise DataFormatError(f"line {line}: empty cell")
                rows.append(row)
        except csv.Error as exc:
            raise DataFormatError(f"line {reader.line_num}: {exc}") from None
    finally:
        if fh is not source:
            fh.close()
    if not rows:
        raise EmptySample("no data rows")
    return header, rows


def read_csv_text(text: str) -> tuple[tuple[str, ...], list[tuple[str, ...]]]:
    return read_csv_table(io.StringIO(text))


def _load_json(source) -> dict:
    fh = _open_text(source)
    try:
        return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"line {exc.lineno}: {exc.msg}") from None
    finally:
        if fh is not source:
            fh.close()


def read_joint_json(source) -> JointDistribution:
    """Joint law from ``{"labels_x", "labels_y", "probs"}``."""
    data = _load_json(source)
    if not isinstance(data, dict):
        raise DataFormatError("expected a JSON object")
    return JointDistribution.from_dict(data)


def read_triple_json(source) -> TripleDistribution:
    """Triple law from ``{"labels_x", "labels_y", "labels_z", "probs"}``."""
    data = _load_json(source)
    if not isinstance(data, dict):
        raise DataFormatError("expected a JSON object")
    return TripleDistribution.from_dict(data)
