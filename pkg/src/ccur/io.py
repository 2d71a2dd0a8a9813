"""Delimited-text matrix I/O, JSON results and run manifests."""
from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .exceptions import InputError
from .linalg import DataMatrix


def _sniff_delimiter(path):
    suffix = Path(path).suffix.lower()
    return "\t" if suffix in (".tsv", ".tab") else ","


def load_matrix(path, delimiter: Optional[str] = None, has_header: bool = True,
                has_row_labels: bool = False, transpose: bool = False) -> DataMatrix:
    """Read a comma- or tab-delimited numeric table into a :class:`DataMatrix`.

    The header row (if any) supplies column labels and, with
    ``has_row_labels``, the first field of each row supplies row labels. A
    header may include or omit the corner cell above the row labels.
    Errors name the offending line and column, counting from 1.
    """
    delimiter = delimiter or _sniff_delimiter(path)
    if delimiter not in (",", "\t"):
        raise InputError(f"delimiter must be ',' or '\\t', got {delimiter!r}")
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh, delimiter=delimiter)]
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except (UnicodeDecodeError, csv.Error) as exc:
        raise InputError(f"{path}: {exc}") from None

    numbered = [(i, row) for i, row in enumerate(rows, start=1) if row and any(cell.strip() for cell in row)]
    header = None
    if has_header:
        if not numbered:
            raise InputError(f"{path}: empty file")
        header = [cell.strip() for cell in numbered[0][1]]
        numbered = numbered[1:]
    if not numbered:
        raise InputError(f"{path}: no data rows")

    offset = 1 if has_row_labels else 0
    width = len(numbered[0][1])
    if width - offset < 1:
        raise InputError(f"{path}: line {numbered[0][0]} has no numeric columns")
    values = np.empty((len(numbered), width - offset))
    row_labels = [] if has_row_labels else None
    for r, (lineno, row) in enumerate(numbered):
        if len(row) != width:
            raise InputError(f"{path}: line {lineno} has {len(row)} fields, expected {width}")
        if has_row_labels:
            row_labels.append(row[0].strip())
        for c, cell in enumerate(row[offset:]):
            col = c + offset + 1
            try:
                x = float(cell)
            except ValueError:
                raise InputError(f"{path}: line {lineno}, column {col}: cannot parse {cell!r} as a number") from None
            if not math.isfinite(x):
                raise InputError(f"{path}: line {lineno}, column {col}: non-finite value {cell.strip()!r}")
            values[r, c] = x

    col_labels = None
    if header is not None:
        p = values.shape[1]
        if len(header) == p + offset:
            col_labels = header[offset:]
        elif has_row_labels and len(header) == p:
            col_labels = header
        else:
            raise InputError(f"{path}: header has {len(header)} fields but rows have {width}")
    try:
        dm = DataMatrix(values, row_labels, col_labels)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None
    return dm.T if transpose else dm


def format_float(x):
    # shortest repr that round-trips exactly
    return repr(float(x))


def write_matrix(path, values, row_labels=None, col_labels=None, corner="") -> None:
    """Write ``values`` as CSV. A header row is emitted when ``col_labels`` is given."""
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if col_labels is not None:
            writer.writerow(([corner] if row_labels is not None else []) + list(col_labels))
        for i, row in enumerate(values):
            cells = [format_float(x) for x in row]
            writer.writerow(([row_labels[i]] if row_labels is not None else []) + cells)


def write_table(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def write_json(path, obj) -> None:
    text = json.dumps(obj, indent=2, default=_jsonable, allow_nan=False)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


@dataclass
class RunManifest:
    """Everything needed to reproduce one CLI invocation.

    ``argv`` is the subcommand argument list with the output directory
    removed, so replaying it into a fresh directory regenerates the outputs.
    Output paths are relative to the output directory.
    """

    subcommand: str
    config: dict
    inputs: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    argv: list = field(default_factory=list)
    seed: Optional[int] = None
    version: str = ""

    def write(self, out_dir, name="manifest.json"):
        write_json(os.path.join(out_dir, name), asdict(self))

    @classmethod
    def read(cls, path):
        return cls(**read_json(path))
