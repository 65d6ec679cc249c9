"""Reading the memory-forensics CSV and turning it into labels and features."""
from __future__ import annotations

import csv
import logging
import math
import os
from typing import Iterable, Sequence

import numpy as np

from .data import BINARY, FeatureTable, LabelSchema, LabelVector, RawTable
from .errors import DataError

log = logging.getLogger(__name__)

CLASS_COLUMN = "Class"
CATEGORY_COLUMN = "Category"

_CLASS_VALUES = {"benign": 0, "malicious": 1}
_FAMILIES = {"spyware": 1, "ransomware": 2, "trojan": 3}


def load_csv(path: str | os.PathLike, drop_bad_rows: bool = False) -> RawTable:
    """Read a headed CSV file into a :class:`RawTable`.

    Ragged rows raise :class:`DataError` naming their 1-based line number
    unless ``drop_bad_rows`` is set, in which case they are skipped and
    counted in ``RawTable.dropped_rows``.
    """
    if not os.path.isfile(path):
        raise DataError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [c.strip() for c in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file, header row required") from None
        if any(not name for name in header):
            raise DataError(f"{path}: empty column name in header")
        seen = set()
        for name in header:
            if name in seen:
                raise DataError(f"{path}: duplicate column {name!r}")
            seen.add(name)
        rows = []
        dropped = 0
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                if drop_bad_rows:
                    dropped += 1
                    continue
                raise DataError(
                    f"{path}: line {reader.line_num} has {len(row)} cells, expected {len(header)}"
                )
            rows.append(tuple(c.strip() for c in row))
    if dropped:
        log.warning("%s: skipped %d ragged rows", path, dropped)
    return RawTable(tuple(header), tuple(rows), dropped)


def family_of(category: str) -> str:
    return category.split("-", 1)[0].strip().lower()


def _label_row(class_value: str, category: str | None, schema: LabelSchema) -> int:
    cls = _CLASS_VALUES.get(class_value.strip().lower())
    if cls is None:
        raise DataError(f"unknown class value {class_value!r}")
    if category is None:
        if schema.kind == BINARY:
            return cls
        raise DataError("multi-class labels need a category column")
    family = family_of(category)
    if cls == 0:
        if family in _FAMILIES:
            raise DataError(f"benign row carries malware category {category!r}")
        return 0
    if family not in _FAMILIES:
        raise DataError(f"malicious row with unknown family in category {category!r}")
    return 1 if schema.kind == BINARY else _FAMILIES[family]


def derive_labels(
    raw: RawTable,
    schema: LabelSchema,
    class_column: str = CLASS_COLUMN,
    category_column: str = CATEGORY_COLUMN,
) -> LabelVector:
    """Map every row to a class index under ``schema``.

    Binary: Benign -> 0, Malicious -> 1. Multi-class takes the malware family
    from the category prefix before the first '-' (case-insensitive).
    """
    classes = raw.column(class_column)
    if category_column in raw.column_names:
        categories: Iterable = raw.column(category_column)
    elif schema.kind == BINARY:
        categories = [None] * raw.row_count
    else:
        raise DataError(f"column {category_column!r} not found")
    values = []
    for line, (cls, cat) in enumerate(zip(classes, categories), start=2):
        try:
            values.append(_label_row(cls, cat, schema))
        except DataError as exc:
            raise DataError(f"line {line}: {exc}") from None
    return LabelVector(schema, np.asarray(values, dtype=np.int64))


def parse_number(cell: str) -> float:
    value = float(cell)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {cell!r}")
    return value


def _numeric_column(raw: RawTable, name: str) -> np.ndarray:
    cells = raw.column(name)
    try:
        col = np.asarray(cells, dtype=np.float64)
    except ValueError:
        col = None
    if col is not None and np.all(np.isfinite(col)):
        return col
    for i, cell in enumerate(cells):
        try:
            parse_number(cell)
        except ValueError:
            raise DataError(
                f"line {i + 2}, column {name!r}: not a finite number: {cell!r}"
            ) from None
    raise AssertionError("unreachable")


def to_feature_table(
    raw: RawTable,
    drop: Sequence[str],
    categorical: Sequence[str] = (),
    categories: dict[str, Sequence[str]] | None = None,
) -> FeatureTable:
    """Drop ``drop`` columns and parse the rest as numbers.

    Columns named in ``categorical`` are one-hot encoded instead, in their
    original position. ``categories`` fixes the level set per column (as
    fitted at training time); otherwise levels come from the data.
    """
    from .pipeline import encode_column

    for name in list(drop) + list(categorical):
        if name not in raw.column_names:
            raise DataError(f"column {name!r} not found")
    names: list[str] = []
    blocks: list[np.ndarray] = []
    for name in raw.column_names:
        if name in drop:
            continue
        if name in categorical:
            levels = None if categories is None else categories.get(name)
            enc_names, block = encode_column(name, raw.column(name), levels)
            names.extend(enc_names)
            blocks.append(block)
        else:
            names.append(name)
            blocks.append(_numeric_column(raw, name)[:, None])
    if blocks:
        values = np.hstack(blocks)
    else:
        values = np.zeros((raw.row_count, 0))
    return FeatureTable(tuple(names), values)


def find_bad_rows(
    raw: RawTable,
    schema: LabelSchema,
    drop: Sequence[str],
    categorical: Sequence[str] = (),
    class_column: str = CLASS_COLUMN,
    category_column: str = CATEGORY_COLUMN,
) -> list[int]:
    """Indices of rows that would make labelling or numeric parsing fail."""
    numeric = [
        j
        for j, name in enumerate(raw.column_names)
        if name not in drop and name not in categorical
    ]
    ci = raw.column_names.index(class_column) if class_column in raw.column_names else None
    ki = raw.column_names.index(category_column) if category_column in raw.column_names else None
    bad = []
    for i, row in enumerate(raw.rows):
        try:
            for j in numeric:
                parse_number(row[j])
            if ci is not None:
                _label_row(row[ci], None if ki is None else row[ki], schema)
        except (ValueError, DataError):
            bad.append(i)
    return bad
