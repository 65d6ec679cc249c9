"""Feature engineering: indicator encoding, min-max scaling, stratified split.

Seeded shuffles use numpy's PCG64 bit generator (``GENERATOR``), whose
output stream is fixed for a given seed on every platform.
"""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import FeatureTable, LabelSchema, LabelVector, RawTable
from .errors import DataError

GENERATOR = "numpy.random.PCG64"
PREPARED_META = "prepared.json"
LABEL_COLUMN = "y"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def encode_column(name: str, cells: Sequence[str], levels: Sequence[str] | None = None):
    """Indicator columns ``name=value`` for one categorical column.

    Levels default to the sorted distinct values. A cell outside a supplied
    level set encodes as all zeros.
    """
    if levels is None:
        levels = sorted(set(cells))
    pos = {v: j for j, v in enumerate(levels)}
    block = np.zeros((len(cells), len(levels)))
    for i, cell in enumerate(cells):
        j = pos.get(cell)
        if j is not None:
            block[i, j] = 1.0
    return [f"{name}={v}" for v in levels], block


def one_hot_encode(table: RawTable, categorical_columns: Sequence[str]) -> FeatureTable:
    from .ingest import to_feature_table

    return to_feature_table(table, drop=(), categorical=categorical_columns)


def categorical_levels(table: RawTable, categorical_columns: Sequence[str]) -> dict[str, list[str]]:
    return {name: sorted(set(table.column(name))) for name in categorical_columns}


@dataclass(frozen=True, eq=False)
class ScalerParams:
    column_names: tuple[str, ...]
    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        mins = np.asarray(self.mins, dtype=np.float64)
        maxs = np.asarray(self.maxs, dtype=np.float64)
        if mins.shape != (len(self.column_names),) or maxs.shape != mins.shape:
            raise DataError("scaler parameters do not match column names")
        if np.any(mins > maxs):
            raise DataError("scaler min exceeds max")
        object.__setattr__(self, "column_names", tuple(self.column_names))
        object.__setattr__(self, "mins", mins)
        object.__setattr__(self, "maxs", maxs)

    def to_dict(self) -> dict:
        return {
            "columns": list(self.column_names),
            "min": [float(v) for v in self.mins],
            "max": [float(v) for v in self.maxs],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ScalerParams":
        return cls(tuple(doc["columns"]), doc["min"], doc["max"])

    def __eq__(self, other):
        if not isinstance(other, ScalerParams):
            return NotImplemented
        return (
            self.column_names == other.column_names
            and np.array_equal(self.mins, other.mins)
            and np.array_equal(self.maxs, other.maxs)
        )


def fit_minmax(train: FeatureTable) -> ScalerParams:
    if train.row_count == 0:
        raise DataError("cannot fit a scaler on an empty table")
    return ScalerParams(train.column_names, train.values.min(axis=0), train.values.max(axis=0))


def apply_minmax(table: FeatureTable, params: ScalerParams) -> FeatureTable:
    """Map each column affinely by (x - min) / (max - min); no clamping.

    Columns with max == min map to 0.
    """
    if table.column_names != params.column_names:
        raise DataError("scaler columns do not match the table")
    span = params.maxs - params.mins
    const = span == 0
    out = (table.values - params.mins) / np.where(const, 1.0, span)
    out[:, const] = 0.0
    return FeatureTable(table.column_names, out)


@dataclass(frozen=True)
class SplitResult:
    train_indices: np.ndarray
    test_indices: np.ndarray
    seed: int
    ratio: float


def stratified_split(labels: LabelVector, ratio: float, seed: int) -> SplitResult:
    """Per-class seeded shuffle; round(ratio * n_c) of each class goes to train.

    Every class keeps at least one row on each side.
    """
    if not 0.0 < ratio < 1.0:
        raise DataError(f"split ratio must lie in (0, 1), got {ratio}")
    rng = make_rng(seed)
    y = labels.values
    train, test = [], []
    for c in range(labels.schema.n_classes):
        idx = np.flatnonzero(y == c)
        if idx.size == 0:
            continue
        if idx.size < 2:
            name = labels.schema.name_of(c)
            raise DataError(f"class {name!r} has {idx.size} sample; need at least 2 to split")
        n_train = min(max(int(np.floor(ratio * idx.size + 0.5)), 1), idx.size - 1)
        perm = rng.permutation(idx)
        train.append(perm[:n_train])
        test.append(perm[n_train:])
    return SplitResult(
        np.sort(np.concatenate(train)).astype(np.int64),
        np.sort(np.concatenate(test)).astype(np.int64),
        seed,
        ratio,
    )


def split_csv_text(table: FeatureTable, labels: LabelVector | None) -> str:
    """Scaled features plus a trailing integer ``y`` column, floats in repr form."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(table.column_names)
    if labels is not None:
        header.append(LABEL_COLUMN)
    writer.writerow(header)
    ys = [] if labels is None else labels.values.tolist()
    for i, row in enumerate(table.values.tolist()):
        cells = [repr(v) for v in row]
        if labels is not None:
            cells.append(str(ys[i]))
        writer.writerow(cells)
    return buf.getvalue()


def read_split_csv(path: str | os.PathLike, schema: LabelSchema) -> tuple[FeatureTable, LabelVector]:
    from .ingest import load_csv, to_feature_table

    raw = load_csv(path)
    if LABEL_COLUMN not in raw.column_names:
        raise DataError(f"{path}: missing label column {LABEL_COLUMN!r}")
    try:
        y = np.asarray([int(v) for v in raw.column(LABEL_COLUMN)], dtype=np.int64)
    except ValueError:
        raise DataError(f"{path}: non-integer label in column {LABEL_COLUMN!r}") from None
    if y.size and (y.min() < 0 or y.max() >= schema.n_classes):
        raise DataError(f"{path}: labels outside the {schema.kind} schema")
    return to_feature_table(raw, drop=[LABEL_COLUMN]), LabelVector(schema, y)


@dataclass(frozen=True)
class PreparedMeta:
    """Sidecar document written next to the train/test CSVs."""

    schema: LabelSchema
    scaler: ScalerParams
    seed: int
    ratio: float
    categorical: dict
    dropped_rows: int = 0
    scaler_fit_on: str = "train"

    def to_dict(self) -> dict:
        return {
            "schema_kind": self.schema.kind,
            "class_names": list(self.schema.class_names),
            "scaler": self.scaler.to_dict(),
            "seed": self.seed,
            "ratio": self.ratio,
            "categorical": self.categorical,
            "dropped_rows": self.dropped_rows,
            "scaler_fit_on": self.scaler_fit_on,
            "generator": GENERATOR,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "PreparedMeta":
        try:
            return cls(
                LabelSchema(doc["schema_kind"]),
                ScalerParams.from_dict(doc["scaler"]),
                int(doc["seed"]),
                float(doc["ratio"]),
                dict(doc.get("categorical", {})),
                int(doc.get("dropped_rows", 0)),
                doc.get("scaler_fit_on", "train"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed prepared-split metadata: {exc}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"


def read_prepared_meta(path: str | os.PathLike) -> PreparedMeta:
    try:
        with open(path, encoding="utf-8") as fh:
            return PreparedMeta.from_dict(json.load(fh))
    except FileNotFoundError:
        raise DataError(f"missing prepared-split metadata {path}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: {exc}") from None
