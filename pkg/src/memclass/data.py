"""Core containers shared by ingest, pipeline and the learners."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DataError

BINARY = "binary"
MULTICLASS = "multiclass"

_CLASS_NAMES = {
    BINARY: ("benign", "malware"),
    MULTICLASS: ("benign", "spyware", "ransomware", "trojan"),
}


@dataclass(frozen=True)
class LabelSchema:
    kind: str

    def __post_init__(self):
        if self.kind not in _CLASS_NAMES:
            raise DataError(f"unknown label schema {self.kind!r}")

    @property
    def class_names(self) -> tuple[str, ...]:
        return _CLASS_NAMES[self.kind]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def index_of(self, name: str) -> int:
        try:
            return self.class_names.index(name.lower())
        except ValueError:
            raise DataError(f"class {name!r} not in {self.kind} schema") from None

    def name_of(self, index: int) -> str:
        return self.class_names[index]

    @classmethod
    def binary(cls) -> "LabelSchema":
        return cls(BINARY)

    @classmethod
    def multiclass(cls) -> "LabelSchema":
        return cls(MULTICLASS)


@dataclass(frozen=True)
class RawTable:
    """Header plus text cells, exactly as read from disk (trimmed)."""

    column_names: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    dropped_rows: int = 0

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @property
    def column_count(self) -> int:
        return len(self.column_names)

    def column(self, name: str) -> list[str]:
        try:
            j = self.column_names.index(name)
        except ValueError:
            raise DataError(f"column {name!r} not found") from None
        return [row[j] for row in self.rows]

    def select_rows(self, keep: Sequence[int]) -> "RawTable":
        rows = tuple(self.rows[i] for i in keep)
        dropped = self.dropped_rows + self.row_count - len(rows)
        return RawTable(self.column_names, rows, dropped)


@dataclass(frozen=True, eq=False)
class FeatureTable:
    column_names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 2:
            values = values.reshape(-1, len(self.column_names))
        if values.shape[1] != len(self.column_names):
            raise DataError(
                f"{values.shape[1]} value columns for {len(self.column_names)} names"
            )
        if len(set(self.column_names)) != len(self.column_names):
            raise DataError("duplicate feature column names")
        if not np.all(np.isfinite(values)):
            raise DataError("feature table contains NaN or infinite values")
        values.flags.writeable = False
        object.__setattr__(self, "column_names", tuple(self.column_names))
        object.__setattr__(self, "values", values)

    @property
    def row_count(self) -> int:
        return self.values.shape[0]

    @property
    def column_count(self) -> int:
        return self.values.shape[1]

    def take(self, indices) -> "FeatureTable":
        return FeatureTable(self.column_names, self.values[np.asarray(indices, dtype=np.intp)])

    def reorder(self, names: Sequence[str]) -> "FeatureTable":
        """Return the columns in ``names`` order; the name sets must match."""
        if sorted(names) != sorted(self.column_names):
            missing = sorted(set(names) - set(self.column_names))
            extra = sorted(set(self.column_names) - set(names))
            raise DataError(f"feature columns differ: missing={missing} unexpected={extra}")
        pos = [self.column_names.index(n) for n in names]
        return FeatureTable(tuple(names), self.values[:, pos])

    def __eq__(self, other):
        if not isinstance(other, FeatureTable):
            return NotImplemented
        return self.column_names == other.column_names and np.array_equal(
            self.values, other.values
        )


@dataclass(frozen=True, eq=False)
class LabelVector:
    schema: LabelSchema
    values: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __post_init__(self):
        values = np.array(self.values, dtype=np.int64, copy=True).reshape(-1)
        if values.size and (values.min() < 0 or values.max() >= self.schema.n_classes):
            raise DataError(
                f"label values must lie in [0, {self.schema.n_classes}) for {self.schema.kind}"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def take(self, indices) -> "LabelVector":
        return LabelVector(self.schema, self.values[np.asarray(indices, dtype=np.intp)])

    def counts(self) -> dict[str, int]:
        hist = np.bincount(self.values, minlength=self.schema.n_classes)
        return {name: int(c) for name, c in zip(self.schema.class_names, hist)}

    def __eq__(self, other):
        if not isinstance(other, LabelVector):
            return NotImplemented
        return self.schema == other.schema and np.array_equal(self.values, other.values)
