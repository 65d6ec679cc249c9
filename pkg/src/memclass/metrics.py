"""Confusion matrices, accuracy/precision/recall/F1 and report rendering.

Recall is TP / (TP + FN). Multi-class precision, recall and F1 are macro
averages (unweighted mean over classes). A metric whose denominator is zero
is reported as 0 and listed in ``EvalReport.undefined``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .data import LabelSchema, LabelVector
from .errors import DataError, ModelError

REPORT_SCHEMA_VERSION = 1
AVERAGING = "macro"

# published rows, shown only as labelled reference lines
PAPER_REPORTED = {
    "binary": [
        ("Logistic Regression", 99.56, 99.42, 99.71, 99.56),
        ("Linear SVM", 99.88, 99.88, 99.88, 99.88),
        ("Naive Bayes", 99.21, 98.78, 99.65, 99.21),
        ("Decision Tree", 99.99, 99.98, 99.982, 99.99),
        ("Random Forest", 99.982, 99.982, 99.982, 99.982),
        ("ANN", 99.72, 100.0, 99.9, 100.0),
        ("MLP Classifier", 99.70, 99.70, 99.70, 99.70),
        ("kNN classifier", 99.96, 99.96, 99.96, 99.96),
        ("Dilated CNN", 99.88, 99.88, 99.88, 99.88),
    ],
    "multiclass": [
        ("Naive Bayes", 68.86, 68.86, 73.26, 64.51),
        ("Decision Tree", 84.67, 84.89, 84.92, 84.90),
        ("Random Forest", 89.07, 87.63, 87.62, 87.62),
        ("Gradient Boosting", 83.84, 83.84, 83.84, 83.83),
        ("K-Nearest Neighbor", 79.80, 79.80, 79.85, 79.81),
        ("Dilated CNN", 81.83, 72.71, 72.72, 72.71),
    ],
}


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """counts[truth][predicted]."""

    counts: np.ndarray

    @property
    def n_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_csv(self, class_names) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["truth\\predicted", *class_names])
        for name, row in zip(class_names, self.counts.tolist()):
            writer.writerow([name, *row])
        return buf.getvalue()

    def __eq__(self, other):
        return isinstance(other, ConfusionMatrix) and np.array_equal(self.counts, other.counts)


def confusion(truth: LabelVector, pred: LabelVector) -> ConfusionMatrix:
    if truth.schema != pred.schema:
        raise ModelError(
            f"label schemas differ: truth is {truth.schema.kind}, predictions are {pred.schema.kind}"
        )
    if len(truth) != len(pred):
        raise DataError(f"{len(truth)} true labels but {len(pred)} predictions")
    if len(truth) == 0:
        raise DataError("cannot evaluate zero samples")
    k = truth.schema.n_classes
    counts = np.bincount(truth.values * k + pred.values, minlength=k * k).reshape(k, k)
    return ConfusionMatrix(counts.astype(np.int64))


def accuracy(cm: ConfusionMatrix) -> float:
    return float(np.trace(cm.counts) / cm.total)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    undefined: tuple[str, ...] = ()


def _ratio(num, den):
    return (float(num) / float(den), True) if den else (0.0, False)


def per_class_prf(cm: ConfusionMatrix, c: int) -> ClassMetrics:
    tp = cm.counts[c, c]
    precision, p_ok = _ratio(tp, cm.counts[:, c].sum())
    recall, r_ok = _ratio(tp, cm.counts[c, :].sum())
    f1, f_ok = _ratio(2 * precision * recall, precision + recall)
    undefined = tuple(
        name for name, ok in (("precision", p_ok), ("recall", r_ok), ("f1", f_ok)) if not ok
    )
    return ClassMetrics(precision, recall, f1, undefined)


def macro_average(per_class) -> ClassMetrics:
    per_class = list(per_class)
    if not per_class:
        raise DataError("macro average of no classes")
    return ClassMetrics(
        float(np.mean([m.precision for m in per_class])),
        float(np.mean([m.recall for m in per_class])),
        float(np.mean([m.f1 for m in per_class])),
    )


@dataclass
class EvalReport:
    model: str
    task: str
    accuracy: float
    precision: float
    recall: float
    f1: float
    per_class: dict
    confusion: ConfusionMatrix
    class_names: tuple[str, ...]
    seed: int | None = None
    hyperparameters: dict = field(default_factory=dict)
    undefined: list = field(default_factory=list)
    label: str | None = None

    @property
    def display_name(self) -> str:
        return self.label or self.model

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "model": self.model,
            "label": self.display_name,
            "task": self.task,
            "averaging": AVERAGING,
            "metrics": {
                "accuracy": self.accuracy,
                "precision": self.precision,
                "recall": self.recall,
                "f1": self.f1,
            },
            "per_class": self.per_class,
            "undefined_metrics": self.undefined,
            "class_names": list(self.class_names),
            "confusion": self.confusion.counts.tolist(),
            "seed": self.seed,
            "hyperparameters": self.hyperparameters,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "EvalReport":
        try:
            if doc["schema_version"] != REPORT_SCHEMA_VERSION:
                raise DataError(f"unsupported report schema_version {doc['schema_version']}")
            m = doc["metrics"]
            return cls(
                model=doc["model"],
                task=doc["task"],
                accuracy=float(m["accuracy"]),
                precision=float(m["precision"]),
                recall=float(m["recall"]),
                f1=float(m["f1"]),
                per_class=doc["per_class"],
                confusion=ConfusionMatrix(np.asarray(doc["confusion"], dtype=np.int64)),
                class_names=tuple(doc["class_names"]),
                seed=doc.get("seed"),
                hyperparameters=doc.get("hyperparameters", {}),
                undefined=doc.get("undefined_metrics", []),
                label=doc.get("label"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed report document: {exc}") from None


def evaluate(truth: LabelVector, pred: LabelVector, model: str = "model", seed=None,
             hyperparameters=None, label=None) -> EvalReport:
    cm = confusion(truth, pred)
    schema: LabelSchema = truth.schema
    per = [per_class_prf(cm, c) for c in range(schema.n_classes)]
    summary = macro_average(per)
    undefined = [f"{schema.name_of(c)}.{name}" for c, m in enumerate(per) for name in m.undefined]
    return EvalReport(
        model=model,
        task=schema.kind,
        accuracy=accuracy(cm),
        precision=summary.precision,
        recall=summary.recall,
        f1=summary.f1,
        per_class={
            schema.name_of(c): {"precision": m.precision, "recall": m.recall, "f1": m.f1}
            for c, m in enumerate(per)
        },
        confusion=cm,
        class_names=schema.class_names,
        seed=seed,
        hyperparameters=dict(hyperparameters or {}),
        undefined=undefined,
        label=label,
    )


HEADER = ("Model", "Accuracy", "Precision", "Recall", "F1 Score")


def _rows(reports, reference_task=None):
    rows = [
        (r.display_name, *(f"{100 * v:.2f}" for v in (r.accuracy, r.precision, r.recall, r.f1)))
        for r in reports
    ]
    if reference_task:
        for name, *vals in PAPER_REPORTED[reference_task]:
            rows.append((f"{name} (paper-reported)", *(f"{v:.2f}" for v in vals)))
    return rows


def render_report(reports, fmt: str = "table", reference_task: str | None = None) -> str:
    """Render reports as Model/Accuracy/Precision/Recall/F1 rows in percent."""
    rows = _rows(reports, reference_task)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(HEADER)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([dict(zip(HEADER, row)) for row in rows], indent=1) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown report format {fmt!r}")
    widths = [max(len(str(row[j])) for row in [HEADER, *rows]) for j in range(len(HEADER))]
    lines = []
    for row in [HEADER, *rows]:
        cells = [str(row[0]).ljust(widths[0])] + [str(v).rjust(w) for v, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> list[list[str]]:
    """Split an aligned table back into cells (header and separator dropped)."""
    out = []
    for line in text.splitlines()[2:]:
        parts = line.rsplit(None, 4)
        out.append(parts)
    return out
