"""Versioned JSON model files.

Keys are sorted and floats written in Python's shortest round-trip form, so
identical models serialise to identical bytes and reload bit-exactly.
"""
from __future__ import annotations

import json
import os

from .classifiers import LEARNERS, TrainedModel, canonical_kind
from .data import LabelSchema
from .errors import DataError, ModelError, UsageError
from .fileio import atomic_write
from .pipeline import GENERATOR, ScalerParams

SCHEMA_VERSION = 1


def model_document(model: TrainedModel, scaler: ScalerParams | None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "model_kind": model.kind,
        "hyperparameters": model.hyperparams,
        "label_schema": {"kind": model.schema.kind, "class_names": list(model.schema.class_names)},
        "feature_names": list(model.feature_names),
        "categorical": model.categorical,
        "scaler": None if scaler is None else scaler.to_dict(),
        "parameters": model.learner.params(),
        "training_seed": model.seed,
        "generator": GENERATOR,
    }


def dumps_model(model: TrainedModel, scaler: ScalerParams | None = None) -> str:
    return json.dumps(model_document(model, scaler), sort_keys=True, separators=(",", ":"),
                      allow_nan=False) + "\n"


def save_model(model: TrainedModel, scaler: ScalerParams | None, path, force: bool = False) -> None:
    text = dumps_model(model, scaler)
    try:
        atomic_write(path, text, force=force)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def loads_model(text: str) -> tuple[TrainedModel, ScalerParams | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"corrupt model file: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelError("corrupt model file: top level is not an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ModelError(f"unsupported model schema_version {version!r} (expected {SCHEMA_VERSION})")
    try:
        kind = canonical_kind(doc["model_kind"])
        schema = LabelSchema(doc["label_schema"]["kind"])
        if list(schema.class_names) != list(doc["label_schema"]["class_names"]):
            raise ModelError("class names do not match the label schema")
        feature_names = tuple(doc["feature_names"])
        hp = dict(doc["hyperparameters"])
        learner = LEARNERS[kind].from_params(hp, doc["parameters"])
        scaler = None if doc["scaler"] is None else ScalerParams.from_dict(doc["scaler"])
        model = TrainedModel(kind, hp, schema, feature_names, int(doc["training_seed"]), learner,
                             dict(doc.get("categorical", {})))
    except ModelError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError, DataError, UsageError) as exc:
        raise ModelError(f"corrupt model file: {type(exc).__name__}: {exc}") from None
    if learner.n_features != len(feature_names):
        raise ModelError(
            f"model parameters cover {learner.n_features} features but {len(feature_names)} are named"
        )
    width = _class_width(learner)
    if width is not None and width != schema.n_classes:
        raise ModelError(f"parameters cover {width} classes, schema {schema.kind} has {schema.n_classes}")
    if scaler is not None and scaler.column_names != feature_names:
        raise ModelError("scaler columns do not match the model's feature names")
    return model, scaler


def _class_width(learner):
    kind = learner.kind
    if kind == "gnb":
        return learner.priors_.size
    if kind == "tree":
        return learner.tree_.value.shape[1]
    if kind in ("forest", "knn"):
        return learner.n_classes_
    if kind == "gboost":
        return learner.init_scores_.size
    return 2


def load_model(path) -> tuple[TrainedModel, ScalerParams | None]:
    if not os.path.isfile(path):
        raise ModelError(f"no such model file: {path}")
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read())
