"""From-scratch learners behind one train/predict contract."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..data import FeatureTable, LabelSchema, LabelVector
from ..errors import DataError, ModelError
from . import hyper
from .bayes import GaussianNB
from .ensemble import DecisionTree, GradientBoosting, RandomForest, majority_vote, tree_seed
from .hyper import BINARY_ONLY, DISPLAY_NAMES, MODEL_KINDS, canonical_kind, defaults, parse_overrides
from .knn import KNearestNeighbors
from .linear import LinearSVM, LogisticRegression, sigmoid
from .tree import Split, Tree, best_split, entropy

LEARNERS = {
    cls.kind: cls
    for cls in (GaussianNB, LogisticRegression, LinearSVM, DecisionTree, RandomForest,
                GradientBoosting, KNearestNeighbors)
}


@dataclass
class TrainedModel:
    kind: str
    hyperparams: dict
    schema: LabelSchema
    feature_names: tuple[str, ...]
    seed: int
    learner: object = field(repr=False)
    # one-hot level sets of categorical input columns, replayed at inference
    categorical: dict = field(default_factory=dict)

    @property
    def n_classes(self) -> int:
        return self.schema.n_classes

    def predict_matrix(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(self.feature_names):
            raise ModelError(
                f"expected {len(self.feature_names)} features, got shape {X.shape}"
            )
        if X.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        return np.asarray(self.learner.predict(X), dtype=np.int64)

    def predict_row(self, row) -> int:
        row = np.asarray(row, dtype=np.float64)
        if row.ndim != 1:
            raise ModelError("a single row must be one-dimensional")
        return int(self.predict_matrix(row[None, :])[0])


def train(kind: str, table: FeatureTable, labels: LabelVector, hp: dict | None = None,
          seed: int = 0) -> TrainedModel:
    """Fit ``kind`` on ``table``; ``hp`` overrides the defaults for the task."""
    kind = canonical_kind(kind)
    task = labels.schema.kind
    if kind in BINARY_ONLY and labels.schema.n_classes != 2:
        raise DataError(f"{kind} supports binary tasks only")
    params = defaults(kind, task)
    if hp:
        unknown = set(hp) - set(params)
        if unknown:
            raise DataError(f"unknown hyperparameters for {kind}: {sorted(unknown)}")
        params.update(hp)
    hyper.validate(kind, params)
    if table.row_count != len(labels):
        raise DataError(f"{table.row_count} rows but {len(labels)} labels")
    if table.row_count == 0:
        raise DataError("cannot train on an empty table")
    learner = LEARNERS[kind](**params)
    learner.fit(np.asarray(table.values), labels.values, labels.schema.n_classes, seed)
    return TrainedModel(kind, params, labels.schema, table.column_names, seed, learner)


def fit_tree(train_table, labels, hp=None, seed=0):
    return train("tree", train_table, labels, hp, seed)


def fit_forest(train_table, labels, hp=None, seed=0):
    return train("forest", train_table, labels, hp, seed)


def fit_gnb(train_table, labels, hp=None, seed=0):
    return train("gnb", train_table, labels, hp, seed)


def fit_logreg(train_table, labels, hp=None, seed=0):
    return train("logreg", train_table, labels, hp, seed)


def fit_linear_svm(train_table, labels, hp=None, seed=0):
    return train("svm", train_table, labels, hp, seed)


def fit_gboost(train_table, labels, hp=None, seed=0):
    return train("gboost", train_table, labels, hp, seed)


def fit_knn(train_table, labels, hp=None, seed=0):
    return train("knn", train_table, labels, hp, seed)


def predict_batch(model: TrainedModel, table: FeatureTable) -> LabelVector:
    """Predict every row; columns are matched to the model by name."""
    if table.column_names != model.feature_names:
        try:
            table = table.reorder(model.feature_names)
        except DataError as exc:
            raise ModelError(str(exc)) from None
    return LabelVector(model.schema, model.predict_matrix(table.values))


__all__ = [
    "BINARY_ONLY", "DISPLAY_NAMES", "LEARNERS", "MODEL_KINDS", "DecisionTree", "GaussianNB",
    "GradientBoosting", "KNearestNeighbors", "LinearSVM", "LogisticRegression", "RandomForest",
    "Split", "TrainedModel", "Tree", "best_split", "canonical_kind", "defaults", "entropy",
    "fit_forest", "fit_gboost", "fit_gnb", "fit_knn", "fit_linear_svm", "fit_logreg", "fit_tree",
    "majority_vote", "parse_overrides", "predict_batch", "sigmoid", "train", "tree_seed",
]
