"""Single decision trees, random forests and multinomial gradient boosting."""
from __future__ import annotations

import numpy as np

from ..pipeline import make_rng
from .tree import PresortedFeatures, Tree, grow_classification_tree, grow_regression_tree


def tree_seed(seed: int, index: int) -> int:
    """Seed of tree ``index`` in an ensemble, derived from (seed, index) only."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


def majority_vote(votes, n_classes: int) -> int:
    return int(np.argmax(np.bincount(np.asarray(votes, dtype=np.int64), minlength=n_classes)))


class DecisionTree:
    kind = "tree"

    def __init__(self, criterion="entropy", max_depth=10, min_samples_leaf=1,
                 min_samples_split=2, max_features="log2"):
        self.criterion = criterion
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.min_samples_split = min_samples_split
        self.max_features = max_features

    def _grow(self, X, y, n_classes, rng) -> Tree:
        return grow_classification_tree(
            X, y, n_classes, rng,
            max_depth=self.max_depth,
            min_samples_split=self.min_samples_split,
            min_samples_leaf=self.min_samples_leaf,
            max_features=self.max_features,
        )

    def fit(self, X, y, n_classes, seed=0):
        self.n_features_ = X.shape[1]
        self.tree_ = self._grow(X, y, n_classes, make_rng(seed))
        return self

    def predict(self, X):
        return self.tree_.predict_class(X)

    def params(self):
        return {"n_features": self.n_features_, "tree": self.tree_.to_dict(integer_values=True)}

    @classmethod
    def from_params(cls, hp, doc):
        model = cls(**{k: v for k, v in hp.items()})
        model.n_features_ = int(doc["n_features"])
        model.tree_ = Tree.from_dict(doc["tree"])
        return model

    @property
    def n_features(self):
        return self.n_features_


class RandomForest(DecisionTree):
    """Bagged entropy trees with per-node feature subsampling.

    Tree i draws its bootstrap sample and all of its candidate features from
    one generator seeded with ``tree_seed(seed, i)``.
    """

    kind = "forest"

    def __init__(self, n_estimators=30, **tree_hp):
        super().__init__(**tree_hp)
        self.n_estimators = n_estimators

    def fit(self, X, y, n_classes, seed=0):
        n = X.shape[0]
        self.n_features_ = X.shape[1]
        self.n_classes_ = n_classes
        self.tree_seeds_ = [tree_seed(seed, i) for i in range(self.n_estimators)]
        self.trees_ = []
        for s in self.tree_seeds_:
            rng = make_rng(s)
            sample = rng.integers(0, n, size=n)
            self.trees_.append(self._grow(X[sample], y[sample], n_classes, rng))
        return self

    def tree_votes(self, X):
        return np.stack([t.predict_class(X) for t in self.trees_], axis=1)

    def predict(self, X):
        votes = self.tree_votes(X)
        tally = np.zeros((X.shape[0], self.n_classes_), dtype=np.int64)
        for c in range(self.n_classes_):
            tally[:, c] = (votes == c).sum(axis=1)
        return np.argmax(tally, axis=1)

    def params(self):
        return {
            "n_features": self.n_features_,
            "n_classes": self.n_classes_,
            "tree_seeds": list(self.tree_seeds_),
            "trees": [t.to_dict(integer_values=True) for t in self.trees_],
        }

    @classmethod
    def from_params(cls, hp, doc):
        model = cls(**hp)
        model.n_features_ = int(doc["n_features"])
        model.n_classes_ = int(doc["n_classes"])
        model.tree_seeds_ = [int(s) for s in doc["tree_seeds"]]
        model.trees_ = [Tree.from_dict(t) for t in doc["trees"]]
        if len(model.trees_) != len(model.tree_seeds_):
            raise ValueError("forest has a different number of trees and seeds")
        if any(t.value.shape[1] != model.n_classes_ for t in model.trees_):
            raise ValueError("forest tree with the wrong number of classes")
        return model


def softmax(scores):
    z = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def softmax_residuals(scores, onehot):
    """Negative gradient of multinomial deviance: 1[y=c] - p_c."""
    return onehot - softmax(scores)


class GradientBoosting:
    """Multinomial boosting: one least-squares tree per class per round.

    Each round fits class c's tree to 1[y=c] - softmax_c(scores) and adds
    ``learning_rate`` times its leaf means to that class's score.
    """

    kind = "gboost"

    def __init__(self, learning_rate=0.2, n_rounds=100, max_depth=3, min_samples_leaf=1):
        self.learning_rate = learning_rate
        self.n_rounds = n_rounds
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf

    def fit(self, X, y, n_classes, seed=None):
        n = X.shape[0]
        self.n_features_ = X.shape[1]
        prior = np.bincount(y, minlength=n_classes) / n
        # absent classes get a large negative but finite score
        self.init_scores_ = np.log(np.maximum(prior, np.finfo(np.float64).tiny))
        scores = np.tile(self.init_scores_, (n, 1))
        onehot = np.eye(n_classes)[y]
        self.trees_ = []
        pre = PresortedFeatures(X) if self.n_rounds else None
        for _ in range(self.n_rounds):
            resid = softmax_residuals(scores, onehot)
            round_trees = []
            for c in range(n_classes):
                tree = grow_regression_tree(pre, resid[:, c], self.max_depth, self.min_samples_leaf)
                scores[:, c] += self.learning_rate * tree.predict_value(X)
                round_trees.append(tree)
            self.trees_.append(round_trees)
        return self

    def decision_function(self, X):
        scores = np.tile(self.init_scores_, (X.shape[0], 1))
        for round_trees in self.trees_:
            for c, tree in enumerate(round_trees):
                scores[:, c] += self.learning_rate * tree.predict_value(X)
        return scores

    def predict(self, X):
        return np.argmax(self.decision_function(X), axis=1)

    def params(self):
        return {
            "n_features": self.n_features_,
            "init_scores": self.init_scores_.tolist(),
            "trees": [[t.to_dict(integer_values=False) for t in rt] for rt in self.trees_],
        }

    @classmethod
    def from_params(cls, hp, doc):
        model = cls(**hp)
        model.n_features_ = int(doc["n_features"])
        model.init_scores_ = np.asarray(doc["init_scores"], dtype=np.float64)
        model.trees_ = [[Tree.from_dict(t) for t in rt] for rt in doc["trees"]]
        k = model.init_scores_.size
        if any(len(rt) != k for rt in model.trees_):
            raise ValueError("boosting round with the wrong number of class trees")
        return model

    @property
    def n_features(self):
        return self.n_features_
