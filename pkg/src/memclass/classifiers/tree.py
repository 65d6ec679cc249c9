"""Decision trees stored as flat node arrays.

Node ``i`` is a leaf when ``feature[i] == -1``. Internal nodes send
``x[feature] <= threshold`` to ``left[i]``, everything else to ``right[i]``.
``value`` holds per-class counts for classification trees and the mean
target for regression trees.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ..errors import DataError

# gains at or below this are rounding noise, not information
GAIN_EPS = 1e-12


def entropy(class_counts) -> float:
    """Shannon entropy in bits of a class histogram."""
    counts = np.asarray(class_counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise ValueError("entropy of an empty histogram")
    p = counts[counts > 0] / total
    return float(max(0.0, -np.sum(p * np.log2(p))))


def n_candidates(n_features: int, max_features) -> int:
    if max_features is None or max_features == "all":
        return n_features
    if max_features == "log2":
        return max(1, int(math.floor(math.log2(n_features)))) if n_features > 1 else 1
    if max_features == "sqrt":
        return max(1, int(math.floor(math.sqrt(n_features))))
    k = int(max_features)
    if k < 1:
        raise DataError(f"max_features must be >= 1, got {max_features}")
    return min(k, n_features)


class Split(NamedTuple):
    feature: int
    threshold: float
    gain: float


def midpoint(lo: float, hi: float) -> float:
    mid = (lo + hi) / 2.0
    # adjacent floats: the midpoint rounds onto hi and would route it left
    return lo if mid >= hi else mid


_XLOGX = np.zeros(1)


def _xlogx_table(n: int) -> np.ndarray:
    """c * log2(c) for integer c in [0, n]."""
    global _XLOGX
    table = _XLOGX
    if table.size <= n:
        c = np.arange(max(n + 1, 2 * table.size), dtype=np.float64)
        table = np.zeros_like(c)
        table[1:] = c[1:] * np.log2(c[1:])
        _XLOGX = table
    return table


def best_split(
    X: np.ndarray,
    y: np.ndarray,
    candidate_features: Sequence[int],
    n_classes: int,
    min_samples_leaf: int = 1,
) -> Split | None:
    """Highest information-gain split over midpoints of the candidate features.

    Ties go to the lowest feature index, then the lowest threshold. Returns
    None when no split leaves ``min_samples_leaf`` rows on both sides with
    positive gain.
    """
    m = y.shape[0]
    if m < 2 or len(candidate_features) == 0:
        return None
    table = _xlogx_table(m)
    total = np.bincount(y, minlength=n_classes)
    parent = (table[m] - table[total].sum()) / m
    if parent <= GAIN_EPS:
        return None
    n_left = np.arange(1, m)
    size_ok = (n_left >= min_samples_leaf) & (m - n_left >= min_samples_leaf)
    if not size_ok.any():
        return None
    feats = np.array(sorted(int(c) for c in candidate_features), dtype=np.intp)
    xc = X[:, feats]
    order = np.argsort(xc, axis=0, kind="stable")
    xs = np.take_along_axis(xc, order, axis=0)
    valid = size_ok[:, None] & (xs[1:] > xs[:-1])
    if not valid.any():
        return None
    onehot = np.eye(n_classes, dtype=np.int64)[y[order]]
    left = np.cumsum(onehot, axis=0)[:-1]
    right = total - left
    nl = n_left[:, None]
    child = (table[nl] - table[left].sum(axis=2) + table[m - nl] - table[right].sum(axis=2)) / m
    gain = np.where(valid, parent - child, -np.inf)
    # column-major flat index: lowest feature first, then lowest threshold
    flat = int(np.argmax(gain.T))
    j, i = divmod(flat, m - 1)
    if not gain[i, j] > GAIN_EPS:
        return None
    return Split(int(feats[j]), midpoint(float(xs[i, j]), float(xs[i + 1, j])), float(gain[i, j]))


@dataclass(eq=False)
class Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.feature.size

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by every row of ``X``."""
        node = np.zeros(X.shape[0], dtype=np.intp)
        active = np.flatnonzero(self.feature[node] >= 0)
        while active.size:
            cur = node[active]
            go_left = X[active, self.feature[cur]] <= self.threshold[cur]
            node[active] = np.where(go_left, self.left[cur], self.right[cur])
            active = active[self.feature[node[active]] >= 0]
        return node

    def predict_class(self, X: np.ndarray) -> np.ndarray:
        # argmax returns the first maximum: ties go to the lowest class
        return np.argmax(self.value[self.apply(X)], axis=1)

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X), 0]

    def depth(self) -> int:
        best = 0
        stack = [(0, 0)]
        while stack:
            i, d = stack.pop()
            best = max(best, d)
            if self.feature[i] >= 0:
                stack.append((int(self.left[i]), d + 1))
                stack.append((int(self.right[i]), d + 1))
        return best

    def to_dict(self, integer_values: bool) -> dict:
        conv = int if integer_values else float
        return {
            "feature": [int(v) for v in self.feature],
            "threshold": [float(v) for v in self.threshold],
            "left": [int(v) for v in self.left],
            "right": [int(v) for v in self.right],
            "value": [[conv(v) for v in row] for row in self.value],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Tree":
        tree = cls(
            np.asarray(doc["feature"], dtype=np.intp),
            np.asarray(doc["threshold"], dtype=np.float64),
            np.asarray(doc["left"], dtype=np.intp),
            np.asarray(doc["right"], dtype=np.intp),
            np.asarray(doc["value"], dtype=np.float64),
        )
        n = tree.n_nodes
        if not (tree.threshold.size == tree.left.size == tree.right.size == n == len(tree.value)):
            raise ValueError("tree arrays have inconsistent lengths")
        if tree.value.ndim != 2:
            raise ValueError("tree values must be a 2-D array")
        internal = tree.feature >= 0
        for arr in (tree.left, tree.right):
            if np.any(internal & ((arr <= np.arange(n)) | (arr >= n))):
                raise ValueError("tree child pointer out of range")
        return tree


class _Nodes:
    def __init__(self):
        self.feature, self.threshold, self.left, self.right, self.value = [], [], [], [], []

    def add(self, value) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(value)
        return len(self.feature) - 1

    def link(self, i, feature, threshold, left, right):
        self.feature[i] = feature
        self.threshold[i] = threshold
        self.left[i] = left
        self.right[i] = right

    def build(self) -> Tree:
        return Tree(
            np.asarray(self.feature, dtype=np.intp),
            np.asarray(self.threshold, dtype=np.float64),
            np.asarray(self.left, dtype=np.intp),
            np.asarray(self.right, dtype=np.intp),
            np.asarray(self.value, dtype=np.float64),
        )


def grow_classification_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    rng: np.random.Generator,
    max_depth: int | None = None,
    min_samples_split: int = 2,
    min_samples_leaf: int = 1,
    max_features="log2",
) -> Tree:
    """Greedy entropy tree; candidate features are redrawn at every node.

    Nodes are numbered and the generator consumed in depth-first,
    left-before-right order, so a seed fixes the whole tree.
    """
    n_features = X.shape[1]
    k = n_candidates(n_features, max_features)
    depth_cap = math.inf if max_depth is None else max_depth
    nodes = _Nodes()

    def grow(idx: np.ndarray, depth: int) -> int:
        yi = y[idx]
        counts = np.bincount(yi, minlength=n_classes)
        node = nodes.add(counts)
        if depth >= depth_cap or idx.size < min_samples_split or counts.max() == idx.size:
            return node
        cands = rng.choice(n_features, size=k, replace=False)
        Xi = X[idx]
        split = best_split(Xi, yi, cands, n_classes, min_samples_leaf)
        if split is None:
            return node
        go_left = Xi[:, split.feature] <= split.threshold
        left = grow(idx[go_left], depth + 1)
        right = grow(idx[~go_left], depth + 1)
        nodes.link(node, split.feature, split.threshold, left, right)
        return node

    grow(np.arange(X.shape[0]), 0)
    return nodes.build()


class PresortedFeatures:
    """Per-feature sort orders of a fixed matrix, reused across many trees."""

    def __init__(self, X: np.ndarray):
        self.X = X
        self.order = np.ascontiguousarray(np.argsort(X, axis=0, kind="stable").T)
        self.sorted_x = np.take_along_axis(X.T, self.order, axis=1)


def grow_regression_tree(
    pre: PresortedFeatures,
    target: np.ndarray,
    max_depth: int = 3,
    min_samples_leaf: int = 1,
) -> Tree:
    """Least-squares regression tree over all features; leaves hold the mean."""
    n_features, n = pre.order.shape
    sorted_t = target[pre.order]
    nodes = _Nodes()

    def grow(mask: np.ndarray, depth: int) -> int:
        m = int(mask.sum())
        vals = target[mask]
        node = nodes.add([float(vals.mean())])
        if depth >= max_depth or m < 2 * min_samples_leaf or m < 2:
            return node
        sel = mask[pre.order]
        xs = pre.sorted_x[sel].reshape(n_features, m)
        cs = np.cumsum(sorted_t[sel].reshape(n_features, m), axis=1)
        total = cs[:, -1:]
        nl = np.arange(1, m, dtype=np.float64)
        left = cs[:, :-1]
        score = left**2 / nl + (total - left) ** 2 / (m - nl) - total**2 / m
        valid = (xs[:, 1:] > xs[:, :-1]) & (nl >= min_samples_leaf) & (m - nl >= min_samples_leaf)
        score = np.where(valid, score, -np.inf)
        flat = int(np.argmax(score))
        f, i = divmod(flat, m - 1)
        ss = float(np.dot(vals - vals.mean(), vals - vals.mean()))
        if not score[f, i] > GAIN_EPS * max(ss, 1.0):
            return node
        threshold = midpoint(float(xs[f, i]), float(xs[f, i + 1]))
        go_left = mask & (pre.X[:, f] <= threshold)
        lnode = grow(go_left, depth + 1)
        rnode = grow(mask & ~go_left, depth + 1)
        nodes.link(node, f, threshold, lnode, rnode)
        return node

    grow(np.ones(n, dtype=bool), 0)
    return nodes.build()
