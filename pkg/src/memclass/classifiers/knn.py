from __future__ import annotations

import numpy as np

from ..errors import DataError


class KNearestNeighbors:
    """Brute-force Euclidean k-NN.

    Distance ties go to the lower training row index, vote ties to the
    lowest class index. Distances are screened with the dot-product
    expansion and the shortlist is re-ranked on exact differences.
    """

    kind = "knn"

    def __init__(self, k=5):
        self.k = k

    def fit(self, X, y, n_classes, seed=None):
        if self.k > X.shape[0]:
            raise DataError(f"k={self.k} exceeds the {X.shape[0]} training rows")
        self.X_ = np.array(X, dtype=np.float64)
        self.y_ = np.array(y, dtype=np.int64)
        self.n_classes_ = n_classes
        return self

    def neighbors(self, X, chunk: int = 512):
        """Indices of the k nearest training rows, nearest first."""
        k = self.k
        train_sq = np.einsum("ij,ij->i", self.X_, self.X_)
        out = np.empty((X.shape[0], k), dtype=np.intp)
        for start in range(0, X.shape[0], chunk):
            Q = X[start:start + chunk]
            q_sq = np.einsum("ij,ij->i", Q, Q)
            approx = q_sq[:, None] + train_sq[None, :] - 2.0 * (Q @ self.X_.T)
            kth = np.partition(approx, k - 1, axis=1)[:, k - 1]
            slack = 1e-9 * (q_sq[:, None] + train_sq[None, :] + 1.0)
            for r in range(Q.shape[0]):
                cand = np.flatnonzero(approx[r] <= kth[r] + slack[r])
                diff = self.X_[cand] - Q[r]
                exact = np.einsum("ij,ij->i", diff, diff)
                order = np.lexsort((cand, exact))[:k]
                out[start + r] = cand[order]
        return out

    def predict(self, X):
        if X.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        labels = self.y_[self.neighbors(X)]
        tally = np.zeros((X.shape[0], self.n_classes_), dtype=np.int64)
        for c in range(self.n_classes_):
            tally[:, c] = (labels == c).sum(axis=1)
        return np.argmax(tally, axis=1)

    def params(self):
        return {"X": self.X_.tolist(), "y": self.y_.tolist(), "n_classes": self.n_classes_}

    @classmethod
    def from_params(cls, hp, doc):
        model = cls(**hp)
        model.X_ = np.asarray(doc["X"], dtype=np.float64)
        model.y_ = np.asarray(doc["y"], dtype=np.int64)
        model.n_classes_ = int(doc["n_classes"])
        if model.X_.ndim != 2 or model.X_.shape[0] != model.y_.size:
            raise ValueError("k-NN training matrix and labels disagree")
        return model

    @property
    def n_features(self):
        return self.X_.shape[1]
