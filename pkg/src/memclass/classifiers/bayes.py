from __future__ import annotations

import numpy as np

_TINY = np.finfo(np.float64).tiny


class GaussianNB:
    """Gaussian naive Bayes with population variances.

    Per-class variances are floored at ``var_smoothing`` times the largest
    feature variance of the training set so constant features stay finite.
    """

    kind = "gnb"

    def __init__(self, var_smoothing: float = 1e-9):
        self.var_smoothing = var_smoothing

    def fit(self, X, y, n_classes, seed=None):
        n, d = X.shape
        self.priors_ = np.bincount(y, minlength=n_classes) / n
        self.means_ = np.zeros((n_classes, d))
        self.vars_ = np.ones((n_classes, d))
        floor = self.var_smoothing * float(X.var(axis=0).max()) if n else 0.0
        if floor <= 0.0:
            floor = max(self.var_smoothing, _TINY)
        self.var_floor_ = floor
        for c in range(n_classes):
            rows = X[y == c]
            if rows.shape[0]:
                self.means_[c] = rows.mean(axis=0)
                self.vars_[c] = np.maximum(rows.var(axis=0), floor)
        return self

    def log_posterior(self, X):
        """Unnormalised log posterior per class (log prior + log likelihood)."""
        with np.errstate(divide="ignore"):
            log_prior = np.log(self.priors_)
        out = np.empty((X.shape[0], self.priors_.size))
        for c in range(self.priors_.size):
            var = self.vars_[c]
            ll = -0.5 * np.sum(np.log(2.0 * np.pi * var)) - 0.5 * np.sum(
                (X - self.means_[c]) ** 2 / var, axis=1
            )
            out[:, c] = log_prior[c] + ll
        return out

    def predict(self, X):
        return np.argmax(self.log_posterior(X), axis=1)

    def params(self) -> dict:
        return {
            "priors": self.priors_.tolist(),
            "means": self.means_.tolist(),
            "variances": self.vars_.tolist(),
            "var_floor": self.var_floor_,
        }

    @classmethod
    def from_params(cls, hp: dict, doc: dict) -> "GaussianNB":
        model = cls(**hp)
        model.priors_ = np.asarray(doc["priors"], dtype=np.float64)
        model.means_ = np.asarray(doc["means"], dtype=np.float64)
        model.vars_ = np.asarray(doc["variances"], dtype=np.float64)
        model.var_floor_ = float(doc["var_floor"])
        if model.means_.shape != model.vars_.shape or model.means_.shape[0] != model.priors_.size:
            raise ValueError("naive Bayes parameter shapes disagree")
        return model

    @property
    def n_features(self) -> int:
        return self.means_.shape[1]
