"""Binary linear models trained by full-batch (sub)gradient descent."""
from __future__ import annotations

import numpy as np

from ..errors import DataError


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def _check_binary(y, n_classes, name):
    if n_classes != 2:
        raise DataError(f"{name} is a binary classifier; got a {n_classes}-class schema")


class LogisticRegression:
    """Mean cross-entropy minimised by gradient descent from zero weights.

    The step is halved whenever a step would raise the loss, so the recorded
    loss history never increases.
    """

    kind = "logreg"

    def __init__(self, learning_rate=0.1, max_iter=1000, tol=1e-6, l2=0.0):
        self.learning_rate = learning_rate
        self.max_iter = max_iter
        self.tol = tol
        self.l2 = l2

    def loss(self, X, y, w, b):
        z = X @ w + b
        ce = np.where(y == 1, np.logaddexp(0.0, -z), np.logaddexp(0.0, z))
        return float(ce.mean() + 0.5 * self.l2 * np.dot(w, w))

    def _grad(self, X, y, w, b):
        err = sigmoid(X @ w + b) - y
        return X.T @ err / X.shape[0] + self.l2 * w, float(err.mean())

    def fit(self, X, y, n_classes, seed=None):
        _check_binary(y, n_classes, "logistic regression")
        y = y.astype(np.float64)
        w = np.zeros(X.shape[1])
        b = 0.0
        eta = self.learning_rate
        loss = self.loss(X, y, w, b)
        history = [loss]
        n_iter = 0
        while n_iter < self.max_iter:
            gw, gb = self._grad(X, y, w, b)
            if max(np.max(np.abs(gw), initial=0.0), abs(gb)) < self.tol:
                break
            n_iter += 1
            while True:
                w_new, b_new = w - eta * gw, b - eta * gb
                new_loss = self.loss(X, y, w_new, b_new)
                if new_loss <= loss or eta < 1e-12:
                    break
                eta /= 2.0
            if new_loss > loss:
                break
            w, b, loss = w_new, b_new, new_loss
            history.append(loss)
        self.coef_, self.intercept_ = w, b
        self.n_iter_ = n_iter
        self.final_learning_rate_ = eta
        self.loss_history_ = history
        return self

    def decision_function(self, X):
        return X @ self.coef_ + self.intercept_

    def predict(self, X):
        # p >= 0.5 exactly when the logit is >= 0
        return (self.decision_function(X) >= 0).astype(np.int64)

    def params(self) -> dict:
        return {
            "coef": self.coef_.tolist(),
            "intercept": float(self.intercept_),
            "n_iter": self.n_iter_,
            "final_learning_rate": self.final_learning_rate_,
        }

    @classmethod
    def from_params(cls, hp, doc):
        model = cls(**hp)
        model.coef_ = np.asarray(doc["coef"], dtype=np.float64)
        model.intercept_ = float(doc["intercept"])
        model.n_iter_ = int(doc["n_iter"])
        model.final_learning_rate_ = float(doc["final_learning_rate"])
        return model

    @property
    def n_features(self):
        return self.coef_.size


class LinearSVM:
    """Primal soft-margin SVM: 0.5*|w|^2 + C*sum(hinge).

    The intercept is an extra weight on a constant-1 feature and is
    regularised with ``w``. Two solvers reach the same objective:

    ``dcd`` (default) is dual coordinate descent: one exact box-constrained
    update per sample, samples visited in a seeded order each epoch, stopping
    when the projected-gradient spread drops below ``tol``.

    ``subgradient`` is full-batch subgradient descent with step 1/(t+1) at
    epoch t, keeping the lowest-objective iterate. On large n it needs far
    more than ``epochs`` steps to leave w = 0.
    """

    kind = "svm"

    def __init__(self, C=1.0, epochs=1000, solver="dcd", tol=0.1):
        self.C = C
        self.epochs = epochs
        self.solver = solver
        self.tol = tol

    def objective(self, Xa, ys, wa):
        hinge = np.maximum(0.0, 1.0 - ys * (Xa @ wa))
        return float(0.5 * np.dot(wa, wa) + self.C * hinge.sum())

    def fit(self, X, y, n_classes, seed=0):
        _check_binary(y, n_classes, "linear SVM")
        if np.unique(y).size < 2:
            raise DataError("linear SVM needs samples from both classes")
        Xa = np.hstack([X, np.ones((X.shape[0], 1))])
        ys = np.where(y == 1, 1.0, -1.0)
        self.initial_objective_ = self.objective(Xa, ys, np.zeros(Xa.shape[1]))
        if self.solver == "dcd":
            wa, self.n_epochs_ = self._dual_cd(Xa, ys, seed)
        elif self.solver == "subgradient":
            wa, self.n_epochs_ = self._subgradient(Xa, ys)
        else:
            raise DataError(f"unknown SVM solver {self.solver!r}")
        self.coef_, self.intercept_ = wa[:-1], float(wa[-1])
        self.objective_ = self.objective(Xa, ys, wa)
        return self

    def _subgradient(self, Xa, ys):
        wa = np.zeros(Xa.shape[1])
        best_w, best_obj = wa.copy(), self.objective(Xa, ys, wa)
        for t in range(self.epochs):
            viol = ys * (Xa @ wa) < 1.0
            grad = wa - self.C * (ys[viol] @ Xa[viol])
            wa = wa - grad / (t + 1.0)
            obj = self.objective(Xa, ys, wa)
            if obj < best_obj:
                best_w, best_obj = wa.copy(), obj
        return best_w, self.epochs

    def _dual_cd(self, Xa, ys, seed):
        from ..pipeline import make_rng

        n = Xa.shape[0]
        C = self.C
        rng = make_rng(0 if seed is None else seed)
        q = np.einsum("ij,ij->i", Xa, Xa)
        alpha = np.zeros(n)
        wa = np.zeros(Xa.shape[1])
        epoch = 0
        for epoch in range(1, self.epochs + 1):
            pg_max, pg_min = -np.inf, np.inf
            for i in rng.permutation(n):
                xi = Xa[i]
                g = ys[i] * (wa @ xi) - 1.0
                a = alpha[i]
                pg = min(g, 0.0) if a == 0.0 else max(g, 0.0) if a == C else g
                pg_max, pg_min = max(pg_max, pg), min(pg_min, pg)
                if pg != 0.0:
                    new = min(max(a - g / q[i], 0.0), C)
                    if new != a:
                        wa += (new - a) * ys[i] * xi
                        alpha[i] = new
            if pg_max - pg_min < self.tol:
                break
        return wa, epoch
    def decision_function(self, X):
        return X @ self.coef_ + self.intercept_

    def predict(self, X):
        return (self.decision_function(X) >= 0).astype(np.int64)

    def params(self):
        return {
            "coef": self.coef_.tolist(),
            "intercept": float(self.intercept_),
            "objective": self.objective_,
            "n_epochs": self.n_epochs_,
        }

    @classmethod
    def from_params(cls, hp, doc):
        model = cls(**hp)
        model.coef_ = np.asarray(doc["coef"], dtype=np.float64)
        model.intercept_ = float(doc["intercept"])
        model.objective_ = float(doc["objective"])
        model.n_epochs_ = int(doc["n_epochs"])
        return model

    @property
    def n_features(self):
        return self.coef_.size
