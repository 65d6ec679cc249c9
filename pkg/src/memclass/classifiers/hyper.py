"""Model kinds and their default hyperparameters for both experiments."""
from __future__ import annotations

from typing import Iterable

from ..data import BINARY, MULTICLASS
from ..errors import UsageError

MODEL_KINDS = ("gnb", "logreg", "svm", "tree", "forest", "gboost", "knn")
BINARY_ONLY = frozenset({"logreg", "svm"})

ALIASES = {
    "nb": "gnb",
    "naive_bayes": "gnb",
    "lr": "logreg",
    "logistic_regression": "logreg",
    "linear_svm": "svm",
    "dt": "tree",
    "decision_tree": "tree",
    "rf": "forest",
    "random_forest": "forest",
    "gb": "gboost",
    "gradient_boosting": "gboost",
}

DISPLAY_NAMES = {
    "gnb": "Naive Bayes",
    "logreg": "Logistic Regression",
    "svm": "Linear SVM",
    "tree": "Decision Tree",
    "forest": "Random Forest",
    "gboost": "Gradient Boosting",
    "knn": "K-Nearest Neighbor",
}

_TREE_BINARY = {
    "criterion": "entropy",
    "max_depth": 10,
    "min_samples_leaf": 3,
    "min_samples_split": 2,
    "max_features": "log2",
}
_TREE_MULTI = {
    "criterion": "entropy",
    "max_depth": 12,
    "min_samples_leaf": 16,
    "min_samples_split": 2,
    "max_features": "log2",
}
# no leaf minimum is given for the multi-class forest; 1 is the usual default
_FOREST_MULTI = {
    "criterion": "entropy",
    "max_depth": 40,
    "min_samples_leaf": 1,
    "min_samples_split": 4,
    "max_features": "log2",
    "n_estimators": 30,
}

_DEFAULTS = {
    ("gnb", BINARY): {"var_smoothing": 1e-9},
    ("gnb", MULTICLASS): {"var_smoothing": 1e-9},
    ("logreg", BINARY): {"learning_rate": 0.1, "max_iter": 1000, "tol": 1e-6, "l2": 0.0},
    ("svm", BINARY): {"C": 1.0, "epochs": 1000, "solver": "dcd", "tol": 0.1},
    ("tree", BINARY): _TREE_BINARY,
    ("tree", MULTICLASS): _TREE_MULTI,
    ("forest", BINARY): {**_TREE_BINARY, "n_estimators": 30},
    ("forest", MULTICLASS): _FOREST_MULTI,
    ("gboost", BINARY): {"learning_rate": 0.2, "n_rounds": 100, "max_depth": 3, "min_samples_leaf": 1},
    ("gboost", MULTICLASS): {"learning_rate": 0.2, "n_rounds": 100, "max_depth": 3, "min_samples_leaf": 1},
    ("knn", BINARY): {"k": 5},
    ("knn", MULTICLASS): {"k": 5},
}


def canonical_kind(name: str) -> str:
    kind = ALIASES.get(name.lower(), name.lower())
    if kind not in MODEL_KINDS:
        raise UsageError(f"unknown model {name!r}; choose from {', '.join(MODEL_KINDS)}")
    return kind


def defaults(kind: str, task: str) -> dict:
    kind = canonical_kind(kind)
    try:
        return dict(_DEFAULTS[(kind, task)])
    except KeyError:
        raise UsageError(f"{kind} supports binary tasks only") from None


def _coerce(name: str, text: str, current):
    low = text.strip().lower()
    if name == "max_depth" and low in ("none", "null"):
        return None
    if name == "max_features":
        if low in ("log2", "sqrt", "all"):
            return low
        if low in ("none", "null"):
            return None
        return int(text)
    if name in ("criterion", "solver"):
        return low
    if isinstance(current, bool):
        return low in ("1", "true", "yes")
    if isinstance(current, int):
        return int(text)
    if isinstance(current, float):
        return float(text)
    return text


def parse_overrides(kind: str, task: str, pairs: Iterable[str]) -> dict:
    """Apply ``key=value`` strings on top of the defaults for ``kind``."""
    hp = defaults(kind, task)
    for pair in pairs:
        if "=" not in pair:
            raise UsageError(f"hyperparameter override {pair!r} is not key=value")
        key, value = (s.strip() for s in pair.split("=", 1))
        if key not in hp:
            raise UsageError(f"{canonical_kind(kind)} has no hyperparameter {key!r}; known: {sorted(hp)}")
        try:
            hp[key] = _coerce(key, value, hp[key])
        except ValueError:
            raise UsageError(f"bad value for {key}: {value!r}") from None
    validate(canonical_kind(kind), hp)
    return hp


def validate(kind: str, hp: dict) -> None:
    def need(cond, msg):
        if not cond:
            raise UsageError(f"{kind}: {msg}")

    if "max_depth" in hp and hp["max_depth"] is not None:
        need(hp["max_depth"] >= 1, "max_depth must be >= 1")
    for key in ("min_samples_leaf", "n_estimators", "max_iter", "epochs", "k"):
        if key in hp:
            need(hp[key] >= 1, f"{key} must be >= 1")
    if "min_samples_split" in hp:
        need(hp["min_samples_split"] >= 2, "min_samples_split must be >= 2")
    if "n_rounds" in hp:
        need(hp["n_rounds"] >= 0, "n_rounds must be >= 0")
    if "learning_rate" in hp:
        # zero is allowed for boosting: scores simply never move
        need(hp["learning_rate"] > 0 or (kind == "gboost" and hp["learning_rate"] == 0),
             "learning_rate must be > 0")
    if "C" in hp:
        need(hp["C"] > 0, "C must be > 0")
    if "solver" in hp:
        need(hp["solver"] in ("dcd", "subgradient"), "solver must be dcd or subgradient")
    if "criterion" in hp:
        need(hp["criterion"] == "entropy", "only the entropy criterion is implemented")
    if "var_smoothing" in hp:
        need(hp["var_smoothing"] >= 0, "var_smoothing must be >= 0")
    if "l2" in hp:
        need(hp["l2"] >= 0, "l2 must be >= 0")
