import os
from pathlib import Path

import numpy as np
import pytest

from memclass.data import FeatureTable, LabelSchema, LabelVector

DATA_DIR = Path(__file__).parent / "data"
FIXTURE = DATA_DIR / "malmem_fixture.csv"

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def fixture_csv():
    return str(FIXTURE)


@pytest.fixture
def real_dataset():
    path = os.environ.get("MEMCLASS_DATA")
    if not path or not os.path.isfile(path):
        pytest.skip("set MEMCLASS_DATA to the CIC-MalMem-2022 CSV to run real-data checks")
    return path


def make_table(X, names=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    names = names or tuple(f"f{j}" for j in range(X.shape[1]))
    return FeatureTable(tuple(names), X)


def make_labels(y, kind=None):
    y = np.asarray(y, dtype=np.int64)
    if kind is None:
        kind = "binary" if y.size == 0 or y.max() < 2 else "multiclass"
    return LabelVector(LabelSchema(kind), y)


def blobs(n, n_features, n_classes, separation, seed):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % n_classes
    X = rng.normal(size=(n, n_features)) + separation * y[:, None]
    return X, y


def write_csv(path, header, rows):
    lines = [",".join(header)] + [",".join(str(c) for c in r) for r in rows]
    Path(path).write_text("\n".join(lines) + "\n")
    return str(path)
