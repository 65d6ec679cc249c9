import json

import numpy as np
import pytest

from memclass.classifiers import train
from memclass.errors import ModelError, UsageError
from memclass.fileio import OutputExistsError
from memclass.model_store import dumps_model, load_model, loads_model, save_model
from memclass.pipeline import fit_minmax

from conftest import blobs, make_labels, make_table

SMALL = {"forest": {"n_estimators": 4}, "gboost": {"n_rounds": 4}}


def _model(kind, seed=0):
    binary = kind in ("logreg", "svm")
    X, y = blobs(150, 5, 2 if binary else 4, 1.0, seed)
    return train(kind, make_table(X), make_labels(y, "binary" if binary else "multiclass"),
                 SMALL.get(kind), seed=seed), make_table(X)


@pytest.mark.parametrize("kind", ["gnb", "logreg", "svm", "tree", "forest", "gboost", "knn"])
def test_round_trip_predictions_and_bytes(kind, tmp_path):
    model, table = _model(kind)
    scaler = fit_minmax(table)
    path = tmp_path / "m.json"
    save_model(model, scaler, path)
    loaded, scaler2 = load_model(path)
    assert scaler2 == scaler
    Q = np.random.default_rng(1).normal(size=(100, 5)) * 3
    assert np.array_equal(model.predict_matrix(Q), loaded.predict_matrix(Q))
    assert dumps_model(loaded, scaler2) == path.read_text()


def test_identical_trainings_identical_files(tmp_path):
    a, _ = _model("forest", 3)
    b, _ = _model("forest", 3)
    save_model(a, None, tmp_path / "a.json")
    save_model(b, None, tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_collision_needs_force(tmp_path):
    model, _ = _model("gnb")
    save_model(model, None, tmp_path / "m.json")
    with pytest.raises(OutputExistsError):
        save_model(model, None, tmp_path / "m.json")
    save_model(model, None, tmp_path / "m.json", force=True)


def _doc():
    model, _ = _model("tree")
    return json.loads(dumps_model(model))


def test_version_rejected():
    doc = _doc()
    doc["schema_version"] = 99
    with pytest.raises(ModelError, match="schema_version"):
        loads_model(json.dumps(doc))


def test_missing_field_rejected():
    doc = _doc()
    del doc["parameters"]
    with pytest.raises(ModelError, match="corrupt"):
        loads_model(json.dumps(doc))


def test_truncated_file_rejected():
    text = json.dumps(_doc())
    with pytest.raises(ModelError, match="corrupt"):
        loads_model(text[: len(text) // 2])


def test_shape_inconsistency_rejected():
    doc = _doc()
    doc["feature_names"] = doc["feature_names"][:-1]
    with pytest.raises(ModelError, match="features"):
        loads_model(json.dumps(doc))


def test_class_count_inconsistency_rejected():
    doc = _doc()
    doc["label_schema"] = {"kind": "binary", "class_names": ["benign", "malware"]}
    with pytest.raises(ModelError, match="classes"):
        loads_model(json.dumps(doc))


def test_records_generator_and_seed():
    doc = _doc()
    assert doc["generator"] == "numpy.random.PCG64"
    assert doc["training_seed"] == 0
    assert doc["hyperparameters"]["max_depth"] == 12


def test_unwritable_path(tmp_path):
    model, _ = _model("gnb")
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(UsageError):
        save_model(model, None, blocker / "m.json")
