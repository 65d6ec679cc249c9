import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from memclass.errors import DataError, ModelError
from memclass.metrics import (
    ClassMetrics, ConfusionMatrix, accuracy, confusion, evaluate, macro_average, parse_table,
    per_class_prf, render_report,
)

import oracles
from conftest import make_labels


def cm(rows):
    return ConfusionMatrix(np.array(rows))


def test_confusion_example():
    m = confusion(make_labels([0, 0, 1]), make_labels([0, 1, 1]))
    assert m.counts.tolist() == [[1, 1], [0, 1]]


def test_confusion_perfect_is_diagonal():
    y = make_labels([0, 1, 2, 3, 3], "multiclass")
    m = confusion(y, y).counts
    assert np.array_equal(m, np.diag(np.diag(m)))


def test_confusion_errors():
    with pytest.raises(DataError):
        confusion(make_labels([], "binary"), make_labels([], "binary"))
    with pytest.raises(DataError):
        confusion(make_labels([0, 1]), make_labels([0]))
    with pytest.raises(ModelError):
        confusion(make_labels([0, 1], "binary"), make_labels([0, 1], "multiclass"))


@pytest.mark.parametrize("rows,expected", [
    ([[1, 1], [0, 2]], 0.75), ([[2, 0], [0, 3]], 1.0), ([[0, 2], [2, 0]], 0.0),
])
def test_accuracy(rows, expected):
    assert accuracy(cm(rows)) == expected


def test_prf_examples():
    assert per_class_prf(cm([[3, 0], [0, 2]]), 1).f1 == 1.0
    # precision 1/2, recall 1
    m = per_class_prf(cm([[1, 1], [0, 1]]), 1)
    assert (m.precision, m.recall) == (0.5, 1.0)
    assert m.f1 == pytest.approx(2 / 3)


def test_prf_zero_denominator_flagged():
    m = per_class_prf(cm([[2, 0], [1, 0]]), 1)
    assert m.precision == 0.0
    assert "precision" in m.undefined


def test_macro_average():
    assert macro_average([ClassMetrics(0.3, 0.3, 0.3)] * 3).f1 == pytest.approx(0.3)
    assert macro_average([ClassMetrics(1, 1, 1), ClassMetrics(0, 0, 0)]).precision == 0.5
    assert macro_average([ClassMetrics(0.7, 0.2, 0.1)]).recall == 0.2


labels4 = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=80)


@given(labels4)
def test_metrics_match_pair_count_oracle(pairs):
    truth = make_labels([t for t, _ in pairs], "multiclass")
    pred = make_labels([p for _, p in pairs], "multiclass")
    m = confusion(truth, pred)
    acc, per = oracles.pair_metrics(truth.values.tolist(), pred.values.tolist(), 4)
    assert accuracy(m) == pytest.approx(acc, abs=1e-15)
    for c in range(4):
        got = per_class_prf(m, c)
        assert (got.precision, got.recall) == pytest.approx(per[c], abs=1e-15)
    assert m.counts.sum(axis=1).tolist() == np.bincount(truth.values, minlength=4).tolist()
    assert m.counts.sum(axis=0).tolist() == np.bincount(pred.values, minlength=4).tolist()


@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=80))
def test_binary_positive_class_from_pairs(pairs):
    tp = sum(1 for t, p in pairs if t == p == 1)
    fp = sum(1 for t, p in pairs if t == 0 and p == 1)
    fn = sum(1 for t, p in pairs if t == 1 and p == 0)
    m = per_class_prf(confusion(make_labels([t for t, _ in pairs], "binary"),
                                make_labels([p for _, p in pairs], "binary")), 1)
    assert m.precision == (tp / (tp + fp) if tp + fp else 0.0)
    assert m.recall == (tp / (tp + fn) if tp + fn else 0.0)


@given(labels4)
def test_f1_harmonic_bounds(pairs):
    m = confusion(make_labels([t for t, _ in pairs], "multiclass"),
                  make_labels([p for _, p in pairs], "multiclass"))
    for c in range(4):
        r = per_class_prf(m, c)
        assert r.f1 <= (r.precision + r.recall) / 2 + 1e-12
        assert min(r.precision, r.recall) - 1e-12 <= r.f1 or r.f1 == 0
        if r.precision == r.recall:
            assert r.f1 == pytest.approx(r.precision)


def _report(acc_pairs, name="forest"):
    t, p = zip(*acc_pairs)
    return evaluate(make_labels(list(t), "multiclass"), make_labels(list(p), "multiclass"),
                    model=name, label=name)


def test_render_single_and_empty():
    rep = _report([(0, 0), (1, 2), (3, 3)])
    table = render_report([rep])
    assert len(table.strip().splitlines()) == 3
    assert "66.67" in table
    assert render_report([], "csv").strip() == "Model,Accuracy,Precision,Recall,F1 Score"


def test_render_csv_and_table_agree():
    reps = [_report([(0, 0), (1, 2), (3, 3)], "a"), _report([(0, 1), (2, 2)], "b c")]
    csv_rows = [line.split(",") for line in render_report(reps, "csv").strip().splitlines()[1:]]
    assert parse_table(render_report(reps, "table")) == csv_rows


def test_reference_rows_labelled():
    text = render_report([], "table", reference_task="multiclass")
    assert "Random Forest (paper-reported)" in text
    assert "89.07" in text


def test_report_round_trip():
    from memclass.metrics import EvalReport

    rep = _report([(0, 0), (1, 2), (3, 3), (2, 2)])
    again = EvalReport.from_dict(rep.to_dict())
    assert again.to_dict() == rep.to_dict()
