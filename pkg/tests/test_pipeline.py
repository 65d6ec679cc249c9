import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memclass.data import RawTable
from memclass.errors import DataError
from memclass.pipeline import (
    ScalerParams,
    apply_minmax,
    fit_minmax,
    one_hot_encode,
    stratified_split,
)

from conftest import make_labels, make_table


def test_one_hot_basic():
    raw = RawTable(("os",), (("A",), ("B",), ("A",)))
    ft = one_hot_encode(raw, ["os"])
    assert ft.column_names == ("os=A", "os=B")
    assert ft.values[:, 0].tolist() == [1, 0, 1]
    assert ft.values[:, 1].tolist() == [0, 1, 0]


def test_one_hot_identity_on_numeric():
    raw = RawTable(("a", "b"), (("1", "2"), ("3", "4")))
    ft = one_hot_encode(raw, [])
    assert ft.column_names == ("a", "b")
    assert ft.values.tolist() == [[1, 2], [3, 4]]


def test_one_hot_single_level():
    ft = one_hot_encode(RawTable(("os",), (("A",), ("A",))), ["os"])
    assert ft.column_names == ("os=A",)
    assert ft.values[:, 0].tolist() == [1, 1]


def test_one_hot_missing_column():
    with pytest.raises(DataError):
        one_hot_encode(RawTable(("a",), (("1",),)), ["os"])


@given(st.lists(st.tuples(st.sampled_from("xyz"), st.integers(-50, 50)), min_size=1, max_size=30))
def test_encoding_then_dropping_indicators_recovers_numeric(rows):
    raw = RawTable(("cat", "num"), tuple((c, str(v)) for c, v in rows))
    ft = one_hot_encode(raw, ["cat"])
    keep = [j for j, n in enumerate(ft.column_names) if not n.startswith("cat=")]
    assert ft.values[:, keep][:, 0].tolist() == [float(v) for _, v in rows]
    assert np.all(ft.values[:, [j for j in range(ft.column_count) if j not in keep]].sum(1) == 1)


def test_fit_minmax_examples():
    p = fit_minmax(make_table([[2, 5], [4, 5], [6, 5]]))
    assert p.mins.tolist() == [2, 5]
    assert p.maxs.tolist() == [6, 5]


def test_fit_minmax_empty():
    with pytest.raises(DataError):
        fit_minmax(make_table(np.zeros((0, 2))))


def test_apply_minmax_examples():
    t = make_table([2, 4, 6])
    assert apply_minmax(t, fit_minmax(t)).values[:, 0].tolist() == [0, 0.5, 1]
    assert apply_minmax(make_table([12]), ScalerParams(("f0",), [0], [10])).values[0, 0] == 1.2
    c = make_table([5, 5, 5])
    assert apply_minmax(c, fit_minmax(c)).values[:, 0].tolist() == [0, 0, 0]


def test_apply_minmax_column_mismatch():
    with pytest.raises(DataError):
        apply_minmax(make_table([[1, 2]]), ScalerParams(("a",), [0], [1]))


finite = st.floats(-1e6, 1e6, allow_nan=False)


@given(st.lists(st.lists(finite, min_size=3, max_size=3), min_size=1, max_size=40))
def test_scaler_maps_train_onto_unit_interval(rows):
    t = make_table(rows)
    out = apply_minmax(t, fit_minmax(t)).values
    assert np.all(out >= 0) and np.all(out <= 1)
    for j in range(3):
        if t.values[:, j].min() < t.values[:, j].max():
            assert out[:, j].min() == 0 and out[:, j].max() == 1


@given(st.lists(finite, min_size=2, max_size=40))
def test_scaler_preserves_order(col):
    t = make_table(col)
    out = apply_minmax(t, fit_minmax(t)).values[:, 0]
    x = t.values[:, 0]
    for i in range(len(col)):
        for j in range(len(col)):
            if x[i] < x[j]:
                assert out[i] <= out[j]


def test_split_exact_stratification():
    labels = make_labels([0, 1] * 5)
    for seed in range(5):
        s = stratified_split(labels, 0.8, seed)
        assert len(s.train_indices) == 8 and len(s.test_indices) == 2
        assert np.bincount(labels.values[s.train_indices]).tolist() == [4, 4]
        assert np.bincount(labels.values[s.test_indices]).tolist() == [1, 1]


def test_split_deterministic_and_seed_sensitive():
    labels = make_labels(np.arange(200) % 4)
    a, b = stratified_split(labels, 0.8, 3), stratified_split(labels, 0.8, 3)
    assert np.array_equal(a.train_indices, b.train_indices)
    c = stratified_split(labels, 0.8, 4)
    assert not np.array_equal(a.train_indices, c.train_indices)
    assert np.array_equal(np.bincount(labels.values[a.train_indices]),
                          np.bincount(labels.values[c.train_indices]))


def test_split_errors():
    with pytest.raises(DataError):
        stratified_split(make_labels([0, 1, 1]), 0.8, 0)
    with pytest.raises(DataError):
        stratified_split(make_labels([0, 0, 1, 1]), 1.0, 0)
    with pytest.raises(DataError):
        stratified_split(make_labels([0, 0, 1, 1]), 0.0, 0)


@settings(max_examples=60)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=120),
       st.floats(0.05, 0.95), st.integers(0, 2**32))
def test_split_partition_property(ys, ratio, seed):
    y = np.asarray(ys)
    counts = np.bincount(y, minlength=4)
    if np.any((counts > 0) & (counts < 2)):
        return
    labels = make_labels(y, "multiclass")
    s = stratified_split(labels, ratio, seed)
    both = np.concatenate([s.train_indices, s.test_indices])
    assert sorted(both.tolist()) == list(range(len(y)))
    for c in range(4):
        if counts[c]:
            n_train = int(np.sum(y[s.train_indices] == c))
            assert abs(n_train - ratio * counts[c]) <= 1
