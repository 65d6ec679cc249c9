import pytest

from memclass.data import LabelSchema, RawTable
from memclass.errors import DataError
from memclass.ingest import derive_labels, find_bad_rows, load_csv, to_feature_table

from conftest import write_csv

BIN = LabelSchema.binary()
MULTI = LabelSchema.multiclass()


def raw(header, rows):
    return RawTable(tuple(header), tuple(tuple(r) for r in rows))


def test_load_csv_counts(tmp_path):
    path = write_csv(tmp_path / "a.csv", ["a", "b", "c", "d"], [[1, 2, 3, 4], [5, 6, 7, 8]])
    table = load_csv(path)
    assert (table.row_count, table.column_count) == (2, 4)


def test_load_csv_trims_cells(tmp_path):
    (tmp_path / "a.csv").write_text(" a , b\n 1 ,x \n")
    table = load_csv(tmp_path / "a.csv")
    assert table.column_names == ("a", "b")
    assert table.rows == (("1", "x"),)


def test_ragged_row_names_line(tmp_path):
    path = write_csv(tmp_path / "a.csv", ["a", "b", "c", "d"], [[1, 2, 3, 4], [1, 2, 3]])
    with pytest.raises(DataError, match="line 3"):
        load_csv(path)


def test_ragged_row_dropped_on_request(tmp_path):
    path = write_csv(tmp_path / "a.csv", ["a", "b"], [[1, 2], [1], [3, 4]])
    table = load_csv(path, drop_bad_rows=True)
    assert table.row_count == 2
    assert table.dropped_rows == 1


def test_duplicate_header(tmp_path):
    path = write_csv(tmp_path / "a.csv", ["a", "b", "a"], [[1, 2, 3]])
    with pytest.raises(DataError, match="duplicate"):
        load_csv(path)


def test_missing_file(tmp_path):
    with pytest.raises(DataError, match="no such file"):
        load_csv(tmp_path / "nope.csv")


@pytest.mark.parametrize(
    "cls,cat,schema,expected",
    [
        ("Malicious", "Ransomware-Shade-x", MULTI, 2),
        ("Malicious", "Spyware-CWS-1.raw", MULTI, 1),
        ("Malicious", "TROJAN-Zeus-1", MULTI, 3),
        ("Benign", "Benign", MULTI, 0),
        ("Benign", "Benign", BIN, 0),
        ("Malicious", "Trojan-Zeus-1", BIN, 1),
    ],
)
def test_derive_labels(cls, cat, schema, expected):
    labels = derive_labels(raw(["Category", "Class"], [[cat, cls]]), schema)
    assert labels.values.tolist() == [expected]


def test_unknown_family():
    with pytest.raises(DataError, match="unknown family"):
        derive_labels(raw(["Category", "Class"], [["Worm-foo-1", "Malicious"]]), MULTI)


def test_unknown_class_value():
    with pytest.raises(DataError, match="unknown class"):
        derive_labels(raw(["Category", "Class"], [["Benign", "Maybe"]]), BIN)


def test_inconsistent_benign_row():
    with pytest.raises(DataError, match="benign row"):
        derive_labels(raw(["Category", "Class"], [["Trojan-Zeus-1", "Benign"]]), MULTI)


def test_binary_needs_only_class_column():
    labels = derive_labels(raw(["x", "Class"], [["1", "Benign"], ["2", "Malicious"]]), BIN)
    assert labels.values.tolist() == [0, 1]


def test_configurable_label_columns():
    table = raw(["fam", "lbl"], [["Spyware-a", "Malicious"]])
    labels = derive_labels(table, MULTI, class_column="lbl", category_column="fam")
    assert labels.values.tolist() == [1]


def test_derive_labels_deterministic(fixture_csv):
    table = load_csv(fixture_csv)
    a = derive_labels(table, MULTI)
    assert a == derive_labels(table, MULTI)
    assert sorted(a.counts().values()) == [10, 10, 10, 30]
    assert derive_labels(table, BIN).counts() == {"benign": 30, "malware": 30}


def test_class_name_round_trip():
    for schema in (BIN, MULTI):
        for i, name in enumerate(schema.class_names):
            assert schema.index_of(name) == i
            assert schema.name_of(schema.index_of(name)) == name


def test_to_feature_table_drops_columns():
    table = raw(["a", "b", "Category", "c", "Class"], [["1", "2", "Benign", "3", "Benign"]])
    ft = to_feature_table(table, drop=["Category", "Class"])
    assert ft.column_names == ("a", "b", "c")
    assert ft.values.tolist() == [[1.0, 2.0, 3.0]]
    assert table.column_names == ("a", "b", "Category", "c", "Class")


def test_to_feature_table_missing_drop_column():
    with pytest.raises(DataError, match="not found"):
        to_feature_table(raw(["a"], [["1"]]), drop=["Class"])


def test_non_numeric_cell_reports_coordinates():
    table = raw(["a", "b"], [["1", "2"], ["3", "abc"]])
    with pytest.raises(DataError, match=r"line 3, column 'b'"):
        to_feature_table(table, drop=[])


@pytest.mark.parametrize("cell", ["nan", "inf", "-inf"])
def test_non_finite_cell(cell):
    with pytest.raises(DataError, match="finite"):
        to_feature_table(raw(["a"], [["1"], [cell]]), drop=[])


def test_to_feature_table_is_repeatable(fixture_csv):
    table = load_csv(fixture_csv)
    a = to_feature_table(table, drop=["Category", "Class"])
    assert a == to_feature_table(table, drop=["Category", "Class"])
    assert a.column_count == 55


def test_find_bad_rows():
    table = raw(["a", "Category", "Class"], [
        ["1", "Benign", "Benign"],
        ["x", "Benign", "Benign"],
        ["2", "Worm-1", "Malicious"],
    ])
    assert find_bad_rows(table, MULTI, drop=["Category", "Class"]) == [1, 2]
