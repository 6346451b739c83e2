import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from histoclass.data import (
    WDBC_FEATURES,
    Diagnosis,
    load_wdbc,
    select_features,
    train_test_split,
)
from histoclass.errors import DataError

from conftest import PROPERTY_EXAMPLES, make_dataset, wdbc_record


def test_full_file_has_569_samples_of_width_10(wdbc):
    assert len(wdbc) == 569
    assert wdbc.width == 10
    assert wdbc.schema == WDBC_FEATURES
    assert sum(d is Diagnosis.A for d in wdbc.diagnoses) == 212


def test_empty_source():
    with pytest.raises(DataError, match="empty source"):
        load_wdbc(io.BytesIO(b""))


def test_two_synthetic_records_parse_verbatim():
    m1 = [17.99, 10.38, 122.8, 1001.0, 0.1184, 0.2776, 0.3001, 0.1471, 0.2419, 0.07871]
    m2 = [13.54, 14.36, 87.46, 566.3, 0.09779, 0.08129, 0.06664, 0.04781, 0.1885, 0.05766]
    text = wdbc_record(1, "M", m1) + "\r\n" + wdbc_record(2, "B", m2) + "\n"
    ds = load_wdbc(text.encode())
    assert ds.ids == ("1", "2")
    assert ds.diagnoses == (Diagnosis.A, Diagnosis.N)
    assert ds.X[0].tolist() == m1
    assert ds.X[1].tolist() == m2


@pytest.mark.parametrize(
    "record, message",
    [
        ("1,M,1,2,3", "record 1: expected 32 fields"),
        (wdbc_record(1, "X", [1.0] * 10), "record 1: unknown diagnosis"),
        (wdbc_record(1, "M", [1.0] * 9 + ["abc"]).replace("'abc'", "abc"), "record 1: field 12"),
        (wdbc_record(1, "M", [1.0] * 10) + "\n" + wdbc_record(1, "B", [1.0] * 10), "record 2: duplicate id"),
        (wdbc_record(1, "M", [float("nan")] + [1.0] * 9), "record 1: field 3 is not finite"),
    ],
)
def test_malformed_records_report_record_number(record, message):
    with pytest.raises(DataError, match=message):
        load_wdbc(record.encode())


def test_id_is_not_a_feature(wdbc):
    assert "id" not in wdbc.schema


def test_load_reserialize_bit_exact(wdbc):
    path_lines = wdbc_path_lines()
    for line, row in zip(path_lines, wdbc.X):
        fields = line.split(",")[2:12]
        assert [float(f) for f in fields] == row.tolist()


def wdbc_path_lines():
    from histoclass.data import bundled_wdbc_path

    return bundled_wdbc_path().read_text().splitlines()


def test_split_448_121(wdbc):
    split = train_test_split(wdbc, 448, seed=0)
    assert len(split.train) == 448 and len(split.test) == 121
    assert split.method == "stratified"


def test_split_per_class_quota(wdbc):
    split = train_test_split(wdbc, 448, seed=5)
    # 448 * 212/569 = 166.9 -> 167 abnormal, 281 normal
    assert int(split.train.y.sum()) == 167


@pytest.mark.parametrize("count", [0, 569, 600, -1])
def test_split_count_out_of_range(wdbc, count):
    with pytest.raises(DataError):
        train_test_split(wdbc, count, seed=0)


def test_split_requires_both_classes():
    ds = make_dataset([[1.0], [2.0], [3.0]], "AAA")
    with pytest.raises(DataError, match="class N"):
        train_test_split(ds, 2, seed=0)


def test_split_is_deterministic(wdbc):
    a = train_test_split(wdbc, 448, seed=11)
    b = train_test_split(wdbc, 448, seed=11)
    assert a.train.ids == b.train.ids and a.test.ids == b.test.ids
    c = train_test_split(wdbc, 448, seed=12)
    assert a.train.ids != c.train.ids


@settings(max_examples=PROPERTY_EXAMPLES)
@given(
    labels=st.lists(st.sampled_from("AN"), min_size=2, max_size=40).filter(
        lambda ls: "A" in ls and "N" in ls
    ),
    frac=st.floats(0.01, 0.99),
    seed=st.integers(0, 2**32 - 1),
)
def test_split_partition_property(labels, frac, seed):
    n = len(labels)
    ds = make_dataset(np.arange(n, dtype=float), labels)
    train_count = min(n - 1, max(1, round(frac * n)))
    split = train_test_split(ds, train_count, seed)
    train, test = set(split.train.ids), set(split.test.ids)
    assert not train & test
    assert train | test == set(ds.ids)
    assert len(train) == train_count
    again = train_test_split(ds, train_count, seed)
    assert again.train.ids == split.train.ids


def test_select_identity(wdbc):
    assert select_features(wdbc, wdbc.schema) == wdbc


def test_select_retained_six(wdbc):
    keep = ["radius", "texture", "smoothness", "compactness", "symmetry", "fdimension"]
    out = select_features(wdbc, keep)
    assert out.width == 6 and out.schema == tuple(keep)
    assert out.ids == wdbc.ids
    assert np.array_equal(out.column("symmetry"), wdbc.column("symmetry"))


@pytest.mark.parametrize("keep", [["bogus"], ["radius", "radius"], []])
def test_select_rejects_bad_names(wdbc, keep):
    with pytest.raises(DataError):
        select_features(wdbc, keep)


def test_dataset_is_immutable(wdbc):
    with pytest.raises(AttributeError):
        wdbc.ids = ()
    with pytest.raises(ValueError):
        wdbc.X[0, 0] = 1.0


def test_dataset_rejects_non_finite():
    with pytest.raises(DataError):
        make_dataset([[np.inf]], "A")
