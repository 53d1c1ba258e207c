import numpy as np
import pytest

from cnni.core import Dataset
from cnni.errors import FormatError
from cnni.io import load_csv, minmax_normalize, read_labels, write_cluster_dump, write_csv, write_labels


def test_iris_fixture(data_dir):
    ds = load_csv(data_dir / "iris.csv", label_column=-1)
    assert (ds.n, ds.dim) == (150, 4)
    assert sorted(set(ds.truth_labels.tolist())) == [1, 2, 3]
    assert ds.points[0].tolist() == [5.1, 3.5, 1.4, 0.2]


def test_wine_fixture_normalized(data_dir):
    ds = load_csv(data_dir / "wine.csv", label_column=-1, normalize=True)
    assert (ds.n, ds.dim) == (178, 13)
    assert ds.points.min() == 0.0 and ds.points.max() == 1.0
    assert np.bincount(ds.truth_labels).tolist() == [0, 59, 71, 48]


def test_headerless_and_string_labels(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("1;2;setosa\n3;4;virginica\n5;6;setosa\n")
    ds = load_csv(p, delimiter=";", label_column=2)
    assert ds.points.tolist() == [[1, 2], [3, 4], [5, 6]]
    assert ds.truth_labels.tolist() == [1, 2, 1]
    ds = load_csv(p, delimiter=";", label_column=2, has_header=True)
    assert ds.n == 2


@pytest.mark.parametrize(
    "text, line",
    [("1,2\n3\n", 2), ("1,2\n3,x\n", 2), ("a,b\n1,2\n3,4,5\n", 3)],
)
def test_parse_errors_carry_line_numbers(tmp_path, text, line):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(FormatError, match=f"line {line}"):
        load_csv(p)


def test_empty_and_header_only(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("")
    with pytest.raises(FormatError):
        load_csv(p)
    p.write_text("a,b,class\n")
    with pytest.raises(FormatError):
        load_csv(p)


def test_bad_label_column(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("1,2\n")
    with pytest.raises(FormatError):
        load_csv(p, label_column=5)


def test_minmax_constant_column():
    out = minmax_normalize(np.array([[1.0, 5.0], [3.0, 5.0]]))
    assert out.tolist() == [[0, 0], [1, 0]]


def test_roundtrips(tmp_path):
    ds = Dataset([[0.5, 1.25], [3.0, -2.0]], [1, 0])
    write_csv(tmp_path / "d.csv", ds, with_labels=True)
    back = load_csv(tmp_path / "d.csv", label_column=-1)
    assert back.points.tolist() == ds.points.tolist()
    assert back.truth_labels.tolist() == [1, 0]

    write_labels(tmp_path / "l.txt", [0, 3, 1])
    assert (tmp_path / "l.txt").read_text() == "0\n3\n1\n"
    assert read_labels(tmp_path / "l.txt").tolist() == [0, 3, 1]
    (tmp_path / "bad.txt").write_text("1\nfoo\n")
    with pytest.raises(FormatError, match="line 2"):
        read_labels(tmp_path / "bad.txt")


def test_cluster_dump_is_one_based(tmp_path):
    write_cluster_dump(tmp_path / "dump.csv", Dataset([[1.5, 2.0], [3.0, 4.0]]), [2, 0])
    lines = (tmp_path / "dump.csv").read_text().splitlines()
    assert lines == ["index,x1,x2,label", "1,1.5,2.0,2", "2,3.0,4.0,0"]
