import numpy as np
import pytest

from oracles import NaivePartition
from cnni.disjoint_set import DisjointSet, make_set
from cnni.errors import UsageError


def test_make_set():
    ds = make_set(1)
    assert ds.count == 1 and ds.find(0) == 0
    ds = make_set(5)
    assert ds.count == 5 and len({ds.find(i) for i in range(5)}) == 5
    assert make_set(3).groups() == [[0], [1], [2]]
    with pytest.raises(UsageError):
        make_set(0)


def test_union_basics():
    ds = make_set(3)
    assert ds.union(0, 1)
    assert ds.count == 2 and ds.find(0) == ds.find(1)
    assert not ds.union(0, 0)
    assert not ds.union(1, 0)
    assert ds.count == 2
    ds.union(1, 2)
    assert ds.connected(0, 2) and ds.count == 1


def test_out_of_range():
    ds = make_set(3)
    with pytest.raises(UsageError):
        ds.find(3)
    with pytest.raises(UsageError):
        ds.union(-1, 0)


def test_union_all_folds_pairwise():
    ds = DisjointSet(6)
    ds.union_all(2, [0, 4, 5])
    assert sorted(map(sorted, ds.groups())) == [[0, 2, 4, 5], [1], [3]]


def test_path_compression_flattens():
    ds = DisjointSet(64)
    for i in range(63):
        ds.union(i, i + 1)
    root = ds.find(0)
    for i in range(64):
        ds.find(i)
    assert all(ds.parent[i] == root for i in range(64))
    assert max(ds.rank) <= 6  # union by rank keeps height logarithmic


@pytest.mark.parametrize("seed", range(5))
def test_against_naive_oracle(seed):
    rng = np.random.default_rng(seed)
    n = 60
    ds, naive = DisjointSet(n), NaivePartition(n)
    merges = 0
    for a, b in rng.integers(0, n, size=(1000, 2)).tolist():
        merged = ds.union(a, b)
        assert merged == naive.union(a, b)
        merges += merged
        assert ds.count + merges == n
    assert {frozenset(g) for g in ds.groups()} == naive.groups()
    for a, b in rng.integers(0, n, size=(300, 2)).tolist():
        assert ds.connected(a, b) == naive.same(a, b)
