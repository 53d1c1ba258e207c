import numpy as np
import pytest

import oracles
from cnni.clustering import ClusterLabeling, CnniConfig, cnni, cnni_multiset, ecnni, icnni, run_algorithm
from cnni.core import Dataset, SimilarityKind
from cnni.errors import UsageError
from cnni.neighbors import build_brute, build_grid

TWO_BLOBS = [[0], [1], [2], [10], [11], [12]]


def _run(algo, pts, delta, **kw):
    return run_algorithm(algo, Dataset(pts), CnniConfig(delta, **kw))


@pytest.mark.parametrize("algo", ["cnni", "icnni", "ecnni"])
def test_two_blobs(algo):
    lab = _run(algo, TWO_BLOBS, 1.5)
    assert lab.labels.tolist() == [1, 1, 1, 2, 2, 2]
    assert lab.num_clusters == 2 and lab.noise_count == 0


@pytest.mark.parametrize("algo", ["cnni", "icnni", "ecnni"])
def test_isolated_point_is_noise(algo):
    lab = _run(algo, [[0, 0], [0, 1], [1, 0], [9, 9]], 1.0)
    assert lab.labels[3] == 0
    assert lab.num_clusters == 1


@pytest.mark.parametrize("algo", ["cnni", "icnni", "ecnni"])
def test_single_point(algo):
    lab = _run(algo, [[4.0, 2.0]], 1.0)
    assert lab.labels.tolist() == [0] and lab.num_clusters == 0


def test_ecnni_chain_is_one_cluster():
    pts = [[float(i)] for i in range(21)]
    lab = _run("ecnni", pts, 1.0)
    assert lab.num_clusters == 1 and lab.noise_count == 0
    # CNNI only reaches one step from each seed, so the chain breaks up
    assert _run("cnni", pts, 1.0).num_clusters > 1


def test_ecnni_long_chain_does_not_recurse():
    n = 20000
    pts = np.arange(n, dtype=float).reshape(-1, 1)
    cfg = CnniConfig(1.0)
    lab = ecnni(pts, build_grid(pts, 1.0), cfg)
    assert lab.num_clusters == 1


def test_overwrite_reclaims_neighbors():
    # influence order visits 1, 2, 3, 4, 0, 5. Seed 1 takes {0, 1, 2}; seed 3
    # finds 1 of 2 neighbors free (>= int(0.8 * 2)) and takes {2, 3, 4};
    # seed 5 has no free neighbor but needs int(0.8 * 1) = 0, so it opens a
    # third cluster and takes 4.
    pts = [[2.0], [3.0], [3.5], [4.5], [5.0], [6.0], [7.5]]
    assert _run("cnni", pts, 1.0).labels.tolist() == [1, 1, 2, 2, 3, 3, 0]
    assert _run("cnni", pts, 1.0, overwrite=False).labels.tolist() == [1, 1, 1, 2, 2, 3, 0]
    # with the fractional rule 1 >= 1.6 fails and 3 joins cluster 1 instead
    assert _run("cnni", pts, 1.0, truncate_many=False).labels.tolist() == \
        oracles.cnni_reference(pts, 1.0, truncate=False)


def test_majority_tie_goes_to_smaller_id():
    # point 2 sits between two seeded clusters with one neighbor in each
    pts = [[0], [0.1], [0.2], [0.3], [1.2], [2.1], [2.2], [2.3], [2.4]]
    got = _run("cnni", pts, 0.9).labels.tolist()
    assert got == oracles.cnni_reference(pts, 0.9)
    assert got[4] == 1


def test_matches_reference_transcription():
    rng = np.random.default_rng(21)
    for trial in range(150):
        n = int(rng.integers(1, 60))
        m = int(rng.integers(1, 3))
        pts = (rng.integers(0, 8, size=(n, m)) if trial % 2 else rng.random((n, m)) * 6).tolist()
        delta = float(rng.choice([1.0, 1.5, 2.0, 2.5]))
        for truncate in (True, False):
            for overwrite in (True, False):
                got = _run("cnni", pts, delta, truncate_many=truncate, overwrite=overwrite)
                want = oracles.cnni_reference(pts, delta, truncate=truncate, overwrite=overwrite)
                assert got.labels.tolist() == want


def test_ecnni_equals_components():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(1, 200))
        m = int(rng.choice([2, 3]))
        pts = rng.random((n, m)) * 10
        delta = float(rng.uniform(0.3, 2.5))
        lab = _run("ecnni", pts, delta)
        comps, isolated = oracles.components(pts.tolist(), delta)
        assert oracles.partition(lab.labels) == comps
        assert sorted(np.nonzero(lab.labels == 0)[0].tolist()) == sorted(isolated)


def test_cnni_refines_components_and_label_zero_rule():
    rng = np.random.default_rng(8)
    for _ in range(60):
        pts = rng.random((int(rng.integers(2, 150)), 2)) * 10
        delta = float(rng.uniform(0.3, 2.0))
        lab = _run("cnni", pts, delta)
        table = build_brute(pts, delta)
        comps, _ = oracles.components(pts.tolist(), delta)
        for cluster in oracles.partition(lab.labels):
            assert any(cluster <= c for c in comps)
        assert np.array_equal(lab.labels == 0, table.sizes == 0)


def test_icnni_equals_cnni_on_random_sets():
    rng = np.random.default_rng(13)
    for _ in range(100):
        pts = rng.random((int(rng.integers(1, 250)), int(rng.integers(1, 4)))) * 50
        delta = float(rng.uniform(1, 10))
        cfg = CnniConfig(delta)
        a = cnni(pts, build_brute(pts, delta), cfg)
        for cells in (None, delta, delta / 2):
            assert np.array_equal(icnni(pts, cfg, cells).labels, a.labels)


def test_labels_are_dense_and_deterministic():
    rng = np.random.default_rng(3)
    pts = rng.random((300, 2)) * 20
    a = _run("cnni", pts, 1.0)
    b = _run("cnni", pts.copy(), 1.0)
    assert np.array_equal(a.labels, b.labels)
    pos = np.unique(a.labels[a.labels > 0])
    assert pos.tolist() == list(range(1, a.num_clusters + 1))


def test_delta_mismatch_is_usage_error():
    pts = np.array(TWO_BLOBS, dtype=float)
    with pytest.raises(UsageError):
        cnni(pts, build_brute(pts, 1.0), CnniConfig(2.0))
    with pytest.raises(UsageError):
        run_algorithm("kmeans", pts, CnniConfig(1.0))


def test_config_validation_and_threshold():
    assert CnniConfig(1.0).threshold(9) == 7
    assert CnniConfig(1.0, truncate_many=False).threshold(9) == pytest.approx(7.2)
    for bad in (dict(delta=0), dict(delta=1, many_fraction=0), dict(delta=1, many_fraction=1.5)):
        with pytest.raises(UsageError):
            CnniConfig(**bad)


def test_cluster_labeling_helpers():
    lab = ClusterLabeling.from_raw([0, 7, 7, 3, 0, 3, 9])
    assert lab.labels.tolist() == [0, 2, 2, 1, 0, 1, 3]
    assert lab.num_clusters == 3 and lab.noise_count == 2
    assert lab.partition() == {frozenset({1, 2}), frozenset({3, 5}), frozenset({6})}


def test_multiset_matches_plain_cnni():
    rng = np.random.default_rng(17)
    for trial in range(300):
        n = int(rng.integers(1, 120))
        m = int(rng.integers(1, 4))
        pts = rng.integers(0, int(rng.integers(2, 8)), size=(n, m)).astype(float)
        delta = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        kind = SimilarityKind.parse(["reciprocal", "exp", "exp-scaled"][trial % 3], delta)
        cfg = CnniConfig(delta, kind=kind, overwrite=bool(trial % 2), truncate_many=bool(trial % 5))
        plain = cnni(pts, build_brute(pts, delta, kind), cfg)
        assert np.array_equal(cnni_multiset(pts, cfg).labels, plain.labels)
