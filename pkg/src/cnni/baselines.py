"""Reference KMeans (Lloyd) and DBSCAN used in the comparisons."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .clustering import ClusterLabeling
from .core import as_dataset, pairwise_distances
from .errors import UsageError


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    max_iters: int = 300
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise UsageError("k must be >= 1")
        if self.max_iters < 1:
            raise UsageError("max_iters must be >= 1")


@dataclass(frozen=True)
class DbscanConfig:
    eps: float
    min_pts: int = 4

    def __post_init__(self):
        if not self.eps > 0:
            raise UsageError("eps must be positive")
        if self.min_pts < 1:
            raise UsageError("min_pts must be >= 1")


@dataclass(frozen=True, eq=False)
class KMeansResult:
    labeling: ClusterLabeling
    centroids: np.ndarray
    n_iter: int
    # sum of squared distances to the assigned centroid, one entry per assignment step
    objective: list = field(default_factory=list)


def _sq_dist(X, C):
    d = pairwise_distances(X, C)
    return d * d


def kmeans(dataset, config: KMeansConfig) -> KMeansResult:
    X = as_dataset(dataset).points
    n = X.shape[0]
    k = config.k
    if k > n:
        raise UsageError(f"k={k} exceeds the number of points ({n})")
    rng = np.random.default_rng(config.seed)
    _, first = np.unique(X, axis=0, return_index=True)
    pool = np.sort(first) if first.size >= k else np.arange(n)
    centroids = X[rng.choice(pool, size=k, replace=False)].copy()

    assign = None
    objective = []
    it = 0
    for it in range(1, config.max_iters + 1):
        d2 = _sq_dist(X, centroids)
        new = np.argmin(d2, axis=1)
        objective.append(float(d2[np.arange(n), new].sum()))
        if assign is not None and np.array_equal(new, assign):
            break
        assign = new
        centroids = _update(X, assign, centroids, k)
    labeling = ClusterLabeling.from_raw(assign + 1)
    return KMeansResult(labeling, centroids, it, objective)


def _update(X, assign, old, k):
    centroids = old.copy()
    counts = np.bincount(assign, minlength=k)
    for c in range(k):
        if counts[c]:
            centroids[c] = X[assign == c].mean(axis=0)
    empty = np.nonzero(counts == 0)[0]
    if empty.size:
        # reseed each empty cluster on the point farthest from its centroid
        d2 = ((X - centroids[assign]) ** 2).sum(axis=1)
        taken = set()
        for c in empty.tolist():
            for p in np.argsort(-d2, kind="stable").tolist():
                if p not in taken and counts[assign[p]] > 1:
                    taken.add(p)
                    counts[assign[p]] -= 1
                    centroids[c] = X[p]
                    break
    return centroids


def _eps_neighbors(X, eps):
    n = X.shape[0]
    out = [None] * n
    step = max(1, (1 << 21) // n)
    for start in range(0, n, step):
        d = pairwise_distances(X[start:start + step], X)
        for r, row in enumerate(d <= eps):
            out[start + r] = np.nonzero(row)[0]
    return out


def dbscan(dataset, config: DbscanConfig) -> ClusterLabeling:
    """DBSCAN with self-inclusive neighborhoods.

    Clusters are grown from core points in ascending index order by breadth
    first expansion; a border point goes to the first cluster reaching it.
    """
    X = as_dataset(dataset).points
    n = X.shape[0]
    nbrs = _eps_neighbors(X, config.eps)
    core = np.array([len(a) >= config.min_pts for a in nbrs])
    labels = np.zeros(n, dtype=np.int64)
    cluster = 0
    for i in range(n):
        if labels[i] or not core[i]:
            continue
        cluster += 1
        labels[i] = cluster
        queue = deque([i])
        while queue:
            p = queue.popleft()
            for q in nbrs[p].tolist():
                if labels[q] == 0:
                    labels[q] = cluster
                    if core[q]:
                        queue.append(q)
    return ClusterLabeling.from_raw(labels)
