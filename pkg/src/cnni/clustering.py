"""Near-neighbor-influence clustering: CNNI, ICNNI and ECNNI.

All three visit points in descending influence order. An unlabeled point
whose neighborhood is still mostly unassigned opens a new cluster that
takes the point and its whole neighborhood; otherwise the point joins the
cluster holding most of its neighbors. ECNNI additionally floods each new
cluster through neighbor-of-neighbor links. Points with no neighbors stay
at label 0 (noise).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import RECIPROCAL, SimilarityKind, as_dataset, similarity
from .disjoint_set import DisjointSet
from .errors import UsageError
from .neighbors import NeighborTable, build_brute, build_grid, row_fsum, sort_by_influence


@dataclass(frozen=True, eq=False)
class ClusterLabeling:
    """Per-point labels, 0 for noise, clusters numbered 1..num_clusters."""

    labels: np.ndarray
    num_clusters: int

    @classmethod
    def from_raw(cls, raw) -> "ClusterLabeling":
        """Renumber positive ids densely, keeping their relative order."""
        raw = np.asarray(raw, dtype=np.int64)
        ids = np.unique(raw[raw > 0])
        labels = np.zeros_like(raw)
        if ids.size:
            pos = raw > 0
            labels[pos] = np.searchsorted(ids, raw[pos]) + 1
        labels.setflags(write=False)
        return cls(labels, int(ids.size))

    def __len__(self):
        return self.labels.shape[0]

    @property
    def noise_count(self) -> int:
        return int(np.count_nonzero(self.labels == 0))

    def clusters(self) -> list[np.ndarray]:
        return [np.nonzero(self.labels == c)[0] for c in range(1, self.num_clusters + 1)]

    def partition(self) -> set[frozenset]:
        """Positive clusters as a set of frozensets, ids forgotten."""
        return {frozenset(c.tolist()) for c in self.clusters()}


@dataclass(frozen=True)
class CnniConfig:
    """Parameters for the CNNI family.

    A point opens a new cluster when at least ``int(many_fraction * k)`` of
    its ``k`` neighbors are unassigned. The truncation to an integer is
    deliberate; with the fractional threshold Iris at delta 0.8 collapses
    to three clusters. ``truncate_many=False`` compares against the exact
    fraction. ``overwrite`` lets a new seed relabel neighbors that already
    belong to an earlier cluster.
    """

    delta: float
    many_fraction: float = 0.8
    kind: SimilarityKind = RECIPROCAL
    overwrite: bool = True
    truncate_many: bool = True

    def __post_init__(self):
        if not self.delta > 0:
            raise UsageError(f"delta must be positive, got {self.delta!r}")
        if not 0 < self.many_fraction <= 1:
            raise UsageError("many_fraction must be in (0, 1]")

    def threshold(self, k: int) -> float:
        t = self.many_fraction * k
        return int(t) if self.truncate_many else t


def _check_table(table: NeighborTable, config: CnniConfig, n: Optional[int] = None):
    if table.delta != config.delta:
        raise UsageError(f"table built for delta={table.delta}, config has delta={config.delta}")
    if n is not None and table.n != n:
        raise UsageError(f"table covers {table.n} points, dataset has {n}")


def _majority(labels: np.ndarray, nbrs: np.ndarray) -> int:
    held = labels[nbrs]
    held = held[held > 0]
    # argmax returns the first maximum, i.e. the oldest cluster on ties
    return int(np.argmax(np.bincount(held)))


def _run(table: NeighborTable, config: CnniConfig, expand: bool) -> ClusterLabeling:
    n = table.n
    labels = np.zeros(n, dtype=np.int64)
    forest = DisjointSet(n)
    sizes = table.sizes
    j = 1
    for i in sort_by_influence(table).tolist():
        if labels[i] or not sizes[i]:
            continue
        nbrs = table.neighbors(i)
        free = int(np.count_nonzero(labels[nbrs] == 0))
        if free >= config.threshold(len(nbrs)):
            forest.union_all(i, nbrs.tolist())
            labels[i] = j
            if config.overwrite:
                labels[nbrs] = j
            else:
                labels[nbrs[labels[nbrs] == 0]] = j
            if expand:
                _flood(table, labels, forest, nbrs, j)
            j += 1
        else:
            r = _majority(labels, nbrs)
            labels[i] = r
            forest.union(i, int(nbrs[labels[nbrs] == r][0]))
    return ClusterLabeling.from_raw(labels)


def _flood(table, labels, forest, seeds, j):
    """Absorb every unlabeled point reachable through non-empty neighborhoods."""
    sizes = table.sizes
    stack = [p for p in reversed(seeds.tolist()) if sizes[p]]
    while stack:
        p = stack.pop()
        for q in table.neighbors(p).tolist():
            if labels[q] == 0 and sizes[q]:
                forest.union(q, p)
                labels[q] = j
                stack.append(q)


def cnni(dataset, table: NeighborTable, config: CnniConfig) -> ClusterLabeling:
    _check_table(table, config, None if dataset is None else as_dataset(dataset).n)
    return _run(table, config, expand=False)


def ecnni(dataset, table: NeighborTable, config: CnniConfig) -> ClusterLabeling:
    _check_table(table, config, None if dataset is None else as_dataset(dataset).n)
    return _run(table, config, expand=True)


def icnni(dataset, config: CnniConfig, cell_lengths: Optional[Sequence[float]] = None) -> ClusterLabeling:
    """CNNI over a grid-built neighbor table; labels match brute-force CNNI."""
    table = build_grid(dataset, config.delta, cell_lengths, config.kind)
    return _run(table, config, expand=False)


ALGORITHMS = ("cnni", "icnni", "ecnni")


def run_algorithm(algo: str, dataset, config: CnniConfig, cell_lengths=None) -> ClusterLabeling:
    """Build the neighbor table the algorithm calls for and cluster."""
    if algo == "icnni":
        return icnni(dataset, config, cell_lengths)
    if algo not in ("cnni", "ecnni"):
        raise UsageError(f"unknown algorithm {algo!r}")
    table = build_brute(dataset, config.delta, config.kind)
    return _run(table, config, expand=algo == "ecnni")


def _two_product(a: np.ndarray, b: np.ndarray):
    """``a * b == hi + lo`` exactly (Dekker's product with Veltkamp splitting)."""

    def split(x):
        c = 134217729.0 * x
        hi = c - (c - x)
        return hi, x - hi

    hi = a * b
    ah, al = split(a)
    bh, bl = split(b)
    lo = ((ah * bh - hi) + ah * bl + al * bh) + al * bl
    return hi, lo


def _weighted_row_sums(values, weights, indptr) -> np.ndarray:
    """Correctly rounded ``sum(w * v)`` per row, equal to summing ``v`` repeated ``w`` times."""
    hi, lo = _two_product(values, weights.astype(np.float64))
    pairs = np.empty(2 * hi.size)
    pairs[0::2] = hi
    pairs[1::2] = lo
    return row_fsum(pairs, 2 * np.asarray(indptr))


def cnni_multiset(points, config: CnniConfig, cell_lengths=None) -> ClusterLabeling:
    """CNNI on data with many exact duplicates (image pixels).

    Gives the same labels as :func:`cnni` on the full point list, but the
    neighbor table is built over distinct values only and every copy is
    accounted for through counts. Copies of one value are never each
    other's neighbors (distance 0), share a neighborhood and an influence,
    and change label together whenever a seed claims the value as a
    neighbor; only the copy being visited is labeled on its own.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    n = pts.shape[0]
    uniq, inverse, counts = np.unique(pts, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    # grid and brute-force tables are identical; the grid is much faster on dense color data
    table = build_grid(uniq, config.delta, cell_lengths, config.kind)

    owner = np.repeat(np.arange(table.n), table.sizes)
    weights = counts[table.indices]
    nbr_count = np.bincount(owner, minlength=table.n, weights=weights).astype(np.int64)
    sims = _weighted_row_sums(similarity(table.distances, table.kind), weights, table.indptr)
    order = np.lexsort((np.arange(n), -sims[inverse]))

    labels = np.zeros(n, dtype=np.int64)
    unlabeled = counts.astype(np.int64).copy()
    swept = np.zeros(table.n, dtype=bool)      # every copy labeled by some seed
    group_label = np.zeros(table.n, dtype=np.int64)
    held: list[dict] = [dict() for _ in range(table.n)]
    j = 1
    for p in order.tolist():
        c = inverse[p]
        if swept[c] or not nbr_count[c]:
            continue
        nbrs = table.neighbors(c).tolist()
        free = int(unlabeled[table.neighbors(c)].sum())
        if free >= config.threshold(int(nbr_count[c])):
            for q in nbrs:
                if config.overwrite:
                    held[q] = {j: int(counts[q])}
                    group_label[q] = j
                elif unlabeled[q]:
                    held[q][j] = held[q].get(j, 0) + int(unlabeled[q])
                    if not group_label[q]:
                        group_label[q] = j
                unlabeled[q] = 0
                swept[q] = True
            r = j
            j += 1
        else:
            tally: dict = {}
            for q in nbrs:
                for lab, cnt in held[q].items():
                    tally[lab] = tally.get(lab, 0) + cnt
            best = max(tally.values())
            r = min(lab for lab, cnt in tally.items() if cnt == best)
        labels[p] = r
        held[c][r] = held[c].get(r, 0) + 1
        unlabeled[c] -= 1

    gl = group_label[inverse]
    if config.overwrite:
        labels = np.where(gl > 0, gl, labels)
    else:
        labels = np.where((labels == 0) & (gl > 0), gl, labels)
    return ClusterLabeling.from_raw(labels)

