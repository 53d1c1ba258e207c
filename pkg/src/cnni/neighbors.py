"""Fixed-radius neighbor sets, by brute force or through a uniform grid."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import RECIPROCAL, Dataset, SimilarityKind, as_dataset, pairwise_distances, similarity
from .errors import UsageError

_BLOCK_ELEMENTS = 1 << 21


@dataclass(frozen=True, eq=False)
class NeighborTable:
    """Neighbor sets stored row-compressed.

    Row ``i`` spans ``indices[indptr[i]:indptr[i+1]]`` in ascending index
    order, with the matching distances alongside. Every stored distance
    satisfies ``0 < d <= delta``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    distances: np.ndarray
    influences: np.ndarray
    delta: float
    kind: SimilarityKind = RECIPROCAL

    @property
    def n(self) -> int:
        return self.indptr.shape[0] - 1

    @property
    def sizes(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def neighbor_distances(self, i: int) -> np.ndarray:
        return self.distances[self.indptr[i]:self.indptr[i + 1]]

    def as_sets(self) -> list[set[int]]:
        return [set(self.neighbors(i).tolist()) for i in range(self.n)]

    def equals(self, other: "NeighborTable") -> bool:
        return (
            self.delta == other.delta
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.distances, other.distances)
            and np.array_equal(self.influences, other.influences)
        )


def _finish(rows_idx, rows_dist, n, delta, kind) -> NeighborTable:
    sizes = np.fromiter((len(r) for r in rows_idx), dtype=np.int64, count=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(sizes, out=indptr[1:])
    if indptr[-1]:
        indices = np.concatenate(rows_idx).astype(np.int64, copy=False)
        distances = np.concatenate(rows_dist).astype(np.float64, copy=False)
    else:
        indices = np.zeros(0, dtype=np.int64)
        distances = np.zeros(0, dtype=np.float64)
    influences = row_fsum(similarity(distances, kind), indptr)
    for arr in (indptr, indices, distances, influences):
        arr.setflags(write=False)
    return NeighborTable(indptr, indices, distances, influences, float(delta), kind)


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def row_fsum(values: np.ndarray, indptr: np.ndarray) -> np.ndarray:
    """Correctly rounded sum of each CSR row (what ``math.fsum`` returns).

    Exact rounding makes the result independent of summation order, so
    tables built in different ways (or from deduplicated points) agree.
    Rows are accumulated in double-double, column by column; a row whose
    error bound does not settle the final rounding is redone with fsum.
    """
    vals = np.asarray(values, dtype=np.float64)
    indptr = np.asarray(indptr, dtype=np.int64)
    sizes = np.diff(indptr)
    rows = sizes.size
    out = np.zeros(rows, dtype=np.float64)
    if rows == 0 or vals.size == 0:
        return out
    order = np.argsort(-sizes, kind="stable")
    active_by_k = np.searchsorted(-sizes[order], -np.arange(int(sizes.max())), side="left")
    start = indptr[:-1][order]
    hi = np.zeros(rows)
    lo = np.zeros(rows)
    mag = np.zeros(rows)
    for k, m in enumerate(active_by_k.tolist()):
        x = vals[start[:m] + k]
        hi[:m], e = _two_sum(hi[:m], x)
        lo[:m] += e
        mag[:m] += np.abs(x)
    r, t = _two_sum(hi, lo)
    # |hi + lo - exact| <= (n u)^2 * sum|x| (Sum2 bound), padded generously
    n_eps = sizes[order].astype(np.float64) * 2.0 ** -53
    bound = 4.0 * n_eps * n_eps * mag * (1 + 1e-6) + 2.0 ** -1070
    with np.errstate(over="ignore", invalid="ignore"):
        gap = np.minimum(np.abs(np.nextafter(r, np.inf) - r), np.abs(r - np.nextafter(r, -np.inf)))
        safe = (np.abs(t) + bound < gap / 2) & np.isfinite(r) & (mag > 2.0 ** -960)
    safe |= mag == 0
    out[order] = r
    redo = order[~safe]
    if redo.size:
        vlist = vals.tolist()
        for i in redo.tolist():
            out[i] = math.fsum(vlist[indptr[i]:indptr[i + 1]])
    return out


def _check_delta(delta):
    if not delta > 0 or not math.isfinite(delta):
        raise UsageError(f"delta must be a positive finite number, got {delta!r}")


def _scan_block(block, cand, cand_idx, delta, rows_idx, rows_dist, row_ids):
    d = pairwise_distances(block, cand)
    mask = (d > 0) & (d <= delta)
    for r, i in enumerate(row_ids):
        hit = mask[r]
        rows_idx[i] = cand_idx[hit]
        rows_dist[i] = d[r][hit]


def build_brute(dataset, delta: float, kind: SimilarityKind = RECIPROCAL) -> NeighborTable:
    """All-pairs neighbor construction, Θ(n²) distance evaluations."""
    ds = as_dataset(dataset)
    _check_delta(delta)
    X = ds.points
    n = ds.n
    rows_idx: list = [None] * n
    rows_dist: list = [None] * n
    all_idx = np.arange(n)
    step = max(1, _BLOCK_ELEMENTS // max(n, 1))
    for start in range(0, n, step):
        stop = min(n, start + step)
        _scan_block(X[start:stop], X, all_idx, delta, rows_idx, rows_dist, range(start, stop))
    return _finish(rows_idx, rows_dist, n, delta, kind)


class GridIndex:
    """Uniform grid over the dataset's bounding box.

    Point ``p`` lives in cell ``floor((p - box_min) / cell_lengths)``. Only
    occupied cells are stored.
    """

    def __init__(self, points: np.ndarray, cell_lengths):
        points = np.asarray(points, dtype=np.float64)
        lengths = np.asarray(cell_lengths, dtype=np.float64).reshape(-1)
        if lengths.size not in (1, points.shape[1]):
            raise UsageError(f"{lengths.size} cell lengths for {points.shape[1]} dimensions")
        lengths = np.broadcast_to(lengths, (points.shape[1],)).copy()
        if np.any(~(lengths > 0)) or not np.all(np.isfinite(lengths)):
            raise UsageError("cell lengths must be positive")
        self.cell_lengths = lengths
        self.box_min = points.min(axis=0)
        self.box_max = points.max(axis=0)
        self.coords = np.floor((points - self.box_min) / lengths).astype(np.int64)
        keys, inverse = np.unique(self.coords, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        self.keys = keys
        order = np.argsort(inverse, kind="stable")
        bounds = np.searchsorted(inverse[order], np.arange(len(keys) + 1))
        # members in ascending point order (stable sort)
        self.members = [order[bounds[c]:bounds[c + 1]] for c in range(len(keys))]
        self._lookup = {tuple(k): c for c, k in enumerate(keys.tolist())}

    def __len__(self):
        return len(self.keys)

    def cell_of(self, i: int) -> tuple:
        return tuple(self.coords[i].tolist())

    def reach(self, radius: float) -> np.ndarray:
        """Cells to scan on each side, per axis, to cover ``radius``."""
        # the 1e-9 slack absorbs rounding when radius / length is an integer
        return np.ceil(radius / self.cell_lengths * (1 + 1e-9)).astype(np.int64)

    def block(self, cell: int, reach: np.ndarray) -> list[int]:
        """Occupied cells within ``reach`` (Chebyshev, per axis) of ``cell``."""
        key = self.keys[cell]
        volume = float(np.prod((2 * reach + 1).astype(np.float64)))
        if volume <= len(self.keys):
            out = []
            for off in itertools.product(*[range(-w, w + 1) for w in reach.tolist()]):
                c = self._lookup.get(tuple((key + off).tolist()))
                if c is not None:
                    out.append(c)
            return out
        near = np.all(np.abs(self.keys - key) <= reach, axis=1)
        return np.nonzero(near)[0].tolist()

    def candidates(self, cell: int, radius: float) -> np.ndarray:
        parts = [self.members[c] for c in self.block(cell, self.reach(radius))]
        return np.sort(np.concatenate(parts))


def default_cell_length(delta: float) -> float:
    """Cell edge used when none is given: delta / 0.9 (20 for delta 18)."""
    return delta / 0.9


def build_grid(
    dataset,
    delta: float,
    cell_lengths: Optional[Sequence[float]] = None,
    kind: SimilarityKind = RECIPROCAL,
) -> NeighborTable:
    """Same table as :func:`build_brute`, with candidates drawn from nearby cells.

    With cell lengths >= delta the candidate block is the 3^m cells around a
    point's own cell; smaller cells widen it to ceil(delta / r) per axis.
    """
    ds = as_dataset(dataset)
    _check_delta(delta)
    if cell_lengths is None:
        cell_lengths = default_cell_length(delta)
    grid = GridIndex(ds.points, cell_lengths)
    X = ds.points
    n = ds.n
    rows_idx: list = [None] * n
    rows_dist: list = [None] * n
    for cell, members in enumerate(grid.members):
        cand = grid.candidates(cell, delta)
        step = max(1, _BLOCK_ELEMENTS // max(len(cand), 1))
        for start in range(0, len(members), step):
            rows = members[start:start + step]
            _scan_block(X[rows], X[cand], cand, delta, rows_idx, rows_dist, rows.tolist())
    return _finish(rows_idx, rows_dist, n, delta, kind)


def sort_by_influence(table: NeighborTable) -> np.ndarray:
    """Point indices by descending influence, ties by ascending index."""
    return np.argsort(-table.influences, kind="stable")
