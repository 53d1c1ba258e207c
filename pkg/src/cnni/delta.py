"""Choosing delta: MST max-gap estimate, supervised bounds, valid-interval scans."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .clustering import CnniConfig, run_algorithm
from .core import SimilarityKind, as_dataset, pairwise_distances
from .errors import UsageError


@dataclass(frozen=True)
class DeltaInterval:
    """Half-open ``[low, high)``; ``empty`` when ``low >= high``."""

    low: float
    high: float

    @property
    def empty(self) -> bool:
        return not self.low < self.high

    def __contains__(self, delta: float) -> bool:
        return self.low <= delta < self.high

    def rounded(self) -> tuple[int, int]:
        """Integer delta values inside the interval's closure: ceil(low)..floor(high)."""
        return math.ceil(self.low), math.floor(self.high)

    def __str__(self):
        return f"[{self.low:g}, {self.high:g})"


def build_mst(dataset) -> np.ndarray:
    """Ascending edge weights of a Euclidean minimum spanning tree (dense Prim, O(n²))."""
    X = as_dataset(dataset).points
    n = X.shape[0]
    if n < 2:
        raise UsageError("an MST needs at least two points")
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = pairwise_distances(X[:1], X)[0]
    best[0] = np.inf
    edges = np.empty(n - 1)
    for k in range(n - 1):
        v = int(np.argmin(best))
        edges[k] = best[v]
        in_tree[v] = True
        best[v] = np.inf
        d = pairwise_distances(X[v:v + 1], X)[0]
        np.minimum(best, np.where(in_tree, np.inf, d), out=best)
    edges.sort()
    return edges


def max_gap_index(edges: Sequence[float]) -> int:
    """0-based ``k`` maximizing ``edges[k+1] - edges[k]``; first one on ties."""
    e = np.asarray(edges, dtype=np.float64)
    if e.size < 2:
        raise UsageError("need at least two MST edges")
    return int(np.argmax(np.diff(e)))


def estimate_delta_mst(edges: Sequence[float]) -> DeltaInterval:
    """Interval between the two consecutive MST edges with the widest gap.

    All-equal edges give the empty interval ``[e, e)``.
    """
    e = np.asarray(edges, dtype=np.float64)
    k = max_gap_index(e)
    return DeltaInterval(float(e[k]), float(e[k + 1]))


def delta_bounds_supervised(dataset, truth=None) -> DeltaInterval:
    """[largest same-class distance, smallest cross-class distance).

    The interval is empty when the labeling cannot be separated by any
    single threshold.
    """
    ds = as_dataset(dataset)
    y = ds.truth_labels if truth is None else np.asarray(truth)
    if y is None:
        raise UsageError("supervised delta bounds need truth labels")
    y = np.asarray(y).reshape(-1)
    if y.shape[0] != ds.n:
        raise UsageError("truth labels do not match dataset length")
    within = -np.inf
    across = np.inf
    X = ds.points
    step = max(1, (1 << 20) // ds.n)
    for start in range(0, ds.n, step):
        d = pairwise_distances(X[start:start + step], X)
        same = y[start:start + step, None] == y[None, :]
        upper = np.arange(start, min(start + step, ds.n))[:, None] < np.arange(ds.n)[None, :]
        if np.any(same & upper):
            within = max(within, float(d[same & upper].max()))
        if np.any(~same):
            across = min(across, float(d[~same].min()))
    if within == -np.inf:
        raise UsageError("no pair of points shares a class")
    if across == np.inf:
        raise UsageError("all points share one class")
    return DeltaInterval(within, across)


def integer_grid(low: float, high: float, step: float = 1.0) -> list[float]:
    if not step > 0:
        raise UsageError("step must be positive")
    if high < low:
        raise UsageError("empty delta range")
    count = int(math.floor((high - low) / step + 1e-9)) + 1
    return [low + i * step for i in range(count)]


def valid_intervals(deltas: Sequence[float], counts: Sequence[int], target: int) -> list[tuple[float, float]]:
    """Maximal runs of consecutive grid points whose cluster count equals ``target``."""
    runs = []
    start = None
    prev = None
    for d, c in zip(deltas, counts):
        if c == target:
            if start is None:
                start = d
            prev = d
        elif start is not None:
            runs.append((start, prev))
            start = None
    if start is not None:
        runs.append((start, prev))
    return runs


def sweep(dataset, algo: str, deltas: Iterable[float], config: Optional[CnniConfig] = None,
          cell_lengths=None) -> list:
    """Run ``algo`` at each delta; returns the labelings in grid order."""
    base = config or CnniConfig(1.0)
    out = []
    for d in deltas:
        kind = base.kind
        if kind.variant == "exp-scaled":
            kind = SimilarityKind("exp-scaled", d)
        cfg = CnniConfig(d, base.many_fraction, kind, base.overwrite, base.truncate_many)
        out.append(run_algorithm(algo, dataset, cfg, cell_lengths))
    return out


def scan_valid_interval(dataset, algo: str, target_nc: int, delta_grid: Sequence[float],
                        config: Optional[CnniConfig] = None) -> list[tuple[float, float]]:
    """Sub-ranges of ``delta_grid`` where ``algo`` finds exactly ``target_nc`` clusters."""
    if algo not in ("cnni", "icnni", "ecnni"):
        raise UsageError(f"delta scans apply to cnni, icnni and ecnni, not {algo!r}")
    grid = list(delta_grid)
    if not grid:
        raise UsageError("empty delta grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise UsageError("delta grid must be ascending")
    n = as_dataset(dataset).n
    if target_nc > n:
        return []
    counts = [lab.num_clusters for lab in sweep(dataset, algo, grid, config)]
    return valid_intervals(grid, counts, target_nc)
