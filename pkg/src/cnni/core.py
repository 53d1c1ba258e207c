"""Dataset container, Euclidean dissimilarity and near-neighbor influence.

Point indices are 0-based everywhere in the library. User-facing files
(labels, cluster dumps) number points from 1, so point ``i`` here is line
``i + 1`` there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import UsageError

SIMILARITY_VARIANTS = ("reciprocal", "exp", "exp-scaled")


@dataclass(frozen=True)
class SimilarityKind:
    """Which similarity transform turns a distance into a value in (0, 1].

    ``reciprocal`` is 1/(1+d), ``exp`` is e^-d and ``exp-scaled`` is
    e^(-d/scale) where ``scale`` is usually the neighborhood radius.
    """

    variant: str = "reciprocal"
    scale: Optional[float] = None

    def __post_init__(self):
        if self.variant not in SIMILARITY_VARIANTS:
            raise UsageError(f"unknown similarity kind {self.variant!r}")
        if self.variant == "exp-scaled":
            if self.scale is None or not self.scale > 0:
                raise UsageError("exp-scaled similarity needs a positive scale")

    @classmethod
    def parse(cls, name: str, delta: Optional[float] = None) -> "SimilarityKind":
        if name == "exp-scaled":
            return cls(name, delta)
        return cls(name)


RECIPROCAL = SimilarityKind()


@dataclass(frozen=True, eq=False)
class Dataset:
    points: np.ndarray
    truth_labels: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise UsageError("dataset needs at least one point of dimension >= 1")
        if not np.all(np.isfinite(pts)):
            raise UsageError("dataset coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.truth_labels is not None:
            truth = np.array(self.truth_labels, dtype=np.int64).reshape(-1)
            if truth.shape[0] != pts.shape[0]:
                raise UsageError(
                    f"{truth.shape[0]} truth labels for {pts.shape[0]} points"
                )
            truth.setflags(write=False)
            object.__setattr__(self, "truth_labels", truth)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n


def as_dataset(data) -> Dataset:
    return data if isinstance(data, Dataset) else Dataset(data)


def euclidean_distance(a: Sequence[float], b: Sequence[float]) -> float:
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    # same per-axis accumulation order as pairwise_distances
    acc = 0.0
    for x, y in zip(a.tolist(), b.tolist()):
        acc += (x - y) * (x - y)
    return math.sqrt(acc)


def pairwise_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance matrix between the rows of ``a`` and ``b``.

    Squares are accumulated axis by axis so every entry is computed with
    the same sequence of float operations whatever the block shapes are.
    Brute-force and grid neighbor construction rely on this to agree bit
    for bit.
    """
    diff = a[:, None, 0] - b[None, :, 0]
    acc = diff * diff
    for k in range(1, a.shape[1]):
        diff = a[:, None, k] - b[None, :, k]
        acc += diff * diff
    return np.sqrt(acc, out=acc)


def similarity(d, kind: SimilarityKind = RECIPROCAL):
    """Map distance(s) ``d >= 0`` to similarity in (0, 1]."""
    arr = np.asarray(d, dtype=np.float64)
    if np.any(arr < 0):
        raise UsageError("distance must be non-negative")
    if kind.variant == "reciprocal":
        out = 1.0 / (1.0 + arr)
    elif kind.variant == "exp":
        out = np.exp(-arr)
    else:
        out = np.exp(-arr / kind.scale)
    return float(out) if out.ndim == 0 else out


def influence(neighbor_distances: Sequence[float], kind: SimilarityKind = RECIPROCAL) -> float:
    """Sum of similarities over one point's neighbor distances."""
    d = np.asarray(neighbor_distances, dtype=np.float64).reshape(-1)
    if d.size == 0:
        return 0.0
    return float(np.sum(similarity(d, kind)))
