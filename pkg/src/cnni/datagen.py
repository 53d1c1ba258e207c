"""Synthetic 2-D datasets: disk blobs (DS1-DS8 analogs) and drawn-like shapes (data1-data6)."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .core import Dataset, as_dataset
from .errors import UsageError

BLOB_SHAPES = ("disk-blob", "ring", "chain")
PATTERNS = ("data1", "data2", "data3", "data4", "data5", "data6")


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a generated dataset.

    ``n`` counts every point, noise included. Blob centers are at least
    ``separation * cluster_semidiameter`` apart and, when ``spread`` is
    set, each center lies within ``spread * cluster_semidiameter`` of one
    placed before it. The upper bound keeps the gaps between neighboring
    clusters alike, so the largest jump in the sorted MST edges falls
    between within-cluster and between-cluster edges.
    """

    num_clusters: int = 5
    cluster_semidiameter: float = 36.0
    n: int = 4000
    noise_fraction: float = 0.0
    shape: str = "disk-blob"
    region: tuple = ((0.0, 600.0), (0.0, 600.0))
    seed: int = 0
    separation: float = 3.0
    spread: Optional[float] = 3.5

    def __post_init__(self):
        if self.n < 1:
            raise UsageError("n must be >= 1")
        if not 0 <= self.noise_fraction < 1:
            raise UsageError("noise_fraction must be in [0, 1)")
        if self.shape not in BLOB_SHAPES + PATTERNS:
            raise UsageError(f"unknown shape {self.shape!r}")
        if self.shape in BLOB_SHAPES:
            if self.num_clusters < 1:
                raise UsageError("num_clusters must be >= 1")
            if not self.cluster_semidiameter > 0:
                raise UsageError("cluster_semidiameter must be positive")
            if self.separation <= 2:
                raise UsageError("separation must exceed 2 semidiameters")
            if self.spread is not None and self.spread < self.separation:
                raise UsageError("spread must be >= separation")


# name: (clusters, semidiameter, noise, default n)
_BLOB_PRESETS = {
    "ds1": (5, 36.0, True, 4000),
    "ds2": (5, 36.0, False, 4000),
    "ds3": (9, 36.0, True, 4000),
    "ds4": (9, 36.0, False, 4000),
    "ds5": (5, 60.0, False, 200),
    "ds6": (8, 40.0, False, 300),
    "ds7": (5, 50.0, False, 250),
    "ds8": (11, 40.0, False, 400),
}
_PATTERN_CLUSTERS = {"data1": 2, "data2": 3, "data3": 4, "data4": 4, "data5": 4, "data6": 2}
PRESETS = tuple(_BLOB_PRESETS) + PATTERNS
NOISE_FRACTION = 0.05


def preset(name: str, n: Optional[int] = None, seed: int = 0) -> SyntheticSpec:
    name = name.lower()
    if name in _BLOB_PRESETS:
        nc, cs, noisy, default_n = _BLOB_PRESETS[name]
        return SyntheticSpec(nc, cs, default_n if n is None else n,
                             NOISE_FRACTION if noisy else 0.0, seed=seed)
    if name in _PATTERN_CLUSTERS:
        noise = 0.1 if name == "data5" else 0.0
        return SyntheticSpec(_PATTERN_CLUSTERS[name], 20.0, 300 if n is None else n,
                             noise, shape=name, seed=seed)
    raise UsageError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


def generate(spec: SyntheticSpec) -> Dataset:
    """Points with truth labels 1..NC for clusters and 0 for noise. Deterministic per seed."""
    rng = np.random.default_rng(spec.seed)
    n_noise = int(round(spec.n * spec.noise_fraction))
    n_clustered = spec.n - n_noise
    if spec.shape in PATTERNS:
        pts, labels = _pattern(rng, spec.shape, n_clustered)
    else:
        pts, labels = _blobs(rng, spec, n_clustered)
    if n_noise:
        (x0, x1), (y0, y1) = spec.region
        noise = np.column_stack([rng.uniform(x0, x1, n_noise), rng.uniform(y0, y1, n_noise)])
        pts = np.vstack([pts, noise])
        labels = np.concatenate([labels, np.zeros(n_noise, dtype=np.int64)])
    return Dataset(pts, labels)


def _split(total: int, weights) -> list[int]:
    w = np.asarray(weights, dtype=np.float64)
    raw = total * w / w.sum()
    counts = np.floor(raw).astype(int)
    for i in np.argsort(-(raw - counts), kind="stable")[: total - counts.sum()]:
        counts[i] += 1
    return counts.tolist()


def place_centers(rng, spec: SyntheticSpec, attempts: int = 100, draws: int = 4000) -> np.ndarray:
    """Rejection-sample blob centers; each attempt scans a batch of candidates in order."""
    cs = spec.cluster_semidiameter
    (x0, x1), (y0, y1) = spec.region
    lo = np.array([x0 + cs, y0 + cs])
    hi = np.array([x1 - cs, y1 - cs])
    min_gap = spec.separation * cs
    max_gap = np.inf if spec.spread is None else spec.spread * cs
    # disks of radius min_gap/2 around the centers cannot overlap
    room = np.prod(hi - lo + min_gap)
    if np.any(hi < lo) or spec.num_clusters * np.pi * (min_gap / 2) ** 2 > room:
        raise UsageError(
            f"cannot place {spec.num_clusters} clusters of semidiameter {cs:g} "
            f"{spec.separation:g} semidiameters apart in the region"
        )
    for _ in range(attempts):
        cand = rng.uniform(lo, hi, size=(draws, 2))
        chosen = [0]
        nearest = np.linalg.norm(cand - cand[0], axis=1)
        pos = 0
        while len(chosen) < spec.num_clusters:
            ok = (nearest[pos + 1:] >= min_gap) & (nearest[pos + 1:] <= max_gap)
            if not ok.any():
                break
            pos += 1 + int(np.argmax(ok))
            chosen.append(pos)
            np.minimum(nearest, np.linalg.norm(cand - cand[pos], axis=1), out=nearest)
        if len(chosen) == spec.num_clusters:
            return cand[chosen]
    raise UsageError(
        f"cannot place {spec.num_clusters} clusters of semidiameter {cs:g} "
        f"{spec.separation:g} semidiameters apart in the region"
    )


def _blobs(rng, spec: SyntheticSpec, total: int):
    centers = place_centers(rng, spec)
    counts = _split(total, np.ones(spec.num_clusters))
    cs = spec.cluster_semidiameter
    parts = []
    for c, k in zip(centers, counts):
        if spec.shape == "disk-blob":
            parts.append(_disk(rng, k, c, cs))
        elif spec.shape == "ring":
            parts.append(_annulus(rng, k, c, 0.7 * cs, cs))
        else:
            ang = rng.uniform(0, np.pi)
            half = (cs - 0.1 * cs) * np.array([np.cos(ang), np.sin(ang)])
            parts.append(_segment(rng, k, c - half, c + half, 0.2 * cs))
    labels = np.repeat(np.arange(1, spec.num_clusters + 1), counts)
    return np.vstack(parts), labels


def _disk(rng, k, center, radius):
    t = rng.uniform(0, 2 * np.pi, k)
    r = radius * np.sqrt(rng.uniform(0, 1, k))
    return np.asarray(center) + np.column_stack([r * np.cos(t), r * np.sin(t)])


def _annulus(rng, k, center, r0, r1):
    t = rng.uniform(0, 2 * np.pi, k)
    r = np.sqrt(rng.uniform(r0 * r0, r1 * r1, k))
    return np.asarray(center) + np.column_stack([r * np.cos(t), r * np.sin(t)])


def _segment(rng, k, p0, p1, width):
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    d = p1 - p0
    normal = np.array([-d[1], d[0]]) / np.linalg.norm(d)
    s = rng.uniform(0, 1, k)
    w = rng.uniform(-width / 2, width / 2, k)
    return p0 + s[:, None] * d + w[:, None] * normal


def _arc(rng, k, center, radius, t0, t1, width):
    t = rng.uniform(t0, t1, k)
    r = radius + rng.uniform(-width / 2, width / 2, k)
    return np.asarray(center) + np.column_stack([r * np.cos(t), r * np.sin(t)])


# Each piece: (cluster, kind, args, weight). Weights roughly track area so
# the point density is similar across pieces.
def _pieces(name):
    pi = np.pi
    if name == "data1":
        return [
            (1, "arc", ((240, 280), 130, 0, pi, 24), 130 * pi),
            (2, "arc", ((370, 330), 130, pi, 2 * pi, 24), 130 * pi),
        ]
    if name == "data2":
        return [
            (1, "annulus", ((300, 260), 140, 170), 2 * pi * 155),
            (2, "disk", ((300, 260), 55), pi * 55 * 55 / 30),
            (3, "segment", ((140, 520), (460, 520), 26), 320),
        ]
    if name in ("data3", "data5"):
        return [
            (1, "segment", ((90, 100), (90, 500), 30), 400),
            (2, "segment", ((180, 100), (180, 500), 30), 400),
            (3, "arc", ((420, 430), 110, pi * 0.1, pi * 0.9, 30), 110 * pi * 0.8),
            (4, "disk", ((420, 170), 75), pi * 75 * 75 / 30),
        ]
    if name == "data4":
        return [
            (1, "arc", ((200, 420), 90, -pi / 2, pi, 26), 90 * pi * 1.5),
            (1, "arc", ((200, 240), 90, pi / 2, 2 * pi, 26), 90 * pi * 1.5),
            (2, "disk", ((440, 470), 60), pi * 60 * 60 / 26),
            (3, "disk", ((440, 260), 50), pi * 50 * 50 / 26),
            (4, "segment", ((360, 90), (540, 90), 26), 180),
        ]
    if name == "data6":
        return [
            (1, "disk", ((170, 300), 95), pi * 95 * 95 / 20),
            (2, "disk", ((430, 300), 95), pi * 95 * 95 / 20),
            (1, "segment", ((265, 300), (300, 300), 8), 140),
            (2, "segment", ((300, 300), (335, 300), 8), 140),
        ]
    raise UsageError(f"unknown pattern {name!r}")


def _pattern(rng, name, total):
    pieces = _pieces(name)
    counts = _split(total, [p[3] for p in pieces])
    pts, labels = [], []
    for (cluster, kind, args, _), k in zip(pieces, counts):
        if kind == "disk":
            pts.append(_disk(rng, k, *args))
        elif kind == "annulus":
            pts.append(_annulus(rng, k, *args))
        elif kind == "segment":
            pts.append(_segment(rng, k, *args))
        else:
            pts.append(_arc(rng, k, *args))
        labels.append(np.full(k, cluster, dtype=np.int64))
    return np.vstack(pts), np.concatenate(labels)


def sample(dataset, size: int, seed: int = 0) -> Dataset:
    """Uniform sample without replacement, original order kept."""
    ds = as_dataset(dataset)
    if not 1 <= size <= ds.n:
        raise UsageError(f"sample size must be in 1..{ds.n}")
    idx = np.sort(np.random.default_rng(seed).choice(ds.n, size=size, replace=False))
    truth = None if ds.truth_labels is None else ds.truth_labels[idx]
    return Dataset(ds.points[idx], truth)


def with_seed(spec: SyntheticSpec, seed: int) -> SyntheticSpec:
    return replace(spec, seed=seed)
