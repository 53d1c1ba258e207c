"""Quality measures: cluster count, ADM, purity, timing."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .clustering import ClusterLabeling
from .core import as_dataset
from .errors import UsageError


def _labels(labeling) -> np.ndarray:
    if isinstance(labeling, ClusterLabeling):
        return labeling.labels
    return np.asarray(labeling, dtype=np.int64).reshape(-1)


def adm(dataset, labeling) -> float:
    """Average distance from clustered points to their cluster mean.

    Noise (label 0) is left out of both the sum and the count.
    """
    X = as_dataset(dataset).points
    labels = _labels(labeling)
    if labels.shape[0] != X.shape[0]:
        raise UsageError(f"{labels.shape[0]} labels for {X.shape[0]} points")
    pos = labels > 0
    if not np.any(pos):
        return 0.0
    lab = labels[pos]
    pts = X[pos]
    ids, inv = np.unique(lab, return_inverse=True)
    sums = np.zeros((ids.size, X.shape[1]))
    np.add.at(sums, inv, pts)
    means = sums / np.bincount(inv)[:, None]
    dev = np.sqrt(((pts - means[inv]) ** 2).sum(axis=1))
    return float(dev.mean())


def purity(labeling, truth) -> float:
    """Fraction of points whose group's majority class is their own.

    Noise points form one extra group, so the denominator stays n.
    """
    labels = _labels(labeling)
    if truth is None:
        raise UsageError("purity needs truth labels")
    truth = np.asarray(truth).reshape(-1)
    if truth.shape[0] != labels.shape[0]:
        raise UsageError(f"{truth.shape[0]} truth labels for {labels.shape[0]} points")
    _, t = np.unique(truth, return_inverse=True)
    total = 0
    for c in np.unique(labels):
        total += int(np.bincount(t[labels == c]).max())
    return total / labels.shape[0]


@dataclass(frozen=True)
class EvalReport:
    nc: int
    adm: float
    purity: Optional[float]
    noise_count: int
    elapsed: Optional[float] = None

    def as_row(self) -> dict:
        return {
            "nc": self.nc,
            "adm": f"{self.adm:.4f}",
            "purity": "" if self.purity is None else f"{self.purity:.4f}",
            "noise": self.noise_count,
            "elapsed_ms": "" if self.elapsed is None else f"{self.elapsed * 1000:.0f}",
        }

    def text(self) -> str:
        lines = [f"NC: {self.nc}", f"ADM: {self.adm:.4f}"]
        if self.purity is not None:
            lines.append(f"CP: {self.purity * 100:.2f}%")
        lines.append(f"noise: {self.noise_count}")
        if self.elapsed is not None:
            lines.append(f"ST: {self.elapsed * 1000:.0f} ms")
        return "\n".join(lines)


def evaluate(dataset, labeling, truth=None, elapsed=None) -> EvalReport:
    ds = as_dataset(dataset)
    if truth is None:
        truth = ds.truth_labels
    labels = _labels(labeling)
    nc = int(np.unique(labels[labels > 0]).size)
    return EvalReport(
        nc=nc,
        adm=adm(ds, labels),
        purity=None if truth is None or len(truth) == 0 else purity(labels, truth),
        noise_count=int(np.count_nonzero(labels == 0)),
        elapsed=elapsed,
    )


def timed(fn: Callable, *args, **kwargs):
    """Call ``fn`` and return ``(result, seconds)``."""
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0
