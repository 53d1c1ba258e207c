"""CSV datasets, label files and cluster dumps.

Label files hold one integer per line; line i is the label of point i
(1-based), 0 meaning noise.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .core import Dataset, as_dataset
from .errors import FormatError

PathLike = Union[str, Path]


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def minmax_normalize(points: np.ndarray) -> np.ndarray:
    """Scale every column to [0, 1]; constant columns become 0."""
    lo = points.min(axis=0)
    span = points.max(axis=0) - lo
    span[span == 0] = 1.0
    return (points - lo) / span


def load_csv(
    path: PathLike,
    delimiter: str = ",",
    has_header: Optional[bool] = None,
    label_column: Optional[int] = None,
    normalize: bool = False,
) -> Dataset:
    """Read numeric rows; ``label_column`` (may be negative) becomes truth labels.

    With ``has_header=None`` the first row is treated as a header when any of
    its feature fields is not a number. Non-numeric class names are mapped to
    1, 2, ... in order of first appearance.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh, delimiter=delimiter), start=1)
                if r and any(f.strip() for f in r)]
    if not rows:
        raise FormatError(f"{path}: no data rows")
    width = len(rows[0][1])
    col = None
    if label_column is not None:
        col = label_column % width if -width <= label_column < width else None
        if col is None:
            raise FormatError(f"{path}: label column {label_column} out of range for {width} columns", rows[0][0])

    def features(r):
        return [f for j, f in enumerate(r) if j != col]

    if has_header is None:
        has_header = not all(_is_number(f) for f in features(rows[0][1]))
    if has_header:
        rows = rows[1:]
    if not rows:
        raise FormatError(f"{path}: header only, no data rows")

    points, raw_labels = [], []
    for line, r in rows:
        if len(r) != width:
            raise FormatError(f"{path}: expected {width} fields, got {len(r)}", line)
        try:
            points.append([float(f) for f in features(r)])
        except ValueError as exc:
            raise FormatError(f"{path}: non-numeric feature ({exc})", line) from None
        if col is not None:
            raw_labels.append(r[col].strip())
    pts = np.asarray(points, dtype=np.float64)
    if pts.shape[1] == 0:
        raise FormatError(f"{path}: no feature columns")
    if not np.all(np.isfinite(pts)):
        raise FormatError(f"{path}: non-finite feature value")
    if normalize:
        pts = minmax_normalize(pts)
    truth = None
    if col is not None:
        if all(_is_number(v) and float(v).is_integer() for v in raw_labels):
            truth = np.array([int(float(v)) for v in raw_labels], dtype=np.int64)
        else:
            codes: dict = {}
            truth = np.array([codes.setdefault(v, len(codes) + 1) for v in raw_labels], dtype=np.int64)
    return Dataset(pts, truth)


def write_csv(path: PathLike, dataset, with_labels: bool = False, precision: int = 6) -> None:
    ds = as_dataset(dataset)
    fmt = f"{{:.{precision}f}}"
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for i, p in enumerate(ds.points):
            row = [fmt.format(v) for v in p]
            if with_labels and ds.truth_labels is not None:
                row.append(int(ds.truth_labels[i]))
            w.writerow(row)


def write_labels(path: PathLike, labels) -> None:
    labels = np.asarray(getattr(labels, "labels", labels), dtype=np.int64)
    Path(path).write_text("".join(f"{int(v)}\n" for v in labels))


def read_labels(path: PathLike) -> np.ndarray:
    out = []
    for line, text in enumerate(Path(path).read_text().splitlines(), start=1):
        text = text.strip()
        if not text:
            continue
        try:
            out.append(int(text))
        except ValueError:
            raise FormatError(f"{path}: not an integer label: {text!r}", line) from None
    return np.asarray(out, dtype=np.int64)


def write_cluster_dump(path: PathLike, dataset, labels) -> None:
    """CSV of ``index,x1..xm,label`` with 1-based indices, for plotting."""
    ds = as_dataset(dataset)
    labels = np.asarray(getattr(labels, "labels", labels), dtype=np.int64)
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index"] + [f"x{k + 1}" for k in range(ds.dim)] + ["label"])
        for i, (p, lab) in enumerate(zip(ds.points, labels), start=1):
            w.writerow([i] + [repr(float(v)) for v in p] + [int(lab)])
