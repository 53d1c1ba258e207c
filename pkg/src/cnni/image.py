"""24-bit BMP pixels as RGB points, and recoloring by cluster means."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .clustering import ClusterLabeling, CnniConfig, cnni_multiset
from .errors import FormatError, UsageError
from .evaluation import adm

PathLike = Union[str, Path]

_FILE_HEADER = struct.Struct("<2sIHHI")
_INFO_HEADER = struct.Struct("<IiiHHIIiiII")


@dataclass(frozen=True, eq=False)
class PixelDataset:
    """Pixels in row-major order from the top-left, one RGB triple per row."""

    width: int
    height: int
    rgb: np.ndarray

    def __post_init__(self):
        rgb = np.asarray(self.rgb)
        if rgb.shape != (self.width * self.height, 3):
            raise UsageError(f"expected {self.width * self.height} RGB triples, got shape {rgb.shape}")
        if rgb.size and (rgb.min() < 0 or rgb.max() > 255):
            raise UsageError("RGB values must lie in 0..255")
        object.__setattr__(self, "rgb", rgb.astype(np.uint8))

    @property
    def points(self) -> np.ndarray:
        return self.rgb.astype(np.float64)

    def image(self) -> np.ndarray:
        return self.rgb.reshape(self.height, self.width, 3)

    @classmethod
    def from_image(cls, image) -> "PixelDataset":
        img = np.asarray(image)
        if img.ndim != 3 or img.shape[2] != 3:
            raise UsageError("image must have shape (height, width, 3)")
        return cls(img.shape[1], img.shape[0], img.reshape(-1, 3))


def decode_bmp(data: bytes) -> PixelDataset:
    if len(data) < _FILE_HEADER.size + _INFO_HEADER.size:
        raise FormatError("truncated BMP headers")
    magic, _, _, _, offset = _FILE_HEADER.unpack_from(data, 0)
    if magic != b"BM":
        raise FormatError(f"bfType is {magic!r}, expected b'BM'")
    (hsize, width, height, planes, bpp, compression,
     _, _, _, _, _) = _INFO_HEADER.unpack_from(data, _FILE_HEADER.size)
    if hsize < 40:
        raise FormatError(f"biSize {hsize} unsupported (need BITMAPINFOHEADER or later)")
    if planes != 1:
        raise FormatError(f"biPlanes is {planes}, expected 1")
    if bpp != 24:
        raise FormatError(f"biBitCount is {bpp}, only 24 is supported")
    if compression != 0:
        raise FormatError(f"biCompression is {compression}, only uncompressed (0) is supported")
    if width <= 0 or height == 0:
        raise FormatError(f"bad dimensions biWidth={width} biHeight={height}")
    top_down = height < 0
    height = abs(height)
    stride = (width * 3 + 3) & ~3
    if offset + stride * height > len(data):
        raise FormatError(f"bfOffBits {offset} plus pixel data exceeds file size {len(data)}")
    rows = np.frombuffer(data, dtype=np.uint8, count=stride * height, offset=offset).reshape(height, stride)
    bgr = rows[:, : width * 3].reshape(height, width, 3)
    if not top_down:
        bgr = bgr[::-1]
    return PixelDataset.from_image(bgr[:, :, ::-1])


def encode_bmp(pixels: PixelDataset) -> bytes:
    """Bottom-up, uncompressed 24-bit BMP with a BITMAPINFOHEADER."""
    w, h = pixels.width, pixels.height
    stride = (w * 3 + 3) & ~3
    body = np.zeros((h, stride), dtype=np.uint8)
    body[:, : w * 3] = pixels.image()[::-1, :, ::-1].reshape(h, w * 3)
    offset = _FILE_HEADER.size + _INFO_HEADER.size
    size = offset + body.size
    head = _FILE_HEADER.pack(b"BM", size, 0, 0, offset)
    info = _INFO_HEADER.pack(40, w, h, 1, 24, 0, body.size, 2835, 2835, 0, 0)
    return head + info + body.tobytes()


def load_bmp_pixels(path: PathLike) -> PixelDataset:
    try:
        return decode_bmp(Path(path).read_bytes())
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_bmp(path: PathLike, pixels: PixelDataset) -> None:
    Path(path).write_bytes(encode_bmp(pixels))


def recolor_by_clusters(pixels: PixelDataset, labeling) -> PixelDataset:
    """Paint each clustered pixel with its cluster's mean color; noise keeps its own."""
    labels = np.asarray(getattr(labeling, "labels", labeling), dtype=np.int64)
    if labels.shape[0] != pixels.rgb.shape[0]:
        raise UsageError(f"{labels.shape[0]} labels for {pixels.rgb.shape[0]} pixels")
    out = pixels.rgb.copy()
    pos = labels > 0
    if np.any(pos):
        ids, inv = np.unique(labels[pos], return_inverse=True)
        sums = np.zeros((ids.size, 3))
        np.add.at(sums, inv, pixels.rgb[pos].astype(np.float64))
        means = sums / np.bincount(inv)[:, None]
        # half-up rounding; np.rint would round .5 to even
        out[pos] = np.clip(np.floor(means + 0.5), 0, 255).astype(np.uint8)[inv]
    return PixelDataset(pixels.width, pixels.height, out)


def distinct_colors(pixels: PixelDataset) -> int:
    return int(np.unique(pixels.rgb, axis=0).shape[0])


@dataclass(frozen=True, eq=False)
class CompressResult:
    labeling: ClusterLabeling
    output: PixelDataset
    adm: float


def compress(pixels: PixelDataset, config: CnniConfig, cell_lengths=None) -> CompressResult:
    """Cluster pixel colors with CNNI and repaint clusters by their mean color."""
    labeling = cnni_multiset(pixels.points, config, cell_lengths)
    return CompressResult(labeling, recolor_by_clusters(pixels, labeling), adm(pixels.points, labeling))
