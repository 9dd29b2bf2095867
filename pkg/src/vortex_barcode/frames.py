"""Frame loading, binarization, hole labeling and centroid extraction."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy import ndimage

from .errors import FrameLoadError

DEFAULT_MIN_HOLE_AREA = 9
_EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


@dataclass
class GrayFrame:
    pixels: np.ndarray  # (height, width) uint8
    index: int = 0

    def __post_init__(self) -> None:
        self.pixels = np.asarray(self.pixels, dtype=np.uint8)
        if self.pixels.ndim != 2 or min(self.pixels.shape) < 1:
            raise ValueError(f"frame must be a non-empty 2D array, got shape {self.pixels.shape}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass
class BinaryFrame:
    mask: np.ndarray  # (height, width) bool, True = dark
    threshold: int
    source_index: int = 0

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    @property
    def width(self) -> int:
        return self.mask.shape[1]


@dataclass
class HoleRegion:
    label: int
    pixel_coords: np.ndarray  # (area, 2) int, columns x, y

    @property
    def area(self) -> int:
        return len(self.pixel_coords)


@dataclass(frozen=True)
class Centroid:
    x: float
    y: float
    region_label: int


ThresholdMethod = Union[int, str]


def _natural_key(name: str) -> list:
    return [int(tok) if tok.isdigit() else tok.lower() for tok in re.split(r"(\d+)", name)]


def to_gray(img: Image.Image) -> np.ndarray:
    """Convert a decoded image to 8-bit luma, rounding 0.299R + 0.587G + 0.114B half up."""
    if img.mode == "L":
        return np.asarray(img, dtype=np.uint8)
    if img.mode == "LA":
        return np.asarray(img.getchannel("L"), dtype=np.uint8)
    if img.mode in ("1", "P", "RGBA", "RGB", "CMYK", "YCbCr"):
        if img.mode == "1":
            return np.asarray(img.convert("L"), dtype=np.uint8)
        rgb = np.asarray(img.convert("RGB"), dtype=np.float64)
        luma = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
        return np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)
    raise FrameLoadError(f"unsupported image mode {img.mode!r}")


def load_frame(path: Path, index: int = 0) -> GrayFrame:
    try:
        with Image.open(path) as img:
            img.load()
            return GrayFrame(to_gray(img), index=index)
    except (OSError, UnidentifiedImageError, FrameLoadError) as exc:
        raise FrameLoadError(f"cannot read frame {path}: {exc}") from exc


def list_frame_paths(dir_path: str | Path, pattern: str = "*.png") -> list[Path]:
    root = Path(dir_path)
    if not root.is_dir():
        raise FrameLoadError(f"frame directory {root} does not exist")
    paths = sorted((p for p in root.glob(pattern) if p.is_file()), key=lambda p: _natural_key(p.name))
    if not paths:
        raise FrameLoadError(f"no frames matched {pattern!r} in {root}")
    return paths


def load_frames(dir_path: str | Path, pattern: str = "*.png") -> list[GrayFrame]:
    """Load every file in ``dir_path`` matching ``pattern``, in natural filename order."""
    return [load_frame(p, i) for i, p in enumerate(list_frame_paths(dir_path, pattern))]


def otsu_threshold(pixels: np.ndarray) -> int:
    """Threshold t maximizing between-class variance of {<= t} vs {> t}.

    When several thresholds tie (a flat plateau between two modes) the middle of
    the tied range is returned. A uniform frame returns its single intensity.
    """
    hist = np.bincount(np.asarray(pixels, dtype=np.uint8).ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    levels = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(hist)
    w1 = total - w0
    s0 = np.cumsum(hist * levels)
    s1 = s0[-1] - s0
    valid = (w0 > 0) & (w1 > 0)
    if not valid.any():
        return int(np.flatnonzero(hist)[0])
    between = np.zeros(256)
    m0 = s0[valid] / w0[valid]
    m1 = s1[valid] / w1[valid]
    between[valid] = w0[valid] * w1[valid] * (m0 - m1) ** 2
    between[~valid] = -1.0
    best = np.flatnonzero(between >= between.max() * (1.0 - 1e-12))
    return int((best[0] + best[-1]) // 2)


def binarize(frame: GrayFrame, method: ThresholdMethod = "otsu") -> BinaryFrame:
    """Mark pixels with intensity <= threshold as dark.

    ``method`` is either ``"otsu"`` or a fixed integer threshold in 0..255.
    """
    if method == "otsu":
        t = otsu_threshold(frame.pixels)
    else:
        t = int(method)
        if not 0 <= t <= 255:
            raise ValueError(f"threshold {t} outside 0..255")
    return BinaryFrame(mask=frame.pixels <= t, threshold=t, source_index=frame.index)


def label_holes(bf: BinaryFrame, min_hole_area: int = DEFAULT_MIN_HOLE_AREA) -> list[HoleRegion]:
    """8-connected dark components with at least ``min_hole_area`` pixels.

    Labels are renumbered 1.. in raster-scan order of each component's first pixel,
    after the area filter.
    """
    labels, count = ndimage.label(bf.mask, structure=_EIGHT_CONNECTED)
    if count == 0:
        return []
    flat = labels.ravel()
    order = np.argsort(flat, kind="stable")
    sorted_labels = flat[order]
    starts = np.searchsorted(sorted_labels, np.arange(1, count + 1))
    ends = np.searchsorted(sorted_labels, np.arange(1, count + 1), side="right")
    width = bf.width
    regions = []
    for start, end in zip(starts, ends):
        if end - start < min_hole_area:
            continue
        idx = order[start:end]
        coords = np.column_stack((idx % width, idx // width))
        regions.append((int(idx[0]), coords))
    regions.sort(key=lambda r: r[0])
    return [HoleRegion(label=i + 1, pixel_coords=coords) for i, (_, coords) in enumerate(regions)]


def compute_centroids(regions: list[HoleRegion]) -> list[Centroid]:
    """Center of mass of each region: mean of its pixel coordinates."""
    out = []
    for r in regions:
        if r.area == 0:
            raise ValueError(f"region {r.label} is empty")
        mean = r.pixel_coords.mean(axis=0)
        out.append(Centroid(float(mean[0]), float(mean[1]), r.label))
    return out


def frame_centroids(
    frame: GrayFrame, method: ThresholdMethod = "otsu", min_hole_area: int = DEFAULT_MIN_HOLE_AREA
) -> list[Centroid]:
    return compute_centroids(label_holes(binarize(frame, method), min_hole_area))


def save_gray(pixels: np.ndarray, path: str | Path) -> None:
    Image.fromarray(np.asarray(pixels, dtype=np.uint8)).save(path)
