"""Betti-number barcodes over frame index, persistence runs and shrink plans."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import BarcodeError
from .vortex import BettiResult

DEFAULT_MIN_RUN = 2


@dataclass
class Barcode:
    frame_count: int
    entries: dict[int, list[int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for f, values in self.entries.items():
            if not 0 <= f < self.frame_count:
                raise BarcodeError(f"frame {f} outside 0..{self.frame_count - 1}")
            values.sort()

    @property
    def betti_domain(self) -> list[int]:
        return sorted({v for values in self.entries.values() for v in values})

    def column(self, frame: int) -> list[int]:
        return self.entries.get(frame, [])

    def frames_with(self, value: int) -> list[int]:
        return sorted(f for f, values in self.entries.items() if value in values)


@dataclass(frozen=True)
class PersistenceInterval:
    betti_value: int
    start_frame: int
    end_frame: int

    @property
    def length(self) -> int:
        return self.end_frame - self.start_frame + 1


@dataclass(frozen=True)
class ShrinkPlan:
    target_betti: int
    retained_frames: tuple[int, ...]
    min_run_length: int


def assemble_barcode(
    per_frame: Iterable[tuple[int, Sequence[BettiResult]]], frame_count: int | None = None
) -> Barcode:
    """Fold per-frame Betti results (in any order) into a barcode.

    ``frame_count`` defaults to one past the largest frame index seen.
    """
    entries: dict[int, list[int]] = {}
    for frame, results in per_frame:
        if frame in entries:
            raise BarcodeError(f"duplicate frame index {frame}")
        entries[frame] = [r.value if isinstance(r, BettiResult) else int(r) for r in results]
    if frame_count is None:
        frame_count = max(entries, default=-1) + 1
    return Barcode(frame_count, {f: v for f, v in sorted(entries.items()) if v})


def persistence_intervals(bc: Barcode) -> list[PersistenceInterval]:
    """Maximal runs of consecutive frames per Betti value, sorted by (value, start)."""
    out = []
    for value in bc.betti_domain:
        frames = bc.frames_with(value)
        start = prev = frames[0]
        for f in frames[1:]:
            if f != prev + 1:
                out.append(PersistenceInterval(value, start, prev))
                start = f
            prev = f
        out.append(PersistenceInterval(value, start, prev))
    return out


def shrink(bc: Barcode, target_betti: int, min_run_length: int = DEFAULT_MIN_RUN) -> ShrinkPlan:
    """Frames inside runs of ``target_betti`` lasting at least ``min_run_length`` frames."""
    keep: list[int] = []
    for iv in persistence_intervals(bc):
        if iv.betti_value == target_betti and iv.length >= min_run_length:
            keep.extend(range(iv.start_frame, iv.end_frame + 1))
    return ShrinkPlan(target_betti, tuple(sorted(keep)), min_run_length)


def write_barcode(bc: Barcode, path: str | Path, fmt: str | None = None) -> Path:
    """Write ``bc`` as CSV (``frame,betti`` rows) or JSON; format defaults to the suffix."""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    try:
        if fmt == "csv":
            with path.open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["frame", "betti"])
                for f in sorted(bc.entries):
                    for v in sorted(bc.entries[f]):
                        w.writerow([f, v])
        elif fmt == "json":
            doc = {
                "frame_count": bc.frame_count,
                "entries": [[f, sorted(bc.entries[f])] for f in sorted(bc.entries)],
            }
            path.write_text(json.dumps(doc) + "\n")
        else:
            raise ValueError(f"unknown barcode format {fmt!r}")
    except OSError as exc:
        raise BarcodeError(f"cannot write barcode to {path}: {exc}") from exc
    return path


def read_barcode(path: str | Path, fmt: str | None = None, frame_count: int | None = None) -> Barcode:
    """Inverse of :func:`write_barcode`.

    CSV carries no frame count, so pass ``frame_count`` to recover trailing
    empty frames; otherwise it is one past the last listed frame.
    """
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    try:
        if fmt == "json":
            doc = json.loads(path.read_text())
            return Barcode(int(doc["frame_count"]), {int(f): [int(v) for v in vs] for f, vs in doc["entries"]})
        if fmt == "csv":
            entries: dict[int, list[int]] = {}
            with path.open(newline="") as fh:
                for row in csv.DictReader(fh):
                    entries.setdefault(int(row["frame"]), []).append(int(row["betti"]))
            if frame_count is None:
                frame_count = max(entries, default=-1) + 1
            return Barcode(frame_count, entries)
    except OSError as exc:
        raise BarcodeError(f"cannot read barcode from {path}: {exc}") from exc
    raise ValueError(f"unknown barcode format {fmt!r}")


def write_plan(plan: ShrinkPlan, path: str | Path) -> Path:
    path = Path(path)
    path.write_text("".join(f"{f}\n" for f in plan.retained_frames))
    return path


def read_plan(path: str | Path) -> list[int]:
    return [int(line) for line in Path(path).read_text().split()]
