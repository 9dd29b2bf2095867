"""End-to-end frame-sequence pipeline: frames in, barcode and reports out."""

from __future__ import annotations

import csv
import logging
import shutil
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from . import frames as fr
from .barcode import DEFAULT_MIN_RUN, Barcode, ShrinkPlan, assemble_barcode, shrink, write_barcode, write_plan
from .errors import FrameDegenerate, NerveError
from .geometry import Triangulation, delaunay_triangulate
from .nerve import maximal_nerves
from .render import RenderStyle, render_barcode_svg, render_frame_overlay_svg
from .vortex import DEFAULT_MAX_RINGS, BettiResult, VortexNerve, betti_number, build_vortex_nerve

log = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_DEGENERATE = "degenerate"
STATUS_NO_VORTEX = "no_vortex"


@dataclass
class PipelineConfig:
    frames_dir: Path = Path(".")
    pattern: str = "*.png"
    threshold: fr.ThresholdMethod = "otsu"
    min_hole_area: int = fr.DEFAULT_MIN_HOLE_AREA
    max_rings: int = DEFAULT_MAX_RINGS
    mnc_policy: str = "all"
    betti_target: Optional[int] = None
    min_run: int = DEFAULT_MIN_RUN
    out_dir: Path = Path("out")
    render_barcode: bool = False
    render_frames: bool = False
    workers: int = 1
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        self.frames_dir = Path(self.frames_dir)
        self.out_dir = Path(self.out_dir)
        if isinstance(self.threshold, str) and self.threshold != "otsu":
            self.threshold = int(self.threshold)
        if self.max_rings < 1:
            raise ValueError("max_rings must be >= 1")
        if self.mnc_policy not in ("first", "all"):
            raise ValueError(f"mnc_policy must be 'first' or 'all', got {self.mnc_policy!r}")
        if self.min_run < 1:
            raise ValueError("min_run must be >= 1")

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "PipelineConfig":
        """Read ``key=value`` lines (``#`` comments allowed); ``overrides`` win."""
        types = {f.name: f.type for f in fields(cls)}
        values: dict = {}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep or key not in types:
                raise ValueError(f"{path}:{lineno}: bad config line {raw!r}")
            values[key] = _coerce(key, val.strip())
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def _coerce(key: str, val: str):
    if key in ("min_hole_area", "max_rings", "min_run", "workers"):
        return int(val)
    if key in ("betti_target", "seed"):
        return None if val.lower() in ("", "none") else int(val)
    if key in ("render_barcode", "render_frames"):
        return val.lower() in ("1", "true", "yes", "on")
    if key == "threshold":
        return val if val == "otsu" else int(val)
    return val


@dataclass
class FrameReport:
    index: int
    n_centroids: int
    mnc_count: int
    betti: list[BettiResult]
    status: str
    elapsed_ms: float
    triangulation: Optional[Triangulation] = field(default=None, repr=False)
    nerves: list[VortexNerve] = field(default_factory=list, repr=False)


def analyze_points(points, max_rings: int = DEFAULT_MAX_RINGS, mnc_policy: str = "all"):
    """Triangulate, pick MNCs and build vortex nerves; returns (tri, mnc_count, nerves).

    Raises FrameDegenerate when the points cannot be triangulated.
    """
    tri = delaunay_triangulate(points)
    mncs = maximal_nerves(tri)
    nerves = []
    for nerve in mncs:
        try:
            nerves.append(build_vortex_nerve(nerve, tri, max_rings))
        except NerveError as exc:
            log.debug("MNC at vertex %d skipped: %s", nerve.nucleus, exc)
            continue
        if mnc_policy == "first":
            break
    return tri, len(mncs), nerves


def process_frame(frame: fr.GrayFrame, cfg: PipelineConfig, keep_geometry: bool = False) -> FrameReport:
    start = time.perf_counter()
    centroids = fr.frame_centroids(frame, cfg.threshold, cfg.min_hole_area)
    points = [(c.x, c.y) for c in centroids]
    try:
        tri, mnc_count, nerves = analyze_points(points, cfg.max_rings, cfg.mnc_policy)
    except FrameDegenerate as exc:
        log.info("frame %d degenerate: %s", frame.index, exc)
        return FrameReport(frame.index, len(points), 0, [], STATUS_DEGENERATE, _ms(start))
    betti = [betti_number(vn) for vn in nerves]
    status = STATUS_OK if betti else STATUS_NO_VORTEX
    report = FrameReport(frame.index, len(points), mnc_count, betti, status, _ms(start))
    if keep_geometry:
        report.triangulation = tri
        report.nerves = nerves
    return report


def _ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0


def _process_path(args) -> FrameReport:
    path, index, cfg, keep = args
    return process_frame(fr.load_frame(path, index), cfg, keep)


def process_frames(paths: list[Path], cfg: PipelineConfig, keep_geometry: bool = False) -> list[FrameReport]:
    jobs = [(p, i, cfg, keep_geometry) for i, p in enumerate(paths)]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            reports = list(pool.map(_process_path, jobs))
    else:
        reports = [_process_path(j) for j in jobs]
    return sorted(reports, key=lambda r: r.index)


def write_reports(reports: list[FrameReport], path: Path) -> Path:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["frame", "centroids", "mncs", "status", "betti", "elapsed_ms"])
        for r in reports:
            w.writerow([r.index, r.n_centroids, r.mnc_count, r.status, " ".join(str(b.value) for b in r.betti), f"{r.elapsed_ms:.3f}"])
    return path


@dataclass
class PipelineResult:
    barcode: Barcode
    reports: list[FrameReport]
    plan: Optional[ShrinkPlan] = None
    frame_paths: list[Path] = field(default_factory=list)

    @property
    def any_nerve(self) -> bool:
        return any(r.status == STATUS_OK for r in self.reports)


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """Run every frame in ``cfg.frames_dir`` and write the barcode artifacts to ``cfg.out_dir``.

    Writes barcode.csv, barcode.json and frames.csv always; barcode.svg and
    per-frame overlay SVGs on request; plan.txt when a target Betti value is set.
    """
    paths = fr.list_frame_paths(cfg.frames_dir, cfg.pattern)
    reports = process_frames(paths, cfg, keep_geometry=cfg.render_frames)
    bc = assemble_barcode(((r.index, r.betti) for r in reports), frame_count=len(reports))

    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    write_barcode(bc, out / "barcode.csv")
    write_barcode(bc, out / "barcode.json")
    write_reports(reports, out / "frames.csv")
    style = RenderStyle()
    if cfg.render_barcode:
        (out / "barcode.svg").write_text(render_barcode_svg(bc, style))
    if cfg.render_frames:
        fdir = out / "frames"
        fdir.mkdir(exist_ok=True)
        for r in reports:
            if r.triangulation is not None:
                svg = render_frame_overlay_svg(r.triangulation, r.nerves, style)
                (fdir / f"frame{r.index:04d}.svg").write_text(svg)
    plan = None
    if cfg.betti_target is not None:
        plan = shrink(bc, cfg.betti_target, cfg.min_run)
        write_plan(plan, out / "plan.txt")
    return PipelineResult(bc, reports, plan, paths)


def apply_plan(frame_paths: list[Path], retained: list[int], out_dir: str | Path) -> list[Path]:
    """Copy the retained frame files (by frame index) into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    copied = []
    for i in retained:
        if not 0 <= i < len(frame_paths):
            raise IndexError(f"plan frame {i} outside 0..{len(frame_paths) - 1}")
        copied.append(Path(shutil.copy2(frame_paths[i], out / frame_paths[i].name)))
    return copied
