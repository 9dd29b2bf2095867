"""Command-line entry point: ``vortex-barcode {barcode,frame,shrink,bench,demo}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench as bench_mod
from .barcode import read_barcode, read_plan, shrink, write_plan
from .errors import BarcodeError, FrameLoadError
from .frames import load_frame, list_frame_paths
from .pipeline import PipelineConfig, apply_plan, process_frame, run_pipeline
from .render import RenderStyle, render_frame_overlay_svg
from .synthetic import write_planted_sequence

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NO_NERVE = 3

log = logging.getLogger("vortex_barcode")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _threshold(value: str):
    if value == "otsu":
        return value
    t = int(value)
    if not 0 <= t <= 255:
        raise argparse.ArgumentTypeError("threshold must be 'otsu' or 0..255")
    return t


def _add_frame_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threshold", type=_threshold, default=None, help="otsu or a fixed value 0..255")
    p.add_argument("--min-hole-area", type=int, default=None)
    p.add_argument("--max-rings", type=int, default=None)
    p.add_argument("--mnc-policy", choices=("first", "all"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vortex-barcode", description="Vortex-nerve Betti barcodes for frame sequences")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("barcode", help="run the full pipeline over a frame directory")
    p.add_argument("--config", type=Path, help="key=value config file; flags override it")
    p.add_argument("--frames", type=Path, default=None)
    p.add_argument("--pattern", default=None)
    _add_frame_options(p)
    p.add_argument("--betti", type=int, default=None, help="target Betti value for the shrink plan")
    p.add_argument("--min-run", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--render-barcode", action="store_true", default=None)
    p.add_argument("--render-frames", action="store_true", default=None)
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("frame", help="debug one frame: overlay SVG and report")
    p.add_argument("image", type=Path)
    _add_frame_options(p)
    p.add_argument("--out", type=Path, default=Path("out"))

    p = sub.add_parser("shrink", help="copy frames retained by a shrink plan")
    p.add_argument("--frames", type=Path, required=True)
    p.add_argument("--pattern", default="*.png")
    p.add_argument("--plan", type=Path, help="plan.txt from the barcode command")
    p.add_argument("--barcode", type=Path, help="barcode.csv/json to plan from (with --betti)")
    p.add_argument("--betti", type=int)
    p.add_argument("--min-run", type=int, default=2)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("bench", help="runtime scaling study on random points")
    p.add_argument("--n", type=int, nargs="+", default=list(bench_mod.DEFAULT_N_VALUES))
    p.add_argument("--m-target", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--out", type=Path, default=Path("bench_out"))

    p = sub.add_parser("demo", help="write a planted synthetic frame sequence")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument(
        "--kinds",
        default="betti8*6,betti1*6,betti8*4,degenerate*4",
        help="comma list of kind[*count] with kinds betti8, betti1, degenerate",
    )
    return parser


def _expand_kinds(text: str) -> list[str]:
    kinds = []
    for item in text.split(","):
        name, _, count = item.strip().partition("*")
        kinds += [name] * int(count or 1)
    return kinds


def _config(args) -> PipelineConfig:
    overrides = {
        "frames_dir": args.frames,
        "pattern": args.pattern,
        "threshold": args.threshold,
        "min_hole_area": args.min_hole_area,
        "max_rings": args.max_rings,
        "mnc_policy": args.mnc_policy,
        "betti_target": args.betti,
        "min_run": args.min_run,
        "out_dir": args.out,
        "render_barcode": args.render_barcode,
        "render_frames": args.render_frames,
        "workers": args.workers,
    }
    if args.config:
        return PipelineConfig.from_file(args.config, **overrides)
    return PipelineConfig(**{k: v for k, v in overrides.items() if v is not None})


def cmd_barcode(args) -> int:
    cfg = _config(args)
    result = run_pipeline(cfg)
    counts: dict[str, int] = {}
    for r in result.reports:
        counts[r.status] = counts.get(r.status, 0) + 1
    print(f"{len(result.reports)} frames: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    print(f"betti values: {result.barcode.betti_domain}; wrote {cfg.out_dir}")
    if result.plan is not None:
        print(f"shrink plan for betti {result.plan.target_betti}: {len(result.plan.retained_frames)} frames")
    return EXIT_OK if result.any_nerve else EXIT_NO_NERVE


def cmd_frame(args) -> int:
    cfg = PipelineConfig(
        **{
            k: v
            for k, v in {
                "threshold": args.threshold,
                "min_hole_area": args.min_hole_area,
                "max_rings": args.max_rings,
                "mnc_policy": args.mnc_policy,
            }.items()
            if v is not None
        }
    )
    report = process_frame(load_frame(args.image), cfg, keep_geometry=True)
    args.out.mkdir(parents=True, exist_ok=True)
    stem = args.image.stem
    if report.triangulation is not None:
        svg = render_frame_overlay_svg(report.triangulation, report.nerves, RenderStyle())
        (args.out / f"{stem}.svg").write_text(svg)
    doc = {
        "frame": str(args.image),
        "centroids": report.n_centroids,
        "mncs": report.mnc_count,
        "status": report.status,
        "betti": [b.value for b in report.betti],
        "contributions": [list(b.per_ring_contributions) for b in report.betti],
        "elapsed_ms": round(report.elapsed_ms, 3),
    }
    (args.out / f"{stem}.json").write_text(json.dumps(doc, indent=2) + "\n")
    print(json.dumps(doc))
    return EXIT_OK if report.betti else EXIT_NO_NERVE


def cmd_shrink(args) -> int:
    paths = list_frame_paths(args.frames, args.pattern)
    if args.plan:
        retained = read_plan(args.plan)
    elif args.barcode and args.betti is not None:
        plan = shrink(read_barcode(args.barcode, frame_count=len(paths)), args.betti, args.min_run)
        retained = list(plan.retained_frames)
        args.out.mkdir(parents=True, exist_ok=True)
        write_plan(plan, args.out / "plan.txt")
    else:
        print("shrink: give --plan, or --barcode with --betti", file=sys.stderr)
        return EXIT_USAGE
    copied = apply_plan(paths, retained, args.out)
    print(f"copied {len(copied)} of {len(paths)} frames to {args.out}")
    return EXIT_OK


def cmd_bench(args) -> int:
    fit = bench_mod.bench_complexity(args.n, args.m_target, args.seed, args.repeats)
    timings, summary = bench_mod.write_bench(fit, args.out)
    for r in fit.rows:
        print(f"n={r.n:6d} m={r.m} best={r.best_s:.4f}s median={r.median_s:.4f}s")
    print(f"k={fit.k:.4e} s  R^2={fit.r_squared:.4f}  log-log slope={fit.slope:.3f}")
    print(f"wrote {timings} and {summary}")
    return EXIT_OK


def cmd_demo(args) -> int:
    paths = write_planted_sequence(args.out, _expand_kinds(args.kinds))
    print(f"wrote {len(paths)} frames to {args.out}")
    return EXIT_OK


COMMANDS = {"barcode": cmd_barcode, "frame": cmd_frame, "shrink": cmd_shrink, "bench": cmd_bench, "demo": cmd_demo}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (FrameLoadError, BarcodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
