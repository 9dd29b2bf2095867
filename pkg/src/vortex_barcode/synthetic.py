"""Synthetic centroid layouts and frames with known vortex nerves.

Used by the test suite and the ``demo`` CLI command to plant frames whose
hole layout forces a particular nerve.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .frames import GrayFrame, save_gray


def regular_polygon(k: int, radius: float, phase: float = 0.0, center=(0.0, 0.0)) -> list[tuple[float, float]]:
    cx, cy = center
    return [
        (cx + radius * math.cos(phase + 2 * math.pi * i / k), cy + radius * math.sin(phase + 2 * math.pi * i / k))
        for i in range(k)
    ]


def concentric_layout(k: int, outer_radius: float = 3.0, center=(0.0, 0.0)) -> list[tuple[float, float]]:
    """Nucleus, a k-gon at radius 1, and a second k-gon rotated by half a step.

    The nucleus star has k triangles and the annulus 2k, so the nerve on the
    nucleus has a k-vertex inner cycle and a 2k-vertex outer cycle.
    """
    return [tuple(center)] + regular_polygon(k, 1.0, 0.0, center) + regular_polygon(
        k, outer_radius, math.pi / k, center
    )


def hexagonal_fan(center=(0.0, 0.0), radius: float = 1.0) -> list[tuple[float, float]]:
    cx, cy = center
    return [(cx, cy)] + regular_polygon(6, radius, 0.0, center)


def betti8_layout(center=(0.0, 0.0), scale: float = 1.0) -> list[tuple[float, float]]:
    """Hexagonal fan inside a rotated hexagon: 6 fan triangles, 12 in the next ring."""
    pts = concentric_layout(6, outer_radius=2.0)
    cx, cy = center
    return [(cx + scale * x, cy + scale * y) for x, y in pts]


def nested_rings_layout(rings: int, k: int = 6, ratio: float = 1.9) -> list[tuple[float, float]]:
    """Nucleus plus ``rings`` k-gons with geometric radii, alternately rotated."""
    pts = [(0.0, 0.0)]
    for r in range(rings):
        pts += regular_polygon(k, ratio**r, (r % 2) * math.pi / k)
    return pts


def draw_holes(
    centers, width: int, height: int, half: int = 2, background: int = 230, ink: int = 20
) -> np.ndarray:
    """Light frame with a dark (2*half+1)-pixel square at each rounded center."""
    img = np.full((height, width), background, dtype=np.uint8)
    for x, y in centers:
        xi, yi = int(round(x)), int(round(y))
        img[max(yi - half, 0) : yi + half + 1, max(xi - half, 0) : xi + half + 1] = ink
    return img


def planted_frame(kind: str, width: int = 240, height: int = 240) -> np.ndarray:
    """Frame whose holes force a known nerve.

    ``kind`` is ``"betti8"`` (two rings, six filaments), ``"betti1"`` (isolated
    hexagonal fan) or ``"degenerate"`` (two holes, no triangulation).
    """
    center = (width / 2, height / 2)
    if kind == "betti8":
        pts = betti8_layout(center, scale=min(width, height) / 6)
    elif kind == "betti1":
        pts = hexagonal_fan(center, radius=min(width, height) / 5)
    elif kind == "degenerate":
        pts = [(width / 3, height / 2), (2 * width / 3, height / 2)]
    else:
        raise ValueError(f"unknown planted frame kind {kind!r}")
    return draw_holes(pts, width, height)


def write_planted_sequence(out_dir: str | Path, kinds: list[str], prefix: str = "frame") -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, kind in enumerate(kinds):
        p = out / f"{prefix}{i:04d}.png"
        save_gray(planted_frame(kind), p)
        paths.append(p)
    return paths


def planted_frames(kinds: list[str]) -> list[GrayFrame]:
    return [GrayFrame(planted_frame(k), index=i) for i, k in enumerate(kinds)]
