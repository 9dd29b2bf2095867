"""SVG pictographs of barcodes and per-frame vortex nerve overlays."""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .barcode import Barcode
from .geometry import Triangulation, barycenter
from .vortex import VortexNerve

CANVAS_WIDTH = 1000
MARGIN = 40


@dataclass(frozen=True)
class RenderStyle:
    bar_width: float = 8.0
    bar_height: float = 14.0
    row_gap: float = 6.0
    cycle_palette: tuple[str, ...] = ("#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
    show_labels: bool = True

    def __post_init__(self) -> None:
        if min(self.bar_width, self.bar_height) <= 0 or self.row_gap < 0:
            raise ValueError("bar dimensions must be positive")
        if not self.cycle_palette:
            raise ValueError("cycle_palette must not be empty")


@dataclass
class _Svg:
    width: float
    height: float
    body: list[str] = field(default_factory=list)

    def add(self, element: str) -> None:
        self.body.append(element)

    def text(self, x: float, y: float, s: str, anchor: str = "middle", cls: str = "label") -> None:
        self.add(f'<text class="{cls}" x="{x:.2f}" y="{y:.2f}" text-anchor="{anchor}" font-size="11">{escape(s)}</text>')

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width:.0f}" height="{self.height:.0f}" '
            f'viewBox="0 0 {self.width:.0f} {self.height:.0f}">'
        )
        return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *self.body, "</svg>"]) + "\n"


def barcode_layout(bc: Barcode, style: RenderStyle) -> tuple[float, float, dict[int, float]]:
    """Column pitch, canvas height, and the top y of each Betti row (lowest value at the bottom)."""
    domain = bc.betti_domain
    pitch = (CANVAS_WIDTH - 2 * MARGIN) / max(bc.frame_count, 1)
    row_h = style.bar_height + style.row_gap
    height = 2 * MARGIN + row_h * len(domain)
    rows = {v: MARGIN + row_h * (len(domain) - 1 - i) for i, v in enumerate(domain)}
    return pitch, height, rows


def render_barcode_svg(bc: Barcode, style: RenderStyle | None = None) -> str:
    """One band per Betti value, one bar per frame in which the value occurs."""
    style = style or RenderStyle()
    pitch, height, rows = barcode_layout(bc, style)
    svg = _Svg(CANVAS_WIDTH, height)
    bar_w = min(style.bar_width, pitch)
    for value, y in rows.items():
        svg.add(f'<g class="row" data-betti="{value}">')
        for f in bc.frames_with(value):
            x = MARGIN + f * pitch
            svg.add(
                f'<rect class="bar" data-frame="{f}" data-betti="{value}" x="{x:.2f}" y="{y:.2f}" '
                f'width="{bar_w:.2f}" height="{style.bar_height:.2f}" fill="#222"/>'
            )
        svg.add("</g>")
        if style.show_labels:
            svg.text(MARGIN - 6, y + style.bar_height * 0.8, str(value), anchor="end")
    if style.show_labels:
        svg.text(CANVAS_WIDTH / 2, height - 10, "frame")
        svg.text(12, MARGIN - 14, "Betti", anchor="start")
        if bc.frame_count:
            svg.text(MARGIN, height - MARGIN + 14, "0")
            svg.text(MARGIN + (bc.frame_count - 1) * pitch, height - MARGIN + 14, str(bc.frame_count - 1))
    return svg.render()


@dataclass(frozen=True)
class Viewport:
    """Affine map from frame coordinates to the canvas (uniform scale, y kept downward)."""

    scale: float
    x0: float
    y0: float
    height: float

    @classmethod
    def fit(cls, points, width: float = CANVAS_WIDTH) -> "Viewport":
        if not points:
            return cls(1.0, 0.0, 0.0, width)
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-12)
        scale = (width - 2 * MARGIN) / span
        height = 2 * MARGIN + (max(ys) - min(ys)) * scale
        return cls(scale, min(xs), min(ys), height)

    def __call__(self, p) -> tuple[float, float]:
        return (MARGIN + (p[0] - self.x0) * self.scale, MARGIN + (p[1] - self.y0) * self.scale)


def _pts(coords) -> str:
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in coords)


def render_frame_overlay_svg(
    tri: Triangulation, nerves: list[VortexNerve], style: RenderStyle | None = None
) -> str:
    """Triangles, barycenters, vortex cycles (colored by ring) and filaments."""
    style = style or RenderStyle()
    vp = Viewport.fit(tri.points)
    svg = _Svg(CANVAS_WIDTH, vp.height)
    for t in tri.triangles:
        coords = [vp(tri.points[v]) for v in t.vertices]
        svg.add(f'<polygon class="triangle" data-id="{t.id}" points="{_pts(coords)}" fill="none" stroke="#999" stroke-width="1"/>')
    for t in tri.triangles:
        x, y = vp(barycenter(t, tri.points).location)
        svg.add(f'<circle class="barycenter" cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="#e6b800"/>')
    for vn in nerves:
        for cyc in vn.cycles:
            color = style.cycle_palette[cyc.ring_index % len(style.cycle_palette)]
            coords = [vp(p) for p in cyc.polygon]
            coords.append(coords[0])
            svg.add(
                f'<polyline class="cycle" data-ring="{cyc.ring_index}" points="{_pts(coords)}" '
                f'fill="none" stroke="{color}" stroke-width="2"/>'
            )
        for a, b in vn.filament_segments():
            (x1, y1), (x2, y2) = vp(a), vp(b)
            svg.add(
                f'<line class="filament" x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                f'stroke="#2ca02c" stroke-width="1.5"/>'
            )
        if style.show_labels:
            x, y = vp(vn.nucleus)
            svg.text(x, y - 6, f"nucleus {vn.mnc_nucleus}")
    return svg.render()
