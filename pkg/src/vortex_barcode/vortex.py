"""Barycentric vortex nerves built outward from a maximal nerve complex.

Ring 0 is the cycle through the barycenters of the nucleus star. Each further
ring takes every unused triangle touching a vertex of the previous ring's
triangles, orders their barycenters by angle about the nucleus, and is kept only
if its polygon strictly encloses the previous cycle. Consecutive rings are tied
together by filaments, one per inner-cycle vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import InvariantViolation, NerveTooSmall, RingOpen
from .geometry import (
    Barycenter,
    Point2,
    StarPolygon,
    Triangulation,
    barycenter,
    is_simple_polygon,
    polygon_contains,
)
from .nerve import AlexandroffNerve

DEFAULT_MAX_RINGS = 8


@dataclass(frozen=True)
class VortexCycle:
    ring_index: int
    vertices: tuple[Barycenter, ...]
    triangle_ids: frozenset[int]
    generator_label: str

    @property
    def polygon(self) -> list[Point2]:
        return [b.location for b in self.vertices]

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class Filament:
    ring_index: int  # ring of the outer endpoint
    inner_vertex: int
    outer_vertex: int
    generator_label: str


@dataclass
class VortexNerve:
    mnc_nucleus: int
    nucleus: Point2
    cycles: list[VortexCycle] = field(default_factory=list)
    filaments: list[Filament] = field(default_factory=list)

    @property
    def generators(self) -> list[str]:
        return [c.generator_label for c in self.cycles] + [f.generator_label for f in self.filaments]

    def used_triangles(self) -> set[int]:
        used: set[int] = set()
        for c in self.cycles:
            used |= c.triangle_ids
        return used

    def filament_segments(self) -> list[tuple[Point2, Point2]]:
        return [
            (
                self.cycles[f.ring_index - 1].vertices[f.inner_vertex].location,
                self.cycles[f.ring_index].vertices[f.outer_vertex].location,
            )
            for f in self.filaments
        ]


@dataclass(frozen=True)
class BettiResult:
    value: int
    per_ring_contributions: tuple[int, ...]
    nerve_ref: int


def _angular_order(bars: Iterable[Barycenter], pivot: Point2) -> tuple[Barycenter, ...]:
    def key(b: Barycenter):
        dx = b.location.x - pivot.x
        dy = b.location.y - pivot.y
        angle = math.atan2(dy, dx)
        if angle < 0:
            angle += 2 * math.pi
        return (angle, dx * dx + dy * dy, b.triangle_id)

    return tuple(sorted(bars, key=key))


def build_inner_cycle(nerve: AlexandroffNerve, tri: Triangulation) -> VortexCycle:
    """Cycle through the barycenters of the nucleus star, in angular order.

    Raises:
        NerveTooSmall: fewer than three triangles in the star.
        RingOpen: the nucleus is on the convex hull, or the barycenter polygon
            does not strictly enclose it.
    """
    if nerve.degree < 3:
        raise NerveTooSmall(f"nerve at vertex {nerve.nucleus} has degree {nerve.degree}")
    if nerve.on_hull or nerve.nucleus in tri.hull_vertices():
        raise RingOpen(f"nucleus {nerve.nucleus} lies on the convex hull")
    pivot = tri.points[nerve.nucleus]
    verts = _angular_order((barycenter(tri.triangles[t], tri.points) for t in nerve.triangle_ids), pivot)
    poly = [b.location for b in verts]
    if StarPolygon.try_build(poly, pivot) is not None:
        return VortexCycle(0, verts, frozenset(nerve.triangle_ids), "c0")
    if not is_simple_polygon(poly) or not polygon_contains(poly, pivot, check_simple=False):
        raise RingOpen(f"barycenter cycle around vertex {nerve.nucleus} does not enclose it")
    return VortexCycle(0, verts, frozenset(nerve.triangle_ids), "c0")


def expand_ring(vn: VortexNerve, tri: Triangulation) -> VortexCycle | None:
    """Next ring outward, or None when expansion stops."""
    current = vn.cycles[-1]
    used = vn.used_triangles()
    touched = {v for t in current.triangle_ids for v in tri.triangles[t].vertices}
    candidates = {t for v in touched for t in tri.vertex_stars[v]} - used
    if len(candidates) < 3:
        return None
    verts = _angular_order((barycenter(tri.triangles[t], tri.points) for t in candidates), vn.nucleus)
    poly = [b.location for b in verts]
    star = StarPolygon.try_build(poly, vn.nucleus)
    if star is not None:
        inside = star.contains
    elif is_simple_polygon(poly):
        inside = lambda q: polygon_contains(poly, q, check_simple=False)  # noqa: E731
    else:
        return None
    if not all(inside(b.location) for b in current.vertices):
        return None
    ring = current.ring_index + 1
    return VortexCycle(ring, verts, frozenset(candidates), f"c{ring}")


def attach_filaments(inner: VortexCycle, outer: VortexCycle, first_label: int = 1) -> list[Filament]:
    """Join each inner vertex to its nearest outer vertex (ties go to the lower index)."""
    out = []
    for i, b in enumerate(inner.vertices):
        best_j, best_d = -1, math.inf
        for j, o in enumerate(outer.vertices):
            d = (o.location.x - b.location.x) ** 2 + (o.location.y - b.location.y) ** 2
            if d < best_d:
                best_j, best_d = j, d
        out.append(Filament(outer.ring_index, i, best_j, f"e{first_label + i}"))
    return out


def build_vortex_nerve(
    nerve: AlexandroffNerve, tri: Triangulation, max_rings: int = DEFAULT_MAX_RINGS
) -> VortexNerve:
    if max_rings < 1:
        raise ValueError("max_rings must be >= 1")
    vn = VortexNerve(nerve.nucleus, tri.points[nerve.nucleus])
    vn.cycles.append(build_inner_cycle(nerve, tri))
    while len(vn.cycles) < max_rings:
        nxt = expand_ring(vn, tri)
        if nxt is None:
            break
        vn.filaments.extend(attach_filaments(vn.cycles[-1], nxt, first_label=len(vn.filaments) + 1))
        vn.cycles.append(nxt)
    return vn


def betti_number(vn: VortexNerve) -> BettiResult:
    """Generator count of the vortex nerve, cross-checked against the ring accumulation.

    The accumulation starts at 1 for the innermost cycle and adds the previous
    cycle's length plus one for every further ring.
    """
    generators = len(vn.cycles) + len(vn.filaments)
    contributions = [1] + [len(vn.cycles[j - 1]) + 1 for j in range(1, len(vn.cycles))]
    if sum(contributions) != generators:
        raise InvariantViolation(
            f"nerve {vn.mnc_nucleus}: {generators} generators but accumulation gives {sum(contributions)}"
        )
    return BettiResult(generators, tuple(contributions), vn.mnc_nucleus)


Step = Union[str, tuple[str, int]]


def _parse_step(step: Step) -> tuple[str, int]:
    if isinstance(step, str):
        if step.startswith("-"):
            return step[1:], -1
        return step.lstrip("+"), 1
    label, sign = step
    if sign not in (1, -1):
        raise ValueError(f"step sign must be +1 or -1, got {sign}")
    return label, sign


def reduce_path_word(vn: VortexNerve, word: Sequence[Step]) -> dict[str, int]:
    """Normal form of a traversal word over the nerve's generators.

    Cycle coefficients add modulo 2. A filament traversed in both directions the
    same number of times cancels; otherwise repeated traversal collapses to one.
    Returns the generators with coefficient 1, in generator order.
    """
    cycles = {c.generator_label for c in vn.cycles}
    filaments = {f.generator_label for f in vn.filaments}
    net: dict[str, int] = {}
    for step in word:
        label, sign = _parse_step(step)
        if label not in cycles and label not in filaments:
            raise KeyError(f"unknown generator {label!r}")
        net[label] = net.get(label, 0) + sign
    out = {}
    for label in vn.generators:
        if label not in net:
            continue
        coeff = net[label] % 2 if label in cycles else int(net[label] != 0)
        if coeff:
            out[label] = 1
    return out
