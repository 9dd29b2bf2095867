"""Alexandroff nerves (vertex stars) and maximal nerve complexes."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NerveError
from .geometry import Triangulation


@dataclass(frozen=True)
class AlexandroffNerve:
    nucleus: int
    triangle_ids: tuple[int, ...]
    on_hull: bool = False

    @property
    def degree(self) -> int:
        return len(self.triangle_ids)


@dataclass(frozen=True)
class MncSelection:
    nerves: tuple[AlexandroffNerve, ...]
    max_degree: int

    def __len__(self) -> int:
        return len(self.nerves)

    def __iter__(self):
        return iter(self.nerves)


def vertex_star(tri: Triangulation, v: int) -> AlexandroffNerve:
    """All triangles incident to vertex ``v``."""
    if not 0 <= v < len(tri.points):
        raise IndexError(f"vertex {v} out of range 0..{len(tri.points) - 1}")
    return AlexandroffNerve(
        nucleus=v,
        triangle_ids=tuple(sorted(tri.vertex_stars[v])),
        on_hull=v in tri.hull_vertices(),
    )


def maximal_nerves(tri: Triangulation) -> MncSelection:
    """Every vertex star of maximal degree, in ascending nucleus order."""
    if not tri.triangles:
        raise NerveError("triangulation has no triangles")
    degrees = [len(star) for star in tri.vertex_stars]
    best = max(degrees)
    hull = tri.hull_vertices()
    nerves = tuple(
        AlexandroffNerve(v, tuple(sorted(tri.vertex_stars[v])), v in hull)
        for v, d in enumerate(degrees)
        if d == best
    )
    return MncSelection(nerves=nerves, max_degree=best)
