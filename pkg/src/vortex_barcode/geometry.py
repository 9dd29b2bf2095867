"""Delaunay triangulation of centroid sets and the predicates behind it.

The triangulator is incremental Bowyer-Watson with ghost triangles standing in
for the unbounded exterior, so no super-triangle is needed and the hull comes
out exact. Orientation and in-circle tests use a floating-point filter with a
proven error bound and fall back to exact rational arithmetic when the filter
cannot certify the sign.

Cavity search is a linear scan over the live triangles, which is the classic
formulation and makes triangulation quadratic in the number of points.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from scipy.spatial import cKDTree

from .errors import FrameDegenerate, PolygonNotSimple, PredicateError

GHOST = -1
DUPLICATE_TOLERANCE = 1e-9

_EPS = 2.0**-53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_ERRBOUND = (10.0 + 96.0 * _EPS) * _EPS

# Circumcircle filter: triangles whose aspect (longest edge^2 / |2*area|)
# exceeds this go straight to the robust predicate.
_SLIVER_RATIO = 1e6
_CIRCLE_MARGIN = 1e-6


class Point2(NamedTuple):
    x: float
    y: float


class Triangle(NamedTuple):
    v0: int
    v1: int
    v2: int
    id: int

    @property
    def vertices(self) -> tuple[int, int, int]:
        return (self.v0, self.v1, self.v2)


class CirclePosition(enum.Enum):
    INSIDE = "inside"
    ON = "on"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Barycenter:
    location: Point2
    triangle_id: int


@dataclass
class Triangulation:
    points: list[Point2]
    triangles: list[Triangle]
    vertex_stars: list[list[int]] = field(default_factory=list)
    edge_adjacency: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    _hull: set[int] | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.vertex_stars:
            self.vertex_stars = [[] for _ in self.points]
            for t in self.triangles:
                for v in t.vertices:
                    self.vertex_stars[v].append(t.id)
        if not self.edge_adjacency:
            for t in self.triangles:
                a, b, c = t.vertices
                for u, v in ((a, b), (b, c), (c, a)):
                    self.edge_adjacency.setdefault(_edge_key(u, v), []).append(t.id)

    def hull_edges(self) -> list[tuple[int, int]]:
        return sorted(e for e, ts in self.edge_adjacency.items() if len(ts) == 1)

    def hull_vertices(self) -> set[int]:
        if self._hull is None:
            self._hull = {v for e, ts in self.edge_adjacency.items() if len(ts) == 1 for v in e}
        return self._hull

    def triangle_points(self, tid: int) -> tuple[Point2, Point2, Point2]:
        t = self.triangles[tid]
        return (self.points[t.v0], self.points[t.v1], self.points[t.v2])


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------------------
# Predicates


def _orient_exact(a, b, c) -> int:
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (*a, *b, *c))
    det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    return (det > 0) - (det < 0)


def orientation(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> int:
    """Sign of the signed area of (a, b, c): +1 counterclockwise, -1 clockwise, 0 collinear."""
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    if abs(det) > _CCW_ERRBOUND * (abs(detleft) + abs(detright)):
        return 1 if det > 0 else -1
    return _orient_exact(a, b, c)


def _incircle_exact(a, b, c, d) -> int:
    ax, ay, bx, by, cx, cy, dx, dy = (Fraction(v) for v in (*a, *b, *c, *d))
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    det = (
        (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
        + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
    )
    return (det > 0) - (det < 0)


def incircle_sign(a, b, c, d) -> int:
    """+1 if d is inside the circle through counterclockwise a, b, c; 0 on it; -1 outside."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    if abs(det) > _ICC_ERRBOUND * permanent:
        return 1 if det > 0 else -1
    return _incircle_exact(a, b, c, d)


def in_circle(a: Point2, b: Point2, c: Point2, d: Point2) -> CirclePosition:
    """Locate d relative to the circumcircle of triangle abc (any orientation)."""
    o = orientation(a, b, c)
    if o == 0:
        raise PredicateError(f"collinear triangle {a}, {b}, {c}")
    s = incircle_sign(a, b, c, d) * o
    if s > 0:
        return CirclePosition.INSIDE
    if s < 0:
        return CirclePosition.OUTSIDE
    return CirclePosition.ON


def _on_segment(p, a, b) -> bool:
    """p collinear with ab assumed; True if p lies on the closed segment."""
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _segments_intersect(p1, p2, q1, q2) -> bool:
    d1 = orientation(q1, q2, p1)
    d2 = orientation(q1, q2, p2)
    d3 = orientation(p1, p2, q1)
    d4 = orientation(p1, p2, q2)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        (d1 == 0 and _on_segment(p1, q1, q2))
        or (d2 == 0 and _on_segment(p2, q1, q2))
        or (d3 == 0 and _on_segment(q1, p1, p2))
        or (d4 == 0 and _on_segment(q2, p1, p2))
    )


def is_simple_polygon(poly: Sequence[Sequence[float]]) -> bool:
    n = len(poly)
    if n < 3:
        return False
    if len({(p[0], p[1]) for p in poly}) != n:
        return False
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = poly[j], poly[(j + 1) % n]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges share one vertex; reject a collinear fold-back
                if j == i + 1:
                    prev, shared, nxt = a, b, d
                else:
                    prev, shared, nxt = c, a, b
                if orientation(prev, shared, nxt) == 0 and (
                    _on_segment(nxt, prev, shared) or _on_segment(prev, shared, nxt)
                ):
                    return False
                continue
            if _segments_intersect(a, b, c, d):
                return False
    return True


def polygon_contains(poly: Sequence[Sequence[float]], q: Sequence[float], *, check_simple: bool = True) -> bool:
    """Strict point-in-polygon test; points on the boundary are outside."""
    if len(poly) < 3:
        raise PolygonNotSimple("polygon needs at least 3 vertices")
    if check_simple and not is_simple_polygon(poly):
        raise PolygonNotSimple("polygon is self-intersecting")
    n = len(poly)
    inside = False
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if orientation(a, b, q) == 0 and _on_segment(q, a, b):
            return False
        if (a[1] > q[1]) != (b[1] > q[1]):
            # edge straddles the horizontal through q; count crossings to its right
            o = orientation(a, b, q)
            if (b[1] > a[1]) == (o > 0):
                inside = not inside
    return inside


class StarPolygon:
    """Polygon whose vertices wind once around ``pivot`` in increasing angle,
    with the pivot strictly left of every edge. Such a polygon is simple, and
    containment reduces to locating the angular wedge of the query point.
    """

    def __init__(self, poly: Sequence[Sequence[float]], pivot: Sequence[float]):
        self.poly = [(float(p[0]), float(p[1])) for p in poly]
        self.pivot = (float(pivot[0]), float(pivot[1]))
        self.angles = [_angle_about(self.pivot, p) for p in self.poly]

    @classmethod
    def try_build(cls, poly, pivot) -> "StarPolygon | None":
        n = len(poly)
        if n < 3:
            return None
        for i in range(n):
            if orientation(poly[i], poly[(i + 1) % n], pivot) <= 0:
                return None
        star = cls(poly, pivot)
        a = star.angles
        if any(a[i] >= a[i + 1] for i in range(n - 1)):
            return None
        # each edge turns by less than pi, so one full turn means a single winding
        return star

    def contains(self, q: Sequence[float]) -> bool:
        """Strict containment; boundary points are outside."""
        p = self.pivot
        if q[0] == p[0] and q[1] == p[1]:
            return True
        n = len(self.poly)
        guess = bisect.bisect_right(self.angles, _angle_about(p, q)) - 1
        for i in (guess % n, (guess - 1) % n, (guess + 1) % n):
            a, b = self.poly[i], self.poly[(i + 1) % n]
            if orientation(p, a, q) >= 0 and orientation(p, b, q) < 0:
                return orientation(a, b, q) > 0
        return polygon_contains(self.poly, q, check_simple=False)


def _angle_about(pivot, p) -> float:
    ang = math.atan2(p[1] - pivot[1], p[0] - pivot[0])
    return ang + 2 * math.pi if ang < 0 else ang


# ---------------------------------------------------------------------------
# Triangulation


def barycenter(tri: Triangle, points: Sequence[Point2]) -> Barycenter:
    a, b, c = points[tri.v0], points[tri.v1], points[tri.v2]
    return Barycenter(Point2((a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0), tri.id)


def merge_duplicates(points: Sequence[Sequence[float]], tol: float = DUPLICATE_TOLERANCE) -> list[Point2]:
    """Drop points closer than ``tol`` to an earlier point, keeping first occurrences."""
    pts = [Point2(float(p[0]), float(p[1])) for p in points]
    for p in pts:
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise ValueError(f"non-finite point {p}")
    if len(pts) < 2:
        return pts
    drop = set()
    for i, j in sorted(cKDTree(pts).query_pairs(tol)):
        if i not in drop:
            drop.add(j)
    return [p for k, p in enumerate(pts) if k not in drop]


class _Builder:
    """Mutable Bowyer-Watson state. Triangles are CCW triples; ghosts end in GHOST."""

    def __init__(self, pts: list[Point2]):
        self.pts = pts
        self.real: dict[int, tuple[int, int, int]] = {}
        self.circles: dict[int, tuple[float, float, float, bool]] = {}
        self.ghosts: dict[int, tuple[int, int]] = {}
        self._next = 0

    def _add(self, a: int, b: int, c: int) -> None:
        tid = self._next
        self._next += 1
        if c == GHOST:
            self.ghosts[tid] = (a, b)
            return
        self.real[tid] = (a, b, c)
        pa, pb, pc = self.pts[a], self.pts[b], self.pts[c]
        bx, by = pb[0] - pa[0], pb[1] - pa[1]
        cx, cy = pc[0] - pa[0], pc[1] - pa[1]
        d = 2.0 * (bx * cy - by * cx)
        b2 = bx * bx + by * by
        c2 = cx * cx + cy * cy
        ex, ey = pb[0] - pc[0], pb[1] - pc[1]
        longest = b2 if b2 > c2 else c2
        e2 = ex * ex + ey * ey
        if e2 > longest:
            longest = e2
        if d == 0.0 or longest > _SLIVER_RATIO * abs(d):
            self.circles[tid] = (0.0, 0.0, 0.0, False)
            return
        ux = (cy * b2 - by * c2) / d
        uy = (bx * c2 - cx * b2) / d
        self.circles[tid] = (pa[0] + ux, pa[1] + uy, ux * ux + uy * uy, True)

    def seed(self, i: int, j: int, k: int) -> None:
        if orientation(self.pts[i], self.pts[j], self.pts[k]) < 0:
            j, k = k, j
        self._add(i, j, k)
        # ghost (u, v) lies across real edge v->u
        self._add(j, i, GHOST)
        self._add(k, j, GHOST)
        self._add(i, k, GHOST)

    def insert(self, pi: int) -> None:
        p = self.pts[pi]
        px, py = p
        pts = self.pts
        cavity_real = []
        for tid, (cx, cy, r2, reliable) in self.circles.items():
            dx = px - cx
            dy = py - cy
            d = dx * dx + dy * dy - r2
            if reliable:
                margin = _CIRCLE_MARGIN * r2
                if d > margin:
                    continue
                if d < -margin:
                    cavity_real.append(tid)
                    continue
            a, b, c = self.real[tid]
            if incircle_sign(pts[a], pts[b], pts[c], p) > 0:
                cavity_real.append(tid)
        cavity_ghost = []
        for tid, (a, b) in self.ghosts.items():
            pa, pb = pts[a], pts[b]
            detleft = (pa[0] - px) * (pb[1] - py)
            detright = (pa[1] - py) * (pb[0] - px)
            det = detleft - detright
            if abs(det) > _CCW_ERRBOUND * (abs(detleft) + abs(detright)):
                if det > 0:
                    cavity_ghost.append(tid)
                continue
            o = _orient_exact(pa, pb, p)
            if o > 0 or (o == 0 and _on_segment(p, pa, pb)):
                cavity_ghost.append(tid)

        directed: set[tuple[int, int]] = set()
        for tid in cavity_real:
            a, b, c = self.real.pop(tid)
            del self.circles[tid]
            directed.update(((a, b), (b, c), (c, a)))
        for tid in cavity_ghost:
            a, b = self.ghosts.pop(tid)
            directed.update(((a, b), (b, GHOST), (GHOST, a)))
        for u, v in directed:
            if (v, u) in directed:
                continue
            if v == GHOST:
                self._add(pi, u, GHOST)
            elif u == GHOST:
                self._add(v, pi, GHOST)
            else:
                self._add(u, v, pi)


def _flip_cocircular(pts: list[Point2], tris: list[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    """Flip cocircular diagonals toward the one whose lower endpoint index is smaller.

    Each flip replaces an edge with a lexicographically smaller one, so the
    sorted edge multiset strictly decreases and the loop terminates.
    """
    tris = list(tris)
    changed = True
    while changed:
        changed = False
        owner: dict[tuple[int, int], int] = {}
        for idx, (a, b, c) in enumerate(tris):
            owner[(a, b)] = idx
            owner[(b, c)] = idx
            owner[(c, a)] = idx
        for (a, b), i in owner.items():
            if a > b or (b, a) not in owner:
                continue
            j = owner[(b, a)]
            c = _third(tris[i], a, b)
            d = _third(tris[j], b, a)
            if _edge_key(c, d) >= _edge_key(a, b):
                continue
            if incircle_sign(pts[a], pts[b], pts[c], pts[d]) != 0:
                continue
            tris[i] = (a, d, c)
            tris[j] = (d, b, c)
            changed = True
            break
    return tris


def _third(t: tuple[int, int, int], u: int, v: int) -> int:
    for w in t:
        if w != u and w != v:
            return w
    raise AssertionError("degenerate triangle")


def _canonical(t: tuple[int, int, int]) -> tuple[int, int, int]:
    a, b, c = t
    if b < a and b < c:
        return (b, c, a)
    if c < a and c < b:
        return (c, a, b)
    return (a, b, c)


def delaunay_triangulate(points: Sequence[Sequence[float]]) -> Triangulation:
    """Delaunay-triangulate ``points`` after merging near-duplicates.

    Vertex indices in the result refer to ``Triangulation.points`` (the merged
    list). Output is deterministic for a given input order.

    Raises:
        FrameDegenerate: fewer than three distinct points, or all collinear.
    """
    pts = merge_duplicates(points)
    if len(pts) < 3:
        raise FrameDegenerate(f"need at least 3 distinct points, got {len(pts)}")
    k = next((k for k in range(2, len(pts)) if orientation(pts[0], pts[1], pts[k]) != 0), None)
    if k is None:
        raise FrameDegenerate("all points are collinear")

    builder = _Builder(pts)
    builder.seed(0, 1, k)
    for i in range(2, len(pts)):
        if i != k:
            builder.insert(i)

    tris = _flip_cocircular(pts, sorted(builder.real.values()))
    ordered = sorted(_canonical(t) for t in tris)
    triangles = [Triangle(a, b, c, tid) for tid, (a, b, c) in enumerate(ordered)]
    return Triangulation(points=pts, triangles=triangles)
