"""2D rate-space set machinery.

Half-plane systems are reduced to convex polygons by successive clipping; a
region (a union of such polygons) is carried either exactly, as a list of
counterclockwise convex polygons, or rasterized on a square boolean grid over
[0, rmax]^2 with cell-center membership semantics.

Exact areas of unions and intersections are computed by a vertical slab
sweep: cutting at every vertex and every pairwise edge crossing makes each
polygon's cross-section linear inside a slab, so the midpoint rule is exact.

Numerical policy: half-planes are normalized to unit normals, clip vertices
are solved from the original supporting lines (not from chained segment
interpolation), vertices are deduplicated at 1e-9 and polygons below 1e-12
area count as empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import (
    EmptyRegionError,
    InvalidArgumentError,
    OutOfWindowError,
    UnboundedRegionError,
)

__all__ = [
    "RatePair",
    "HalfPlane",
    "ConvexSlice",
    "Frontier",
    "RasterRegion",
    "ExactRegion",
    "Region",
    "slice_to_polygon",
    "union_accumulate",
    "pareto_frontier",
    "region_distance",
    "RegionDistance",
    "polygon_area",
    "point_in_convex_polygon",
    "clip_polygon",
    "union_area",
    "intersection_area",
    "convex_hull",
    "canonical_vertices",
]

_SEED_BOX = 1e9
_UNBOUNDED_LIMIT = 1e8
_INSIDE_TOL = 1e-12
_VERTEX_DEDUP = 1e-9
_MIN_AREA = 1e-12

Point = tuple[float, float]
Polygon = list[Point]


class RatePair(NamedTuple):
    """A nonnegative rate pair in bits per channel use."""

    r1: float
    r2: float


@dataclass(frozen=True)
class HalfPlane:
    """One linear inequality c1*R1 + c2*R2 (<=|>=) rhs, with a provenance tag."""

    c1: float
    c2: float
    rhs: float
    sense: str = "<="
    tag: str = ""

    def __post_init__(self):
        for name in ("c1", "c2", "rhs"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgumentError(f"half-plane {name} must be finite")
        if self.c1 == 0.0 and self.c2 == 0.0:
            raise InvalidArgumentError("half-plane normal must be nonzero")
        if self.sense not in ("<=", ">="):
            raise InvalidArgumentError(f"sense must be '<=' or '>=', got {self.sense!r}")

    def normalized(self) -> tuple[float, float, float]:
        """Unit-normal (a, b, c) form of the half-plane as a*x + b*y <= c."""
        a, b, c = self.c1, self.c2, self.rhs
        if self.sense == ">=":
            a, b, c = -a, -b, -c
        scale = math.hypot(a, b)
        return a / scale, b / scale, c / scale

    def satisfied_by(self, x: float, y: float, tol: float = _INSIDE_TOL) -> bool:
        a, b, c = self.normalized()
        return a * x + b * y <= c + tol


@dataclass(frozen=True)
class ConvexSlice:
    """A conjunction of half-planes generated at one sweep point.

    Built by the condition assembler, which guarantees the nonnegativity
    planes are present and the feasible set is bounded; arbitrary systems are
    accepted for generic clipping (boundedness is then checked at clip time).
    """

    planes: tuple[HalfPlane, ...]
    rho: float = 0.0
    mu_1: float = 0.0
    mu_2: float = 0.0

    def __init__(self, planes: Iterable[HalfPlane], rho=0.0, mu_1=0.0, mu_2=0.0):
        object.__setattr__(self, "planes", tuple(planes))
        object.__setattr__(self, "rho", float(rho))
        object.__setattr__(self, "mu_1", float(mu_1))
        object.__setattr__(self, "mu_2", float(mu_2))
        if not self.planes:
            raise InvalidArgumentError("a slice needs at least one half-plane")


@dataclass(frozen=True)
class Frontier:
    """Pareto-maximal points of a region, sorted by r1 ascending.

    Strictly decreasing in r2, so no point dominates another.
    """

    points: tuple[RatePair, ...]

    def __init__(self, points: Iterable[RatePair]):
        pts = tuple(RatePair(float(x), float(y)) for x, y in points)
        if not pts:
            raise EmptyRegionError("a frontier needs at least one point")
        for k in range(1, len(pts)):
            if not (pts[k].r1 > pts[k - 1].r1 and pts[k].r2 < pts[k - 1].r2):
                raise InvalidArgumentError(
                    "frontier points must be strictly increasing in r1 and "
                    f"strictly decreasing in r2, got {pts[k - 1]} then {pts[k]}"
                )
        object.__setattr__(self, "points", pts)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float)


# ---------------------------------------------------------------------------
# Polygon primitives
# ---------------------------------------------------------------------------


def polygon_area(poly: Sequence[Point]) -> float:
    """Signed shoelace area; positive for counterclockwise orientation."""
    n = len(poly)
    if n < 3:
        return 0.0
    acc = 0.0
    for k in range(n):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % n]
        acc += x0 * y1 - x1 * y0
    return 0.5 * acc


def _ensure_ccw(poly: Sequence[Point]) -> Polygon:
    pts = [(float(x), float(y)) for x, y in poly]
    if polygon_area(pts) < 0.0:
        pts.reverse()
    return pts


def _dedupe(poly: Sequence[Point], tol: float = _VERTEX_DEDUP) -> Polygon:
    out: Polygon = []
    for pt in poly:
        if not out or math.hypot(pt[0] - out[-1][0], pt[1] - out[-1][1]) > tol:
            out.append(pt)
    if len(out) > 1 and math.hypot(out[0][0] - out[-1][0], out[0][1] - out[-1][1]) <= tol:
        out.pop()
    return out


def canonical_vertices(poly: Sequence[Point], tol: float = _VERTEX_DEDUP) -> Polygon:
    """Deduplicated vertices in a canonical order, for set-style comparisons."""
    pts = _dedupe(poly, tol)
    if not pts:
        return []
    start = min(range(len(pts)), key=lambda k: (pts[k][0], pts[k][1]))
    return pts[start:] + pts[:start]


def point_in_convex_polygon(x: float, y: float, poly: Sequence[Point], tol: float = 1e-12) -> bool:
    """Boundary-inclusive membership in a counterclockwise convex polygon."""
    n = len(poly)
    if n < 3:
        return False
    for k in range(n):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % n]
        dx, dy = x1 - x0, y1 - y0
        scale = math.hypot(dx, dy)
        if scale == 0.0:
            continue
        if (dx * (y - y0) - dy * (x - x0)) / scale < -tol:
            return False
    return True


def _edge_lines(poly: Sequence[Point]) -> list[tuple[float, float, float]]:
    """Unit-normal (a, b, c) lines of a CCW polygon's edges, interior a*x+b*y <= c."""
    lines = []
    n = len(poly)
    for k in range(n):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % n]
        dx, dy = x1 - x0, y1 - y0
        scale = math.hypot(dx, dy)
        if scale == 0.0:
            continue
        a, b = dy / scale, -dx / scale
        lines.append((a, b, a * x0 + b * y0))
    return lines


def _line_intersection(l1: tuple[float, float, float], l2: tuple[float, float, float]) -> Optional[Point]:
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    det = a1 * b2 - a2 * b1
    if abs(det) < 1e-14:
        return None
    return ((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det)


def _clip_tagged(
    verts: Polygon,
    lines: list[tuple[float, float, float]],
    clip: tuple[float, float, float],
) -> tuple[Polygon, list[tuple[float, float, float]]]:
    """One Sutherland-Hodgman pass keeping each edge's supporting line.

    New vertices are solved from the original lines, so precision does not
    degrade even when the working polygon still contains far-away seed-box
    corners.
    """
    a, b, c = clip
    n = len(verts)
    out_v: Polygon = []
    out_l: list[tuple[float, float, float]] = []
    sides = [a * x + b * y - c for x, y in verts]
    for k in range(n):
        cur, nxt = verts[k], verts[(k + 1) % n]
        s_cur, s_nxt = sides[k], sides[(k + 1) % n]
        line_k = lines[k]
        if s_cur <= _INSIDE_TOL:
            out_v.append(cur)
            out_l.append(line_k)
            if s_nxt > _INSIDE_TOL:
                cross = _line_intersection(line_k, clip)
                if cross is None:
                    t = s_cur / (s_cur - s_nxt)
                    cross = (cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1]))
                out_v.append(cross)
                out_l.append(clip)
        elif s_nxt <= _INSIDE_TOL:
            cross = _line_intersection(line_k, clip)
            if cross is None:
                t = s_cur / (s_cur - s_nxt)
                cross = (cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1]))
            out_v.append(cross)
            out_l.append(line_k)
    return out_v, out_l


def _clip_system(planes: Sequence[tuple[float, float, float]]) -> Optional[Polygon]:
    """Intersect normalized half-planes, seeded from a huge box.

    Returns the CCW polygon, None when (effectively) empty, and raises when
    the true feasible set escapes the seed box.
    """
    big = _SEED_BOX
    verts: Polygon = [(-big, -big), (big, -big), (big, big), (-big, big)]
    lines = [(0.0, -1.0, big), (1.0, 0.0, big), (0.0, 1.0, big), (-1.0, 0.0, big)]
    for clip in planes:
        verts, lines = _clip_tagged(verts, lines, clip)
        if len(verts) < 3:
            return None
    if any(abs(x) > _UNBOUNDED_LIMIT or abs(y) > _UNBOUNDED_LIMIT for x, y in verts):
        raise UnboundedRegionError(
            "half-plane system has an unbounded feasible set "
            f"(vertices escape |coord| <= {_UNBOUNDED_LIMIT:g})"
        )
    verts = _dedupe(verts)
    if len(verts) < 3 or polygon_area(verts) <= _MIN_AREA:
        return None
    return verts


def slice_to_polygon(s: Union[ConvexSlice, Sequence[HalfPlane]]) -> Optional[list[RatePair]]:
    """Intersection polygon of a half-plane system, or None when empty.

    Degenerate (below-tolerance-area) intersections count as empty; an
    unbounded feasible set raises :class:`UnboundedRegionError`.
    """
    planes = s.planes if isinstance(s, ConvexSlice) else tuple(s)
    poly = _clip_system([hp.normalized() for hp in planes])
    if poly is None:
        return None
    return [RatePair(x, y) for x, y in poly]


def clip_polygon(poly: Sequence[Point], planes: Sequence[HalfPlane]) -> Optional[Polygon]:
    """Clip a convex CCW polygon by half-planes; None when emptied."""
    verts = _ensure_ccw(poly)
    lines = _edge_lines(verts)
    for hp in planes:
        verts, lines = _clip_tagged(verts, lines, hp.normalized())
        if len(verts) < 3:
            return None
    verts = _dedupe(verts)
    if len(verts) < 3 or polygon_area(verts) <= _MIN_AREA:
        return None
    return verts


def convex_hull(points: Sequence[Point]) -> Polygon:
    """Monotone-chain convex hull, CCW."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return list(pts)

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and (
                (out[-1][0] - out[-2][0]) * (p[1] - out[-2][1])
                - (out[-1][1] - out[-2][1]) * (p[0] - out[-2][0])
            ) <= 0.0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


# ---------------------------------------------------------------------------
# Exact union / intersection areas (vertical slab sweep)
# ---------------------------------------------------------------------------


def _gather_edges(polys: Sequence[Sequence[Point]]) -> list[tuple[Point, Point]]:
    edges = []
    for poly in polys:
        n = len(poly)
        for k in range(n):
            edges.append((poly[k], poly[(k + 1) % n]))
    return edges


def _event_xs(polys_all: Sequence[Sequence[Point]]) -> list[float]:
    xs = []
    for poly in polys_all:
        xs.extend(p[0] for p in poly)
    edges = _gather_edges(polys_all)
    for a in range(len(edges)):
        (p1, q1) = edges[a]
        for bidx in range(a + 1, len(edges)):
            (p2, q2) = edges[bidx]
            d1 = (q1[0] - p1[0], q1[1] - p1[1])
            d2 = (q2[0] - p2[0], q2[1] - p2[1])
            det = d1[0] * d2[1] - d1[1] * d2[0]
            if abs(det) < 1e-15:
                continue
            t = ((p2[0] - p1[0]) * d2[1] - (p2[1] - p1[1]) * d2[0]) / det
            u = ((p2[0] - p1[0]) * d1[1] - (p2[1] - p1[1]) * d1[0]) / det
            if -1e-12 <= t <= 1.0 + 1e-12 and -1e-12 <= u <= 1.0 + 1e-12:
                xs.append(p1[0] + t * d1[0])
    xs.sort()
    out = []
    for x in xs:
        if not out or x - out[-1] > 1e-12:
            out.append(x)
    return out


def _cross_section(poly: Sequence[Point], x: float) -> Optional[tuple[float, float]]:
    """y-interval of a convex polygon at abscissa x (x never at a vertex)."""
    ys = []
    n = len(poly)
    for k in range(n):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % n]
        if (x0 - x) * (x1 - x) < 0.0:
            ys.append(y0 + (x - x0) * (y1 - y0) / (x1 - x0))
    if len(ys) < 2:
        return None
    return (min(ys), max(ys))


def _merge_intervals(intervals: list[tuple[float, float]]) -> list[tuple[float, float]]:
    if not intervals:
        return []
    intervals.sort()
    merged = [intervals[0]]
    for lo, hi in intervals[1:]:
        if lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def _measure(intervals: list[tuple[float, float]]) -> float:
    return sum(hi - lo for lo, hi in intervals)


def _intersect_interval_lists(
    a: list[tuple[float, float]], b: list[tuple[float, float]]
) -> float:
    total = 0.0
    ia = ib = 0
    while ia < len(a) and ib < len(b):
        lo = max(a[ia][0], b[ib][0])
        hi = min(a[ia][1], b[ib][1])
        if hi > lo:
            total += hi - lo
        if a[ia][1] < b[ib][1]:
            ia += 1
        else:
            ib += 1
    return total


def union_area(polys: Sequence[Sequence[Point]]) -> float:
    """Exact area of the union of convex polygons."""
    polys = [p for p in polys if len(p) >= 3]
    if not polys:
        return 0.0
    events = _event_xs(polys)
    total = 0.0
    for k in range(len(events) - 1):
        width = events[k + 1] - events[k]
        if width <= 1e-12:
            continue
        xm = 0.5 * (events[k] + events[k + 1])
        intervals = []
        for poly in polys:
            sec = _cross_section(poly, xm)
            if sec is not None and sec[1] > sec[0]:
                intervals.append(sec)
        total += width * _measure(_merge_intervals(intervals))
    return total


def intersection_area(
    polys_a: Sequence[Sequence[Point]], polys_b: Sequence[Sequence[Point]]
) -> float:
    """Exact area of (union of A) intersected with (union of B)."""
    polys_a = [p for p in polys_a if len(p) >= 3]
    polys_b = [p for p in polys_b if len(p) >= 3]
    if not polys_a or not polys_b:
        return 0.0
    events = _event_xs(list(polys_a) + list(polys_b))
    total = 0.0
    for k in range(len(events) - 1):
        width = events[k + 1] - events[k]
        if width <= 1e-12:
            continue
        xm = 0.5 * (events[k] + events[k + 1])
        ia = [s for s in (_cross_section(p, xm) for p in polys_a) if s and s[1] > s[0]]
        ib = [s for s in (_cross_section(p, xm) for p in polys_b) if s and s[1] > s[0]]
        total += width * _intersect_interval_lists(_merge_intervals(ia), _merge_intervals(ib))
    return total


# ---------------------------------------------------------------------------
# Region representations
# ---------------------------------------------------------------------------


class RasterRegion:
    """Boolean occupancy grid over [0, rmax]^2.

    ``grid[ix, iy]`` covers the cell whose center is ((ix+0.5)h, (iy+0.5)h)
    with h = rmax/n; membership everywhere is decided at cell centers.
    """

    def __init__(self, n: int, rmax: float, grid: Optional[np.ndarray] = None):
        if n < 1:
            raise InvalidArgumentError(f"raster resolution must be >= 1, got {n}")
        if not math.isfinite(rmax) or rmax <= 0.0:
            raise InvalidArgumentError(f"rmax must be finite and > 0, got {rmax!r}")
        self.n = int(n)
        self.rmax = float(rmax)
        if grid is None:
            grid = np.zeros((self.n, self.n), dtype=bool)
        if grid.shape != (self.n, self.n) or grid.dtype != np.bool_:
            raise InvalidArgumentError("grid must be a boolean (n, n) array")
        self.grid = grid

    @property
    def cell(self) -> float:
        return self.rmax / self.n

    def copy(self) -> "RasterRegion":
        return RasterRegion(self.n, self.rmax, self.grid.copy())

    def is_empty(self) -> bool:
        return not bool(self.grid.any())

    def area(self) -> float:
        return float(self.grid.sum()) * self.cell * self.cell

    def centers(self) -> np.ndarray:
        return (np.arange(self.n) + 0.5) * self.cell

    def contains(self, x: float, y: float) -> bool:
        h = self.cell
        ix = int(math.floor(x / h))
        iy = int(math.floor(y / h))
        if not (0 <= ix < self.n and 0 <= iy < self.n):
            return False
        return bool(self.grid[ix, iy])

    def same_window(self, other: "RasterRegion") -> bool:
        return self.n == other.n and self.rmax == other.rmax

    def xor_cells(self, other: "RasterRegion") -> int:
        if not self.same_window(other):
            raise InvalidArgumentError("raster windows differ (n or rmax mismatch)")
        return int(np.count_nonzero(self.grid ^ other.grid))

    def union_with(self, other: "RasterRegion") -> "RasterRegion":
        if not self.same_window(other):
            raise InvalidArgumentError("raster windows differ (n or rmax mismatch)")
        self.grid |= other.grid
        return self

    def fill_convex_polygon(self, poly: Sequence[Point], check_window: bool = True) -> None:
        """Mark every cell whose center lies in the convex polygon."""
        verts = _ensure_ccw(poly)
        if len(verts) < 3:
            return
        xs = [p[0] for p in verts]
        ys = [p[1] for p in verts]
        if check_window and (
            min(xs) < -1e-9 or min(ys) < -1e-9
            or max(xs) > self.rmax + 1e-9 or max(ys) > self.rmax + 1e-9
        ):
            raise OutOfWindowError(
                f"polygon bbox exceeds the raster window [0, {self.rmax:g}]^2; enlarge rmax"
            )
        h = self.cell
        k0 = max(0, int(math.floor(min(xs) / h - 0.5)))
        k1 = min(self.n - 1, int(math.ceil(max(xs) / h - 0.5)))
        m0 = max(0, int(math.floor(min(ys) / h - 0.5)))
        m1 = min(self.n - 1, int(math.ceil(max(ys) / h - 0.5)))
        if k0 > k1 or m0 > m1:
            return
        cx = (np.arange(k0, k1 + 1) + 0.5) * h
        cy = (np.arange(m0, m1 + 1) + 0.5) * h
        inside = np.ones((k1 - k0 + 1, m1 - m0 + 1), dtype=bool)
        for a, b, c in _edge_lines(verts):
            inside &= a * cx[:, None] + b * cy[None, :] <= c + _INSIDE_TOL
        self.grid[k0 : k1 + 1, m0 : m1 + 1] |= inside

    def fill_box_diag(
        self, lo1: float, hi1: float, lo2: float, hi2: float, diag: float
    ) -> None:
        """Fill the cells of {lo1<=x<=hi1, lo2<=y<=hi2, x+y<=diag} (center test).

        Fast path for the axis-plus-sum systems the condition builder emits;
        bounds are silently clipped to the window.
        """
        h = self.cell
        k0 = max(0, int(math.ceil(lo1 / h - 0.5 - 1e-9)))
        k1 = min(self.n - 1, int(math.floor(hi1 / h - 0.5 + 1e-9)))
        m0 = max(0, int(math.ceil(lo2 / h - 0.5 - 1e-9)))
        m1 = min(self.n - 1, int(math.floor(hi2 / h - 0.5 + 1e-9)))
        if k0 > k1 or m0 > m1:
            return
        # cell (k, m) satisfies the sum bound iff k + m <= diag/h - 1 (+ tol)
        t = int(math.floor(diag / h - 1.0 + 1e-9))
        if t < k0 + m0:
            return
        if t >= k1 + m1:
            self.grid[k0 : k1 + 1, m0 : m1 + 1] = True
            return
        ks = np.arange(k0, k1 + 1)
        ms = np.arange(m0, m1 + 1)
        self.grid[k0 : k1 + 1, m0 : m1 + 1] |= ks[:, None] + ms[None, :] <= t

    def top_profile(self) -> np.ndarray:
        """Highest filled row index per column, -1 for empty columns."""
        any_col = self.grid.any(axis=1)
        top = np.where(any_col, self.n - 1 - np.argmax(self.grid[:, ::-1], axis=1), -1)
        return top.astype(np.int64)

    def to_cell_polygons(self) -> list[Polygon]:
        """Filled cells as maximal per-column rectangles (exact geometry)."""
        h = self.cell
        polys: list[Polygon] = []
        for ix in range(self.n):
            col = self.grid[ix]
            if not col.any():
                continue
            padded = np.diff(np.concatenate(([0], col.view(np.int8), [0])))
            starts = np.nonzero(padded == 1)[0]
            stops = np.nonzero(padded == -1)[0]
            x0, x1 = ix * h, (ix + 1) * h
            for s, e in zip(starts, stops):
                polys.append([(x0, s * h), (x1, s * h), (x1, e * h), (x0, e * h)])
        return polys


class ExactRegion:
    """Union of counterclockwise convex polygons, kept exactly."""

    def __init__(self, polygons: Optional[Iterable[Sequence[Point]]] = None,
                 rmax: Optional[float] = None):
        self.polygons: list[Polygon] = []
        self.rmax = rmax
        for poly in polygons or []:
            self.add_polygon(poly)

    def add_polygon(self, poly: Sequence[Point]) -> None:
        verts = _dedupe(_ensure_ccw(poly))
        if len(verts) < 3 or polygon_area(verts) <= _MIN_AREA:
            return
        if not _is_convex(verts):
            raise InvalidArgumentError(
                "exact regions take convex polygons; decompose concave input first"
            )
        self.polygons.append(verts)

    def is_empty(self) -> bool:
        return not self.polygons

    def area(self) -> float:
        return union_area(self.polygons)

    def contains(self, x: float, y: float, tol: float = 1e-12) -> bool:
        return any(point_in_convex_polygon(x, y, poly, tol) for poly in self.polygons)

    def copy(self) -> "ExactRegion":
        region = ExactRegion(rmax=self.rmax)
        region.polygons = [list(p) for p in self.polygons]
        return region


Region = Union[RasterRegion, ExactRegion]


def _is_convex(poly: Sequence[Point], tol: float = 1e-9) -> bool:
    n = len(poly)
    for k in range(n):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % n]
        x2, y2 = poly[(k + 2) % n]
        cross = (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1)
        scale = max(1.0, abs(x1 - x0) + abs(y1 - y0)) * max(1.0, abs(x2 - x1) + abs(y2 - y1))
        if cross < -tol * scale:
            return False
    return True


def union_accumulate(acc: Region, polygon: Sequence[Point]) -> Region:
    """Grow a region by one convex polygon (in place); returns the region.

    Degenerate polygons are dropped. Raster accumulators reject polygons
    outside their window so callers can enlarge rmax instead of silently
    losing area.
    """
    poly = _dedupe(_ensure_ccw(polygon))
    if len(poly) < 3 or polygon_area(poly) <= _MIN_AREA:
        return acc
    if isinstance(acc, RasterRegion):
        acc.fill_convex_polygon(poly, check_window=True)
        return acc
    if isinstance(acc, ExactRegion):
        acc.add_polygon(poly)
        return acc
    raise InvalidArgumentError(f"unknown region type {type(acc)!r}")


# ---------------------------------------------------------------------------
# Pareto frontier
# ---------------------------------------------------------------------------


def _frontier_of_raster(region: RasterRegion) -> Frontier:
    top = region.top_profile()
    h = region.cell
    points: list[RatePair] = []
    best = -1
    for ix in range(region.n - 1, -1, -1):
        if top[ix] > best:
            best = int(top[ix])
            points.append(RatePair((ix + 0.5) * h, (best + 0.5) * h))
    if not points:
        raise EmptyRegionError("cannot extract a frontier from an empty region")
    points.reverse()
    return Frontier(points)


def _maximal_chain_of_polygon(poly: Sequence[Point]) -> list[Point]:
    """Vertices of the Pareto-maximal boundary chain of a CCW convex polygon."""
    n = len(poly)
    ne_edges = []
    for k in range(n):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % n]
        nx, ny = y1 - y0, x0 - x1
        if nx > 1e-12 and ny > 1e-12:
            ne_edges.append(k)
    if not ne_edges:
        best = max(poly, key=lambda p: (p[0] + p[1], p[0]))
        return [best]
    # NE edges form one contiguous arc on a convex boundary; traversal along
    # the arc runs in decreasing-x order, so flip it for r1-ascending output.
    ks = set(ne_edges)
    start = next(k for k in ne_edges if (k - 1) % n not in ks)
    chain = [poly[start]]
    k = start
    while k in ks:
        chain.append(poly[(k + 1) % n])
        k = (k + 1) % n
    chain.reverse()
    return chain


def _segment_intersections(chain_a: Sequence[Point], chain_b: Sequence[Point]) -> list[Point]:
    out = []
    for k in range(len(chain_a) - 1):
        p1, q1 = chain_a[k], chain_a[k + 1]
        for m in range(len(chain_b) - 1):
            p2, q2 = chain_b[m], chain_b[m + 1]
            d1 = (q1[0] - p1[0], q1[1] - p1[1])
            d2 = (q2[0] - p2[0], q2[1] - p2[1])
            det = d1[0] * d2[1] - d1[1] * d2[0]
            if abs(det) < 1e-15:
                continue
            t = ((p2[0] - p1[0]) * d2[1] - (p2[1] - p1[1]) * d2[0]) / det
            u = ((p2[0] - p1[0]) * d1[1] - (p2[1] - p1[1]) * d1[0]) / det
            if -1e-12 <= t <= 1 + 1e-12 and -1e-12 <= u <= 1 + 1e-12:
                out.append((p1[0] + t * d1[0], p1[1] + t * d1[1]))
    return out


def _dominated_by_region(x: float, y: float, polys: Sequence[Sequence[Point]]) -> bool:
    """True when some region point weakly dominates (x, y) with one strict coord."""
    right = HalfPlane(1.0, 0.0, x, ">=")
    up = HalfPlane(0.0, 1.0, y, ">=")
    for poly in polys:
        clipped = clip_polygon(poly, [right, up])
        if clipped is None:
            # fall back to edge/vertex checks for measure-zero overlaps
            for k in range(len(poly)):
                px, py = poly[k]
                if px >= x - 1e-12 and py >= y - 1e-12 and (px > x + 1e-9 or py > y + 1e-9):
                    return True
            continue
        if any(px > x + 1e-9 or py > y + 1e-9 for px, py in clipped):
            return True
    return False


def _frontier_of_exact(region: ExactRegion) -> Frontier:
    if region.is_empty():
        raise EmptyRegionError("cannot extract a frontier from an empty region")
    chains = [_maximal_chain_of_polygon(p) for p in region.polygons]
    candidates: list[Point] = [pt for chain in chains for pt in chain]
    for a in range(len(chains)):
        for b in range(a + 1, len(chains)):
            candidates.extend(_segment_intersections(chains[a], chains[b]))
    keep: list[Point] = []
    for x, y in candidates:
        if not _dominated_by_region(x, y, region.polygons):
            keep.append((x, y))
    # canonical staircase: ascending r1, keep max r2 among (near-)equal r1
    keep.sort(key=lambda p: (p[0], -p[1]))
    points: list[Point] = []
    for x, y in keep:
        if points and x - points[-1][0] <= 1e-9:
            continue
        while points and y >= points[-1][1] - 1e-12:
            points.pop()
        points.append((x, y))
    if not points:
        raise EmptyRegionError("region has no Pareto-maximal points")
    return Frontier(RatePair(x, y) for x, y in points)


def pareto_frontier(region: Region) -> Frontier:
    """Pareto-maximal points of a region, as a staircase sorted by r1."""
    if isinstance(region, RasterRegion):
        if region.is_empty():
            raise EmptyRegionError("cannot extract a frontier from an empty region")
        return _frontier_of_raster(region)
    if isinstance(region, ExactRegion):
        return _frontier_of_exact(region)
    raise InvalidArgumentError(f"unknown region type {type(region)!r}")


# ---------------------------------------------------------------------------
# Region comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegionDistance:
    """Symmetric-difference area plus directed frontier deviation a -> b."""

    area: float
    frontier_deviation: float
    xor_cells: Optional[int] = None


def _point_segment_distance(px: float, py: float, a: Point, b: Point) -> float:
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        return math.hypot(px - ax, py - ay)
    t = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / denom))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def frontier_deviation(a: Frontier, b: Frontier) -> float:
    """max over a's points of the distance to b's polyline."""
    worst = 0.0
    bp = b.points
    for p in a.points:
        if len(bp) == 1:
            d = math.hypot(p.r1 - bp[0].r1, p.r2 - bp[0].r2)
        else:
            d = min(
                _point_segment_distance(p.r1, p.r2, bp[k], bp[k + 1])
                for k in range(len(bp) - 1)
            )
        worst = max(worst, d)
    return worst


def _exact_polys(region: Region) -> list[Polygon]:
    if isinstance(region, ExactRegion):
        return region.polygons
    return region.to_cell_polygons()


def _raster_exact_intersection_area(raster: RasterRegion, exact: ExactRegion) -> float:
    """Exact area of (filled cells) intersected with (union of polygons)."""
    h = raster.cell
    total = 0.0
    bboxes = []
    for poly in exact.polygons:
        xs = [p[0] for p in poly]
        ys = [p[1] for p in poly]
        bboxes.append((min(xs), max(xs), min(ys), max(ys)))
    filled = np.argwhere(raster.grid)
    for ix, iy in filled:
        x0, x1 = ix * h, (ix + 1) * h
        y0, y1 = iy * h, (iy + 1) * h
        near = [
            poly
            for poly, (bx0, bx1, by0, by1) in zip(exact.polygons, bboxes)
            if x1 > bx0 and x0 < bx1 and y1 > by0 and y0 < by1
        ]
        if not near:
            continue
        corners = ((x0, y0), (x1, y0), (x1, y1), (x0, y1))
        if any(
            all(point_in_convex_polygon(cx, cy, poly) for cx, cy in corners) for poly in near
        ):
            total += h * h
            continue
        cell_planes = [
            HalfPlane(1.0, 0.0, x0, ">="),
            HalfPlane(1.0, 0.0, x1, "<="),
            HalfPlane(0.0, 1.0, y0, ">="),
            HalfPlane(0.0, 1.0, y1, "<="),
        ]
        pieces = [q for q in (clip_polygon(poly, cell_planes) for poly in near) if q]
        if not pieces:
            continue
        if len(pieces) == 1:
            total += abs(polygon_area(pieces[0]))
        else:
            total += union_area(pieces)
    return total


def region_distance(a: Region, b: Region) -> RegionDistance:
    """Compare two regions: area of the symmetric difference and the directed
    frontier deviation from a's frontier to b's.

    Raster pairs must share the window; the cell count of the XOR is then
    reported alongside the area. Mixed pairs are compared exactly, treating
    the raster as its union of filled cells.
    """
    if isinstance(a, RasterRegion) and isinstance(b, RasterRegion):
        if not a.same_window(b):
            raise InvalidArgumentError("raster windows differ (n or rmax mismatch)")
        cells = a.xor_cells(b)
        area = cells * a.cell * a.cell
    elif isinstance(a, ExactRegion) and isinstance(b, ExactRegion):
        ua = a.area()
        ub = b.area()
        area = ua + ub - 2.0 * intersection_area(a.polygons, b.polygons)
        cells = None
    else:
        raster, exact = (a, b) if isinstance(a, RasterRegion) else (b, a)
        inter = _raster_exact_intersection_area(raster, exact)
        area = raster.area() + exact.area() - 2.0 * inter
        cells = None
    if (isinstance(a, RasterRegion) and a.is_empty()) or (
        isinstance(a, ExactRegion) and a.is_empty()
    ):
        dev = 0.0 if ((isinstance(b, RasterRegion) and b.is_empty()) or
                      (isinstance(b, ExactRegion) and b.is_empty())) else math.inf
    elif (isinstance(b, RasterRegion) and b.is_empty()) or (
        isinstance(b, ExactRegion) and b.is_empty()
    ):
        dev = math.inf
    else:
        dev = frontier_deviation(pareto_frontier(a), pareto_frontier(b))
    return RegionDistance(area=float(max(area, 0.0)), frontier_deviation=dev, xor_cells=cells)
