"""Sweep-domain traversal and the region-union engine.

The sweep domain is the closed box [0, rho_max] x [0, 1]^2, discretized
uniformly. Every sweep point contributes a convex slice of the form
{lo_i <= R_i <= up_i, R1 + R2 <= s}; the engine evaluates all slice constants
vectorized, rasterizes each slice with an integer-index fast path, and ORs
them into the accumulator. Slices are independent, so the union can be
chunked across threads; boolean OR is commutative and associative, which
keeps the raster bit-identical for any chunking.

Per-slice statistics (exact clipped area, which condition family is active,
why a slice came out empty) are computed from the same constants, fully
vectorized.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import EmptyRegionError, InvalidArgumentError
from .geometry import (
    ConvexSlice,
    ExactRegion,
    Frontier,
    HalfPlane,
    RasterRegion,
    clip_polygon,
    convex_hull,
    pareto_frontier,
    polygon_area,
    slice_to_polygon,
)
from .neregion import (
    AchievableRegionInput,
    ConditionConstants,
    condition_constants,
    default_rmax,
)
from .params import ChannelParams

__all__ = ["SweepSpec", "SweepStats", "SweepResult", "make_grid", "run_sweep"]

_TOL = 1e-12

CONDITION_IDS = tuple(
    f"{cond}:i{i}" for i in (1, 2) for cond in ("13a", "13b.1", "13b.2", "13b.3", "13c")
)


@dataclass(frozen=True)
class SweepSpec:
    """Grid counts per sweep axis plus optional frontier-driven refinement."""

    n_rho: int = 64
    n_mu1: int = 33
    n_mu2: int = 33
    adaptive: bool = False
    budget: int = 0

    def __post_init__(self):
        for name in ("n_rho", "n_mu1", "n_mu2"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise InvalidArgumentError(f"{name} must be an integer >= 1, got {v!r}")
        if not isinstance(self.budget, int) or self.budget < 0:
            raise InvalidArgumentError(f"budget must be an integer >= 0, got {self.budget!r}")

    def axes(self, p: ChannelParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (
            np.linspace(0.0, p.rho_max, self.n_rho),
            np.linspace(0.0, 1.0, self.n_mu1),
            np.linspace(0.0, 1.0, self.n_mu2),
        )


def make_grid(spec: SweepSpec, p: ChannelParams) -> np.ndarray:
    """Uniform grid over the closed sweep box, endpoints included.

    Rows are (rho, mu_1, mu_2) in lexicographic order (rho-major).
    """
    rhos, mu1s, mu2s = spec.axes(p)
    mesh = np.meshgrid(rhos, mu1s, mu2s, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


@dataclass
class SweepStats:
    """Per-slice bookkeeping of one sweep run."""

    n_points: int
    n_empty: int
    empty_reasons: dict[str, int]
    slice_areas: np.ndarray
    active_counts: dict[str, int]
    refined_points: int = 0

    def to_json_dict(self) -> dict:
        return {
            "n_points": self.n_points,
            "n_empty": self.n_empty,
            "empty_reasons": dict(self.empty_reasons),
            "active_counts": dict(self.active_counts),
            "refined_points": self.refined_points,
            "slice_area_total": float(self.slice_areas.sum()),
            "slice_area_max": float(self.slice_areas.max()) if self.slice_areas.size else 0.0,
            "slice_areas": [float(a) for a in self.slice_areas],
        }


@dataclass
class SweepResult:
    """Region, its Pareto frontier and run statistics."""

    region: object
    frontier: Frontier
    stats: SweepStats
    rmax: float


@dataclass(frozen=True)
class _SliceBounds:
    """Window-clipped slice bounds and emptiness/activity masks (vectorized)."""

    lo1: np.ndarray
    lo2: np.ndarray
    up1: np.ndarray
    up2: np.ndarray
    diag: np.ndarray
    nonempty: np.ndarray
    areas: np.ndarray
    empty_reasons: dict[str, int]
    active_counts: dict[str, int]


def _analyze(cc: ConditionConstants, rmax: float) -> _SliceBounds:
    lo1, lo2 = cc.lower
    up1 = cc.upper_min(1)
    up2 = cc.upper_min(2)
    diag = cc.sum_min()
    u1e = np.minimum(up1, rmax)
    u2e = np.minimum(up2, rmax)
    w1 = u1e - lo1
    w2 = u2e - lo2
    room = diag - (lo1 + lo2)
    empty_r1 = w1 <= 0.0
    empty_r2 = ~empty_r1 & (w2 <= 0.0)
    empty_sum = ~empty_r1 & ~empty_r2 & (room <= 0.0)
    nonempty = ~(empty_r1 | empty_r2 | empty_sum)
    reasons = {
        "R1-bounds": int(np.count_nonzero(empty_r1)),
        "R2-bounds": int(np.count_nonzero(empty_r2)),
        "sum-bound": int(np.count_nonzero(empty_sum)),
    }
    # area of the corner-cut box, exact
    t = np.clip(u1e + u2e - diag, 0.0, None)
    cut = 0.5 * t * t
    cut -= 0.5 * np.clip(t - w1, 0.0, None) ** 2
    cut -= 0.5 * np.clip(t - w2, 0.0, None) ** 2
    areas = np.where(nonempty, np.clip(w1 * w2 - cut, 0.0, None), 0.0)

    active: dict[str, int] = {}
    for i in (1, 2):
        lo = lo1 if i == 1 else lo2
        lo_other = lo2 if i == 1 else lo1
        ue = u1e if i == 1 else u2e
        ue_other = u2e if i == 1 else u1e
        active[f"13a:i{i}"] = int(np.count_nonzero(nonempty & (lo > _TOL)))
        face = nonempty & (lo_other <= np.minimum(ue_other, diag - ue) + _TOL)
        for k in range(3):
            uk = cc.upper[i - 1][k]
            active[f"13b.{k + 1}:i{i}"] = int(np.count_nonzero(face & (uk <= ue + _TOL)))
        s_i = cc.sum_bound[i - 1]
        s_other = cc.sum_bound[2 - i]
        touches = (
            nonempty
            & (diag <= u1e + u2e + _TOL)
            & (diag >= lo1 + lo2 - _TOL)
            & (s_i <= s_other + _TOL)
        )
        active[f"13c:i{i}"] = int(np.count_nonzero(touches))
    return _SliceBounds(
        lo1=lo1, lo2=lo2, up1=up1, up2=up2, diag=diag,
        nonempty=nonempty, areas=areas, empty_reasons=reasons, active_counts=active,
    )


def _fill_range(region: RasterRegion, sb: _SliceBounds, start: int, stop: int) -> None:
    idx = np.nonzero(sb.nonempty[start:stop])[0] + start
    for k in idx:
        region.fill_box_diag(sb.lo1[k], sb.up1[k], sb.lo2[k], sb.up2[k], sb.diag[k])


def _union_raster(
    sb: _SliceBounds, n: int, rmax: float, threads: int
) -> RasterRegion:
    region = RasterRegion(n, rmax)
    total = sb.lo1.shape[0]
    if threads <= 1 or total < 256:
        _fill_range(region, sb, 0, total)
        return region
    bounds = np.linspace(0, total, threads + 1).astype(int)
    parts = [RasterRegion(n, rmax) for _ in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(_fill_range, parts[t], sb, bounds[t], bounds[t + 1])
            for t in range(threads)
        ]
        for f in futures:
            f.result()
    for part in parts:
        region.grid |= part.grid
    return region


def _slice_planes_from_constants(cc: ConditionConstants, k: int) -> list[HalfPlane]:
    planes = [
        HalfPlane(1.0, 0.0, float(cc.lower[0][k]), ">=", tag="13a:i1"),
        HalfPlane(0.0, 1.0, float(cc.lower[1][k]), ">=", tag="13a:i2"),
    ]
    for i in (1, 2):
        c1, c2 = (1.0, 0.0) if i == 1 else (0.0, 1.0)
        for idx in range(3):
            planes.append(
                HalfPlane(c1, c2, float(cc.upper[i - 1][idx][k]), "<=", tag=f"13b.{idx + 1}:i{i}")
            )
        planes.append(HalfPlane(1.0, 1.0, float(cc.sum_bound[i - 1][k]), "<=", tag=f"13c:i{i}"))
    planes.append(HalfPlane(1.0, 0.0, 0.0, ">=", tag="nonneg:i1"))
    planes.append(HalfPlane(0.0, 1.0, 0.0, ">=", tag="nonneg:i2"))
    return planes


def _achievable_planes(poly: list) -> list[HalfPlane]:
    planes = []
    n = len(poly)
    for k in range(n):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % n]
        dx, dy = x1 - x0, y1 - y0
        if dx == 0.0 and dy == 0.0:
            continue
        planes.append(HalfPlane(dy, -dx, dy * x0 - dx * y0, "<="))
    return planes


def _contributing_mask(region: RasterRegion, sb: _SliceBounds) -> np.ndarray:
    """Slices that cover at least one frontier cell of the union."""
    top = region.top_profile()
    h = region.cell
    n = region.n
    out = np.zeros(sb.lo1.shape[0], dtype=bool)
    cols = np.arange(n)
    for k in np.nonzero(sb.nonempty)[0]:
        k0 = max(0, int(math.ceil(sb.lo1[k] / h - 0.5 - 1e-9)))
        k1 = min(n - 1, int(math.floor(sb.up1[k] / h - 0.5 + 1e-9)))
        if k0 > k1:
            continue
        m0 = max(0, int(math.ceil(sb.lo2[k] / h - 0.5 - 1e-9)))
        t = int(math.floor(sb.diag[k] / h - 1.0 + 1e-9))
        m1 = min(n - 1, int(math.floor(sb.up2[k] / h - 0.5 + 1e-9)))
        sub_top = top[k0 : k1 + 1]
        sub_cols = cols[k0 : k1 + 1]
        hit = (sub_top >= m0) & (sub_top <= np.minimum(m1, t - sub_cols))
        if hit.any():
            out[k] = True
    return out


def _refinement_points(
    spec: SweepSpec, axes, points: np.ndarray, contributing: np.ndarray
) -> np.ndarray:
    """Axis midpoints next to contributing grid points, capped at the budget."""
    rhos, mu1s, mu2s = axes
    n1, n2 = len(mu1s), len(mu2s)
    new_pts = []
    for flat in np.nonzero(contributing)[0]:
        ir, rem = divmod(int(flat), n1 * n2)
        i1, i2 = divmod(rem, n2)
        rho, m1v, m2v = points[flat]
        if ir + 1 < len(rhos):
            new_pts.append((0.5 * (rho + rhos[ir + 1]), m1v, m2v))
        if i1 + 1 < n1:
            new_pts.append((rho, 0.5 * (m1v + mu1s[i1 + 1]), m2v))
        if i2 + 1 < n2:
            new_pts.append((rho, m1v, 0.5 * (m2v + mu2s[i2 + 1])))
    if not new_pts:
        return np.empty((0, 3))
    uniq = np.unique(np.asarray(new_pts, dtype=float), axis=0)
    return uniq[: spec.budget]


def run_sweep(
    p: ChannelParams,
    achievable: Optional[AchievableRegionInput] = None,
    spec: Optional[SweepSpec] = None,
    *,
    raster_n: int = 512,
    rmax: Optional[float] = None,
    representation: str = "raster",
    hull: bool = False,
    errata_c13_mu: bool = False,
    threads: int = 1,
    points: Optional[np.ndarray] = None,
) -> SweepResult:
    """Union of condition slices over the sweep, intersected with the
    achievable input.

    ``points`` overrides the grid (used for traversal-order and refinement
    experiments); the result is independent of point order. Raises
    :class:`EmptyRegionError` with per-family diagnostics when nothing
    survives.
    """
    if spec is None:
        spec = SweepSpec()
    if achievable is None:
        achievable = AchievableRegionInput.default_box()
    if representation not in ("raster", "exact"):
        raise InvalidArgumentError(f"unknown representation {representation!r}")
    if threads < 1:
        raise InvalidArgumentError(f"threads must be >= 1, got {threads}")
    if rmax is None:
        rmax = default_rmax(p)
    explicit_points = points is not None
    if points is None:
        points = make_grid(spec, p)
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        raise InvalidArgumentError("empty sweep: no grid points")

    cc = condition_constants(p, points, errata_c13_mu)
    sb = _analyze(cc, rmax)
    stats = SweepStats(
        n_points=int(points.shape[0]),
        n_empty=int(np.count_nonzero(~sb.nonempty)),
        empty_reasons=sb.empty_reasons,
        slice_areas=sb.areas,
        active_counts=sb.active_counts,
    )

    if representation == "exact":
        if spec.adaptive:
            raise InvalidArgumentError("adaptive refinement needs the raster representation")
        region = ExactRegion(rmax=rmax)
        ach_planes = _achievable_planes(achievable.resolve(rmax))
        for k in range(points.shape[0]):
            if not sb.nonempty[k]:
                continue
            poly = slice_to_polygon(ConvexSlice(_slice_planes_from_constants(cc, k)))
            if poly is None:
                continue
            clipped = clip_polygon(poly, ach_planes)
            if clipped is not None:
                region.add_polygon(clipped)
        if hull and region.polygons:
            hull_poly = convex_hull([v for poly in region.polygons for v in poly])
            region = ExactRegion([hull_poly], rmax=rmax)
        if region.is_empty():
            raise EmptyRegionError(
                "no sweep point produced a feasible slice", diagnostics=sb.empty_reasons
            )
        return SweepResult(region, pareto_frontier(region), stats, rmax)

    region = _union_raster(sb, raster_n, rmax, threads)

    if spec.adaptive and spec.budget > 0 and not explicit_points and not region.is_empty():
        contributing = _contributing_mask(region, sb)
        extra = _refinement_points(spec, spec.axes(p), points, contributing)
        if extra.shape[0]:
            cc_extra = condition_constants(p, extra, errata_c13_mu)
            sb_extra = _analyze(cc_extra, rmax)
            _fill_range(region, sb_extra, 0, extra.shape[0])
            stats.refined_points = int(extra.shape[0])

    if achievable.polygon is not None:
        mask = RasterRegion(raster_n, rmax)
        mask.fill_convex_polygon(achievable.resolve(rmax), check_window=False)
        region.grid &= mask.grid

    if hull and not region.is_empty():
        h = region.cell
        filled = np.argwhere(region.grid)
        centers = [(float((ix + 0.5) * h), float((iy + 0.5) * h)) for ix, iy in filled]
        hull_poly = convex_hull(centers)
        if len(hull_poly) >= 3:
            grown = RasterRegion(raster_n, rmax)
            grown.fill_convex_polygon(hull_poly, check_window=False)
            region.grid |= grown.grid

    if region.is_empty():
        raise EmptyRegionError(
            "no sweep point produced a feasible slice inside the achievable input",
            diagnostics=sb.empty_reasons,
        )
    return SweepResult(region, pareto_frontier(region), stats, rmax)
