"""Equilibrium-region condition systems and impossibility objects.

For one sweep point the equilibrium description contributes, per pair, one
lower bound on the pair's own rate, three upper bounds, and one sum-rate
bound, all affine in (R1, R2); their conjunction (plus nonnegativity) is a
convex slice. The achievable equilibrium region is the union of these slices
over the sweep domain, intersected with a pluggable achievable-capacity
polygon (the engine never fabricates that region's formulas; the default is
the raster window box, documented as vacuous).

The sum-rate bound is implemented verbatim from its printed form, where the
cross-pair feedback term takes the first pair's split parameter for both
instantiations; ``errata_c13_mu=True`` switches it to the own-pair split for
sensitivity analysis.

Also houses the treat-interference-as-noise floor: rate pairs with a
component below it cannot be at equilibrium, which yields the impossibility
region when intersected with a converse polygon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import ratefuncs as rf
from .errors import InvalidArgumentError
from .geometry import (
    ConvexSlice,
    ExactRegion,
    HalfPlane,
    Point,
    RasterRegion,
    clip_polygon,
    point_in_convex_polygon,
    polygon_area,
)
from .params import ChannelParams, other

__all__ = [
    "AchievableRegionInput",
    "TinBound",
    "build_conditions",
    "condition_constants",
    "ConditionConstants",
    "default_rmax",
    "ne_region",
    "tin_bound",
    "impossibility_region",
    "check_eta_monotonicity",
    "EtaMonotonicityReport",
]


@dataclass(frozen=True)
class AchievableRegionInput:
    """Pluggable achievable (or converse) capacity region.

    Either the default window box or a user-supplied convex polygon that
    contains the origin; the engine only ever intersects against it.
    """

    source: str = "default-box"
    polygon: Optional[tuple[Point, ...]] = None

    @classmethod
    def default_box(cls) -> "AchievableRegionInput":
        return cls(source="default-box", polygon=None)

    @classmethod
    def from_polygon(cls, vertices: Sequence[Point]) -> "AchievableRegionInput":
        pts = [(float(x), float(y)) for x, y in vertices]
        if len(pts) < 3:
            raise InvalidArgumentError("achievable polygon needs at least 3 vertices")
        for x, y in pts:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise InvalidArgumentError("achievable polygon vertices must be finite")
        if polygon_area(pts) < 0:
            pts.reverse()
        if abs(polygon_area(pts)) <= 1e-12:
            raise InvalidArgumentError("achievable polygon is degenerate")
        if not point_in_convex_polygon(0.0, 0.0, pts, tol=1e-9):
            raise InvalidArgumentError("achievable polygon must contain the origin")
        return cls(source="polygon-file", polygon=tuple(pts))

    def resolve(self, rmax: float) -> list[Point]:
        """Concrete polygon: the supplied one, or the window box."""
        if self.polygon is not None:
            return list(self.polygon)
        return [(0.0, 0.0), (rmax, 0.0), (rmax, rmax), (0.0, rmax)]


@dataclass(frozen=True)
class TinBound:
    """Per-pair rate floor from full power and treating interference as noise."""

    l1: float
    l2: float

    def value(self, i: int) -> float:
        return self.l1 if i == 1 else self.l2


def tin_bound(p: ChannelParams) -> TinBound:
    """Componentwise floor (half log2(1 + SNR_i/(1 + INR_at_i)) - eta)^+."""
    vals = []
    for i in (1, 2):
        raw = 0.5 * math.log2(1.0 + p.snr_fwd(i) / (1.0 + p.inr_at(i))) - p.eta
        vals.append(max(raw, 0.0))
    return TinBound(l1=vals[0], l2=vals[1])


def default_rmax(p: ChannelParams) -> float:
    """Raster window edge: the larger single-rate cap at rho_max, plus 1 bit."""
    rm = p.rho_max
    return float(max(rf.a2(p, 1, rm), rf.a2(p, 2, rm)) + 1.0)


# ---------------------------------------------------------------------------
# Condition assembly
# ---------------------------------------------------------------------------


def _condition_terms(p: ChannelParams, i: int, rho, mu_1, mu_2, errata_c13_mu: bool):
    """The five bound values of pair i at one (or an array of) sweep point(s)."""
    j = other(i)
    mu_i = mu_1 if i == 1 else mu_2
    mu_j = mu_2 if i == 1 else mu_1
    eta = p.eta
    a2_i = rf.a2(p, i, rho)
    a2_j = rf.a2(p, j, rho)
    a3_i_mu_j = rf.a3(p, i, rho, mu_j)
    a3_j_mu_i = rf.a3(p, j, rho, mu_i)
    a5_j_mu_i = rf.a5(p, j, rho, mu_i)
    lower = a2_i - a3_i_mu_j - rf.a4(p, i, rho, mu_j) - eta
    up_1 = a2_i + a3_j_mu_i + a5_j_mu_i - a2_j + eta
    up_2 = (
        a3_i_mu_j
        + rf.a7(p, i, rho, mu_1, mu_2)
        + 2.0 * a3_j_mu_i
        + a5_j_mu_i
        - a2_j
        + eta
    )
    up_3 = (
        a2_i
        + a3_i_mu_j
        + 2.0 * a3_j_mu_i
        + a5_j_mu_i
        + rf.a7(p, j, rho, mu_1, mu_2)
        - 2.0 * a2_j
        + 2.0 * eta
    )
    mu_c13 = mu_i if errata_c13_mu else mu_1
    sum_bound = (
        rf.a1(p, i)
        + a3_i_mu_j
        + rf.a7(p, i, rho, mu_1, mu_2)
        + a2_j
        + rf.a3(p, j, rho, mu_c13)
        - a2_i
        + eta
    )
    return lower, (up_1, up_2, up_3), sum_bound


def build_conditions(
    pt: rf.SweepPoint, p: ChannelParams, errata_c13_mu: bool = False
) -> ConvexSlice:
    """Half-plane system of one sweep point, with provenance tags.

    Emits per pair: the clamped lower bound (tag ``13a``), all three upper
    bounds (``13b.1``..``13b.3``, kept even when dominated), and the sum
    bound (``13c``); plus the two nonnegativity planes.
    """
    planes: list[HalfPlane] = []
    for i in (1, 2):
        lower, uppers, sum_bound = _condition_terms(
            p, i, pt.rho, pt.mu_1, pt.mu_2, errata_c13_mu
        )
        c1, c2 = (1.0, 0.0) if i == 1 else (0.0, 1.0)
        planes.append(
            HalfPlane(c1, c2, max(float(lower), 0.0), ">=", tag=f"13a:i{i}")
        )
        for k, up in enumerate(uppers, start=1):
            planes.append(HalfPlane(c1, c2, float(up), "<=", tag=f"13b.{k}:i{i}"))
        planes.append(HalfPlane(1.0, 1.0, float(sum_bound), "<=", tag=f"13c:i{i}"))
    planes.append(HalfPlane(1.0, 0.0, 0.0, ">=", tag="nonneg:i1"))
    planes.append(HalfPlane(0.0, 1.0, 0.0, ">=", tag="nonneg:i2"))
    return ConvexSlice(planes, rho=pt.rho, mu_1=pt.mu_1, mu_2=pt.mu_2)


@dataclass(frozen=True)
class ConditionConstants:
    """Vectorized condition constants for N sweep points.

    ``lower[i-1]``, ``upper[i-1][k]`` and ``sum_bound[i-1]`` are (N,) arrays;
    lower bounds carry the positive-part clamp already applied.
    """

    points: np.ndarray  # (N, 3) columns rho, mu_1, mu_2
    lower: tuple[np.ndarray, np.ndarray]
    upper: tuple[tuple[np.ndarray, np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]
    sum_bound: tuple[np.ndarray, np.ndarray]

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    def upper_min(self, i: int) -> np.ndarray:
        u = self.upper[i - 1]
        return np.minimum(np.minimum(u[0], u[1]), u[2])

    def sum_min(self) -> np.ndarray:
        return np.minimum(self.sum_bound[0], self.sum_bound[1])


def condition_constants(
    p: ChannelParams, points: np.ndarray, errata_c13_mu: bool = False
) -> ConditionConstants:
    """Evaluate every condition constant for an (N, 3) array of sweep points."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise InvalidArgumentError("points must be an (N, 3) array of (rho, mu_1, mu_2)")
    rho, mu_1, mu_2 = pts[:, 0], pts[:, 1], pts[:, 2]
    lowers = []
    uppers = []
    sums = []
    for i in (1, 2):
        lower, ups, sum_bound = _condition_terms(p, i, rho, mu_1, mu_2, errata_c13_mu)
        lowers.append(np.maximum(np.asarray(lower, dtype=float), 0.0))
        uppers.append(tuple(np.asarray(u, dtype=float) for u in ups))
        sums.append(np.asarray(sum_bound, dtype=float))
    return ConditionConstants(
        points=pts,
        lower=(lowers[0], lowers[1]),
        upper=(uppers[0], uppers[1]),
        sum_bound=(sums[0], sums[1]),
    )


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------


def ne_region(
    p: ChannelParams,
    achievable: Optional[AchievableRegionInput] = None,
    sweep: Optional["SweepSpec"] = None,
    *,
    raster_n: int = 512,
    rmax: Optional[float] = None,
    representation: str = "raster",
    hull: bool = False,
    errata_c13_mu: bool = False,
    threads: int = 1,
):
    """Achievable equilibrium region: union over the sweep of condition
    slices, intersected with the achievable-region input.

    Returns a :class:`icnash.sweep.SweepResult` carrying the region, its
    Pareto frontier and per-slice statistics. The optional convex-hull
    post-pass (off by default) explores time-sharing.
    """
    from .sweep import SweepSpec, run_sweep

    if sweep is None:
        sweep = SweepSpec()
    return run_sweep(
        p,
        achievable if achievable is not None else AchievableRegionInput.default_box(),
        sweep,
        raster_n=raster_n,
        rmax=rmax,
        representation=representation,
        hull=hull,
        errata_c13_mu=errata_c13_mu,
        threads=threads,
    )


def impossibility_region(
    p: ChannelParams, converse: Optional[AchievableRegionInput] = None, rmax: Optional[float] = None
) -> ExactRegion:
    """Converse polygon intersected with the treat-interference-as-noise
    floor {R1 >= L1, R2 >= L2}; its complement in the window is certified
    non-equilibrium.

    With no converse supplied the raster window box is used, which makes the
    converse side vacuous by construction.
    """
    if rmax is None:
        rmax = default_rmax(p)
    poly = (converse or AchievableRegionInput.default_box()).resolve(rmax)
    tin = tin_bound(p)
    clipped = clip_polygon(
        poly,
        [
            HalfPlane(1.0, 0.0, tin.l1, ">=", tag="tin:i1"),
            HalfPlane(0.0, 1.0, tin.l2, ">=", tag="tin:i2"),
        ],
    )
    region = ExactRegion(rmax=rmax)
    if clipped is not None:
        region.add_polygon(clipped)
    return region


@dataclass(frozen=True)
class EtaMonotonicityReport:
    """Containment audit of regions computed at ascending eta values."""

    etas: tuple[float, ...]
    violating_cells: tuple[int, ...]  # cells in region(eta_k) missing from region(eta_{k+1})
    areas: tuple[float, ...]

    @property
    def ok(self) -> bool:
        return all(v == 0 for v in self.violating_cells)


def check_eta_monotonicity(
    p: ChannelParams,
    achievable: Optional[AchievableRegionInput],
    sweep: "SweepSpec",
    eta_list: Sequence[float],
    *,
    raster_n: int = 512,
    rmax: Optional[float] = None,
    threads: int = 1,
) -> EtaMonotonicityReport:
    """Verify region(eta_k) is contained in region(eta_{k+1}) on a shared grid."""
    etas = [float(e) for e in eta_list]
    if sorted(etas) != etas:
        raise InvalidArgumentError("eta_list must be ascending")
    if any(e < 1.0 for e in etas):
        raise InvalidArgumentError("eta values must be >= 1")
    if rmax is None:
        rmax = default_rmax(p)  # independent of eta, shared window by construction
    regions = []
    for eta in etas:
        q = ChannelParams(
            snr_fwd_1=p.snr_fwd_1,
            snr_fwd_2=p.snr_fwd_2,
            inr_12=p.inr_12,
            inr_21=p.inr_21,
            snr_bwd_1=p.snr_bwd_1,
            snr_bwd_2=p.snr_bwd_2,
            eta=eta,
            fb_mode_1=p.fb_mode_1,
            fb_mode_2=p.fb_mode_2,
        )
        result = ne_region(
            q, achievable, sweep, raster_n=raster_n, rmax=rmax, threads=threads
        )
        regions.append(result.region)
    violations = []
    for lo, hi in zip(regions, regions[1:]):
        violations.append(int(np.count_nonzero(lo.grid & ~hi.grid)))
    return EtaMonotonicityReport(
        etas=tuple(etas),
        violating_cells=tuple(violations),
        areas=tuple(r.area() for r in regions),
    )
