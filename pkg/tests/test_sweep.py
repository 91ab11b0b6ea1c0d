"""Grid generation, union determinism, refinement and sweep statistics."""

import numpy as np
import pytest

from icnash import ChannelParams, RasterRegion, SweepSpec, make_grid, slice_to_polygon
from icnash.errors import InvalidArgumentError
from icnash.geometry import polygon_area
from icnash.neregion import build_conditions, condition_constants
from icnash.ratefuncs import SweepPoint
from icnash.sweep import run_sweep


@pytest.fixture(scope="module")
def fig2z():
    return ChannelParams.from_db((24.0, 3.0), (16.0, 9.0), (18.0, 8.0), 1.0)


def test_make_grid_degenerate(fig2z):
    grid = make_grid(SweepSpec(1, 1, 1), fig2z)
    assert grid.shape == (1, 3)
    assert tuple(grid[0]) == (0.0, 0.0, 0.0)


def test_make_grid_rho_endpoint():
    p = ChannelParams(1.0, 1.0, inr_12=2.0, inr_21=2.0)
    grid = make_grid(SweepSpec(2, 1, 1), p)
    assert sorted(grid[:, 0]) == [0.0, 0.5]


def test_make_grid_lexicographic(fig2z):
    grid = make_grid(SweepSpec(3, 2, 2), fig2z)
    assert grid.shape == (12, 3)
    # rho-major lexicographic order with endpoints included
    assert np.all(np.diff(grid[:, 0]) >= 0)
    assert grid[0, 0] == 0.0 and grid[-1, 0] == pytest.approx(fig2z.rho_max)
    assert set(np.round(grid[:, 1], 12)) == {0.0, 1.0}
    first_block = grid[:4]
    assert np.all(first_block[:, 0] == 0.0)
    assert [tuple(r[1:]) for r in first_block] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_spec_validation():
    with pytest.raises(InvalidArgumentError):
        SweepSpec(0, 1, 1)
    with pytest.raises(InvalidArgumentError):
        SweepSpec(1, 1, 1, budget=-1)


def test_permuted_points_identical_raster(fig2z):
    pts = make_grid(SweepSpec(6, 5, 5), fig2z)
    rng = np.random.default_rng(30)
    perm = pts[rng.permutation(pts.shape[0])]
    a = run_sweep(fig2z, None, SweepSpec(6, 5, 5), raster_n=256, points=pts)
    b = run_sweep(fig2z, None, SweepSpec(6, 5, 5), raster_n=256, points=perm)
    assert np.array_equal(a.region.grid, b.region.grid)


def test_supergrid_containment(fig2z):
    """A dyadic refinement contains every coarse grid point, so the union
    can only grow."""
    coarse = run_sweep(fig2z, None, SweepSpec(5, 5, 5), raster_n=256)
    fine = run_sweep(fig2z, None, SweepSpec(9, 9, 9), raster_n=256)
    lost = np.count_nonzero(coarse.region.grid & ~fine.region.grid)
    assert lost == 0


def test_density_doubling_tolerance(fig2z):
    a = run_sweep(fig2z, None, SweepSpec(8, 5, 5), raster_n=256)
    b = run_sweep(fig2z, None, SweepSpec(16, 10, 10), raster_n=256)
    cells_a = int(a.region.grid.sum())
    cells_b = int(b.region.grid.sum())
    assert cells_b >= cells_a - 2


def test_threads_bit_identical(fig2z):
    spec = SweepSpec(10, 9, 9)
    runs = [
        run_sweep(fig2z, None, spec, raster_n=256, threads=t) for t in (1, 2, 4)
    ]
    for other in runs[1:]:
        assert np.array_equal(runs[0].region.grid, other.region.grid)
        assert runs[0].frontier.points == other.frontier.points


def test_adaptive_zero_budget_noop(fig2z):
    spec_off = SweepSpec(5, 4, 4, adaptive=False, budget=0)
    spec_on = SweepSpec(5, 4, 4, adaptive=True, budget=0)
    a = run_sweep(fig2z, None, spec_off, raster_n=128)
    b = run_sweep(fig2z, None, spec_on, raster_n=128)
    assert np.array_equal(a.region.grid, b.region.grid)
    assert b.stats.refined_points == 0


def test_adaptive_budget_grows_region(fig2z):
    base = run_sweep(fig2z, None, SweepSpec(5, 4, 4), raster_n=128)
    refined = run_sweep(
        fig2z, None, SweepSpec(5, 4, 4, adaptive=True, budget=40), raster_n=128
    )
    assert refined.stats.refined_points <= 40
    assert refined.stats.refined_points > 0
    assert not np.any(base.region.grid & ~refined.region.grid)
    # deterministic
    again = run_sweep(
        fig2z, None, SweepSpec(5, 4, 4, adaptive=True, budget=40), raster_n=128
    )
    assert np.array_equal(refined.region.grid, again.region.grid)


def test_adaptive_requires_raster(fig2z):
    with pytest.raises(InvalidArgumentError):
        run_sweep(
            fig2z, None, SweepSpec(2, 2, 2, adaptive=True, budget=5),
            representation="exact",
        )


def test_fast_path_matches_generic_fill(fig2z):
    """The box-plus-diagonal filler agrees with generic clip + polygon fill."""
    pts = make_grid(SweepSpec(5, 4, 4), fig2z)
    res = run_sweep(fig2z, None, SweepSpec(5, 4, 4), raster_n=256, points=pts)
    generic = RasterRegion(256, res.rmax)
    for row in pts:
        poly = slice_to_polygon(build_conditions(SweepPoint(*row), fig2z))
        if poly is not None:
            generic.fill_convex_polygon(poly, check_window=False)
    assert res.region.xor_cells(generic) == 0


def test_stats_areas_match_shoelace(fig2z):
    """The vectorized corner-cut area formula agrees with clipping."""
    from icnash.geometry import HalfPlane, clip_polygon

    pts = make_grid(SweepSpec(4, 4, 4), fig2z)
    res = run_sweep(fig2z, None, SweepSpec(4, 4, 4), raster_n=64, points=pts)
    window = [
        HalfPlane(1.0, 0.0, res.rmax, "<="),
        HalfPlane(0.0, 1.0, res.rmax, "<="),
    ]
    for k, row in enumerate(pts):
        poly = slice_to_polygon(build_conditions(SweepPoint(*row), fig2z))
        if poly is None:
            want = 0.0
        else:
            clipped = clip_polygon(poly, window)
            want = abs(polygon_area(clipped)) if clipped else 0.0
        assert res.stats.slice_areas[k] == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_stats_active_constraints_single_point(fig2z):
    pt = np.array([[0.0, 1.0, 1.0]])
    res = run_sweep(fig2z, None, SweepSpec(1, 1, 1), raster_n=64, points=pt)
    active = res.stats.active_counts
    assert active["13a:i1"] == 1
    assert active["13b.1:i1"] == 1
    assert active["13b.2:i1"] == 0
    assert active["13b.3:i1"] == 0
    assert active["13c:i1"] == 1
    assert active["13a:i2"] == 0  # clamped to the axis
    assert active["13b.1:i2"] == 1
    assert active["13c:i2"] == 0  # dominated by the i=1 sum bound


def test_stats_empty_reasons(fig2z):
    res = run_sweep(fig2z, None, SweepSpec(8, 5, 5), raster_n=128)
    st = res.stats
    assert st.n_points == 200
    assert st.n_empty == sum(st.empty_reasons.values())
    assert st.n_empty > 0  # fig2z has infeasible slices at low mu
    doc = st.to_json_dict()
    assert doc["n_points"] == 200
    assert len(doc["slice_areas"]) == 200
