"""Condition assembly against the independent oracle, impossibility objects,
and region-level invariants."""

import math
from dataclasses import replace

import numpy as np
import pytest

from icnash import (
    AchievableRegionInput,
    ChannelParams,
    DomainError,
    EmptyRegionError,
    FeedbackMode,
    InvalidArgumentError,
    SweepPoint,
    SweepSpec,
    build_conditions,
    check_eta_monotonicity,
    default_rmax,
    impossibility_region,
    ne_region,
    tin_bound,
)
from icnash.neregion import condition_constants

import _oracle as orc


@pytest.fixture(scope="module")
def fig2z():
    return ChannelParams.from_db((24.0, 3.0), (16.0, 9.0), (18.0, 8.0), 1.0)


@pytest.fixture(scope="module")
def fig2z_oracle():
    return orc.params_from_db(24, 3, 16, 9, 18, 8, 1)


def _constants_by_tag(slice_):
    return {hp.tag: hp for hp in slice_.planes}


def test_build_conditions_figure2_frozen(fig2z):
    """All ten condition constants at (rho, mu1, mu2) = (0, 1, 1)."""
    slc = build_conditions(SweepPoint(0.0, 1.0, 1.0), fig2z)
    by_tag = _constants_by_tag(slc)
    assert len(slc.planes) == 12
    frozen = {
        "13a:i1": 1.4395630391040769,
        "13b.1:i1": 4.0155625321574212,
        "13b.2:i1": 4.2401555283649192,
        "13b.3:i1": 5.5915620252107655,
        "13c:i1": 4.4859509279312471,
        "13a:i2": 0.0,
        "13b.1:i2": 1.8217948926196723,
        "13b.2:i2": 2.3977943856730166,
        "13b.3:i2": 3.0463878888271702,
        "13c:i2": 5.1887639216229399,
    }
    for tag, want in frozen.items():
        assert by_tag[tag].rhs == pytest.approx(want, rel=1e-9, abs=1e-12), tag
    assert by_tag["nonneg:i1"].rhs == 0.0
    assert by_tag["13a:i1"].sense == ">="
    assert by_tag["13c:i2"].c1 == 1.0 and by_tag["13c:i2"].c2 == 1.0


def test_build_conditions_matches_oracle_random(fig2z, fig2z_oracle):
    rng = np.random.default_rng(20)
    for _ in range(60):
        rho = rng.uniform(0.0, fig2z.rho_max)
        mu1, mu2 = rng.uniform(0.0, 1.0, 2)
        slc = build_conditions(SweepPoint(rho, mu1, mu2), fig2z)
        by_tag = _constants_by_tag(slc)
        for i in (1, 2):
            want = orc.o_conditions(fig2z_oracle, i, rho, mu1, mu2)
            assert by_tag[f"13a:i{i}"].rhs == pytest.approx(
                float(want["lower"]), rel=1e-9, abs=1e-12
            )
            for k, key in enumerate(("u1", "u2", "u3"), start=1):
                assert by_tag[f"13b.{k}:i{i}"].rhs == pytest.approx(
                    float(want[key]), rel=1e-9, abs=1e-12
                )
            assert by_tag[f"13c:i{i}"].rhs == pytest.approx(
                float(want["sum"]), rel=1e-9, abs=1e-12
            )


def test_condition_constants_vectorized_matches_scalar(fig2z):
    rng = np.random.default_rng(21)
    pts = np.column_stack(
        [
            rng.uniform(0.0, fig2z.rho_max, 40),
            rng.uniform(0.0, 1.0, 40),
            rng.uniform(0.0, 1.0, 40),
        ]
    )
    cc = condition_constants(fig2z, pts)
    for k in range(pts.shape[0]):
        slc = build_conditions(SweepPoint(*pts[k]), fig2z)
        by_tag = _constants_by_tag(slc)
        for i in (1, 2):
            assert cc.lower[i - 1][k] == pytest.approx(by_tag[f"13a:i{i}"].rhs, rel=1e-12)
            for idx in range(3):
                assert cc.upper[i - 1][idx][k] == pytest.approx(
                    by_tag[f"13b.{idx + 1}:i{i}"].rhs, rel=1e-12
                )
            assert cc.sum_bound[i - 1][k] == pytest.approx(by_tag[f"13c:i{i}"].rhs, rel=1e-12)


def test_eta_shift(fig2z):
    """Raising eta by delta relaxes each bound by its printed multiplicity."""
    delta = 0.375
    hi = replace(fig2z, eta=fig2z.eta + delta)
    rng = np.random.default_rng(22)
    for _ in range(25):
        pt = SweepPoint(
            rng.uniform(0.0, fig2z.rho_max), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)
        )
        lo = _constants_by_tag(build_conditions(pt, fig2z))
        up = _constants_by_tag(build_conditions(pt, hi))
        for i in (1, 2):
            assert up[f"13a:i{i}"].rhs == pytest.approx(
                max(lo[f"13a:i{i}"].rhs - delta, 0.0), abs=1e-12
            )
            assert up[f"13b.1:i{i}"].rhs == pytest.approx(
                lo[f"13b.1:i{i}"].rhs + delta, abs=1e-12
            )
            assert up[f"13b.2:i{i}"].rhs == pytest.approx(
                lo[f"13b.2:i{i}"].rhs + delta, abs=1e-12
            )
            assert up[f"13b.3:i{i}"].rhs == pytest.approx(
                lo[f"13b.3:i{i}"].rhs + 2.0 * delta, abs=1e-12
            )
            assert up[f"13c:i{i}"].rhs == pytest.approx(lo[f"13c:i{i}"].rhs + delta, abs=1e-12)


def test_no_feedback_system(fig2z):
    off = replace(
        fig2z, fb_mode_1=FeedbackMode.OFF, fb_mode_2=FeedbackMode.OFF,
        snr_bwd_1=0.0, snr_bwd_2=0.0,
    )
    assert off.rho_max == 0.0
    slc = build_conditions(SweepPoint(0.0, 0.4, 0.7), off)
    by_tag = _constants_by_tag(slc)
    # with a3 identically zero, (13a) reduces to (a2 - a4 - eta)^+
    from icnash import a2, a4

    for i in (1, 2):
        mu_j = 0.7 if i == 1 else 0.4
        want = max(a2(off, i, 0.0) - a4(off, i, 0.0, mu_j) - off.eta, 0.0)
        assert by_tag[f"13a:i{i}"].rhs == pytest.approx(want, abs=1e-12)
    with pytest.raises(DomainError):
        build_conditions(SweepPoint(0.2, 0.4, 0.7), off)


def test_mu_one_drops_a4(fig2z):
    from icnash import a2, a3

    slc = build_conditions(SweepPoint(0.1, 1.0, 1.0), fig2z)
    by_tag = _constants_by_tag(slc)
    for i in (1, 2):
        want = max(a2(fig2z, i, 0.1) - a3(fig2z, i, 0.1, 1.0) - fig2z.eta, 0.0)
        assert by_tag[f"13a:i{i}"].rhs == pytest.approx(want, abs=1e-12)


def test_perfect_mode_matches_huge_snr(fig2z):
    perfect = replace(fig2z, fb_mode_1=FeedbackMode.PERFECT, fb_mode_2=FeedbackMode.PERFECT)
    huge = replace(fig2z, snr_bwd_1=1e12, snr_bwd_2=1e12)
    rng = np.random.default_rng(23)
    for _ in range(30):
        pt = SweepPoint(
            rng.uniform(0.0, fig2z.rho_max), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)
        )
        a = _constants_by_tag(build_conditions(pt, perfect))
        b = _constants_by_tag(build_conditions(pt, huge))
        for tag in a:
            assert a[tag].rhs == pytest.approx(b[tag].rhs, abs=1e-6), tag


def test_errata_flag_changes_only_second_sum(fig2z):
    pt = SweepPoint(0.2, 0.3, 0.9)
    base = _constants_by_tag(build_conditions(pt, fig2z))
    flagged = _constants_by_tag(build_conditions(pt, fig2z, errata_c13_mu=True))
    # for i=1 the verbatim mu_1 equals mu_i, so nothing moves
    assert flagged["13c:i1"].rhs == pytest.approx(base["13c:i1"].rhs, abs=1e-15)
    assert flagged["13c:i2"].rhs != pytest.approx(base["13c:i2"].rhs, abs=1e-9)
    for tag in base:
        if tag not in ("13c:i2",):
            assert flagged[tag].rhs == pytest.approx(base[tag].rhs, abs=1e-15), tag


# -- tin bound / impossibility region ----------------------------------------


def test_tin_bound_frozen(fig2z):
    bound = tin_bound(fig2z)
    assert bound.l1 == pytest.approx(0.41947262178797086, rel=1e-9)
    assert bound.l2 == 0.0


def test_tin_bound_clamps():
    p = ChannelParams.from_db((24.0, 3.0), (16.0, 9.0), (18.0, 8.0), eta=2.0)
    bound = tin_bound(p)
    assert bound.l1 == 0.0  # eta exceeds the unclamped value 1.4195
    assert bound.l2 == 0.0
    zero = ChannelParams(0.0, 0.0, inr_12=2.0, inr_21=2.0)
    assert tin_bound(zero) == tin_bound(zero).__class__(0.0, 0.0)


def test_tin_bound_oracle_random():
    rng = np.random.default_rng(24)
    for _ in range(100):
        snr1, snr2 = 10.0 ** rng.uniform(-2, 5, 2)
        inr12, inr21 = 10.0 ** rng.uniform(0.05, 4, 2)
        eta = rng.uniform(1.0, 3.0)
        p = ChannelParams(snr1, snr2, inr_12=inr12, inr_21=inr21, eta=eta)
        P = orc.make_params(snr1, snr2, inr12, inr21, 1, 1, eta)
        bound = tin_bound(p)
        assert bound.l1 == pytest.approx(float(orc.o_tin(P, 1)), rel=1e-9, abs=1e-12)
        assert bound.l2 == pytest.approx(float(orc.o_tin(P, 2)), rel=1e-9, abs=1e-12)


def test_impossibility_region_default_box(fig2z):
    region = impossibility_region(fig2z)
    bound = tin_bound(fig2z)
    rmax = default_rmax(fig2z)
    assert region.contains(bound.l1, bound.l2)
    assert region.contains(bound.l1 + 0.1, 0.5)
    assert not region.contains(bound.l1 - 1e-6, 0.5)
    assert not region.contains(rmax + 0.1, 0.5)


def test_impossibility_region_box_converse(fig2z):
    converse = AchievableRegionInput.from_polygon([(0, 0), (3, 0), (3, 3), (0, 3)])
    region = impossibility_region(fig2z, converse)
    bound = tin_bound(fig2z)
    assert len(region.polygons) == 1
    xs = sorted({round(x, 9) for x, _ in region.polygons[0]})
    assert xs[0] == pytest.approx(bound.l1, abs=1e-9)
    assert xs[-1] == pytest.approx(3.0, abs=1e-12)


def test_vacuous_tin_keeps_converse(fig2z):
    p = replace(fig2z, eta=5.0)  # L = (0, 0)
    converse = AchievableRegionInput.from_polygon([(0, 0), (2, 0), (0, 2)])
    region = impossibility_region(p, converse)
    assert len(region.polygons) == 1
    _want = [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]
    got = sorted((round(x, 9), round(y, 9)) for x, y in region.polygons[0])
    assert got == sorted(_want)


# -- region-level behavior ----------------------------------------------------


def test_huge_eta_saturates_to_box(fig2z):
    p = replace(fig2z, eta=100.0)
    res = ne_region(p, sweep=SweepSpec(2, 2, 2), raster_n=64)
    assert bool(res.region.grid.all())


def test_single_point_sweep_equals_slice(fig2z):
    from icnash import RasterRegion, slice_to_polygon
    from icnash.sweep import run_sweep

    pt = np.array([[0.0, 0.5, 0.25]])
    res = run_sweep(fig2z, None, SweepSpec(1, 1, 1), raster_n=128, points=pt)
    poly = slice_to_polygon(build_conditions(SweepPoint(0.0, 0.5, 0.25), fig2z))
    direct = RasterRegion(128, res.rmax)
    direct.fill_convex_polygon(poly, check_window=False)
    assert res.region.xor_cells(direct) == 0


def test_region_contained_in_achievable_polygon(fig2z):
    tri = [(0.0, 0.0), (3.5, 0.0), (0.0, 2.5)]
    ach = AchievableRegionInput.from_polygon(tri)
    res = ne_region(fig2z, ach, SweepSpec(6, 5, 5), raster_n=128)
    from icnash import RasterRegion

    mask = RasterRegion(128, res.rmax)
    mask.fill_convex_polygon(tri, check_window=False)
    assert not np.any(res.region.grid & ~mask.grid)


def test_exact_representation_close_to_raster(fig2z):
    spec = SweepSpec(4, 3, 3)
    res_r = ne_region(fig2z, sweep=spec, raster_n=512)
    res_e = ne_region(fig2z, sweep=spec, representation="exact")
    assert res_e.region.area() == pytest.approx(res_r.region.area(), rel=0.02)
    assert res_e.frontier.points[-1].r1 == pytest.approx(
        res_r.frontier.points[-1].r1, abs=2 * res_r.region.cell
    )


def test_empty_region_error_with_diagnostics(fig2z):
    tiny = AchievableRegionInput.from_polygon([(0, 0), (0.3, 0), (0, 0.3)])
    with pytest.raises(EmptyRegionError) as err:
        ne_region(fig2z, tiny, SweepSpec(3, 3, 3), raster_n=64)
    assert isinstance(err.value.diagnostics, dict)


def test_empty_sweep_invalid(fig2z):
    from icnash.sweep import run_sweep

    with pytest.raises(InvalidArgumentError):
        run_sweep(fig2z, None, SweepSpec(1, 1, 1), points=np.empty((0, 3)))


def test_eta_monotonicity_trivial_and_saturated(fig2z):
    rep = check_eta_monotonicity(
        fig2z, None, SweepSpec(4, 4, 4), [1.0, 1.0], raster_n=96
    )
    assert rep.ok
    rep2 = check_eta_monotonicity(
        fig2z, None, SweepSpec(4, 4, 4), [1.0, 100.0], raster_n=96
    )
    assert rep2.ok
    assert rep2.areas[1] == pytest.approx(default_rmax(fig2z) ** 2, rel=1e-9)
    with pytest.raises(InvalidArgumentError):
        check_eta_monotonicity(fig2z, None, SweepSpec(2, 2, 2), [2.0, 1.0])
    with pytest.raises(InvalidArgumentError):
        check_eta_monotonicity(fig2z, None, SweepSpec(2, 2, 2), [0.5, 1.0])


def test_eta_monotonicity_chain(fig2z):
    rep = check_eta_monotonicity(
        fig2z, None, SweepSpec(8, 7, 7), [1.0, 1.5, 2.0], raster_n=256
    )
    assert rep.ok
    assert rep.areas[0] < rep.areas[1] < rep.areas[2]


def test_achievable_polygon_validation():
    with pytest.raises(InvalidArgumentError):
        AchievableRegionInput.from_polygon([(1, 1), (2, 1), (2, 2)])  # origin outside
    with pytest.raises(InvalidArgumentError):
        AchievableRegionInput.from_polygon([(0, 0), (1, 0)])
    with pytest.raises(InvalidArgumentError):
        AchievableRegionInput.from_polygon([(0, 0), (1, 0), (float("inf"), 1)])


def test_default_rmax_formula(fig2z):
    from icnash import a2

    want = max(a2(fig2z, 1, fig2z.rho_max), a2(fig2z, 2, fig2z.rho_max)) + 1.0
    assert default_rmax(fig2z) == pytest.approx(want, rel=1e-12)
