"""Achievable equilibrium rate regions for the two-user Gaussian interference
channel with noisy channel-output feedback: closed-form rate functions,
condition-system assembly, rate-space geometry and parameter sweeps."""

from .errors import (
    ConfigError,
    DomainError,
    EmptyRegionError,
    InvalidArgumentError,
    OutOfWindowError,
    RateRegionError,
    UnboundedRegionError,
    UnsupportedRegimeError,
)
from .geometry import (
    ConvexSlice,
    ExactRegion,
    Frontier,
    HalfPlane,
    RasterRegion,
    RatePair,
    RegionDistance,
    pareto_frontier,
    region_distance,
    slice_to_polygon,
    union_accumulate,
)
from .neregion import (
    AchievableRegionInput,
    TinBound,
    build_conditions,
    check_eta_monotonicity,
    default_rmax,
    impossibility_region,
    ne_region,
    tin_bound,
)
from .params import (
    ChannelGains,
    ChannelParams,
    FeedbackMode,
    SimConfig,
    db_to_linear,
    linear_to_db,
    params_from_gains,
    simulate_feedback_variance,
    snr_bwd_closed_form,
)
from .ratefuncs import (
    SweepPoint,
    a1,
    a2,
    a3,
    a3_perfect_limit,
    a4,
    a5,
    a6,
    a7,
    b1,
    b2,
    eval_table,
    resolve_feedback_mode,
)
from .sweep import SweepSpec, make_grid, run_sweep

__version__ = "0.1.0"

__all__ = [
    "ChannelGains",
    "ChannelParams",
    "FeedbackMode",
    "SimConfig",
    "SweepPoint",
    "SweepSpec",
    "AchievableRegionInput",
    "TinBound",
    "HalfPlane",
    "ConvexSlice",
    "RatePair",
    "Frontier",
    "RasterRegion",
    "ExactRegion",
    "RegionDistance",
    "RateRegionError",
    "InvalidArgumentError",
    "ConfigError",
    "DomainError",
    "UnsupportedRegimeError",
    "UnboundedRegionError",
    "OutOfWindowError",
    "EmptyRegionError",
    "db_to_linear",
    "linear_to_db",
    "params_from_gains",
    "snr_bwd_closed_form",
    "simulate_feedback_variance",
    "b1",
    "b2",
    "a1",
    "a2",
    "a3",
    "a3_perfect_limit",
    "a4",
    "a5",
    "a6",
    "a7",
    "resolve_feedback_mode",
    "eval_table",
    "slice_to_polygon",
    "union_accumulate",
    "pareto_frontier",
    "region_distance",
    "build_conditions",
    "ne_region",
    "tin_bound",
    "impossibility_region",
    "check_eta_monotonicity",
    "default_rmax",
    "make_grid",
    "run_sweep",
]
