"""Channel parameterization for the two-user Gaussian interference channel
with noisy output feedback.

The six fixed parameters are the forward SNRs, the two cross INRs and the
feedback-link SNRs, all stored in linear scale; decibels appear only at the
I/O boundary. Feedback links may carry an analytic limit tag instead of a
finite value (perfect feedback / no feedback), which downstream evaluators
resolve to closed-form limits.

Also houses a seed-deterministic Monte-Carlo sanity check tying the
feedback-SNR definition back to the time-domain signal model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from .errors import ConfigError, InvalidArgumentError, UnsupportedRegimeError

__all__ = [
    "FeedbackMode",
    "ChannelGains",
    "ChannelParams",
    "SimConfig",
    "FeedbackVarianceEstimate",
    "db_to_linear",
    "linear_to_db",
    "params_from_gains",
    "snr_bwd_closed_form",
    "simulate_feedback_variance",
    "other",
]


def other(i: int) -> int:
    """Complement pair index: 1 -> 2, 2 -> 1."""
    if i not in (1, 2):
        raise InvalidArgumentError(f"pair index must be 1 or 2, got {i!r}")
    return 3 - i


def db_to_linear(x_db: float) -> float:
    """Convert a decibel power value to a linear power ratio, 10^(x/10)."""
    x_db = float(x_db)
    if not math.isfinite(x_db):
        raise InvalidArgumentError(f"dB value must be finite, got {x_db!r}")
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    """Convert a linear power ratio (> 0) to decibels."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise InvalidArgumentError(f"linear value must be finite and > 0, got {x!r}")
    return 10.0 * math.log10(x)


class FeedbackMode(str, Enum):
    """Per-pair feedback-link mode.

    NOISY evaluates the finite feedback SNR directly; PERFECT and OFF select
    the closed-form limits (feedback SNR to infinity, respectively to zero
    with the correlation parameter pinned at zero).
    """

    NOISY = "noisy"
    PERFECT = "perfect"
    OFF = "off"


def _check_gain(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise InvalidArgumentError(f"gain {name} must be finite and >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class ChannelGains:
    """Raw channel coefficients: direct, cross and feedback amplitude gains."""

    h_fwd_1: float
    h_fwd_2: float
    h_12: float
    h_21: float
    h_bwd_1: float
    h_bwd_2: float

    def __post_init__(self):
        for name in ("h_fwd_1", "h_fwd_2", "h_12", "h_21", "h_bwd_1", "h_bwd_2"):
            object.__setattr__(self, name, _check_gain(name, getattr(self, name)))

    def direct(self, i: int) -> float:
        return self.h_fwd_1 if i == 1 else self.h_fwd_2

    def cross_into(self, i: int) -> float:
        """Gain of the interfering path arriving at receiver ``i``."""
        return self.h_12 if i == 1 else self.h_21

    def feedback(self, i: int) -> float:
        return self.h_bwd_1 if i == 1 else self.h_bwd_2


def snr_bwd_closed_form(g: ChannelGains, i: int) -> float:
    """Closed-form feedback SNR of pair ``i`` from raw gains.

    Equals hb^2 * (hf^2 + 2*hf*hc + hc^2 + 1) with hf the direct gain, hc the
    cross gain into receiver i and hb the feedback gain; no regime validation
    is applied, so it stays usable for simulator sanity checks.
    """
    hf = g.direct(i)
    hc = g.cross_into(i)
    hb = g.feedback(i)
    return hb * hb * (hf * hf + 2.0 * hf * hc + hc * hc + 1.0)


@dataclass(frozen=True)
class ChannelParams:
    """The six channel parameters (linear scale) plus the equilibrium slack eta.

    Feedback links are tagged with a :class:`FeedbackMode`; ``snr_bwd_i`` is
    only meaningful for NOISY pairs (it is normalized to ``inf`` / ``0.0`` for
    the limit modes).
    """

    snr_fwd_1: float
    snr_fwd_2: float
    inr_12: float
    inr_21: float
    snr_bwd_1: float = 1.0
    snr_bwd_2: float = 1.0
    eta: float = 1.0
    fb_mode_1: FeedbackMode = FeedbackMode.NOISY
    fb_mode_2: FeedbackMode = FeedbackMode.NOISY

    def __post_init__(self):
        for name in ("snr_fwd_1", "snr_fwd_2"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0.0:
                raise InvalidArgumentError(f"{name} must be finite and >= 0, got {v!r}")
            object.__setattr__(self, name, v)
        for name in ("inr_12", "inr_21"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidArgumentError(f"{name} must be finite, got {v!r}")
            if v <= 1.0:
                raise UnsupportedRegimeError(
                    f"{name} = {v!r} <= 1: pair is noise-limited, outside the supported regime"
                )
            object.__setattr__(self, name, v)
        eta = float(self.eta)
        if not math.isfinite(eta) or eta < 1.0:
            raise InvalidArgumentError(f"eta must be finite and >= 1, got {eta!r}")
        object.__setattr__(self, "eta", eta)
        for idx, (vname, mname) in enumerate(
            (("snr_bwd_1", "fb_mode_1"), ("snr_bwd_2", "fb_mode_2")), start=1
        ):
            mode = FeedbackMode(getattr(self, mname))
            object.__setattr__(self, mname, mode)
            if mode is FeedbackMode.PERFECT:
                object.__setattr__(self, vname, math.inf)
            elif mode is FeedbackMode.OFF:
                object.__setattr__(self, vname, 0.0)
            else:
                v = float(getattr(self, vname))
                if not math.isfinite(v) or v < 0.0:
                    raise InvalidArgumentError(
                        f"{vname} must be finite and >= 0 in noisy mode, got {v!r}"
                    )
                object.__setattr__(self, vname, v)

    # -- pairwise accessors -------------------------------------------------

    def snr_fwd(self, i: int) -> float:
        return self.snr_fwd_1 if i == 1 else self.snr_fwd_2

    def inr_at(self, i: int) -> float:
        """INR of the interference arriving at receiver ``i``."""
        return self.inr_12 if i == 1 else self.inr_21

    def inr_from(self, i: int) -> float:
        """INR that transmitter ``i`` creates at the other receiver."""
        return self.inr_21 if i == 1 else self.inr_12

    def snr_bwd(self, i: int) -> float:
        return self.snr_bwd_1 if i == 1 else self.snr_bwd_2

    def fb_mode(self, i: int) -> FeedbackMode:
        return self.fb_mode_1 if i == 1 else self.fb_mode_2

    @property
    def rho_max(self) -> float:
        """Upper end of the correlation-parameter domain.

        Collapses to 0 when either pair runs without feedback, matching the
        no-feedback limit mode.
        """
        if FeedbackMode.OFF in (self.fb_mode_1, self.fb_mode_2):
            return 0.0
        return max(0.0, 1.0 - max(1.0 / self.inr_12, 1.0 / self.inr_21))

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_db(
        cls,
        snr_fwd_db: tuple[float, float],
        inr_db: tuple[float, float],
        snr_bwd_db: tuple[Any, Any],
        eta: float = 1.0,
    ) -> "ChannelParams":
        """Build from decibel values; ``snr_bwd_db`` entries may be the strings
        ``"inf"`` / ``"-inf"`` selecting the perfect / no-feedback limit modes.
        """
        bwd_vals = []
        bwd_modes = []
        for raw in snr_bwd_db:
            if isinstance(raw, str):
                tag = raw.strip().lower()
                if tag == "inf":
                    bwd_vals.append(math.inf)
                    bwd_modes.append(FeedbackMode.PERFECT)
                elif tag == "-inf":
                    bwd_vals.append(0.0)
                    bwd_modes.append(FeedbackMode.OFF)
                else:
                    raise ConfigError(
                        f"feedback dB entry must be a number, 'inf' or '-inf', got {raw!r}",
                        field="snr_bwd_db",
                    )
            else:
                bwd_vals.append(db_to_linear(raw))
                bwd_modes.append(FeedbackMode.NOISY)
        return cls(
            snr_fwd_1=db_to_linear(snr_fwd_db[0]),
            snr_fwd_2=db_to_linear(snr_fwd_db[1]),
            inr_12=db_to_linear(inr_db[0]),
            inr_21=db_to_linear(inr_db[1]),
            snr_bwd_1=bwd_vals[0],
            snr_bwd_2=bwd_vals[1],
            eta=eta,
            fb_mode_1=bwd_modes[0],
            fb_mode_2=bwd_modes[1],
        )

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ChannelParams":
        """Parse the channel-parameter JSON document.

        Schema: ``snr_fwd_db: [f, f]``, ``inr_db: [f, f]`` (order INR_12,
        INR_21), ``snr_bwd_db: [f|"inf"|"-inf", f|"inf"|"-inf"]``, ``eta: f``.
        """
        if not isinstance(doc, dict):
            raise ConfigError("channel config must be a JSON object")
        for field in ("snr_fwd_db", "inr_db", "snr_bwd_db"):
            if field not in doc:
                raise ConfigError("missing required field", field=field)
            v = doc[field]
            if not isinstance(v, (list, tuple)) or len(v) != 2:
                raise ConfigError("expected a 2-element array", field=field)
        for field in ("snr_fwd_db", "inr_db"):
            for entry in doc[field]:
                if not isinstance(entry, (int, float)) or isinstance(entry, bool):
                    raise ConfigError(f"expected a number, got {entry!r}", field=field)
        eta = doc.get("eta", 1.0)
        if not isinstance(eta, (int, float)) or isinstance(eta, bool):
            raise ConfigError(f"expected a number, got {eta!r}", field="eta")
        try:
            return cls.from_db(
                tuple(doc["snr_fwd_db"]), tuple(doc["inr_db"]), tuple(doc["snr_bwd_db"]), float(eta)
            )
        except ConfigError:
            raise
        except UnsupportedRegimeError:
            raise  # excluded-regime inputs are a domain problem, not a parse problem
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from exc

    def to_json_dict(self) -> dict:
        def bwd_entry(mode: FeedbackMode, value: float):
            if mode is FeedbackMode.PERFECT:
                return "inf"
            if mode is FeedbackMode.OFF:
                return "-inf"
            return linear_to_db(value) if value > 0.0 else -math.inf

        return {
            "snr_fwd_db": [
                linear_to_db(self.snr_fwd_1) if self.snr_fwd_1 > 0 else -math.inf,
                linear_to_db(self.snr_fwd_2) if self.snr_fwd_2 > 0 else -math.inf,
            ],
            "inr_db": [linear_to_db(self.inr_12), linear_to_db(self.inr_21)],
            "snr_bwd_db": [
                bwd_entry(self.fb_mode_1, self.snr_bwd_1),
                bwd_entry(self.fb_mode_2, self.snr_bwd_2),
            ],
            "eta": self.eta,
        }


def params_from_gains(g: ChannelGains, eta: float = 1.0) -> ChannelParams:
    """Derive the six channel parameters from raw gains.

    Forward SNRs are squared direct gains, INRs squared cross gains, and the
    feedback SNRs follow the closed form in :func:`snr_bwd_closed_form`.
    Raises :class:`UnsupportedRegimeError` when either derived INR is <= 1.
    """
    inr_12 = g.h_12 * g.h_12
    inr_21 = g.h_21 * g.h_21
    if inr_12 <= 1.0 or inr_21 <= 1.0:
        raise UnsupportedRegimeError(
            f"derived INRs ({inr_12!r}, {inr_21!r}) must both exceed 1"
        )
    return ChannelParams(
        snr_fwd_1=g.h_fwd_1 * g.h_fwd_1,
        snr_fwd_2=g.h_fwd_2 * g.h_fwd_2,
        inr_12=inr_12,
        inr_21=inr_21,
        snr_bwd_1=snr_bwd_closed_form(g, 1),
        snr_bwd_2=snr_bwd_closed_form(g, 2),
        eta=eta,
    )


@dataclass(frozen=True)
class SimConfig:
    """Monte-Carlo settings: block length, feedback delay and RNG seed."""

    n: int
    delay: int = 1
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.delay, int):
            raise InvalidArgumentError("block length and delay must be integers")
        if self.delay < 1:
            raise InvalidArgumentError(f"delay must be >= 1, got {self.delay}")
        if self.n <= self.delay:
            raise InvalidArgumentError(
                f"block length must exceed the delay, got n={self.n}, delay={self.delay}"
            )


@dataclass(frozen=True)
class FeedbackVarianceEstimate:
    """Empirical variances of the scaled fed-back channel outputs."""

    var_1: float
    var_2: float
    n_samples: int

    def var(self, i: int) -> float:
        return self.var_1 if i == 1 else self.var_2


def simulate_feedback_variance(g: ChannelGains, cfg: SimConfig) -> FeedbackVarianceEstimate:
    """Estimate the feedback-signal variance from a time-domain simulation.

    Both transmitters send the same unit-power Gaussian sequence (fully
    correlated inputs at full power, the configuration under which the
    closed-form feedback SNR is tight). Returns the empirical variance of
    the scaled, delayed channel output seen by each transmitter; the unit
    feedback noise is additive on top and deliberately not folded in.
    """
    rng = np.random.default_rng(cfg.seed)
    s = rng.standard_normal(cfg.n)
    estimates = []
    m = cfg.n - cfg.delay
    for i in (1, 2):
        z_fwd = rng.standard_normal(cfg.n)
        y_fwd = (g.direct(i) + g.cross_into(i)) * s + z_fwd
        fed_back = g.feedback(i) * y_fwd[:m]
        estimates.append(float(np.var(fed_back)))
    return FeedbackVarianceEstimate(var_1=estimates[0], var_2=estimates[1], n_samples=m)
