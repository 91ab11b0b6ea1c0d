"""Closed-form rate functions of the equilibrium region description.

Two quadratic/affine building blocks (b1, b2) and seven log-rate functions
(a1..a7) per transmitter-receiver pair, all in bits per channel use with
base-2 logarithms. Every function accepts scalars or numpy arrays in the
sweep arguments (rho, mu) and broadcasts; channel parameters stay fixed.

The feedback-dependent function a3 honors the per-pair feedback mode: the
finite-SNR formula, its perfect-feedback limit, or the no-feedback limit
(identically zero, with the correlation parameter pinned to 0).

Positive-part clamping is applied only where the region description itself
prints it, never inside these functions: their nonnegativity is a property
of the formulas and is asserted by tests, not enforced here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError
from .params import ChannelParams, FeedbackMode, other

__all__ = [
    "SweepPoint",
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
    "EVAL_TABLE_QUANTITIES",
]

ArrayLike = Union[float, np.ndarray]

_DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class SweepPoint:
    """One (rho, mu_1, mu_2) triple of the sweep domain.

    The parameter-dependent upper limit on rho is checked where channel
    parameters are in scope (b2 and the condition builder); construction
    checks only the parameter-free box bounds.
    """

    rho: float
    mu_1: float
    mu_2: float

    def __post_init__(self):
        if not (0.0 - _DOMAIN_TOL <= self.rho <= 1.0 + _DOMAIN_TOL):
            raise DomainError(f"rho must lie in [0, 1], got {self.rho!r}")
        for name in ("mu_1", "mu_2"):
            v = getattr(self, name)
            if not (0.0 - _DOMAIN_TOL <= v <= 1.0 + _DOMAIN_TOL):
                raise DomainError(f"{name} must lie in [0, 1], got {v!r}")

    def mu(self, i: int) -> float:
        return self.mu_1 if i == 1 else self.mu_2


def _check_rho_unit(rho: ArrayLike) -> None:
    r = np.asarray(rho, dtype=float)
    if np.any(r < -_DOMAIN_TOL) or np.any(r > 1.0 + _DOMAIN_TOL):
        raise DomainError(f"rho must lie in [0, 1], got {rho!r}")


def _check_rho_domain(p: ChannelParams, rho: ArrayLike) -> None:
    r = np.asarray(rho, dtype=float)
    hi = p.rho_max
    if np.any(r < -_DOMAIN_TOL) or np.any(r > hi + _DOMAIN_TOL):
        raise DomainError(f"rho must lie in [0, {hi}], got {rho!r}")


def _check_mu(mu: ArrayLike) -> None:
    m = np.asarray(mu, dtype=float)
    if np.any(m < -_DOMAIN_TOL) or np.any(m > 1.0 + _DOMAIN_TOL):
        raise DomainError(f"mu must lie in [0, 1], got {mu!r}")


def b1(p: ChannelParams, i: int, rho: ArrayLike) -> ArrayLike:
    """Correlated combined receive power of pair i: SNR + 2 rho sqrt(SNR INR) + INR."""
    _check_rho_unit(rho)
    s = p.snr_fwd(i)
    q = p.inr_at(i)
    return s + 2.0 * np.asarray(rho, dtype=float) * np.sqrt(s * q) + q


def b2(p: ChannelParams, i: int, rho: ArrayLike) -> ArrayLike:
    """Residual interference margin of pair i: (1 - rho) INR - 1; >= 0 on the domain."""
    _check_rho_domain(p, rho)
    return (1.0 - np.asarray(rho, dtype=float)) * p.inr_at(i) - 1.0


def a1(p: ChannelParams, i: int) -> float:
    """Constant term: half log2(2 + SNR_i / INR_from_i) - 1/2."""
    return 0.5 * np.log2(2.0 + p.snr_fwd(i) / p.inr_from(i)) - 0.5


def a2(p: ChannelParams, i: int, rho: ArrayLike) -> ArrayLike:
    """Single-pair rate cap: half log2(b1 + 1) - 1/2, nondecreasing in rho."""
    return 0.5 * np.log2(b1(p, i, rho) + 1.0) - 0.5


def _a3_noisy(p: ChannelParams, i: int, rho: ArrayLike, mu: ArrayLike) -> ArrayLike:
    snr_b = p.snr_bwd(i)
    base = b1(p, i, 1.0) + 1.0
    bb = b2(p, i, rho)
    num = snr_b * (bb + 2.0) + base
    den = snr_b * ((1.0 - np.asarray(mu, dtype=float)) * bb + 2.0) + base
    return 0.5 * np.log2(num / den)


def a3_perfect_limit(p: ChannelParams, i: int, rho: ArrayLike, mu: ArrayLike) -> ArrayLike:
    """Feedback gain of pair i in the perfect-feedback limit:
    half log2((b2 + 2) / ((1 - mu) b2 + 2))."""
    _check_mu(mu)
    bb = b2(p, i, rho)
    return 0.5 * np.log2((bb + 2.0) / ((1.0 - np.asarray(mu, dtype=float)) * bb + 2.0))


def _a3_off(p: ChannelParams, i: int, rho: ArrayLike, mu: ArrayLike) -> ArrayLike:
    _check_mu(mu)
    r = np.asarray(rho, dtype=float)
    if np.any(np.abs(r) > _DOMAIN_TOL):
        raise DomainError("no-feedback mode requires rho = 0")
    shape = np.broadcast_shapes(np.shape(rho), np.shape(mu))
    return np.zeros(shape) if shape else 0.0


def a3(p: ChannelParams, i: int, rho: ArrayLike, mu: ArrayLike) -> ArrayLike:
    """Feedback gain of pair i, dispatching on the pair's feedback mode."""
    mode = p.fb_mode(i)
    if mode is FeedbackMode.PERFECT:
        return a3_perfect_limit(p, i, rho, mu)
    if mode is FeedbackMode.OFF:
        return _a3_off(p, i, rho, mu)
    _check_mu(mu)
    return _a3_noisy(p, i, rho, mu)


def resolve_feedback_mode(p: ChannelParams, i: int) -> Callable[[ArrayLike, ArrayLike], ArrayLike]:
    """Return the effective a3 evaluator for pair i per its feedback mode."""
    mode = p.fb_mode(i)
    if mode is FeedbackMode.PERFECT:
        return lambda rho, mu: a3_perfect_limit(p, i, rho, mu)
    if mode is FeedbackMode.OFF:
        return lambda rho, mu: _a3_off(p, i, rho, mu)

    def noisy(rho: ArrayLike, mu: ArrayLike) -> ArrayLike:
        _check_mu(mu)
        return _a3_noisy(p, i, rho, mu)

    return noisy


def a4(p: ChannelParams, i: int, rho: ArrayLike, mu: ArrayLike) -> ArrayLike:
    """Private-stream cost: half log2((1 - mu) b2 + 2) - 1/2, nonincreasing in mu."""
    _check_mu(mu)
    return 0.5 * np.log2((1.0 - np.asarray(mu, dtype=float)) * b2(p, i, rho) + 2.0) - 0.5


def a5(p: ChannelParams, i: int, rho: ArrayLike, mu: ArrayLike) -> ArrayLike:
    """half log2(2 + SNR_i/INR_from_i + (1 - mu) b2_i) - 1/2."""
    _check_mu(mu)
    return (
        0.5
        * np.log2(
            2.0
            + p.snr_fwd(i) / p.inr_from(i)
            + (1.0 - np.asarray(mu, dtype=float)) * b2(p, i, rho)
        )
        - 0.5
    )


def a6(p: ChannelParams, i: int, rho: ArrayLike, mu: ArrayLike) -> ArrayLike:
    """half log2((SNR_i/INR_from_i) ((1 - mu) b2_j + 1) + 2) - 1/2.

    Uses the residual margin of the complement pair.
    """
    _check_mu(mu)
    j = other(i)
    ratio = p.snr_fwd(i) / p.inr_from(i)
    return (
        0.5 * np.log2(ratio * ((1.0 - np.asarray(mu, dtype=float)) * b2(p, j, rho) + 1.0) + 2.0)
        - 0.5
    )


def a7(p: ChannelParams, i: int, rho: ArrayLike, mu_1: ArrayLike, mu_2: ArrayLike) -> ArrayLike:
    """Cross-coupled cap mixing both split parameters:
    half log2((SNR_i/INR_from_i)((1 - mu_i) b2_j + 1) + (1 - mu_j) b2_i + 2) - 1/2."""
    _check_mu(mu_1)
    _check_mu(mu_2)
    j = other(i)
    mu_i = np.asarray(mu_1 if i == 1 else mu_2, dtype=float)
    mu_j = np.asarray(mu_2 if i == 1 else mu_1, dtype=float)
    ratio = p.snr_fwd(i) / p.inr_from(i)
    return (
        0.5
        * np.log2(ratio * ((1.0 - mu_i) * b2(p, j, rho) + 1.0) + (1.0 - mu_j) * b2(p, i, rho) + 2.0)
        - 0.5
    )


EVAL_TABLE_QUANTITIES = ("a1", "a2", "a3", "a4", "a5", "a6", "a7", "b1", "b2")


def eval_table(p: ChannelParams, pt: SweepPoint) -> list[tuple[str, int, float]]:
    """Evaluate every a/b quantity of both pairs at one sweep point.

    mu-taking entries of pair i are evaluated at the complement pair's split
    mu_j, which is how the equilibrium conditions consume them; a7 takes both
    splits by definition. Rows come out as (quantity, pair, value).
    """
    rows = []
    for i in (1, 2):
        mu_j = pt.mu(other(i))
        values = {
            "a1": a1(p, i),
            "a2": a2(p, i, pt.rho),
            "a3": a3(p, i, pt.rho, mu_j),
            "a4": a4(p, i, pt.rho, mu_j),
            "a5": a5(p, i, pt.rho, mu_j),
            "a6": a6(p, i, pt.rho, mu_j),
            "a7": a7(p, i, pt.rho, pt.mu_1, pt.mu_2),
            "b1": b1(p, i, pt.rho),
            "b2": b2(p, i, pt.rho),
        }
        for name in EVAL_TABLE_QUANTITIES:
            rows.append((name, i, float(values[name])))
    return rows
