"""Semantic exception hierarchy for the icnash package.

Exit-code mapping used by the CLI lives in :mod:`icnash.cli`; library code
raises these instead of bare ValueError so callers can tell validation
problems from numeric/domain problems.
"""

from __future__ import annotations


class RateRegionError(Exception):
    """Base class for all icnash errors."""


class InvalidArgumentError(RateRegionError, ValueError):
    """An argument violates its contract (type, range, finiteness, shape)."""


class ConfigError(InvalidArgumentError):
    """A configuration document failed to parse or validate.

    Carries the offending field name when known.
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field is not None:
            message = f"{message} (field: {field})"
        super().__init__(message)


class UnsupportedRegimeError(RateRegionError, ValueError):
    """Channel parameters fall in the excluded regime INR <= 1."""


class DomainError(RateRegionError, ValueError):
    """A sweep parameter (rho, mu) lies outside its admissible domain."""


class UnboundedRegionError(RateRegionError):
    """A half-plane system has an unbounded feasible set."""


class OutOfWindowError(RateRegionError):
    """A polygon does not fit in the raster window [0, rmax]^2."""


class EmptyRegionError(RateRegionError):
    """An operation that requires a nonempty region got an empty one.

    ``diagnostics`` holds a human-readable hint about which constraint
    family emptied the region, when the caller can tell.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)
