"""Named parameter presets matching the three worked examples.

Each preset fixes the forward SNRs, the cross INRs, the baseline feedback
SNRs and eta, and carries the set of first-pair feedback levels that the
``region`` command sweeps to overlay several frontiers in one figure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from .errors import ConfigError
from .params import ChannelParams

__all__ = ["Preset", "PRESETS", "get_preset"]


@dataclass(frozen=True)
class Preset:
    name: str
    snr_fwd_db: tuple[float, float]
    inr_db: tuple[float, float]
    snr_bwd_db: tuple[float, float]
    eta: float
    snr_bwd_1_variants_db: tuple[float, ...]

    def params(
        self,
        snr_bwd_1_db: Optional[Any] = None,
        snr_bwd_2_db: Optional[Any] = None,
        eta: Optional[float] = None,
    ) -> ChannelParams:
        """Channel parameters, optionally overriding the feedback levels."""
        bwd = (
            self.snr_bwd_db[0] if snr_bwd_1_db is None else snr_bwd_1_db,
            self.snr_bwd_db[1] if snr_bwd_2_db is None else snr_bwd_2_db,
        )
        return ChannelParams.from_db(
            self.snr_fwd_db, self.inr_db, bwd, self.eta if eta is None else eta
        )

    def channel_json(self) -> dict:
        return {
            "snr_fwd_db": list(self.snr_fwd_db),
            "inr_db": list(self.inr_db),
            "snr_bwd_db": list(self.snr_bwd_db),
            "eta": self.eta,
        }


PRESETS: dict[str, Preset] = {
    "fig2z": Preset(
        name="fig2z",
        snr_fwd_db=(24.0, 3.0),
        inr_db=(16.0, 9.0),
        snr_bwd_db=(18.0, 8.0),
        eta=1.0,
        snr_bwd_1_variants_db=(-100.0, 18.0, 50.0),
    ),
    "fig3": Preset(
        name="fig3",
        snr_fwd_db=(24.0, 18.0),
        inr_db=(16.0, 10.0),
        snr_bwd_db=(18.0, 12.0),
        eta=1.0,
        snr_bwd_1_variants_db=(-100.0, 18.0, 50.0),
    ),
    "fig4": Preset(
        name="fig4",
        snr_fwd_db=(24.0, 18.0),
        inr_db=(48.0, 30.0),
        snr_bwd_db=(18.0, 12.0),
        eta=1.0,
        snr_bwd_1_variants_db=(-100.0, 18.0, 50.0),
    ),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}",
            field="preset",
        ) from None
