"""RF antenna gains and the direct space-to-Earth link budget.

Implements the standard budget chain Pr/N0 -> Pd/N0 -> Eb/N0 -> margin,
plus its inversion to an achievable data rate for a given coding
threshold and margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from relaylink.errors import ConfigurationError
from relaylink.quantities import (
    BOLTZMANN,
    SPEED_OF_LIGHT,
    fraction,
    linear_from_db,
    non_negative,
    positive,
)

SUPPRESSED = "suppressed"
RESIDUAL = "residual"

# Required Eb/N0 thresholds in dB for the coding schemes referenced by the
# reference scenarios. These are data, not derivations: the toolkit treats
# decoder performance of the standardized telemetry codes as given.
CODING_THRESHOLDS_DB = {
    "turbo-1/4": 0.23,   # rate-1/4 (28560,7136) turbo, BER 1e-6
    "turbo-1/6": -0.10,  # rate-1/6 (42840,7136) turbo; configurable default
    "conv-rs": 4.0,      # punctured (7,3/4) conv + (255,223) RS, depth 16
}


@dataclass(frozen=True)
class RfAntenna:
    """Parabolic antenna described by diameter and aperture efficiency."""

    diameter_m: float
    efficiency: float = 0.7

    def __post_init__(self):
        positive(self.diameter_m, "diameter_m")
        fraction(self.efficiency, "efficiency")


@dataclass(frozen=True)
class ModulationConfig:
    """Carrier mode and, for residual carrier, the modulation index in radians."""

    carrier: str = SUPPRESSED
    modulation_index_rad: float | None = None

    def __post_init__(self):
        if self.carrier not in (SUPPRESSED, RESIDUAL):
            raise ConfigurationError(f"unknown carrier mode {self.carrier!r}")
        if self.carrier == RESIDUAL:
            if self.modulation_index_rad is None:
                raise ConfigurationError("residual carrier requires a modulation index")
            beta = self.modulation_index_rad
            if not 0.0 < beta < math.pi / 2:
                raise ConfigurationError(
                    f"modulation index must lie in (0, pi/2), got {beta!r}"
                )


@dataclass(frozen=True)
class StationFigure:
    """Receive figure of merit: either G/T directly or gain plus system temperature.

    The antenna is kept even when G/T is given, because pointing-loss
    evaluation needs the physical aperture gain.
    """

    g_over_t_db_per_k: float | None = None
    antenna: RfAntenna | None = None
    system_temperature_k: float | None = None

    def __post_init__(self):
        has_got = self.g_over_t_db_per_k is not None
        has_pair = self.antenna is not None and self.system_temperature_k is not None
        if not has_got and not has_pair:
            raise ConfigurationError(
                "station needs g_over_t_db_per_k or antenna + system_temperature_k"
            )
        if self.system_temperature_k is not None:
            positive(self.system_temperature_k, "system_temperature_k")

    def gain_over_kt(self, frequency_hz: float) -> float:
        """Linear Gr / (k * Tsyst) in 1/(W/Hz), preferring the G/T figure."""
        if self.g_over_t_db_per_k is not None:
            return linear_from_db(self.g_over_t_db_per_k) / BOLTZMANN
        gain = parabolic_gain(self.antenna, frequency_hz)
        return gain / (BOLTZMANN * self.system_temperature_k)


@dataclass(frozen=True)
class DirectLinkInputs:
    """Everything the direct-link budget needs, attenuations in dB >= 0."""

    tx_power_w: float
    tx_antenna: RfAntenna
    tx_loss_db: float
    rx_loss_db: float
    rx_station: StationFigure
    frequency_hz: float
    range_m: float
    atmospheric_db: float = 0.0
    pointing_tx_db: float = 0.0
    pointing_rx_db: float = 0.0
    modulation: ModulationConfig = field(default_factory=ModulationConfig)

    def __post_init__(self):
        positive(self.tx_power_w, "tx_power_w")
        positive(self.frequency_hz, "frequency_hz")
        positive(self.range_m, "range_m")
        for name in ("tx_loss_db", "rx_loss_db", "atmospheric_db",
                     "pointing_tx_db", "pointing_rx_db"):
            non_negative(getattr(self, name), name)


def parabolic_gain(antenna: RfAntenna, frequency_hz: float) -> float:
    """Linear aperture gain eta * (pi * d * f / c)^2."""
    positive(frequency_hz, "frequency_hz")
    return antenna.efficiency * (
        math.pi * antenna.diameter_m * frequency_hz / SPEED_OF_LIGHT
    ) ** 2


def free_space_loss(frequency_hz: float, range_m: float) -> float:
    """Linear spreading loss (4 * pi * f * r / c)^2, always > 1 in the far field."""
    return (4.0 * math.pi * frequency_hz * range_m / SPEED_OF_LIGHT) ** 2


def direct_pr_n0(inputs: DirectLinkInputs) -> float:
    """Received power over noise density in hertz for a direct link."""
    gain_tx = parabolic_gain(inputs.tx_antenna, inputs.frequency_hz)
    losses = linear_from_db(
        inputs.tx_loss_db
        + inputs.rx_loss_db
        + inputs.atmospheric_db
        + inputs.pointing_tx_db
        + inputs.pointing_rx_db
    )
    spreading = free_space_loss(inputs.frequency_hz, inputs.range_m)
    rx_figure = inputs.rx_station.gain_over_kt(inputs.frequency_hz)
    return inputs.tx_power_w * gain_tx * rx_figure / (losses * spreading)


def data_power_share(pr_n0: float, modulation: ModulationConfig) -> float:
    """Pd/N0: the part of Pr/N0 apportioned to data.

    Identity for suppressed carrier; sin^2(beta) share for residual carrier.
    """
    positive(pr_n0, "pr_n0")
    if modulation.carrier == SUPPRESSED:
        return pr_n0
    return pr_n0 * math.sin(modulation.modulation_index_rad) ** 2


def eb_n0(pd_n0: float, rate_bps: float) -> float:
    """Available Eb/N0 (linear) at data rate ``rate_bps``."""
    return positive(pd_n0, "pd_n0") / positive(rate_bps, "rate_bps")


def margin_db(available_db: float, required_db: float) -> float:
    """Link margin: available minus required Eb/N0, both in dB."""
    return available_db - required_db


def achievable_rate(pd_n0: float, required_eb_n0_db: float, margin: float) -> float:
    """Data rate in bps that leaves exactly ``margin`` dB above the threshold."""
    positive(pd_n0, "pd_n0")
    return pd_n0 / linear_from_db(required_eb_n0_db + margin)
