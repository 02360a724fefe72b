"""Photon-flux optical link budget, coded-PPM data rate, and max-range solver.

Optical antenna gains exclude efficiency by convention; efficiencies and
extra losses enter the budget as separate factors. Fluxes are photoelectron
rates, reported in phe/s internally and dB phe/ns at I/O.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from relaylink.errors import ConfigurationError
from relaylink.pointing import (
    PointingSpec,
    optimize_effective_gain,
    pointing_allowance,
)
from relaylink.quantities import (
    ASTRONOMICAL_UNIT,
    PLANCK,
    SPEED_OF_LIGHT,
    fraction,
    linear_from_db,
    non_negative,
    photon_energy,
    positive,
)

ENCODED_BLOCK_BITS = 15120
DEFAULT_OVERHEAD_BITS = 34  # 32-bit CRC plus 2 termination bits
PPM_ORDERS = (4, 8, 16, 32, 64, 128, 256)
CODE_RATES = ("1/3", "1/2", "2/3")


def flux_db_phe_ns(flux_phe_s: float) -> float:
    """Convert a photoelectron rate in phe/s to dB phe/ns."""
    return 10.0 * math.log10(positive(flux_phe_s, "flux_phe_s") * 1e-9)


def flux_phe_s(flux_db: float) -> float:
    """Convert dB phe/ns back to phe/s."""
    return 10.0 ** (flux_db / 10.0) * 1e9


def optical_gain(diameter_m: float, wavelength_m: float) -> float:
    """Linear far-field gain (pi D / lambda)^2, efficiency not included."""
    positive(diameter_m, "diameter_m")
    positive(wavelength_m, "wavelength_m")
    return (math.pi * diameter_m / wavelength_m) ** 2


def optical_path_loss(range_m: float, wavelength_m: float) -> float:
    """Linear space loss (4 pi r / lambda)^2."""
    positive(range_m, "range_m")
    positive(wavelength_m, "wavelength_m")
    return (4.0 * math.pi * range_m / wavelength_m) ** 2


def background_flux(source_power_w: float, frequency_hz: float) -> float:
    """Noise photoelectron rate P / (h f) in phe/s."""
    return positive(source_power_w, "source_power_w") / (
        PLANCK * positive(frequency_hz, "frequency_hz")
    )


@dataclass(frozen=True)
class OpticalTerminal:
    """Optical aperture with its efficiency carried separately from gain."""

    aperture_diameter_m: float
    efficiency: float

    def __post_init__(self):
        positive(self.aperture_diameter_m, "aperture_diameter_m")
        fraction(self.efficiency, "efficiency")

    def gain(self, wavelength_m: float) -> float:
        return optical_gain(self.aperture_diameter_m, wavelength_m)


@dataclass(frozen=True)
class ScppmRateParams:
    """Coded-PPM signaling parameters that fix the information bit rate."""

    ppm_order: int
    code_rate: str
    slot_time_s: float
    guard_factor: float = 1.25
    overhead_bits: int = DEFAULT_OVERHEAD_BITS

    def __post_init__(self):
        if self.ppm_order not in PPM_ORDERS:
            raise ConfigurationError(f"PPM order must be one of {PPM_ORDERS}")
        if self.code_rate not in CODE_RATES:
            raise ConfigurationError(f"code rate must be one of {CODE_RATES}")
        positive(self.slot_time_s, "slot_time_s")
        if self.guard_factor < 1.0:
            raise ConfigurationError("guard_factor must be >= 1")


def scppm_data_rate(params: ScppmRateParams) -> float:
    """Information bit rate in bps, guard time included.

    Br = (15120 R - overhead) / (M Ts (15120 / log2 M) * guard_factor).
    """
    rate = Fraction(params.code_rate)
    payload_bits = ENCODED_BLOCK_BITS * rate - params.overhead_bits
    bits_per_symbol = int(math.log2(params.ppm_order))
    frame_seconds = (
        params.ppm_order
        * params.slot_time_s
        * (ENCODED_BLOCK_BITS / bits_per_symbol)
        * params.guard_factor
    )
    return float(payload_bits) / frame_seconds


@dataclass(frozen=True)
class OpticalBudgetInputs:
    """Inputs of the photon-flux budget for one optical leg."""

    average_power_w: float
    wavelength_m: float
    range_m: float
    tx: OpticalTerminal
    rx: OpticalTerminal
    pointing: PointingSpec
    extra_losses_db: float = 4.0
    link_margin_db: float = 3.0
    background_flux_phe_s: float = 0.0
    peak_power_w: float | None = None

    def __post_init__(self):
        positive(self.average_power_w, "average_power_w")
        positive(self.wavelength_m, "wavelength_m")
        positive(self.range_m, "range_m")
        non_negative(self.extra_losses_db, "extra_losses_db")
        non_negative(self.link_margin_db, "link_margin_db")
        non_negative(self.background_flux_phe_s, "background_flux_phe_s")

    def check_peak_power(self, params: ScppmRateParams) -> None:
        """Warn when the peak power is inconsistent with the PPM duty cycle."""
        if self.peak_power_w is None:
            return
        implied = self.average_power_w * params.ppm_order * params.guard_factor
        if abs(self.peak_power_w - implied) > 0.01 * implied:
            warnings.warn(
                f"peak power {self.peak_power_w} W differs from the duty-cycle "
                f"value {implied:.1f} W implied by average power and PPM order"
            )


def pointing_allowance_db(inputs: OpticalBudgetInputs) -> float:
    """Total two-terminal pointing allowance for the budget's pointing spec."""
    gain_tx = inputs.tx.gain(inputs.wavelength_m)
    gain_rx = inputs.rx.gain(inputs.wavelength_m)
    return pointing_allowance(inputs.pointing, gain_tx, gain_rx)


def received_power_w(inputs: OpticalBudgetInputs) -> float:
    """Average received signal power in watts."""
    gain_tx = inputs.tx.gain(inputs.wavelength_m)
    gain_rx = inputs.rx.gain(inputs.wavelength_m)
    losses_db = inputs.extra_losses_db + pointing_allowance_db(inputs)
    return (
        inputs.average_power_w
        * gain_tx
        * inputs.tx.efficiency
        * gain_rx
        * inputs.rx.efficiency
        / linear_from_db(losses_db)
        / optical_path_loss(inputs.range_m, inputs.wavelength_m)
    )


def received_flux(inputs: OpticalBudgetInputs) -> tuple[float, float]:
    """Received signal flux and its margin-reduced value, both in phe/s."""
    flux = received_power_w(inputs) / photon_energy(inputs.wavelength_m)
    return flux, flux / linear_from_db(inputs.link_margin_db)


def max_range(
    average_power_w: float,
    wavelength_m: float,
    pointing: PointingSpec,
    tx_efficiency: float,
    rx_efficiency: float,
    extra_losses_db: float,
    link_margin_db: float,
    required_flux_db_phe_ns: float,
) -> tuple[float, float]:
    """Maximum range in meters at which the margin-reduced flux meets ns*.

    Both apertures are first sized to maximize the effective system gain
    for the pointing spec; the flux equation then inverts in closed form
    since flux scales as 1/r^2. Returns (range_m, optimal_diameter_m).
    """
    opt = optimize_effective_gain(pointing, wavelength_m)
    effective_gain = linear_from_db(opt.effective_gain_dbi)
    required_phe_s = flux_phe_s(required_flux_db_phe_ns + link_margin_db)
    numerator = (
        positive(average_power_w, "average_power_w")
        * fraction(tx_efficiency, "tx_efficiency")
        * fraction(rx_efficiency, "rx_efficiency")
        * effective_gain
        * wavelength_m
        / (PLANCK * SPEED_OF_LIGHT)
        / linear_from_db(extra_losses_db)
    )
    range_m = (wavelength_m / (4.0 * math.pi)) * math.sqrt(numerator / required_phe_s)
    return range_m, opt.optimal_diameter_m


@dataclass(frozen=True)
class BudgetLine:
    """One ledger row: dB column, linear column, units, additivity flag."""

    label: str
    db_value: float | None = None
    linear_value: float | str | None = None
    units: str = ""
    contributes: bool = False
    section: str | None = None


@dataclass(frozen=True)
class LinkBudgetReport:
    """Ordered ledger of named budget terms."""

    title: str
    lines: tuple = field(default_factory=tuple)

    def line(self, label: str) -> BudgetLine:
        for row in self.lines:
            if row.label == label:
                return row
        raise KeyError(label)

    def contribution_sum_db(self) -> float:
        return sum(row.db_value for row in self.lines if row.contributes)

    def to_text(self) -> str:
        width = max(len(row.label) for row in self.lines) + 2
        out = [self.title, "=" * len(self.title)]
        section = None
        for row in self.lines:
            if row.section != section:
                section = row.section
                out.append("")
                out.append(f"-- {section} --")
            db = f"{row.db_value:10.2f}" if row.db_value is not None else " " * 10
            if isinstance(row.linear_value, float):
                mag = abs(row.linear_value)
                linear = (
                    f"{row.linear_value:12.2f}" if 0.01 <= mag < 1e6
                    else f"{row.linear_value:12.2e}"
                )
            elif row.linear_value is None:
                linear = " " * 12
            else:
                linear = f"{row.linear_value:>12}"
            out.append(f"{row.label:<{width}}{db}{linear}  {row.units}")
        return "\n".join(out) + "\n"

    def to_csv(self) -> str:
        out = ["parameter,db_value,linear_value,units"]
        for row in self.lines:
            db = "" if row.db_value is None else f"{row.db_value:.6f}"
            if row.linear_value is None:
                linear = ""
            elif isinstance(row.linear_value, float):
                linear = f"{row.linear_value:.6g}"
            else:
                linear = str(row.linear_value)
            out.append(f"{row.label},{db},{linear},{row.units}")
        return "\n".join(out) + "\n"


def render_optical_budget(
    inputs: OpticalBudgetInputs,
    params: ScppmRateParams,
    required_flux_db: float,
    target_error_rate: float = 9e-5,
    title: str = "Optical telemetry link budget",
) -> LinkBudgetReport:
    """Full budget ledger down to received flux, margin, and data rate.

    ``required_flux_db`` is the minimum signal flux (dB phe/ns) the coded
    modulation needs at the configured background flux; the margin line is
    the headroom of the received flux above it.
    """
    inputs.check_peak_power(params)
    wavelength = inputs.wavelength_m
    gain_tx_db = 10.0 * math.log10(inputs.tx.gain(wavelength))
    gain_rx_db = 10.0 * math.log10(inputs.rx.gain(wavelength))
    pointing_db = pointing_allowance_db(inputs)
    space_loss_db = 10.0 * math.log10(optical_path_loss(inputs.range_m, wavelength))
    power_db = 10.0 * math.log10(inputs.average_power_w)
    received_db = (
        power_db
        + gain_tx_db
        + 10.0 * math.log10(inputs.tx.efficiency)
        - space_loss_db
        + gain_rx_db
        + 10.0 * math.log10(inputs.rx.efficiency)
        - inputs.extra_losses_db
        - pointing_db
    )
    flux_phe_ns = 10.0 ** (received_db / 10.0) / photon_energy(wavelength) * 1e-9
    flux_db = 10.0 * math.log10(flux_phe_ns)
    margin = flux_db - required_flux_db
    minimum_power_db = received_db - margin
    noise_phe_ns = inputs.background_flux_phe_s * 1e-9
    noise_per_slot = inputs.background_flux_phe_s * params.slot_time_s
    rate_mbps = scppm_data_rate(params) / 1e6

    sig = "Signaling and Fixed Parameters"
    lines = [
        BudgetLine("PPM Order", None, float(params.ppm_order), "", section=sig),
        BudgetLine("Convolutional Code Rate", None, params.code_rate, "", section=sig),
        BudgetLine("Slot Time", None, params.slot_time_s * 1e9, "ns", section=sig),
        BudgetLine("Guard Time", None, (params.guard_factor - 1.0) * 100.0, "%",
                   section=sig),
        BudgetLine("Mean Noise Flux", 10.0 * math.log10(noise_phe_ns)
                   if noise_phe_ns > 0 else None, noise_phe_ns, "phe/ns", section=sig),
        BudgetLine("Mean Noise Flux per slot", None, noise_per_slot, "phe/slot",
                   section=sig),
        BudgetLine("Pointing Accuracy", None, _accuracy_urad(inputs.pointing), "urad",
                   section=sig),
        BudgetLine("Average Laser Power", power_db, inputs.average_power_w, "W",
                   contributes=True, section="Laser Transmitter"),
        BudgetLine("Peak Laser Power",
                   None if inputs.peak_power_w is None
                   else 10.0 * math.log10(inputs.peak_power_w),
                   inputs.peak_power_w, "W", section="Laser Transmitter"),
        BudgetLine("Wavelength", None, wavelength * 1e9, "nm",
                   section="Laser Transmitter"),
        BudgetLine("Far-Field Antenna Gain", gain_tx_db,
                   inputs.tx.aperture_diameter_m, "m", contributes=True,
                   section="Deep Space Terminal"),
        BudgetLine("Transmitter Efficiency",
                   10.0 * math.log10(inputs.tx.efficiency), None, "",
                   contributes=True, section="Deep Space Terminal"),
        BudgetLine("Space Loss", -space_loss_db,
                   inputs.range_m / ASTRONOMICAL_UNIT, "AU", contributes=True,
                   section="Range"),
        BudgetLine("Receiver Gain", gain_rx_db, inputs.rx.aperture_diameter_m, "m",
                   contributes=True, section="Relay Terminal"),
        BudgetLine("Receiver Efficiency",
                   10.0 * math.log10(inputs.rx.efficiency), None, "",
                   contributes=True, section="Relay Terminal"),
        BudgetLine("Detection/Implementation Losses", -inputs.extra_losses_db,
                   None, "", contributes=True, section="Other"),
        BudgetLine("Pointing Loss", -pointing_db, None, "", contributes=True,
                   section="Other"),
        BudgetLine("Average Received Power", received_db, None, "W",
                   section="Link Performance"),
        BudgetLine("Average Received Photon Flux", flux_db, flux_phe_ns, "phe/ns",
                   section="Link Performance"),
        BudgetLine("Minimum Average Received Power", minimum_power_db, None, "W",
                   section="Link Performance"),
        BudgetLine("Minimum Average Received Photon Flux", required_flux_db,
                   10.0 ** (required_flux_db / 10.0), "phe/ns",
                   section="Link Performance"),
        BudgetLine("Link Margin", margin, None, "", section="Link Performance"),
        BudgetLine("FER Target", None, target_error_rate, "",
                   section="Link Performance"),
        BudgetLine("Information Data Rate", None, rate_mbps, "Mbps",
                   section="Link Performance"),
    ]
    return LinkBudgetReport(title=title, lines=tuple(lines))


def _accuracy_urad(pointing: PointingSpec) -> float:
    value = (
        pointing.theta_max_rad
        if pointing.theta_max_rad is not None
        else pointing.sigma_theta_rad
    )
    return value * 1e6
