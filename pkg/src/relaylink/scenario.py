"""Scenario file schema, validation, and bindings to the analysis inputs.

Scenarios are JSON documents with explicit units in every field name.
A scenario has one leg (direct space-to-Earth) or two legs (probe-to-relay
then relay-to-ground). Built-in reference scenarios ship with the package
and are loadable by name.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from relaylink import pointing as pointing_mod
from relaylink.atmosphere import AttenuationTable, load_table
from relaylink.datafiles import resolve
from relaylink.errors import ConfigurationError
from relaylink.optical import OpticalBudgetInputs, OpticalTerminal, ScppmRateParams
from relaylink.pointing import DETERMINISTIC, GAUSSIAN_BEAM, PointingSpec
from relaylink.quantities import ASTRONOMICAL_UNIT
from relaylink.rflink import (
    CODING_THRESHOLDS_DB,
    DirectLinkInputs,
    ModulationConfig,
    RfAntenna,
    StationFigure,
    parabolic_gain,
)

SPEC_VERSION = 1
DEFAULT_ATTENUATION_FILE = "atmosphere_new_norcia.csv"
BUILTIN_NAMES = (
    "venus-direct-x",
    "mars-direct-x",
    "uranus-direct-x",
    "neptune-direct-x",
    "venus-optical",
    "uranus-relay-ehf",
    "mars-relay-ehf",
)


@dataclass(frozen=True)
class PointingData:
    """Pointing entry of a scenario file; angles carry their unit in the name."""

    model: str = GAUSSIAN_BEAM
    mode: str = DETERMINISTIC
    theta_max_deg: float | None = None
    theta_max_urad: float | None = None
    sigma_theta_urad: float | None = None
    outage_probability: float | None = None

    def theta_max_rad(self) -> float | None:
        if self.theta_max_deg is not None:
            return math.radians(self.theta_max_deg)
        if self.theta_max_urad is not None:
            return self.theta_max_urad * 1e-6
        return None

    def to_pointing_spec(self) -> PointingSpec:
        sigma = None if self.sigma_theta_urad is None else self.sigma_theta_urad * 1e-6
        return PointingSpec(
            model=self.model,
            mode=self.mode,
            theta_max_rad=self.theta_max_rad(),
            sigma_theta_rad=sigma,
            outage_target=self.outage_probability,
        )


@dataclass(frozen=True)
class RfLeg:
    """One RF link: probe-to-ground, probe-to-relay, or relay-to-ground."""

    kind: str = "rf"
    frequency_ghz: float = 8.42
    range_au: float | None = None  # defaults to the scenario's probe range
    tx_power_w: float = 65.0
    tx_antenna_diameter_m: float = 1.3
    tx_antenna_efficiency: float = 0.7
    tx_loss_db: float = 1.5
    rx_loss_db: float = 0.5
    rx_antenna_diameter_m: float | None = 35.0
    rx_antenna_efficiency: float = 0.55
    rx_g_over_t_db_per_k: float | None = None
    rx_system_temperature_k: float | None = None
    elevation_deg: float | None = None
    availability_pct: float | None = None
    modulation: str = "suppressed"
    modulation_index_rad: float | None = None
    coding: str | None = None
    required_eb_n0_db: float | None = None
    margin_db: float = 4.0
    tx_pointing: PointingData | None = None
    rx_pointing: PointingData | None = None

    @property
    def frequency_hz(self) -> float:
        return self.frequency_ghz * 1e9

    def coding_threshold_db(self) -> float:
        if self.required_eb_n0_db is not None:
            return self.required_eb_n0_db
        if self.coding is None:
            raise ConfigurationError("leg has neither coding id nor required_eb_n0_db")
        try:
            return CODING_THRESHOLDS_DB[self.coding]
        except KeyError:
            raise ConfigurationError(f"unknown coding scheme {self.coding!r}") from None


@dataclass(frozen=True)
class OpticalLeg:
    """One optical link with its coded-PPM signaling choice."""

    kind: str = "optical"
    wavelength_nm: float = 1550.0
    average_power_w: float = 5.0
    peak_power_w: float | None = None
    aperture_diameter_m: float = 1.39
    efficiency_db: float = -5.0
    extra_losses_db: float = 4.0
    link_margin_db: float = 3.0
    background_flux_phe_per_ns: float = 0.0
    required_flux_db_phe_ns: float | None = None
    target_fer: float = 9e-5
    pointing: PointingData = field(
        default_factory=lambda: PointingData(theta_max_urad=0.35)
    )
    ppm_order: int = 64
    code_rate: str = "1/3"
    slot_time_ns: float = 256.0
    guard_factor: float = 1.25


@dataclass(frozen=True)
class Scenario:
    """One mission/relay configuration binding all analysis inputs."""

    name: str
    target_body: str
    range_au: float
    legs: tuple
    relay_placement: str | None = None
    attenuation_table: str | None = None
    spec_version: int = SPEC_VERSION

    @property
    def range_m(self) -> float:
        return self.range_au * ASTRONOMICAL_UNIT

    @property
    def direct(self):
        return self.legs[0]

    @property
    def leg1(self):
        return self.legs[0]

    @property
    def leg2(self):
        if len(self.legs) < 2:
            raise ConfigurationError(f"scenario {self.name!r} has no second leg")
        return self.legs[1]


def _build_pointing(raw: dict) -> PointingData:
    return PointingData(**raw)


def _build_leg(raw: dict):
    raw = dict(raw)
    kind = raw.get("kind", "rf")
    for key in ("tx_pointing", "rx_pointing", "pointing"):
        if isinstance(raw.get(key), dict):
            raw[key] = _build_pointing(raw[key])
    try:
        if kind == "rf":
            return RfLeg(**raw)
        if kind == "optical":
            return OpticalLeg(**raw)
    except TypeError as exc:
        raise ConfigurationError(f"bad leg field: {exc}") from exc
    raise ConfigurationError(f"unknown leg kind {kind!r}")


def scenario_from_dict(doc: dict) -> Scenario:
    doc = dict(doc)
    version = doc.pop("spec_version", None)
    if version != SPEC_VERSION:
        raise ConfigurationError(
            f"unsupported scenario spec_version {version!r}; expected {SPEC_VERSION}"
        )
    legs = tuple(_build_leg(leg) for leg in doc.pop("legs", []))
    try:
        return Scenario(legs=legs, **doc)
    except TypeError as exc:
        raise ConfigurationError(f"bad scenario field: {exc}") from exc


def scenario_to_dict(scenario: Scenario) -> dict:
    doc = asdict(scenario)
    doc["legs"] = [
        {k: v for k, v in leg.items() if v is not None} for leg in doc.pop("legs")
    ]
    return {k: v for k, v in doc.items() if v is not None}


def load_scenario(path_or_name: str | Path) -> Scenario:
    """Load a scenario from a JSON file path or a built-in name."""
    path = Path(path_or_name)
    if not path.exists() and str(path_or_name) in BUILTIN_NAMES:
        packaged = resources.files("relaylink") / "data" / "scenarios"
        path = Path(str(packaged / f"{path_or_name}.json"))
    if not path.exists():
        raise ConfigurationError(
            f"scenario {path_or_name!r} is neither a file nor a built-in name "
            f"(built-ins: {', '.join(BUILTIN_NAMES)})"
        )
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(
            f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return scenario_from_dict(doc)


def validate(scenario: Scenario) -> list[str]:
    """Collect every violation; an empty list means the scenario is clean."""
    findings = []
    if not scenario.legs:
        findings.append("scenario has no legs")
    if len(scenario.legs) > 2:
        findings.append(f"scenario has {len(scenario.legs)} legs; expected 1 or 2")
    if scenario.range_au <= 0 or math.isnan(scenario.range_au):
        findings.append(f"range_au must be positive, got {scenario.range_au}")
    if scenario.relay_placement is not None and (
        scenario.relay_placement not in ("earth", "l4", "l5")
    ):
        findings.append(f"unknown relay placement {scenario.relay_placement!r}")
    for index, leg in enumerate(scenario.legs):
        prefix = f"legs[{index}]"
        if isinstance(leg, RfLeg):
            findings.extend(_validate_rf(prefix, leg))
        else:
            findings.extend(_validate_optical(prefix, leg))
    if scenario.attenuation_table is not None:
        try:
            resolve(scenario.attenuation_table, None)
        except Exception:
            if not Path(scenario.attenuation_table).exists():
                findings.append(
                    f"attenuation table {scenario.attenuation_table!r} not resolvable"
                )
    return findings


def _validate_rf(prefix: str, leg: RfLeg) -> list[str]:
    findings = []
    if leg.frequency_ghz <= 0:
        findings.append(f"{prefix}: frequency_ghz must be positive")
    if leg.tx_power_w <= 0:
        findings.append(f"{prefix}: tx_power_w must be positive")
    if leg.tx_antenna_diameter_m <= 0:
        findings.append(f"{prefix}: tx_antenna_diameter_m must be positive")
    if not 0 < leg.tx_antenna_efficiency <= 1:
        findings.append(f"{prefix}: tx_antenna_efficiency must be in (0, 1]")
    for name in ("tx_loss_db", "rx_loss_db", "margin_db"):
        if getattr(leg, name) < 0:
            findings.append(f"{prefix}: {name} must be >= 0")
    if leg.rx_g_over_t_db_per_k is None and leg.rx_system_temperature_k is None:
        findings.append(
            f"{prefix}: needs rx_g_over_t_db_per_k or rx_system_temperature_k"
        )
    if leg.modulation == "residual" and leg.modulation_index_rad is None:
        findings.append(f"{prefix}: residual carrier requires modulation_index_rad")
    if leg.modulation not in ("suppressed", "residual"):
        findings.append(f"{prefix}: unknown modulation {leg.modulation!r}")
    if (leg.elevation_deg is None) != (leg.availability_pct is None):
        findings.append(
            f"{prefix}: elevation_deg and availability_pct must come together"
        )
    if leg.coding is not None and leg.coding not in CODING_THRESHOLDS_DB:
        findings.append(f"{prefix}: unknown coding scheme {leg.coding!r}")
    return findings


def _validate_optical(prefix: str, leg: OpticalLeg) -> list[str]:
    findings = []
    if leg.wavelength_nm <= 0:
        findings.append(f"{prefix}: wavelength_nm must be positive")
    if leg.average_power_w <= 0:
        findings.append(f"{prefix}: average_power_w must be positive")
    if leg.aperture_diameter_m <= 0:
        findings.append(f"{prefix}: aperture_diameter_m must be positive")
    if leg.efficiency_db > 0:
        findings.append(f"{prefix}: efficiency_db must be <= 0")
    if leg.background_flux_phe_per_ns < 0:
        findings.append(f"{prefix}: background_flux_phe_per_ns must be >= 0")
    if leg.ppm_order not in (4, 8, 16, 32, 64, 128, 256):
        findings.append(f"{prefix}: unsupported ppm_order {leg.ppm_order}")
    if leg.code_rate not in ("1/3", "1/2", "2/3"):
        findings.append(f"{prefix}: unsupported code_rate {leg.code_rate!r}")
    try:
        leg.pointing.to_pointing_spec()
    except Exception as exc:
        findings.append(f"{prefix}: bad pointing spec: {exc}")
    return findings


def attenuation_table_for(scenario: Scenario) -> AttenuationTable:
    path = resolve(scenario.attenuation_table or DEFAULT_ATTENUATION_FILE)
    return load_table(path, site="new-norcia")


def rf_pointing_losses_db(leg: RfLeg, frequency_hz: float) -> tuple[float, float]:
    """Deterministic per-end pointing attenuations for an RF leg."""
    losses = []
    for data, antenna in (
        (leg.tx_pointing, RfAntenna(leg.tx_antenna_diameter_m, leg.tx_antenna_efficiency)),
        (leg.rx_pointing, RfAntenna(leg.rx_antenna_diameter_m or 1.0, leg.rx_antenna_efficiency)),
    ):
        if data is None or data.theta_max_rad() is None:
            losses.append(0.0)
            continue
        gain = parabolic_gain(antenna, frequency_hz)
        losses.append(
            pointing_mod.pointing_attenuation_db(
                data.model, gain, data.theta_max_rad()
            )
        )
    return losses[0], losses[1]


def rf_link_inputs(
    scenario: Scenario,
    leg: RfLeg,
    table: AttenuationTable | None = None,
    range_m: float | None = None,
    rx_diameter_m: float | None = None,
) -> DirectLinkInputs:
    """Bind one RF leg to budget inputs; the rx dish can be overridden."""
    if not isinstance(leg, RfLeg):
        raise ConfigurationError("this analysis needs an RF leg")
    atmospheric = 0.0
    if leg.elevation_deg is not None:
        if table is None:
            table = attenuation_table_for(scenario)
        atmospheric = table.attenuation_db(
            leg.frequency_hz, leg.elevation_deg, leg.availability_pct
        )
    rx_dish = rx_diameter_m if rx_diameter_m is not None else leg.rx_antenna_diameter_m
    if rx_dish is not None:
        leg = _replace_rx_dish(leg, rx_dish)
    pnt_tx, pnt_rx = rf_pointing_losses_db(leg, leg.frequency_hz)
    rx_antenna = (
        RfAntenna(rx_dish, leg.rx_antenna_efficiency) if rx_dish is not None else None
    )
    modulation = ModulationConfig(leg.modulation, leg.modulation_index_rad)
    if range_m is None:
        range_m = (
            leg.range_au * ASTRONOMICAL_UNIT
            if leg.range_au is not None
            else scenario.range_m
        )
    return DirectLinkInputs(
        tx_power_w=leg.tx_power_w,
        tx_antenna=RfAntenna(leg.tx_antenna_diameter_m, leg.tx_antenna_efficiency),
        tx_loss_db=leg.tx_loss_db,
        rx_loss_db=leg.rx_loss_db,
        rx_station=StationFigure(
            g_over_t_db_per_k=leg.rx_g_over_t_db_per_k,
            antenna=rx_antenna,
            system_temperature_k=leg.rx_system_temperature_k,
        ),
        frequency_hz=leg.frequency_hz,
        range_m=range_m,
        atmospheric_db=atmospheric,
        pointing_tx_db=pnt_tx,
        pointing_rx_db=pnt_rx,
        modulation=modulation,
    )


def _replace_rx_dish(leg: RfLeg, diameter_m: float) -> RfLeg:
    doc = asdict(leg)
    doc["rx_antenna_diameter_m"] = diameter_m
    return _build_leg(doc)


def direct_link_inputs(
    scenario: Scenario,
    table: AttenuationTable | None = None,
    range_m: float | None = None,
) -> DirectLinkInputs:
    """Bind a direct-link scenario's first leg to budget inputs."""
    return rf_link_inputs(scenario, scenario.direct, table, range_m)


def optical_budget_inputs(scenario: Scenario) -> tuple[OpticalBudgetInputs, ScppmRateParams]:
    """Bind an optical scenario leg to budget inputs and rate parameters."""
    leg = scenario.leg1
    if not isinstance(leg, OpticalLeg):
        raise ConfigurationError("optical analysis needs an optical leg")
    efficiency = 10.0 ** (leg.efficiency_db / 10.0)
    terminal = OpticalTerminal(leg.aperture_diameter_m, efficiency)
    inputs = OpticalBudgetInputs(
        average_power_w=leg.average_power_w,
        wavelength_m=leg.wavelength_nm * 1e-9,
        range_m=scenario.range_m,
        tx=terminal,
        rx=terminal,
        pointing=leg.pointing.to_pointing_spec(),
        extra_losses_db=leg.extra_losses_db,
        link_margin_db=leg.link_margin_db,
        background_flux_phe_s=leg.background_flux_phe_per_ns * 1e9,
        peak_power_w=leg.peak_power_w,
    )
    params = ScppmRateParams(
        ppm_order=leg.ppm_order,
        code_rate=leg.code_rate,
        slot_time_s=leg.slot_time_ns * 1e-9,
        guard_factor=leg.guard_factor,
    )
    return inputs, params
