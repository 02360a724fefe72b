"""Composed analyses behind the CLI subcommands.

Each function binds scenario data to the physics modules and returns
plain rows/reports, so the command layer only parses flags and formats
output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from relaylink.atmosphere import AttenuationTable
from relaylink.errors import DataCoverageError
from relaylink.massmodel import MassBudget, laser_mass, max_diameter, optics_mass
from relaylink.optical import (
    BudgetLine,
    LinkBudgetReport,
    max_range,
    scppm_data_rate,
    ScppmRateParams,
)
from relaylink.pointing import PointingSpec
from relaylink.quantities import ASTRONOMICAL_UNIT, db_from_linear
from relaylink.relay import (
    Leg1Inputs,
    LegBudget,
    leg1_crossing_frequency,
    leg1_pr_n0,
    solve_dish_diameter,
    transparent_end_to_end,
)
from relaylink.rflink import (
    RfAntenna,
    achievable_rate,
    data_power_share,
    direct_pr_n0,
    eb_n0,
    parabolic_gain,
)
from relaylink.scenario import (
    Scenario,
    rf_link_inputs,
    scenario_from_dict,
    scenario_to_dict,
)

# Direct X-band rates the two-leg analyses are sized against, in kbps.
REFERENCE_RATES_KBPS = {"venus": 100.0, "mars": 120.0, "uranus": 3.15, "neptune": 1.2}

LEG2_REQUIRED_PLUS_MARGIN_DB = 4.23  # rate-1/4 turbo threshold plus 4 dB margin


def direct_link_report(scenario: Scenario, table: AttenuationTable) -> LinkBudgetReport:
    """Direct-link budget ledger with the achievable data rate."""
    leg = scenario.direct
    inputs = rf_link_inputs(scenario, leg, table)
    pr_n0 = direct_pr_n0(inputs)
    pd_n0 = data_power_share(pr_n0, inputs.modulation)
    threshold = leg.coding_threshold_db()
    rate = achievable_rate(pd_n0, threshold, leg.margin_db)
    gain_tx_db = db_from_linear(parabolic_gain(inputs.tx_antenna, inputs.frequency_hz))
    share_db = db_from_linear(pd_n0 / pr_n0) if pd_n0 != pr_n0 else 0.0
    lines = [
        BudgetLine("Frequency", None, inputs.frequency_hz / 1e9, "GHz",
                   section="Configuration"),
        BudgetLine("Range", None, inputs.range_m / ASTRONOMICAL_UNIT, "AU",
                   section="Configuration"),
        BudgetLine("Transmit Power", db_from_linear(inputs.tx_power_w),
                   inputs.tx_power_w, "W", section="Transmitter"),
        BudgetLine("Transmit Antenna Gain", gain_tx_db,
                   inputs.tx_antenna.diameter_m, "m", section="Transmitter"),
        BudgetLine("Transmit Loss", -inputs.tx_loss_db, None, "",
                   section="Transmitter"),
        BudgetLine("Free Space Loss",
                   -20.0 * math.log10(
                       4.0 * math.pi * inputs.frequency_hz * inputs.range_m / 299792458.0
                   ), None, "", section="Path"),
        BudgetLine("Atmospheric Loss", -inputs.atmospheric_db, None, "",
                   section="Path"),
        BudgetLine("Pointing Loss",
                   -(inputs.pointing_tx_db + inputs.pointing_rx_db), None, "",
                   section="Path"),
        BudgetLine("Receive Loss", -inputs.rx_loss_db, None, "", section="Receiver"),
        BudgetLine("Pr/N0", db_from_linear(pr_n0), pr_n0, "Hz",
                   section="Performance"),
        BudgetLine("Data Power Share", share_db, None, "", section="Performance"),
        BudgetLine("Pd/N0", db_from_linear(pd_n0), pd_n0, "Hz",
                   section="Performance"),
        BudgetLine("Required Eb/N0", threshold, leg.coding or "custom", "",
                   section="Performance"),
        BudgetLine("Margin", leg.margin_db, None, "", section="Performance"),
        BudgetLine("Achievable Data Rate", None, rate / 1e3, "kbps",
                   section="Performance"),
    ]
    return LinkBudgetReport(
        title=f"Direct link budget: {scenario.name}", lines=tuple(lines)
    )


def crossing_reference(scenario_direct: Scenario, theta_max_deg: float,
                       availability_pct: float,
                       table: AttenuationTable) -> float:
    """Direct-link Pr/N0 reference for crossing analyses (linear, Hz).

    Uses the direct scenario's geometry with the two-leg study conventions:
    a 100 K system-temperature station (not the G/T figure), suppressed
    carrier, and the swept worst-case pointing at the spacecraft.
    """
    doc = scenario_to_dict(scenario_direct)
    leg = doc["legs"][0]
    leg.pop("rx_g_over_t_db_per_k", None)
    leg.pop("modulation_index_rad", None)
    leg.pop("coding", None)
    leg["rx_system_temperature_k"] = 100.0
    leg["modulation"] = "suppressed"
    leg["tx_pointing"] = {"theta_max_deg": theta_max_deg}
    leg["availability_pct"] = availability_pct
    reference = scenario_from_dict(doc)
    return direct_pr_n0(rf_link_inputs(reference, reference.direct, table))


@dataclass(frozen=True)
class CrossingRow:
    relay_dish_m: float
    availability_pct: float
    crossing_hz: float | None


def crossing_table(
    scenario_relay: Scenario,
    scenario_direct: Scenario,
    dishes_m: list[float],
    availabilities_pct: list[float],
    theta_max_deg: float,
    table: AttenuationTable,
    bracket_ghz: tuple[float, float] = (1.0, 120.0),
) -> list[CrossingRow]:
    """Crossing frequency per (relay dish, direct-link availability)."""
    leg1 = scenario_relay.leg1
    rows = []
    for availability in availabilities_pct:
        reference = crossing_reference(
            scenario_direct, theta_max_deg, availability, table
        )
        for dish in dishes_m:
            inputs = Leg1Inputs(
                tx_power_w=leg1.tx_power_w,
                tx_antenna=RfAntenna(
                    leg1.tx_antenna_diameter_m, leg1.tx_antenna_efficiency
                ),
                relay_antenna=RfAntenna(dish, leg1.rx_antenna_efficiency),
                range_m=scenario_relay.range_m,
                theta_max_rad=math.radians(theta_max_deg),
                tx_loss_db=leg1.tx_loss_db,
                rx_loss_db=leg1.rx_loss_db,
                system_temperature_k=leg1.rx_system_temperature_k or 100.0,
            )
            crossing = leg1_crossing_frequency(
                inputs, reference,
                bracket_hz=(bracket_ghz[0] * 1e9, bracket_ghz[1] * 1e9),
            )
            rows.append(CrossingRow(dish, availability, crossing))
    return rows


def leg2_eb_n0_db(scenario: Scenario, table: AttenuationTable, rate_bps: float,
                  ground_dish_m: float | None = None,
                  frequency_ghz: float | None = None,
                  elevation_deg: float | None = None) -> float:
    """Available Eb/N0 on the relay-to-ground leg at the reference data rate."""
    leg = scenario.leg2
    if frequency_ghz is not None or elevation_deg is not None:
        doc = scenario_to_dict(scenario)
        raw = doc["legs"][1]
        if frequency_ghz is not None:
            raw["frequency_ghz"] = frequency_ghz
        if elevation_deg is not None:
            raw["elevation_deg"] = elevation_deg
        scenario = scenario_from_dict(doc)
        leg = scenario.leg2
    inputs = rf_link_inputs(scenario, leg, table, rx_diameter_m=ground_dish_m)
    return db_from_linear(eb_n0(direct_pr_n0(inputs), rate_bps))


def minimum_ground_dish_m(scenario: Scenario, table: AttenuationTable,
                          rate_bps: float,
                          target_db: float = LEG2_REQUIRED_PLUS_MARGIN_DB) -> float:
    """Smallest ground dish meeting the required-plus-margin Eb/N0 on leg 2."""
    def objective(diameter):
        return leg2_eb_n0_db(scenario, table, rate_bps, ground_dish_m=diameter)
    return solve_dish_diameter(objective, target_db)


@dataclass(frozen=True)
class TransparentPoint:
    frequency_hz: float
    two_leg_db_hz: float
    direct_db_hz: float


def transparent_sweep(
    scenario: Scenario,
    scenario_direct: Scenario,
    theta_max_deg: float,
    table: AttenuationTable,
    f1_grid_hz,
    noise_bandwidth_hz: float | None = None,
) -> list[TransparentPoint]:
    """Two-leg transparent signal-to-noise-density across leg-1 frequencies."""
    leg1 = scenario.leg1
    leg2 = scenario.leg2
    rate_kbps = REFERENCE_RATES_KBPS.get(scenario.target_body, 100.0)
    beq = noise_bandwidth_hz or 2.0 * rate_kbps * 1e3
    reference = crossing_reference(
        scenario_direct, theta_max_deg, leg2.availability_pct or 95.0, table
    )
    # Relay transmit pointing follows the swept spacecraft accuracy.
    doc = scenario_to_dict(scenario)
    doc["legs"][1]["tx_pointing"] = {"theta_max_deg": theta_max_deg}
    leg2_inputs = rf_link_inputs(
        scenario_from_dict(doc), scenario_from_dict(doc).leg2, table
    )
    pr2_n0 = direct_pr_n0(leg2_inputs)
    leg2_budget = LegBudget.from_pr_n0(
        pr2_n0, beq, leg2.rx_system_temperature_k or 100.0
    )
    inputs = Leg1Inputs(
        tx_power_w=leg1.tx_power_w,
        tx_antenna=RfAntenna(leg1.tx_antenna_diameter_m, leg1.tx_antenna_efficiency),
        relay_antenna=RfAntenna(
            leg1.rx_antenna_diameter_m, leg1.rx_antenna_efficiency
        ),
        range_m=scenario.range_m,
        theta_max_rad=math.radians(theta_max_deg),
        tx_loss_db=leg1.tx_loss_db,
        rx_loss_db=leg1.rx_loss_db,
        system_temperature_k=leg1.rx_system_temperature_k or 100.0,
    )
    direct_db = db_from_linear(reference)
    points = []
    for f1 in f1_grid_hz:
        leg1_budget = LegBudget.from_pr_n0(
            leg1_pr_n0(inputs, f1), beq, inputs.system_temperature_k
        )
        combined = transparent_end_to_end(leg1_budget, leg2_budget)
        points.append(TransparentPoint(f1, db_from_linear(combined), direct_db))
    return points


@dataclass(frozen=True)
class MaxRangeCell:
    accuracy_urad: float
    ppm_order: int
    range_au: float
    data_rate_kbps: float
    aperture_m: float


def max_range_table(
    accuracies_urad: list[float],
    ppm_orders: list[int],
    mode: str,
    threshold_cache: dict,
    code_rate: str = "1/3",
    slot_time_ns: float = 256.0,
    nb_phe_s: float = 1.21e7,
    target_fer: float = 9e-5,
    wavelength_nm: float = 1064.0,
    average_power_w: float = 5.0,
    efficiency_db: float = -5.0,
    extra_losses_db: float = 4.0,
    link_margin_db: float = 3.0,
    outage_target: float = 0.05,
) -> list[MaxRangeCell]:
    """Maximum-range grid for a pointing-accuracy column and PPM orders.

    Required fluxes come from the threshold cache; a missing key is a data
    dependency the caller must fill by running the threshold search.
    """
    efficiency = 10.0 ** (efficiency_db / 10.0)
    cells = []
    for order in ppm_orders:
        key = (order, code_rate, slot_time_ns, nb_phe_s, target_fer)
        if key not in threshold_cache:
            raise DataCoverageError(
                f"no cached required flux for M={order}, R={code_rate}, "
                f"Ts={slot_time_ns} ns, nb={nb_phe_s:g} phe/s, FER {target_fer:g}; "
                "run the threshold search first"
            )
        ns_star_db = threshold_cache[key]
        rate_kbps = scppm_data_rate(ScppmRateParams(
            ppm_order=order, code_rate=code_rate, slot_time_s=slot_time_ns * 1e-9
        )) / 1e3
        for accuracy in accuracies_urad:
            if mode == "deterministic":
                pointing = PointingSpec(mode="deterministic",
                                        theta_max_rad=accuracy * 1e-6)
            else:
                pointing = PointingSpec(mode="probabilistic",
                                        sigma_theta_rad=accuracy * 1e-6,
                                        outage_target=outage_target)
            range_m, aperture = max_range(
                average_power_w, wavelength_nm * 1e-9, pointing,
                efficiency, efficiency, extra_losses_db, link_margin_db,
                ns_star_db,
            )
            cells.append(MaxRangeCell(
                accuracy_urad=accuracy, ppm_order=order,
                range_au=range_m / ASTRONOMICAL_UNIT,
                data_rate_kbps=rate_kbps, aperture_m=aperture,
            ))
    return cells


@dataclass(frozen=True)
class MassRow:
    label: str
    allocation_kg: float
    laser_kg: float
    head_kg: float
    diameter_cm: float


def mass_table(average_power_w: float = 5.0) -> list[MassRow]:
    """Aperture limits for the standard spacecraft classes."""
    classes = [
        ("light (lower)", MassBudget(400.0, 0.06)),
        ("light (upper)", MassBudget(600.0, 0.07)),
        ("medium (lower)", MassBudget(1000.0, 0.06)),
        ("medium (upper)", MassBudget(1200.0, 0.07)),
        ("heavy (lower)", MassBudget(2000.0, 0.06)),
        ("heavy (upper)", MassBudget(2200.0, 0.07)),
        ("relay TDRS-class", MassBudget(1800.0, 0.28, 20.0 / 28.0)),
        ("relay light-TDRS", MassBudget(745.0, 0.28, 20.0 / 28.0)),
    ]
    rows = []
    for label, budget in classes:
        diameter = max_diameter(budget, average_power_w)
        rows.append(MassRow(
            label=label,
            allocation_kg=budget.allocation_kg,
            laser_kg=laser_mass(average_power_w),
            head_kg=optics_mass(diameter),
            diameter_cm=diameter,
        ))
    return rows
