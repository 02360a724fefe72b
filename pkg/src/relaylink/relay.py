"""End-to-end composition for transparent and regenerative relaying.

Transparent relays forward amplified signal plus noise, so the two legs
combine through inverse SNRs; regenerative relays decode per leg, so the
per-leg error probabilities add.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from relaylink.errors import DomainError
from relaylink.pointing import DB_PER_NAT
from relaylink.quantities import BOLTZMANN, linear_from_db, positive, probability
from relaylink.rflink import RfAntenna, free_space_loss, parabolic_gain


@dataclass(frozen=True)
class LegBudget:
    """One leg of a transparent chain, as a noise-to-signal power ratio."""

    noise_over_signal: float
    noise_bandwidth_hz: float
    noise_density_w_per_hz: float

    def __post_init__(self):
        positive(self.noise_over_signal, "noise_over_signal")
        positive(self.noise_bandwidth_hz, "noise_bandwidth_hz")
        positive(self.noise_density_w_per_hz, "noise_density_w_per_hz")

    @classmethod
    def from_pr_n0(cls, pr_n0_hz: float, noise_bandwidth_hz: float,
                   system_temperature_k: float = 100.0) -> "LegBudget":
        n0 = BOLTZMANN * positive(system_temperature_k, "system_temperature_k")
        return cls(
            noise_over_signal=noise_bandwidth_hz / positive(pr_n0_hz, "pr_n0_hz"),
            noise_bandwidth_hz=noise_bandwidth_hz,
            noise_density_w_per_hz=n0,
        )


@dataclass(frozen=True)
class ErrorBudget:
    """Per-leg decoding error probabilities against an end-to-end target."""

    pe_leg1: float
    pe_leg2: float
    pe_target: float

    def __post_init__(self):
        probability(self.pe_leg1, "pe_leg1")
        probability(self.pe_leg2, "pe_leg2")
        probability(self.pe_target, "pe_target")


def transparent_end_to_end(leg1: LegBudget, leg2: LegBudget) -> float:
    """Signal power over equivalent noise density, in hertz, at the ground.

    Evaluates [N1/Pr1 + (N2/Pr2)(1 + N1/Pr1)]^-1 * Beq2; always below the
    better of the two per-leg SNRs times Beq2.
    """
    x = leg1.noise_over_signal
    y = leg2.noise_over_signal
    return leg2.noise_bandwidth_hz / (x + y * (1.0 + x))


def regenerative_total_error(budget: ErrorBudget) -> float:
    """Total error probability Pe1 + Pe2 of a regenerative chain."""
    total = budget.pe_leg1 + budget.pe_leg2
    if total > 1.0:
        raise DomainError(
            f"per-leg error probabilities sum to {total}, exceeding 1; "
            "refusing to clamp"
        )
    return total


def regenerative_split(pe_target: float, fraction_leg1: float) -> tuple[float, float]:
    """Split an end-to-end error target between the two legs."""
    probability(pe_target, "pe_target")
    probability(fraction_leg1, "fraction_leg1")
    return fraction_leg1 * pe_target, (1.0 - fraction_leg1) * pe_target


@dataclass(frozen=True)
class Leg1Inputs:
    """Interplanetary probe-to-relay link, free of atmospheric attenuation."""

    tx_power_w: float
    tx_antenna: RfAntenna
    relay_antenna: RfAntenna
    range_m: float
    theta_max_rad: float
    tx_loss_db: float = 1.5
    rx_loss_db: float = 1.5
    system_temperature_k: float = 100.0

    def __post_init__(self):
        positive(self.tx_power_w, "tx_power_w")
        positive(self.range_m, "range_m")
        positive(self.theta_max_rad, "theta_max_rad")
        positive(self.system_temperature_k, "system_temperature_k")


def leg1_pr_n0(inputs: Leg1Inputs, frequency_hz: float) -> float:
    """Leg-1 Pr/N0 in hertz with deterministic Gaussian-beam pointing on both ends."""
    gain_tx = parabolic_gain(inputs.tx_antenna, frequency_hz)
    gain_rx = parabolic_gain(inputs.relay_antenna, frequency_hz)
    pointing_db = DB_PER_NAT * (gain_tx + gain_rx) * inputs.theta_max_rad**2
    losses = linear_from_db(inputs.tx_loss_db + inputs.rx_loss_db + pointing_db)
    spreading = free_space_loss(frequency_hz, inputs.range_m)
    n0 = BOLTZMANN * inputs.system_temperature_k
    return inputs.tx_power_w * gain_tx * gain_rx / (losses * spreading * n0)


def leg1_crossing_frequency(
    inputs: Leg1Inputs,
    direct_reference_hz: float,
    bracket_hz: tuple[float, float] = (1e9, 120e9),
    tolerance_hz: float = 0.01e9,
) -> Optional[float]:
    """First frequency where leg-1 Pr/N0 rises through the direct-link reference.

    Returns None when the leg-1 curve stays below the reference over the
    whole bracket (no crossing).
    """
    positive(direct_reference_hz, "direct_reference_hz")
    lo, hi = bracket_hz
    gap = lambda f: math.log(leg1_pr_n0(inputs, f) / direct_reference_hz)
    # Coarse scan for the first sign change, then bisect inside that cell;
    # the curve can cross the reference twice (pointing wins at high f).
    steps = max(2, int(math.ceil((hi - lo) / 0.5e9)))
    prev_f, prev_g = lo, gap(lo)
    if prev_g >= 0.0:
        return lo
    crossing_cell = None
    for i in range(1, steps + 1):
        f = lo + (hi - lo) * i / steps
        g = gap(f)
        if g >= 0.0:
            crossing_cell = (prev_f, f)
            break
        prev_f, prev_g = f, g
    if crossing_cell is None:
        return None
    a, b = crossing_cell
    while b - a > tolerance_hz:
        mid = 0.5 * (a + b)
        if gap(mid) >= 0.0:
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)


def solve_dish_diameter(
    eb_n0_db_of_diameter: Callable[[float], float],
    target_db: float,
    bracket_m: tuple[float, float] = (0.5, 40.0),
    tolerance_m: float = 0.001,
) -> float:
    """Smallest ground dish whose Eb/N0 reaches the target, by scan + bisection."""
    lo, hi = bracket_m
    if eb_n0_db_of_diameter(lo) >= target_db:
        return lo
    steps = 80
    prev = lo
    cell = None
    for i in range(1, steps + 1):
        d = lo + (hi - lo) * i / steps
        if eb_n0_db_of_diameter(d) >= target_db:
            cell = (prev, d)
            break
        prev = d
    if cell is None:
        raise DomainError(
            f"no dish diameter in [{lo}, {hi}] m reaches {target_db} dB"
        )
    a, b = cell
    while b - a > tolerance_m:
        mid = 0.5 * (a + b)
        if eb_n0_db_of_diameter(mid) >= target_db:
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)
