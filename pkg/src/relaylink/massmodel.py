"""Optical-terminal mass estimation and inversion to a maximum aperture.

Empirical fits: the optical head mass grows as D^2.57 (D in centimeters)
and the laser transmitter mass linearly in average optical power.
"""

from __future__ import annotations

from dataclasses import dataclass

from relaylink.errors import DomainError
from relaylink.quantities import fraction, non_negative, positive

OPTICS_MASS_COEFFICIENT = 0.00181  # kg per cm^2.57
OPTICS_MASS_EXPONENT = 2.57
LASER_MASS_SLOPE = 1.152  # kg per W
LASER_MASS_OFFSET = 3.168  # kg


@dataclass(frozen=True)
class MassBudget:
    """Mass allocation: dry mass times a comm fraction times a leg-1 share."""

    spacecraft_dry_mass_kg: float
    comm_fraction: float
    leg1_fraction: float = 1.0

    def __post_init__(self):
        positive(self.spacecraft_dry_mass_kg, "spacecraft_dry_mass_kg")
        fraction(self.comm_fraction, "comm_fraction")
        fraction(self.leg1_fraction, "leg1_fraction")

    @property
    def allocation_kg(self) -> float:
        return self.spacecraft_dry_mass_kg * self.comm_fraction * self.leg1_fraction


def optics_mass(diameter_cm: float) -> float:
    """Telescope optical-head mass in kg for a diameter in centimeters."""
    non_negative(diameter_cm, "diameter_cm")
    return OPTICS_MASS_COEFFICIENT * diameter_cm**OPTICS_MASS_EXPONENT


def laser_mass(average_power_w: float) -> float:
    """Laser transmitter mass in kg for an average optical power in watts."""
    positive(average_power_w, "average_power_w")
    return LASER_MASS_SLOPE * average_power_w + LASER_MASS_OFFSET


def max_diameter(budget: MassBudget, average_power_w: float) -> float:
    """Largest aperture in centimeters that fits the mass allocation."""
    remaining = budget.allocation_kg - laser_mass(average_power_w)
    if remaining <= 0.0:
        raise DomainError(
            f"allocation {budget.allocation_kg:.1f} kg cannot even cover the "
            f"laser mass {laser_mass(average_power_w):.1f} kg"
        )
    return (remaining / OPTICS_MASS_COEFFICIENT) ** (1.0 / OPTICS_MASS_EXPONENT)
