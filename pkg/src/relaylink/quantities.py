"""Physical constants, dB/linear conversions, and scalar validation guards.

All internal arithmetic is carried out in linear units; decibels appear
only at I/O boundaries. Constants are CODATA exact values.
"""

from __future__ import annotations

import math

from relaylink.errors import DomainError

SPEED_OF_LIGHT = 299792458.0  # m/s, exact
PLANCK = 6.62607015e-34  # J*s, exact
BOLTZMANN = 1.380649e-23  # J/K, exact
ASTRONOMICAL_UNIT = 1.495978707e11  # m


def db_from_linear(x: float) -> float:
    """Convert a positive linear ratio to decibels.

    Raises DomainError for non-positive or non-finite input.
    """
    if not (x > 0.0) or math.isinf(x):
        raise DomainError(f"linear ratio must be positive and finite, got {x!r}")
    return 10.0 * math.log10(x)


def linear_from_db(db: float) -> float:
    """Convert decibels to a linear ratio."""
    if math.isnan(db):
        raise DomainError("dB value must not be NaN")
    return 10.0 ** (db / 10.0)


def wavelength_from_frequency(frequency_hz: float) -> float:
    """Wavelength in meters for a positive frequency in hertz."""
    return SPEED_OF_LIGHT / positive(frequency_hz, "frequency_hz")


def frequency_from_wavelength(wavelength_m: float) -> float:
    """Frequency in hertz for a positive wavelength in meters."""
    return SPEED_OF_LIGHT / positive(wavelength_m, "wavelength_m")


def photon_energy(wavelength_m: float) -> float:
    """Energy in joules of one photon at the given wavelength."""
    return PLANCK * SPEED_OF_LIGHT / positive(wavelength_m, "wavelength_m")


def positive(value: float, name: str) -> float:
    """Validate that ``value`` is a finite, strictly positive scalar."""
    if math.isnan(value) or math.isinf(value) or value <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return float(value)


def non_negative(value: float, name: str) -> float:
    """Validate that ``value`` is a finite scalar >= 0."""
    if math.isnan(value) or math.isinf(value) or value < 0.0:
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
    return float(value)


def fraction(value: float, name: str) -> float:
    """Validate an efficiency-like scalar in (0, 1]."""
    if math.isnan(value) or value <= 0.0 or value > 1.0:
        raise DomainError(f"{name} must be in (0, 1], got {value!r}")
    return float(value)


def probability(value: float, name: str) -> float:
    """Validate a probability in the open interval (0, 1)."""
    if math.isnan(value) or value <= 0.0 or value >= 1.0:
        raise DomainError(f"{name} must be in (0, 1), got {value!r}")
    return float(value)
