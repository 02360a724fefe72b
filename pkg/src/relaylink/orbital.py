"""Mean-element planetary ephemeris and Sun-relay-probe visibility statistics.

Bodies are propagated from mean Keplerian elements with linear secular
rates (epoch J2000). The two geometry angles of interest are the angle at
the relay between Sun and probe (small values blind the relay receiver)
and the angle at the probe between Sun and relay.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from relaylink.errors import ConfigurationError, DataCoverageError, DomainError, NumericError

J2000_JD = 2451545.0
DAYS_PER_CENTURY = 36525.0
DEFAULT_START_JD = 2460676.5  # 2025-01-01
ELEMENTS_HEADER = [
    "body", "a_au", "e", "i_deg", "L_deg", "varpi_deg", "Omega_deg",
    "a_rate", "e_rate", "i_rate", "L_rate", "varpi_rate", "Omega_rate",
]

EARTH_COORBITAL = "earth"  # covers LEO / GEO / L1 / L2 placements
L4 = "l4"
L5 = "l5"
RELAY_PLACEMENTS = (EARTH_COORBITAL, L4, L5)


@dataclass(frozen=True)
class BodyElements:
    """J2000 mean elements and their per-Julian-century rates (AU, degrees)."""

    name: str
    a_au: float
    e: float
    i_deg: float
    L_deg: float
    varpi_deg: float
    Omega_deg: float
    a_rate: float = 0.0
    e_rate: float = 0.0
    i_rate: float = 0.0
    L_rate: float = 0.0
    varpi_rate: float = 0.0
    Omega_rate: float = 0.0
    valid_jd: tuple[float, float] = (2378496.5, 2524593.5)  # 1800-01-01 .. 2200-01-01

    def __post_init__(self):
        if not 0.0 <= self.e < 1.0:
            raise DomainError(f"{self.name}: eccentricity must be in [0, 1)")
        if self.a_au <= 0.0:
            raise DomainError(f"{self.name}: semi-major axis must be positive")


@dataclass(frozen=True)
class AngleSeries:
    """Uniformly sampled relay-vertex and probe-vertex angle histories."""

    epochs_jd: np.ndarray
    sdp_deg: np.ndarray
    spd_deg: np.ndarray

    def __post_init__(self):
        steps = np.diff(self.epochs_jd)
        if steps.size and not np.allclose(steps, steps[0]):
            raise DomainError("epochs must be uniformly sampled")
        for arr in (self.sdp_deg, self.spd_deg):
            if np.any(arr < 0.0) or np.any(arr > 180.0):
                raise DomainError("angles must lie in [0, 180] degrees")


def solve_kepler(mean_anomaly_rad, eccentricity, tol=1e-12, max_iterations=50):
    """Eccentric anomaly from mean anomaly by Newton iteration (vectorized)."""
    m = np.asarray(mean_anomaly_rad, dtype=float)
    e = np.asarray(eccentricity, dtype=float)
    ecc_anomaly = m + e * np.sin(m)
    for _ in range(max_iterations):
        delta = (ecc_anomaly - e * np.sin(ecc_anomaly) - m) / (
            1.0 - e * np.cos(ecc_anomaly)
        )
        ecc_anomaly = ecc_anomaly - delta
        if np.max(np.abs(delta)) < tol:
            return ecc_anomaly
    raise NumericError("Kepler iteration did not converge")


def body_position(elements: BodyElements, epoch_jd) -> np.ndarray:
    """Heliocentric ecliptic position in AU; shape (..., 3) for array epochs."""
    jd = np.asarray(epoch_jd, dtype=float)
    lo, hi = elements.valid_jd
    if np.any(jd < lo) or np.any(jd > hi):
        raise DataCoverageError(
            f"{elements.name}: epoch outside element validity window JD [{lo}, {hi}]"
        )
    t = (jd - J2000_JD) / DAYS_PER_CENTURY
    a = elements.a_au + elements.a_rate * t
    e = elements.e + elements.e_rate * t
    incl = np.radians(elements.i_deg + elements.i_rate * t)
    mean_longitude = elements.L_deg + elements.L_rate * t
    varpi = elements.varpi_deg + elements.varpi_rate * t
    node = np.radians(elements.Omega_deg + elements.Omega_rate * t)
    arg_perihelion = np.radians(varpi) - node
    mean_anomaly = np.radians(np.mod(mean_longitude - varpi + 180.0, 360.0) - 180.0)

    ecc_anomaly = solve_kepler(mean_anomaly, e)
    x_orb = a * (np.cos(ecc_anomaly) - e)
    y_orb = a * np.sqrt(1.0 - e**2) * np.sin(ecc_anomaly)

    cos_w, sin_w = np.cos(arg_perihelion), np.sin(arg_perihelion)
    cos_o, sin_o = np.cos(node), np.sin(node)
    cos_i, sin_i = np.cos(incl), np.sin(incl)
    x = (cos_w * cos_o - sin_w * sin_o * cos_i) * x_orb + (
        -sin_w * cos_o - cos_w * sin_o * cos_i
    ) * y_orb
    y = (cos_w * sin_o + sin_w * cos_o * cos_i) * x_orb + (
        -sin_w * sin_o + cos_w * cos_o * cos_i
    ) * y_orb
    z = sin_w * sin_i * x_orb + cos_w * sin_i * y_orb
    return np.stack([x, y, z], axis=-1)


def relay_position(earth_position: np.ndarray, placement: str) -> np.ndarray:
    """Relay heliocentric position for a placement kind.

    Earth-coorbital relays collapse onto Earth's position; the triangular
    points are Earth's position rotated +-60 degrees about the ecliptic
    pole, the leading point first.
    """
    if placement == EARTH_COORBITAL:
        return earth_position
    if placement == L4:
        phase = math.radians(60.0)
    elif placement == L5:
        phase = math.radians(-60.0)
    else:
        raise ConfigurationError(f"unknown relay placement {placement!r}")
    cos_p, sin_p = math.cos(phase), math.sin(phase)
    x, y, z = (earth_position[..., i] for i in range(3))
    return np.stack([cos_p * x - sin_p * y, sin_p * x + cos_p * y, z], axis=-1)


def vertex_angle_deg(to_first: np.ndarray, to_second: np.ndarray) -> np.ndarray:
    """Angle in degrees between two bundles of vectors sharing a vertex."""
    cross = np.linalg.norm(np.cross(to_first, to_second), axis=-1)
    dot = np.sum(to_first * to_second, axis=-1)
    return np.degrees(np.arctan2(cross, dot))


def sdp_spd_series(
    target: BodyElements,
    earth: BodyElements,
    placement: str = L5,
    start_jd: float = DEFAULT_START_JD,
    years: float = 100.0,
    step_days: float = 1.0,
) -> AngleSeries:
    """Relay-vertex and probe-vertex angle histories over a mission horizon."""
    if target.name == earth.name:
        raise ConfigurationError("target and relay host must be distinct bodies")
    n_samples = int(round(years * 365.25 / step_days)) + 1
    epochs = start_jd + step_days * np.arange(n_samples)
    probe = body_position(target, epochs)
    relay = relay_position(body_position(earth, epochs), placement)
    sdp = vertex_angle_deg(-relay, probe - relay)
    spd = vertex_angle_deg(-probe, relay - probe)
    return AngleSeries(epochs_jd=epochs, sdp_deg=sdp, spd_deg=spd)


def outage_percentages(angles_deg: np.ndarray, thresholds_deg) -> list[float]:
    """Percentage of samples strictly below each threshold."""
    angles = np.asarray(angles_deg, dtype=float)
    if angles.size == 0:
        raise DomainError("empty angle series")
    return [100.0 * float(np.mean(angles < t)) for t in thresholds_deg]


def min_angle_for_loss(angles_deg: np.ndarray, loss_pct: float) -> float:
    """Smallest operable angle costing at most ``loss_pct`` percent availability.

    Inverts the empirical distribution with linear interpolation between
    order statistics.
    """
    angles = np.asarray(angles_deg, dtype=float)
    if angles.size == 0:
        raise DomainError("empty angle series")
    if not 0.0 <= loss_pct <= 100.0:
        raise DomainError("loss_pct must be in [0, 100]")
    return float(np.quantile(angles, loss_pct / 100.0))


def combined_min_angles(
    target: BodyElements,
    earth: BodyElements,
    start_jd: float = DEFAULT_START_JD,
    years: float = 100.0,
    step_days: float = 1.0,
) -> tuple[float, float]:
    """Minimum angles when switching between an L5 relay and the direct path.

    Per epoch the better of the two geometries is used before taking the
    series minimum; returns (min relay-vertex angle, min probe-vertex angle).
    """
    via_l5 = sdp_spd_series(target, earth, L5, start_jd, years, step_days)
    direct = sdp_spd_series(target, earth, EARTH_COORBITAL, start_jd, years, step_days)
    best_sdp = np.maximum(via_l5.sdp_deg, direct.sdp_deg)
    best_spd = np.maximum(via_l5.spd_deg, direct.spd_deg)
    return float(np.min(best_sdp)), float(np.min(best_spd))


def load_elements(path: str | Path) -> dict[str, BodyElements]:
    """Load a body-elements table from CSV with the documented header."""
    path = Path(path)
    bodies: dict[str, BodyElements] = {}
    with path.open(newline="") as handle:
        reader = csv.reader(row for row in handle if not row.startswith("#"))
        header = next(reader)
        if [h.strip() for h in header] != ELEMENTS_HEADER:
            raise DomainError(f"{path}: unexpected header {header}")
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            name = row[0].strip().lower()
            values = [float(cell) for cell in row[1:]]
            bodies[name] = BodyElements(name, *values)
    return bodies


def series_to_csv(series: AngleSeries) -> str:
    out = ["epoch_jd,sdp_deg,spd_deg"]
    for jd, sdp, spd in zip(series.epochs_jd, series.sdp_deg, series.spd_deg):
        out.append(f"{jd:.6f},{sdp:.6f},{spd:.6f}")
    return "\n".join(out) + "\n"
