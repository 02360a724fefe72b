"""Angular-error statistics, pointing-loss models, outage, and effective gain.

Angular error is Rayleigh distributed (i.i.d. Gaussian azimuth/elevation
errors). Two per-antenna loss models are supported: Gaussian beam
exp(-G theta^2) and circular aperture (2 J1(sqrt(G) theta)/(sqrt(G) theta))^2.
Pointing enters budgets either deterministically (worst-case angle
theta_max) or probabilistically (accuracy sigma_theta plus an outage
target), and the effective system gain 2G - allowance admits a finite
optimal antenna gain under both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import j1

from relaylink.errors import ConfigurationError, NumericError
from relaylink.quantities import positive, probability

GAUSSIAN_BEAM = "gaussian-beam"
CIRCULAR_APERTURE = "circular-aperture"

DETERMINISTIC = "deterministic"
PROBABILISTIC = "probabilistic"

DB_PER_NAT = 10.0 / math.log(10.0)
FIRST_J1_ZERO = 3.831705970207512


@dataclass(frozen=True)
class PointingSpec:
    """Loss model plus either a worst-case angle or an accuracy/outage pair."""

    model: str = GAUSSIAN_BEAM
    mode: str = DETERMINISTIC
    theta_max_rad: float | None = None
    sigma_theta_rad: float | None = None
    outage_target: float | None = None

    def __post_init__(self):
        if self.model not in (GAUSSIAN_BEAM, CIRCULAR_APERTURE):
            raise ConfigurationError(f"unknown pointing model {self.model!r}")
        if self.mode == DETERMINISTIC:
            if self.theta_max_rad is None:
                raise ConfigurationError("deterministic pointing requires theta_max_rad")
            positive(self.theta_max_rad, "theta_max_rad")
        elif self.mode == PROBABILISTIC:
            if self.sigma_theta_rad is None or self.outage_target is None:
                raise ConfigurationError(
                    "probabilistic pointing requires sigma_theta_rad and outage_target"
                )
            positive(self.sigma_theta_rad, "sigma_theta_rad")
            probability(self.outage_target, "outage_target")
        else:
            raise ConfigurationError(f"unknown pointing mode {self.mode!r}")


@dataclass(frozen=True)
class EffectiveGainResult:
    """Symmetric-link effective gain: 2 * gain - total pointing allowance."""

    gain_dbi: float
    allowance_db: float
    effective_gain_dbi: float
    optimal_diameter_m: float | None = None


def sample_angle(sigma_theta_rad: float, rng: np.random.Generator, size=None):
    """Draw Rayleigh-distributed angular errors; deterministic for a seeded rng."""
    positive(sigma_theta_rad, "sigma_theta_rad")
    return rng.rayleigh(sigma_theta_rad, size)


def pointing_loss(model: str, gain_linear: float, theta_rad) -> float:
    """Per-antenna pointing loss in (0, 1]; 1 at boresight for both models."""
    positive(gain_linear, "gain_linear")
    theta = np.asarray(theta_rad, dtype=float)
    if np.any(theta < 0.0):
        raise ConfigurationError("pointing angle must be >= 0")
    if model == GAUSSIAN_BEAM:
        out = np.exp(-gain_linear * theta**2)
    elif model == CIRCULAR_APERTURE:
        u = math.sqrt(gain_linear) * theta
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(u == 0.0, 1.0, (2.0 * j1(u) / np.where(u == 0.0, 1.0, u)) ** 2)
    else:
        raise ConfigurationError(f"unknown pointing model {model!r}")
    return out if out.ndim else float(out)


def pointing_attenuation_db(model: str, gain_linear: float, theta_rad: float) -> float:
    """Per-antenna pointing attenuation in dB (the negative of the loss in dB)."""
    if model == GAUSSIAN_BEAM:
        # Closed form avoids underflow of the loss for large G * theta^2.
        return DB_PER_NAT * gain_linear * theta_rad**2
    loss = pointing_loss(model, gain_linear, theta_rad)
    if loss <= 0.0:
        return math.inf
    return -10.0 * math.log10(loss)


def outage_probability(gain_tx: float, sigma_tx: float, gain_rx: float,
                       sigma_rx: float, allowance_db: float,
                       model: str = GAUSSIAN_BEAM) -> float:
    """Probability that the two-antenna pointing attenuation exceeds the allowance.

    Gaussian beam uses the closed form (sum of two exponentials with means
    2 sigma^2 G); the symmetric expression is substituted when the two
    means differ by less than 1e-9 relative. The circular-aperture model
    is integrated numerically.
    """
    for name, val in (("gain_tx", gain_tx), ("sigma_tx", sigma_tx),
                      ("gain_rx", gain_rx), ("sigma_rx", sigma_rx)):
        positive(val, name)
    if allowance_db < 0:
        raise ConfigurationError("allowance_db must be >= 0")
    if allowance_db == 0.0:
        return 1.0
    if model == CIRCULAR_APERTURE:
        return _circular_outage(gain_tx, sigma_tx, gain_rx, sigma_rx, allowance_db)
    k = allowance_db / DB_PER_NAT
    a = 2.0 * sigma_tx**2 * gain_tx
    b = 2.0 * sigma_rx**2 * gain_rx
    if abs(a - b) <= 1e-9 * max(a, b):
        c = k / a
        return float((1.0 + c) * math.exp(-c))
    return float((a * math.exp(-k / a) - b * math.exp(-k / b)) / (a - b))


def _circular_attenuation_inverse(gain: float, target_db: float) -> float:
    # Angle in the main lobe where the circular-aperture attenuation reaches
    # target_db; the attenuation is strictly increasing up to the first null.
    if target_db <= 0.0:
        return 0.0
    theta_null = FIRST_J1_ZERO / math.sqrt(gain)
    f = lambda t: pointing_attenuation_db(CIRCULAR_APERTURE, gain, t) - target_db
    hi = theta_null * (1.0 - 1e-12)
    if f(hi) < 0.0:
        return theta_null
    return brentq(f, 0.0, hi, xtol=1e-16, rtol=1e-13)


def _circular_outage(gain_tx, sigma_tx, gain_rx, sigma_rx, allowance_db):
    # Angles beyond the first null are counted as outage outright, which
    # makes the per-antenna attenuation monotone and invertible.
    theta_null_tx = FIRST_J1_ZERO / math.sqrt(gain_tx)

    def survival(theta_tx):
        att_tx = pointing_attenuation_db(CIRCULAR_APERTURE, gain_tx, theta_tx)
        budget = allowance_db - att_tx
        if budget <= 0.0:
            return 0.0
        theta_rx = _circular_attenuation_inverse(gain_rx, budget)
        in_budget = -math.expm1(-theta_rx**2 / (2.0 * sigma_rx**2))
        density = (theta_tx / sigma_tx**2) * math.exp(-theta_tx**2 / (2.0 * sigma_tx**2))
        return in_budget * density

    ok, _ = quad(survival, 0.0, theta_null_tx, epsrel=1e-6, epsabs=1e-12, limit=200)
    return float(min(1.0, max(0.0, 1.0 - ok)))


def outage_exponent_root(outage_target: float) -> float:
    """Root c of (1 + c) exp(-c) = outage_target, by Newton iteration."""
    p = probability(outage_target, "outage_target")
    c = max(1.0, -math.log(p))
    for _ in range(100):
        f = (1.0 + c) * math.exp(-c) - p
        fprime = -c * math.exp(-c)
        step = f / fprime
        c -= step
        if abs(step) < 1e-14 * max(1.0, abs(c)):
            return c
    raise NumericError("outage exponent iteration did not converge")


def pointing_allowance(spec: PointingSpec, gain_tx: float, gain_rx: float) -> float:
    """Total two-antenna pointing allowance in dB for the given spec.

    Deterministic: sum of the worst-case per-antenna attenuations.
    Probabilistic: the unique allowance whose outage equals the target,
    found by bisection to |delta P| < 1e-9.
    """
    if spec.mode == DETERMINISTIC:
        return (
            pointing_attenuation_db(spec.model, gain_tx, spec.theta_max_rad)
            + pointing_attenuation_db(spec.model, gain_rx, spec.theta_max_rad)
        )
    sigma, target = spec.sigma_theta_rad, spec.outage_target
    outage = lambda a: outage_probability(gain_tx, sigma, gain_rx, sigma, a, spec.model)
    lo, hi = 0.0, 10.0
    while outage(hi) > target:
        hi *= 2.0
        if hi > 1e6:
            raise NumericError("could not bracket the pointing allowance")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        p = outage(mid)
        if abs(p - target) < 1e-9:
            return mid
        if p > target:
            lo = mid
        else:
            hi = mid
    raise NumericError("pointing allowance bisection did not converge")


def effective_system_gain(spec: PointingSpec, gain_dbi: float,
                          wavelength_m: float | None = None) -> EffectiveGainResult:
    """Effective system gain for symmetric antennas at the given gain."""
    gain_linear = 10.0 ** (gain_dbi / 10.0)
    allowance = pointing_allowance(spec, gain_linear, gain_linear)
    diameter = _diameter_for_gain(gain_linear, wavelength_m)
    return EffectiveGainResult(
        gain_dbi=gain_dbi,
        allowance_db=allowance,
        effective_gain_dbi=2.0 * gain_dbi - allowance,
        optimal_diameter_m=diameter,
    )


def optimize_effective_gain(spec: PointingSpec,
                            wavelength_m: float | None = None) -> EffectiveGainResult:
    """Antenna gain maximizing the effective system gain.

    Gaussian-beam optima are closed-form (1/theta_max^2 deterministic,
    1/(c* sigma^2) probabilistic); the circular-aperture optimum is located
    by a coarse scan plus golden-section refinement to 0.01 dB.
    """
    if spec.model == GAUSSIAN_BEAM:
        if spec.mode == DETERMINISTIC:
            gain_linear = 1.0 / spec.theta_max_rad**2
        else:
            c_star = outage_exponent_root(spec.outage_target)
            gain_linear = 1.0 / (c_star * spec.sigma_theta_rad**2)
        return effective_system_gain(spec, 10.0 * math.log10(gain_linear), wavelength_m)
    return _optimize_circular(spec, wavelength_m)


def _optimize_circular(spec, wavelength_m):
    if spec.mode == DETERMINISTIC:
        # Past the first null the loss is zero; stay inside the main lobe.
        hi_dbi = 10.0 * math.log10(0.998 * (FIRST_J1_ZERO / spec.theta_max_rad) ** 2)
    else:
        hi_dbi = 160.0

    def objective(gain_dbi):
        try:
            return effective_system_gain(spec, gain_dbi).effective_gain_dbi
        except NumericError:
            return -math.inf

    grid = np.linspace(0.0, hi_dbi, 161)
    values = [objective(g) for g in grid]
    best = int(np.argmax(values))
    lo = grid[max(0, best - 1)]
    hi = grid[min(len(grid) - 1, best + 1)]
    gain_dbi = _golden_section(objective, lo, hi, tol=0.002)
    return effective_system_gain(spec, gain_dbi, wavelength_m)


def _golden_section(fn, lo, hi, tol):
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = fn(c), fn(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = fn(d)
    return 0.5 * (lo + hi)


def _diameter_for_gain(gain_linear: float, wavelength_m: float | None):
    if wavelength_m is None:
        return None
    return math.sqrt(gain_linear) * wavelength_m / math.pi
