"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`. The Monte Carlo criteria
(6 and 8) are the slow ones; everything else completes in seconds.
"""

import math
import os
import time

import numpy as np

from relaylink import analyses, pointing
from relaylink.datafiles import resolve
from relaylink.optical import ScppmRateParams, render_optical_budget, scppm_data_rate
from relaylink.orbital import (
    combined_min_angles,
    load_elements,
    min_angle_for_loss,
    outage_percentages,
    sdp_spd_series,
)
from relaylink import massmodel
from relaylink.rflink import achievable_rate, data_power_share, direct_pr_n0
from relaylink.scenario import (
    attenuation_table_for,
    direct_link_inputs,
    load_scenario,
    optical_budget_inputs,
)
from relaylink.scppm.config import ScppmConfig
from relaylink.scppm import fer as fer_mod

WORKERS = min(8, os.cpu_count() or 1)


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} - {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


# --------------------------------------------------------------------------
# Criterion 1: reference optical budget reproduction


def test_criterion_1_optical_budget():
    start = time.perf_counter()
    scenario = load_scenario("venus-optical")
    inputs, params = optical_budget_inputs(scenario)
    budget = render_optical_budget(
        inputs, params, scenario.leg1.required_flux_db_phe_ns,
        scenario.leg1.target_fer,
    )
    elapsed = time.perf_counter() - start

    expected_tight = {
        "Mean Noise Flux": -3.84,
        "Average Laser Power": 6.99,
        "Peak Laser Power": 26.02,
        "Far-Field Antenna Gain": 129.00,
        "Transmitter Efficiency": -5.00,
        "Space Loss": -366.46,
        "Receiver Gain": 129.00,
        "Receiver Efficiency": -5.00,
        "Detection/Implementation Losses": -4.00,
        "Link Margin": 3.67,
    }
    expected_loose = {
        "Pointing Loss": -8.45,
        "Average Received Power": -123.93,
        "Average Received Photon Flux": -25.00,
        "Minimum Average Received Power": -127.60,
        "Minimum Average Received Photon Flux": -28.68,
    }
    failures = []
    for label, value in expected_tight.items():
        got = budget.line(label).db_value
        if abs(got - value) > 0.05:
            failures.append(f"{label}: {got:.3f} vs {value}")
    for label, value in expected_loose.items():
        got = budget.line(label).db_value
        if abs(got - value) > 0.1:
            failures.append(f"{label}: {got:.3f} vs {value}")
    rate_mbps = budget.line("Information Data Rate").linear_value
    pre_round_kbps = scppm_data_rate(params) / 1e3
    if abs(pre_round_kbps - 97.00) > 0.01:
        failures.append(f"data rate {pre_round_kbps:.3f} kbps vs 97.00")
    if f"{rate_mbps:.2f}" != "0.10":
        failures.append(f"printed rate {rate_mbps:.2f} Mbps vs 0.10")
    if elapsed >= 1.0:
        failures.append(f"runtime {elapsed:.2f} s >= 1 s")
    report("criterion 1 (reference optical budget)", not failures,
           "; ".join(failures) or
           f"all ledger lines within tolerance, {elapsed * 1e3:.0f} ms")


# --------------------------------------------------------------------------
# Criterion 2: coded-PPM data rate formula


def test_criterion_2_rate_formula():
    expected = {4: 517.32, 64: 97.00, 256: 32.33}
    failures = []
    for order, kbps in expected.items():
        got = scppm_data_rate(ScppmRateParams(order, "1/3", 256e-9)) / 1e3
        if abs(got - kbps) > 0.01:
            failures.append(f"M={order}: {got:.3f} vs {kbps}")
    report("criterion 2 (PPM rate formula)", not failures,
           "; ".join(failures) or "517.32 / 97.00 / 32.33 kbps reproduced")


# --------------------------------------------------------------------------
# Criterion 3: direct-link achievable rates


def test_criterion_3_direct_rates():
    start = time.perf_counter()
    expected = {
        "venus-direct-x": 100.0,
        "mars-direct-x": 120.0,
        "uranus-direct-x": 3.15,
        "neptune-direct-x": 1.2,
    }
    failures = []
    details = []
    for name, target in expected.items():
        scenario = load_scenario(name)
        inputs = direct_link_inputs(scenario)
        pd_n0 = data_power_share(direct_pr_n0(inputs), inputs.modulation)
        leg = scenario.direct
        rate = achievable_rate(pd_n0, leg.coding_threshold_db(), leg.margin_db) / 1e3
        error = rate / target - 1.0
        details.append(f"{scenario.target_body} {rate:.2f}k ({error:+.1%})")
        if abs(error) > 0.25:
            failures.append(f"{name}: {rate:.2f} vs {target} kbps ({error:+.1%})")
    elapsed = time.perf_counter() - start
    if elapsed >= 1.0:
        failures.append(f"runtime {elapsed:.2f} s >= 1 s")
    report("criterion 3 (direct-link rates)", not failures,
           "; ".join(failures) or ", ".join(details))


# --------------------------------------------------------------------------
# Criterion 4: crossing frequencies, 95% availability row


def test_criterion_4_crossing_frequencies():
    scenario = load_scenario("uranus-relay-ehf")
    direct = load_scenario("uranus-direct-x")
    table = attenuation_table_for(scenario)
    rows = analyses.crossing_table(
        scenario, direct, [3.0, 4.0, 5.0], [95.0], 0.01, table
    )
    by_dish = {row.relay_dish_m: row.crossing_hz for row in rows}
    failures = []
    five = by_dish[5.0]
    four = by_dish[4.0]
    if five is None or abs(five / 1e9 - 63.9) > 1.5:
        failures.append(f"5 m: {five and five / 1e9:.2f} GHz vs 63.9 +- 1.5")
    if four is None or abs(four / 1e9 - 80.3) > 2.0:
        failures.append(f"4 m: {four and four / 1e9:.2f} GHz vs 80.3 +- 2")
    # Monotone decrease with dish size; a missing crossing only ever happens
    # for the smaller dish (its curve stays below the reference longer).
    three = by_dish[3.0]
    if four is not None and five is not None and not four > five:
        failures.append("4 m crossing not above 5 m crossing")
    if three is not None and four is not None and not three > four:
        failures.append("3 m crossing not above 4 m crossing")
    detail = (f"5m {five / 1e9:.1f} GHz, 4m {four / 1e9:.1f} GHz, "
              f"3m {'none<=120GHz' if three is None else f'{three / 1e9:.1f} GHz'}")
    report("criterion 4 (crossing frequencies)", not failures,
           "; ".join(failures) or detail)


# --------------------------------------------------------------------------
# Criterion 5: relay-to-ground link and minimum dish sizes


def test_criterion_5_leg2():
    scenario = load_scenario("uranus-relay-ehf")
    table = attenuation_table_for(scenario)
    failures = []
    details = []
    for body, rate_kbps, expected in (("neptune", 1.2, 13.43), ("uranus", 3.15, 9.25)):
        got = analyses.leg2_eb_n0_db(scenario, table, rate_kbps * 1e3,
                                     ground_dish_m=2.4)
        details.append(f"{body} {got:.2f} dB")
        if abs(got - expected) > 1.5:
            failures.append(f"{body}: {got:.2f} vs {expected} +- 1.5 dB")
    for body, rate_kbps, expected in (("venus", 100.0, 7.7), ("mars", 120.0, 8.4)):
        dish = analyses.minimum_ground_dish_m(scenario, table, rate_kbps * 1e3)
        details.append(f"{body} dish {dish:.2f} m")
        if abs(dish - expected) > 1.0:
            failures.append(f"{body}: {dish:.2f} vs {expected} +- 1 m")
    report("criterion 5 (relay-to-ground)", not failures,
           "; ".join(failures) or ", ".join(details))


# --------------------------------------------------------------------------
# Criterion 6: pointing outage closed form and optimizer


def test_criterion_6_pointing():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    failures = []
    cases = [
        (10.0 ** (g / 10.0), sigma, allowance)
        for g, sigma, allowance in (
            (50.0, 1e-4, 3.0), (55.0, 1e-4, 5.0), (60.0, 5e-5, 4.0),
            (60.0, 1e-4, 8.0), (65.0, 5e-5, 6.0), (65.0, 2e-5, 2.0),
            (70.0, 2e-5, 5.0), (70.0, 5e-5, 12.0), (75.0, 1e-5, 4.0),
            (80.0, 1e-5, 8.0),
        )
    ]
    trials = 1_000_000
    for gain, sigma, allowance in cases:
        theta_t = rng.rayleigh(sigma, trials)
        theta_r = rng.rayleigh(sigma, trials)
        attenuation = pointing.DB_PER_NAT * gain * (theta_t**2 + theta_r**2)
        empirical = float(np.mean(attenuation > allowance))
        closed = pointing.outage_probability(gain, sigma, gain, sigma, allowance)
        spread = 3.0 * math.sqrt(max(closed * (1 - closed), 1e-12) / trials)
        if abs(empirical - closed) > spread + 1e-9:
            failures.append(
                f"G={10 * math.log10(gain):.0f}dBi sigma={sigma:g}: "
                f"MC {empirical:.5f} vs closed {closed:.5f} (3sig {spread:.5f})"
            )
    c_star = pointing.outage_exponent_root(0.05)
    if abs(c_star - 4.744) > 0.001:
        failures.append(f"c* = {c_star:.4f} vs 4.744 +- 0.001")
    theta = 0.35e-6
    det = pointing.optimize_effective_gain(
        pointing.PointingSpec(mode="deterministic", theta_max_rad=theta)
    )
    expected_det = 10 * math.log10(1 / theta**2)
    if abs(det.gain_dbi - expected_det) > 0.01:
        failures.append(f"deterministic G* {det.gain_dbi:.3f} vs {expected_det:.3f}")
    sigma = 0.35e-6
    prob = pointing.optimize_effective_gain(
        pointing.PointingSpec(mode="probabilistic", sigma_theta_rad=sigma,
                              outage_target=0.05)
    )
    expected_prob = 10 * math.log10(1 / (c_star * sigma**2))
    if abs(prob.gain_dbi - expected_prob) > 0.01:
        failures.append(f"probabilistic G* {prob.gain_dbi:.3f} vs {expected_prob:.3f}")
    elapsed = time.perf_counter() - start
    if elapsed >= 10.0:
        failures.append(f"runtime {elapsed:.1f} s >= 10 s")
    report("criterion 6 (pointing closed form)", not failures,
           "; ".join(failures) or
           f"10 Monte Carlo points + optimizer closed forms, {elapsed:.1f} s")


# --------------------------------------------------------------------------
# Criterion 7: maximum-range structure and table reproduction


TABLE_PROBABILISTIC = {
    # sigma_theta urad: (M=256, M=64, M=32, M=16, M=4) in AU
    1.00: (0.113, 0.062, 0.046, 0.034, 0.019),
    0.50: (0.453, 0.249, 0.184, 0.136, 0.075),
    0.35: (0.924, 0.507, 0.375, 0.277, 0.152),
    0.20: (2.836, 1.555, 1.151, 0.851, 0.467),
    0.15: (5.037, 2.762, 2.045, 1.512, 0.830),
    0.10: (11.342, 6.218, 4.605, 3.406, 1.869),
    0.05: (45.350, 24.864, 18.411, 13.617, 7.474),
}
TABLE_DETERMINISTIC = {
    1.00: (0.539, 0.295, 0.219, 0.162, 0.089),
    0.50: (2.155, 1.182, 0.875, 0.647, 0.355),
    0.35: (4.397, 2.411, 1.785, 1.320, 0.725),
    0.20: (13.470, 7.385, 5.468, 4.044, 2.220),
    0.15: (23.807, 13.053, 9.665, 7.148, 3.924),
    0.10: (53.880, 29.541, 21.874, 16.178, 8.880),
}
ORDERS = (256, 64, 32, 16, 4)


def test_criterion_7_max_range():
    cache = fer_mod.load_threshold_cache(resolve("scppm_thresholds.csv"))
    failures = []

    def table_cells(mode, rows):
        accuracies = sorted(rows)
        cells = analyses.max_range_table(accuracies, list(ORDERS), mode, cache)
        got = {}
        for cell in cells:
            got[(cell.accuracy_urad, cell.ppm_order)] = cell.range_au
        return got

    prob = table_cells("probabilistic", TABLE_PROBABILISTIC)
    det = table_cells("deterministic", TABLE_DETERMINISTIC)

    ratio = prob[(0.05, 64)] / prob[(0.10, 64)]
    if abs(ratio - 4.0) > 0.001:
        failures.append(f"halving ratio {ratio:.4f} vs 4.000 +- 0.001")
    dp_ratio = det[(0.20, 256)] / prob[(0.20, 256)]
    if abs(dp_ratio / 4.74 - 1.0) > 0.02:
        failures.append(f"det/prob ratio {dp_ratio:.3f} vs 4.74 +- 2%")

    worst = 0.0
    for rows, got, label in ((TABLE_PROBABILISTIC, prob, "prob"),
                             (TABLE_DETERMINISTIC, det, "det")):
        for accuracy, values in rows.items():
            for order, expected in zip(ORDERS, values):
                rel = got[(accuracy, order)] / expected - 1.0
                worst = max(worst, abs(rel))
                if abs(rel) > 0.15:
                    failures.append(
                        f"{label} {accuracy} urad M={order}: "
                        f"{got[(accuracy, order)]:.3f} vs {expected} AU ({rel:+.1%})"
                    )
    report("criterion 7 (maximum range)", not failures,
           "; ".join(failures) or
           f"65 cells within +-15% (worst {worst:.1%}), halving ratio "
           f"{ratio:.3f}, det/prob {dp_ratio:.2f}")


# --------------------------------------------------------------------------
# Criterion 8: coded-PPM frame error rates


def _fer_crossing_flux(order, target_fer, seed):
    cfg = ScppmConfig(ppm_order=order, code_rate="1/2", slot_time_s=16e-9)
    flux, _ = fer_mod.required_flux(
        cfg, 0.2, target_fer, seed, frames_per_point=1200, coarse_frames=200,
        bracket_db=(-40.0, -20.0), workers=WORKERS,
    )
    return flux


def test_criterion_8_scppm_fer():
    start = time.perf_counter()
    failures = []

    cfg = ScppmConfig(ppm_order=64, code_rate="1/2", slot_time_s=16e-9)
    point = fer_mod.fer_point(cfg, -26.99, 0.2, 2000, master_seed=814,
                              workers=WORKERS)
    if not 0.011 <= point.fer <= 0.046:
        failures.append(
            f"FER at -26.99 dB: {point.fer:.4f} "
            f"({point.frame_errors}/{point.frames}) outside [0.011, 0.046]"
        )

    noiseless_bad = 0
    for order in (4, 8, 16, 32, 64, 128, 256):
        for rate in ("1/3", "1/2", "2/3"):
            one_iter = ScppmConfig(ppm_order=order, code_rate=rate,
                                   slot_time_s=16e-9, iterations=1)
            result = fer_mod.fer_point(one_iter, 10.0, 0.0, 100,
                                       master_seed=order * 31 + len(rate),
                                       workers=WORKERS)
            noiseless_bad += result.frame_errors
    if noiseless_bad:
        failures.append(f"{noiseless_bad} noiseless frames failed to decode")

    flux_128 = _fer_crossing_flux(128, 1e-2, seed=128)
    flux_256 = _fer_crossing_flux(256, 1e-2, seed=256)
    shift = flux_128 - flux_256
    if abs(shift - 2.5) > 0.7:
        failures.append(f"waterfall shift {shift:.2f} dB vs 2.5 +- 0.7")

    elapsed = time.perf_counter() - start
    budget_s = 30 * 60 * 8 / WORKERS  # stated for eight workers
    if elapsed >= budget_s:
        failures.append(f"runtime {elapsed / 60:.1f} min >= {budget_s / 60:.0f} min")
    report("criterion 8 (coded-PPM FER)", not failures,
           "; ".join(failures) or
           f"FER@-26.99 {point.fer:.4f}, noiseless 2100/2100, "
           f"shift {shift:.2f} dB, {elapsed / 60:.1f} min with {WORKERS} workers")


# --------------------------------------------------------------------------
# Criterion 9: orbital statistics


SDP_OUTAGES = {  # thresholds 40/10/3 degrees
    "venus": (69.67, 14.95, 3.84),
    "mars": (35.92, 9.08, 2.65),
    "uranus": (23.41, 5.85, 1.76),
    "neptune": (23.37, 5.82, 1.63),
}
SPD_OUTAGES = {
    "venus": (37.75, 9.55, 2.55),
    "mars": (87.27, 16.89, 4.64),
    "uranus": (100.0, 100.0, 94.45),
    "neptune": (100.0, 100.0, 100.0),
}
MIN_ANGLES = {  # (SDP, SPD) at 10% loss
    "venus": (7.1, 10.46),
    "mars": (11.0, 6.01),
    "uranus": (17.0, 0.46),
    "neptune": (17.1, 0.30),
}
COMBINED = {  # L5 + direct switching minima (SDP, SPD)
    "venus": (12.39, 17.33),
    "mars": (17.51, 11.19),
    "uranus": (28.55, 1.37),
    "neptune": (29.08, 0.92),
}
OUTER = ("uranus", "neptune")


def test_criterion_9_orbital():
    start = time.perf_counter()
    bodies = load_elements(resolve("planetary_elements.csv"))
    earth = bodies["earth"]
    failures = []
    for body in ("venus", "mars", "uranus", "neptune"):
        series = sdp_spd_series(bodies[body], earth, "l5")
        for label, angles, expected_map in (
            ("sdp", series.sdp_deg, SDP_OUTAGES),
            ("spd", series.spd_deg, SPD_OUTAGES),
        ):
            got = outage_percentages(angles, [40.0, 10.0, 3.0])
            for g, e, thr in zip(got, expected_map[body], (40, 10, 3)):
                if abs(g - e) > 3.0:
                    failures.append(
                        f"{body} {label}@{thr}deg: {g:.2f}% vs {e}% +- 3"
                    )
        min_sdp = min_angle_for_loss(series.sdp_deg, 10.0)
        min_spd = min_angle_for_loss(series.spd_deg, 10.0)
        exp_sdp, exp_spd = MIN_ANGLES[body]
        spd_tol = 0.3 if body in OUTER else 1.5
        if abs(min_sdp - exp_sdp) > 1.5:
            failures.append(f"{body} min sdp {min_sdp:.2f} vs {exp_sdp} +- 1.5")
        if abs(min_spd - exp_spd) > spd_tol:
            failures.append(f"{body} min spd {min_spd:.2f} vs {exp_spd} +- {spd_tol}")
        comb_sdp, comb_spd = combined_min_angles(bodies[body], earth)
        exp_csdp, exp_cspd = COMBINED[body]
        cspd_tol = 0.5 if body in OUTER else 2.0
        if abs(comb_sdp - exp_csdp) > 2.0:
            failures.append(f"{body} combined sdp {comb_sdp:.2f} vs {exp_csdp} +- 2")
        if abs(comb_spd - exp_cspd) > cspd_tol:
            failures.append(
                f"{body} combined spd {comb_spd:.2f} vs {exp_cspd} +- {cspd_tol}"
            )
    elapsed = time.perf_counter() - start
    if elapsed >= 60.0:
        failures.append(f"runtime {elapsed:.1f} s >= 60 s")
    report("criterion 9 (orbital statistics)", not failures,
           "; ".join(failures) or
           f"outages, minima, and combined minima reproduced in {elapsed:.1f} s")


# --------------------------------------------------------------------------
# Criterion 10: mass model


def test_criterion_10_mass_model():
    failures = []
    light = massmodel.max_diameter(massmodel.MassBudget(400.0, 0.06), 5.0)
    if abs(light - 34.0) / 34.0 > 0.02:
        failures.append(f"light lower bound {light:.1f} cm vs 34 cm (>2%)")
    published = {
        (400.0, 0.06, 1.0): 34.0,
        (600.0, 0.07, 1.0): 42.0,
        (1000.0, 0.06, 1.0): 54.0,
        (1200.0, 0.07, 1.0): 63.0,
        (2000.0, 0.06, 1.0): 73.0,
        (2200.0, 0.07, 1.0): 81.0,
        (1800.0, 0.28, 20.0 / 28.0): 114.0,
        (745.0, 0.28, 20.0 / 28.0): 80.0,
    }
    for (dry, frac, leg1), expected in published.items():
        got = massmodel.max_diameter(massmodel.MassBudget(dry, frac, leg1), 5.0)
        if abs(got - expected) / expected > 0.10:
            failures.append(f"{dry:g}/{frac:g}: {got:.1f} cm vs {expected} +- 10%")
    budget = massmodel.MassBudget(1100.0, 0.065)
    diameter = massmodel.max_diameter(budget, 5.0)
    total = massmodel.optics_mass(diameter) + massmodel.laser_mass(5.0)
    if abs(total / budget.allocation_kg - 1.0) > 1e-9:
        failures.append("inversion identity violated beyond 1e-9")
    report("criterion 10 (mass model)", not failures,
           "; ".join(failures) or
           f"light class {light:.1f} cm, all classes within 10%, inversion exact")
