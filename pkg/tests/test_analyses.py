import numpy as np
import pytest

from relaylink import analyses
from relaylink.quantities import db_from_linear
from relaylink.scenario import attenuation_table_for, load_scenario


@pytest.fixture(scope="module")
def mars_pair():
    relay = load_scenario("mars-relay-ehf")
    direct = load_scenario("mars-direct-x")
    return relay, direct, attenuation_table_for(relay)


def test_direct_report_contains_ledger(mars_pair):
    _, direct, table = mars_pair
    report = analyses.direct_link_report(direct, table)
    rate = report.line("Achievable Data Rate").linear_value
    assert rate == pytest.approx(113.7, abs=1.0)
    assert report.line("Atmospheric Loss").db_value == -0.5


def test_transparent_sweep_crosses_near_63_ghz(mars_pair):
    relay, direct, table = mars_pair
    grid = np.arange(40e9, 80e9, 0.25e9)
    points = analyses.transparent_sweep(relay, direct, 0.01, table, grid)
    assert all(p.direct_db_hz == points[0].direct_db_hz for p in points)
    gaps = [p.two_leg_db_hz - p.direct_db_hz for p in points]
    crossings = [
        grid[i] for i in range(1, len(gaps)) if gaps[i - 1] < 0 <= gaps[i]
    ]
    assert len(crossings) == 1
    assert 58e9 <= crossings[0] <= 68e9


def test_transparent_sweep_is_leg1_limited(mars_pair):
    # The relay-to-ground leg is strong, so the two-leg output should sit
    # within a fraction of a dB of the leg-1 Pr/N0 itself.
    relay, direct, table = mars_pair
    grid = np.array([60e9])
    point = analyses.transparent_sweep(relay, direct, 0.01, table, grid)[0]
    from relaylink.relay import Leg1Inputs, leg1_pr_n0
    from relaylink.rflink import RfAntenna
    import math

    leg1 = relay.leg1
    inputs = Leg1Inputs(
        tx_power_w=leg1.tx_power_w,
        tx_antenna=RfAntenna(leg1.tx_antenna_diameter_m, leg1.tx_antenna_efficiency),
        relay_antenna=RfAntenna(leg1.rx_antenna_diameter_m, leg1.rx_antenna_efficiency),
        range_m=relay.range_m,
        theta_max_rad=math.radians(0.01),
    )
    leg1_db = db_from_linear(leg1_pr_n0(inputs, 60e9))
    assert point.two_leg_db_hz < leg1_db
    assert point.two_leg_db_hz > leg1_db - 0.5


def test_worse_pointing_lowers_the_curve(mars_pair):
    relay, direct, table = mars_pair
    grid = np.array([60e9])
    fine = analyses.transparent_sweep(relay, direct, 0.01, table, grid)[0]
    coarse = analyses.transparent_sweep(relay, direct, 0.1, table, grid)[0]
    assert coarse.two_leg_db_hz < fine.two_leg_db_hz


def test_crossing_reference_uses_100k_station(mars_pair):
    relay, direct, table = mars_pair
    ref = analyses.crossing_reference(direct, 0.01, 95.0, table)
    # about 52.4 dBHz for this geometry; far from the G/T-based 55.5 dBHz
    assert db_from_linear(ref) == pytest.approx(52.40, abs=0.05)


def test_max_range_table_with_synthetic_cache():
    cache = {
        (64, "1/3", 256.0, 1.21e7, 9e-5): -35.0,
        (256, "1/3", 256.0, 1.21e7, 9e-5): -40.0,
    }
    cells = analyses.max_range_table(
        [0.2, 0.1], [64, 256], "probabilistic", cache
    )
    ranges = {(c.accuracy_urad, c.ppm_order): c.range_au for c in cells}
    assert ranges[(0.1, 64)] / ranges[(0.2, 64)] == pytest.approx(4.0, abs=1e-6)
    # a 5 dB lower threshold buys 10^(5/20) more range
    assert ranges[(0.2, 256)] / ranges[(0.2, 64)] == pytest.approx(
        10 ** 0.25, rel=1e-9
    )
    rates = {c.ppm_order: c.data_rate_kbps for c in cells}
    assert rates[64] == pytest.approx(97.00, abs=0.01)
    assert rates[256] == pytest.approx(32.33, abs=0.01)


def test_max_range_table_missing_key_raises():
    from relaylink.errors import DataCoverageError

    with pytest.raises(DataCoverageError, match="threshold"):
        analyses.max_range_table([0.1], [64], "probabilistic", {})


def test_crossing_monotone_in_dish_and_availability(tmp_path):
    # Only the 95% attenuation point ships; a synthetic user table with
    # plausible higher-availability rows exercises the trend: crossings
    # fall as the dish grows and as the availability requirement rises.
    from relaylink.atmosphere import load_table

    path = tmp_path / "atm.csv"
    path.write_text(
        "frequency_hz,elevation_deg,availability_pct,attenuation_db\n"
        "8.42e9,10.0,95.0,0.5\n"
        "8.42e9,10.0,99.0,1.2\n"
        "8.42e9,10.0,99.9,2.6\n"
    )
    table = load_table(path)
    relay = load_scenario("uranus-relay-ehf")
    direct = load_scenario("uranus-direct-x")
    rows = analyses.crossing_table(
        relay, direct, [4.0, 5.0, 6.0], [95.0, 99.0, 99.9], 0.01, table
    )
    by_key = {(r.relay_dish_m, r.availability_pct): r.crossing_hz for r in rows}
    for availability in (95.0, 99.0, 99.9):
        assert by_key[(4.0, availability)] > by_key[(5.0, availability)] > (
            by_key[(6.0, availability)]
        )
    for dish in (4.0, 5.0, 6.0):
        assert by_key[(dish, 95.0)] > by_key[(dish, 99.0)] > by_key[(dish, 99.9)]


def test_mass_table_rows():
    rows = {row.label: row for row in analyses.mass_table()}
    assert rows["light (lower)"].diameter_cm == pytest.approx(33.5, abs=0.1)
    assert rows["relay TDRS-class"].diameter_cm == pytest.approx(114.2, abs=0.2)
    for row in rows.values():
        total = row.head_kg + row.laser_kg
        assert total == pytest.approx(row.allocation_kg, rel=1e-9)
