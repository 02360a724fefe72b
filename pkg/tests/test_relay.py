import math

import pytest

from relaylink.errors import DomainError
from relaylink.quantities import db_from_linear
from relaylink import relay
from relaylink.rflink import RfAntenna


def budget(noise_over_signal, beq=1e6):
    return relay.LegBudget(noise_over_signal, beq, 1.38e-21)


def test_transparent_noiseless_leg1_limit():
    # Vanishing leg-1 noise leaves the leg-2 SNR times Beq2.
    out = relay.transparent_end_to_end(budget(1e-15), budget(0.1))
    assert out == pytest.approx(10.0 * 1e6, rel=1e-9)


def test_transparent_matched_legs_value():
    # Both legs at SNR 10: 1 / (0.1 + 0.1 * 1.1) = 4.762.
    out = relay.transparent_end_to_end(budget(0.1), budget(0.1))
    assert out / 1e6 == pytest.approx(1.0 / 0.21, rel=1e-12)
    assert db_from_linear(out / 1e6) == pytest.approx(6.78, abs=0.01)


def test_transparent_below_both_legs():
    leg1, leg2 = budget(0.05), budget(0.2)
    out = relay.transparent_end_to_end(leg1, leg2) / 1e6
    assert out < 1 / 0.05
    assert out < 1 / 0.2


def test_transparent_degrades_gracefully():
    # Worsening either leg by x dB worsens the output by at most x dB.
    base = relay.transparent_end_to_end(budget(0.1), budget(0.1))
    worse1 = relay.transparent_end_to_end(budget(0.2), budget(0.1))
    worse2 = relay.transparent_end_to_end(budget(0.1), budget(0.2))
    for worse in (worse1, worse2):
        drop = db_from_linear(base / worse)
        assert 0.0 < drop <= db_from_linear(2.0) + 1e-9


def test_regenerative_total_and_split():
    b = relay.ErrorBudget(pe_leg1=9e-5, pe_leg2=1e-6, pe_target=1e-4)
    assert relay.regenerative_total_error(b) == pytest.approx(9.1e-5)
    assert relay.regenerative_total_error(b) <= b.pe_target
    one, two = relay.regenerative_split(1e-4, 0.9)
    assert one == pytest.approx(9e-5)
    assert two == pytest.approx(1e-5)


def test_regenerative_symmetric_under_swap():
    a = relay.ErrorBudget(3e-5, 6e-5, 1e-4)
    b = relay.ErrorBudget(6e-5, 3e-5, 1e-4)
    assert relay.regenerative_total_error(a) == relay.regenerative_total_error(b)


def test_regenerative_clamp_is_loud():
    b = relay.ErrorBudget(0.7, 0.6, 0.9)
    with pytest.raises(DomainError):
        relay.regenerative_total_error(b)


def test_regenerative_approximation_error_bound():
    # Exact chain error (errors on leg 1 always propagate) differs from the
    # additive approximation by exactly the product term.
    pe1, pe2 = 9e-5, 1e-6
    exact = pe1 + pe2 * (1 - pe1)
    approx = relay.regenerative_total_error(relay.ErrorBudget(pe1, pe2, 1e-3))
    assert abs(approx - exact) <= pe1 * pe2 + 1e-18


def leg1_inputs(dish=5.0, theta_deg=0.01):
    return relay.Leg1Inputs(
        tx_power_w=65.0,
        tx_antenna=RfAntenna(3.0, 0.7),
        relay_antenna=RfAntenna(dish, 0.7),
        range_m=21.092899 * 1.495978707e11,
        theta_max_rad=math.radians(theta_deg),
    )


def test_leg1_pr_n0_grows_then_falls():
    inputs = leg1_inputs()
    low = relay.leg1_pr_n0(inputs, 10e9)
    mid = relay.leg1_pr_n0(inputs, 60e9)
    assert mid > low
    very_high = relay.leg1_pr_n0(inputs, 2000e9)
    assert very_high < mid


def test_crossing_found_and_monotone_in_dish():
    ref = relay.leg1_pr_n0(leg1_inputs(), 63.5e9)
    crossings = []
    for dish in (4.0, 5.0, 6.0):
        f = relay.leg1_crossing_frequency(leg1_inputs(dish), ref)
        assert f is not None
        crossings.append(f)
    assert crossings[0] > crossings[1] > crossings[2]


def test_crossing_tolerance():
    inputs = leg1_inputs()
    ref = relay.leg1_pr_n0(inputs, 63.5e9)
    f = relay.leg1_crossing_frequency(inputs, ref)
    assert f == pytest.approx(63.5e9, abs=0.01e9)


def test_no_crossing_returns_none():
    # A coarse pointing error keeps leg 1 below a strong reference everywhere.
    inputs = leg1_inputs(theta_deg=0.1)
    ref = relay.leg1_pr_n0(leg1_inputs(theta_deg=0.01), 80e9) * 100.0
    assert relay.leg1_crossing_frequency(inputs, ref) is None


def test_solve_dish_diameter():
    target = 10.0
    solved = relay.solve_dish_diameter(
        lambda d: 20.0 * math.log10(d), target, bracket_m=(0.5, 40.0)
    )
    assert solved == pytest.approx(10 ** (target / 20.0), abs=0.002)
    with pytest.raises(DomainError):
        relay.solve_dish_diameter(lambda d: -1.0, 10.0)
