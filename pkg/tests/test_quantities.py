import math

import pytest
from hypothesis import given, strategies as st

from relaylink.errors import DomainError
from relaylink import quantities as q


def test_db_identity_and_decade():
    assert q.db_from_linear(1.0) == 0.0
    assert q.db_from_linear(100.0) == pytest.approx(20.0, abs=1e-12)


def test_db_matches_reference_budget_gain():
    # 129.00 dB far-field gain corresponds to a linear gain of 7.943e12.
    assert q.db_from_linear(7.943e12) == pytest.approx(129.0, abs=0.001)


@given(st.floats(min_value=-300.0, max_value=300.0))
def test_db_round_trip(db):
    assert q.db_from_linear(q.linear_from_db(db)) == pytest.approx(db, abs=1e-9)


@given(st.floats(min_value=1e-30, max_value=1e30))
def test_linear_round_trip(x):
    assert q.linear_from_db(q.db_from_linear(x)) == pytest.approx(x, rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_db_rejects_non_positive(bad):
    with pytest.raises(DomainError):
        q.db_from_linear(bad)


def test_wavelength_examples():
    assert q.wavelength_from_frequency(299792458.0) == 1.0
    # c / f with exact c
    assert q.wavelength_from_frequency(1.93414e14) * 1e9 == pytest.approx(
        299792458.0 / 1.93414e14 * 1e9, abs=1e-9
    )
    assert abs(q.wavelength_from_frequency(1.93414e14) - 1550e-9) < 0.1e-9
    assert q.wavelength_from_frequency(8.42e9) == pytest.approx(0.035605, abs=5e-7)


def test_frequency_wavelength_inverse():
    assert q.frequency_from_wavelength(q.wavelength_from_frequency(32.4e9)) == (
        pytest.approx(32.4e9, rel=1e-15)
    )


@pytest.mark.parametrize("value", [math.nan, -2.0, 0.0])
def test_positive_guard(value):
    with pytest.raises(DomainError):
        q.positive(value, "x")


def test_fraction_and_probability_guards():
    assert q.fraction(1.0, "eta") == 1.0
    with pytest.raises(DomainError):
        q.fraction(1.2, "eta")
    with pytest.raises(DomainError):
        q.probability(1.0, "p")


def test_photon_energy_1550nm():
    # h * c / lambda with exact constants
    expected = 6.62607015e-34 * 299792458.0 / 1550e-9
    assert q.photon_energy(1550e-9) == pytest.approx(expected, rel=1e-15)
