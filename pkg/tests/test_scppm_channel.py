import math

import numpy as np
import pytest
from scipy.stats import poisson

from relaylink.errors import DomainError
from relaylink.scppm import channel


def test_silent_channel_all_zero():
    symbols = np.array([0, 1, 2, 3])
    counts = channel.poisson_channel(symbols, 0.0, 0.0, 4, np.random.default_rng(0))
    assert counts.shape == (4, 4)
    assert counts.sum() == 0


def test_pulsed_slot_mean():
    rng = np.random.default_rng(1)
    n = 200_000
    symbols = np.zeros(n, dtype=int)
    ns, nb = 3.0, 0.5
    counts = channel.poisson_channel(symbols, ns, nb, 4, rng)
    pulsed_mean = counts[:, 0].mean()
    tol = 4 * math.sqrt((ns + nb) / n)
    assert abs(pulsed_mean - (ns + nb)) < tol
    empty_mean = counts[:, 1:].mean()
    assert abs(empty_mean - nb) < 4 * math.sqrt(nb / (3 * n))


def test_empty_slot_zero_probability():
    rng = np.random.default_rng(2)
    n = 100_000
    counts = channel.poisson_channel(np.zeros(n, dtype=int), 1.0, 0.2, 2, rng)
    p_zero = np.mean(counts[:, 1] == 0)
    assert p_zero == pytest.approx(math.exp(-0.2), abs=0.005)


def test_channel_is_seed_deterministic():
    symbols = np.arange(64) % 8
    a = channel.poisson_channel(symbols, 2.0, 0.3, 8, np.random.default_rng(9))
    b = channel.poisson_channel(symbols, 2.0, 0.3, 8, np.random.default_rng(9))
    assert np.array_equal(a, b)


def test_llr_at_zero_count():
    assert channel.slot_log_likelihood_ratio(0, 2.5, 0.2) == pytest.approx(-2.5)


def test_llr_uninformative_without_signal():
    assert np.all(channel.slot_log_likelihood_ratio(np.arange(5), 0.0, 0.2) == 0.0)


def test_llr_known_value():
    # k log(1 + ns/nb) - ns at k=3, ns=1, nb=0.2
    value = channel.slot_log_likelihood_ratio(3, 1.0, 0.2)
    assert value == pytest.approx(3 * math.log(6.0) - 1.0, rel=1e-12)
    assert value == pytest.approx(4.375, abs=0.002)


def test_llr_matches_poisson_pmf_ratio():
    ns, nb = 1.7, 0.4
    k = np.arange(0, 51)
    expected = poisson.logpmf(k, ns + nb) - poisson.logpmf(k, nb)
    got = channel.slot_log_likelihood_ratio(k, ns, nb)
    assert np.allclose(got, expected, atol=1e-9)


def test_llr_affine_in_count():
    ns, nb = 2.2, 0.3
    k = np.arange(0, 51, dtype=float)
    llr = channel.slot_log_likelihood_ratio(k, ns, nb)
    slopes = np.diff(llr)
    assert np.allclose(slopes, math.log1p(ns / nb), atol=1e-12)


def test_zero_background_clamp():
    llr = channel.slot_log_likelihood_ratio(np.array([0, 1, 5]), 4.0, 0.0)
    assert llr[0] == -4.0
    assert llr[1] == channel.ZERO_BACKGROUND_LLR
    assert llr[2] == channel.ZERO_BACKGROUND_LLR


def test_negative_means_rejected():
    with pytest.raises(DomainError):
        channel.slot_log_likelihood_ratio(1, -1.0, 0.1)
    with pytest.raises(DomainError):
        channel.poisson_channel(np.zeros(1, int), -1.0, 0.0, 4,
                                np.random.default_rng(0))
