"""Poisson photon-counting PPM channel and its slot likelihood ratios."""

from __future__ import annotations

import math

import numpy as np

from relaylink.errors import DomainError

# Log-likelihood assigned to a nonzero count on a zero-background channel;
# decision-equivalent to +infinity while keeping arithmetic finite.
ZERO_BACKGROUND_LLR = 300.0


def poisson_channel(symbols: np.ndarray, ns: float, nb: float,
                    ppm_order: int, rng: np.random.Generator) -> np.ndarray:
    """Photon counts per slot, shape (n_symbols, M); pulsed slots add ns.

    Draws are seeded-deterministic: empty-slot noise first, then the
    pulsed-slot signal counts.
    """
    if ns < 0 or nb < 0:
        raise DomainError("mean photon counts must be >= 0")
    symbols = np.asarray(symbols)
    n = symbols.size
    counts = (
        rng.poisson(nb, size=(n, ppm_order))
        if nb > 0
        else np.zeros((n, ppm_order), dtype=np.int64)
    )
    if ns > 0:
        counts[np.arange(n), symbols] += rng.poisson(ns, size=n)
    return counts


def slot_log_likelihood_ratio(counts, ns: float, nb: float):
    """log p(k | pulsed) / p(k | empty) per slot.

    Equals k * log(1 + ns/nb) - ns for nb > 0; with zero background any
    nonzero count is conclusive and maps to a large positive constant.
    """
    if ns < 0 or nb < 0:
        raise DomainError("mean photon counts must be >= 0")
    k = np.asarray(counts, dtype=np.float64)
    if ns == 0.0:
        return np.zeros_like(k)
    if nb == 0.0:
        return np.where(k > 0, ZERO_BACKGROUND_LLR, -ns)
    return k * math.log1p(ns / nb) - ns
