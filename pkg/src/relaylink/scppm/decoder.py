"""Iterative decoder: inner accumulator-PPM SISO and outer code SISO.

The two soft-input soft-output passes exchange extrinsic information
through the bit interleaver for a fixed number of iterations (no early
stopping), then the outer code's information-bit posteriors are sliced
and hard-decided.

The hot kernels come from the compiled extension when it is importable;
otherwise the NumPy twins are used. Set RELAYLINK_FORCE_PYTHON=1 to force
the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from relaylink.scppm import _kernels_py
from relaylink.scppm.channel import slot_log_likelihood_ratio
from relaylink.scppm.config import ENCODED_BLOCK_BITS, ScppmConfig
from relaylink.scppm.encoder import (
    crc32_bits,
    deinterleave_bits,
    interleave_bits,
    symbol_map,
)

if os.environ.get("RELAYLINK_FORCE_PYTHON"):
    _kernels = _kernels_py
else:
    try:
        from relaylink.scppm import _kernels  # compiled extension
    except ImportError:
        _kernels = _kernels_py


def kernel_backend() -> str:
    """Which SISO kernel implementation is active: 'compiled' or 'python'."""
    return _kernels.BACKEND


@dataclass(frozen=True)
class InnerTables:
    """Per-(order, mapper) lookup tables for the accumulator-PPM trellis."""

    bits_per_symbol: int
    slot_from_zero: np.ndarray  # slot index when the accumulator starts at 0
    slot_from_one: np.ndarray   # ... and when it starts at 1
    parity: np.ndarray          # next accumulator state from a zero start
    bit_matrix: np.ndarray      # (M, m) input bit values, MSB first


@dataclass(frozen=True)
class OuterTrellis:
    """4-state trellis of the memory-2 mother code."""

    next_state: np.ndarray  # (4, 2)
    outputs: np.ndarray     # (4, 2, 3) mother output bits


@lru_cache(maxsize=None)
def inner_tables(ppm_order: int, mapper: str) -> InnerTables:
    m = int(np.log2(ppm_order))
    u = np.arange(ppm_order, dtype=np.int64)
    bits = (u[:, None] >> np.arange(m - 1, -1, -1)[None, :]) & 1  # (M, m)
    prefix = np.bitwise_xor.accumulate(bits, axis=1)
    weights = 1 << np.arange(m - 1, -1, -1)
    prefix_value = prefix @ weights
    mapping = symbol_map(ScppmConfig(ppm_order=ppm_order, mapper=mapper))
    return InnerTables(
        bits_per_symbol=m,
        slot_from_zero=np.ascontiguousarray(mapping[prefix_value], dtype=np.int32),
        slot_from_one=np.ascontiguousarray(
            mapping[(ppm_order - 1) ^ prefix_value], dtype=np.int32
        ),
        parity=np.ascontiguousarray(prefix[:, -1], dtype=np.int32),
        bit_matrix=np.ascontiguousarray(bits, dtype=np.float64),
    )


@lru_cache(maxsize=1)
def outer_trellis() -> OuterTrellis:
    next_state = np.empty((4, 2), dtype=np.int32)
    outputs = np.empty((4, 2, 3), dtype=np.int32)
    for state in range(4):
        s1, s2 = (state >> 1) & 1, state & 1
        for u in range(2):
            next_state[state, u] = (u << 1) | s1
            o1 = u ^ s2
            o2 = u ^ s1 ^ s2
            outputs[state, u] = (o1, o2, o2)
    return OuterTrellis(next_state=next_state, outputs=outputs)


@lru_cache(maxsize=None)
def _puncture_layout(code_rate: str, pattern: tuple, n_steps: int):
    # Flat mother-bit index (step * 3 + j) of each transmitted bit, in order.
    keep = np.array(pattern * (n_steps // len(pattern) + 1), dtype=bool)[:n_steps]
    return np.flatnonzero(keep.ravel()).astype(np.int64)


def decode(slot_counts: np.ndarray, ns: float, nb: float,
           cfg: ScppmConfig) -> tuple[np.ndarray, bool]:
    """Decode one frame of per-slot photon counts.

    Returns (information bits, CRC-consistent flag). Decoding failure is a
    data outcome, not an error.
    """
    slot_ll = np.ascontiguousarray(
        slot_log_likelihood_ratio(slot_counts, ns, nb), dtype=np.float64
    ).reshape(cfg.n_symbols, cfg.ppm_order)
    tables = inner_tables(cfg.ppm_order, cfg.mapper)
    trellis = outer_trellis()
    data = cfg.require_code_data()
    pattern = data.pattern_for(cfg.code_rate)
    n_steps = cfg.input_bits
    layout = _puncture_layout(cfg.code_rate, pattern, n_steps)

    prior = np.zeros(ENCODED_BLOCK_BITS)
    app_info = np.zeros(n_steps)
    for _ in range(cfg.iterations):
        inner_ext = _kernels.inner_siso(slot_ll, prior, tables)
        outer_channel = np.zeros(n_steps * 3)
        outer_channel[layout] = deinterleave_bits(inner_ext)
        outer_ext, app_info = _kernels.outer_siso(
            outer_channel.reshape(n_steps, 3), trellis
        )
        prior = interleave_bits(outer_ext.ravel()[layout])

    decided = (app_info > 0).astype(np.uint8)
    info = decided[: cfg.info_bits]
    crc = crc32_bits(info, data.crc_polynomial, data.crc_init, data.crc_xorout)
    converged = bool(np.array_equal(crc, decided[cfg.info_bits: cfg.info_bits + 32]))
    return info, converged
