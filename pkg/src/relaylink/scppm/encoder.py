"""Coded-PPM encoder chain: CRC, convolutional code, interleaver, APPM.

Pipeline: append a 32-bit CRC and two zero termination bits, encode with
the memory-2 rate-1/3 mother code (punctured for the higher rates) to
exactly 15120 bits, permute with the quadratic interleaver, accumulate,
slice into log2(M)-bit groups, optionally Gray-map, and emit PPM slot
indices.
"""

from __future__ import annotations

import numpy as np

from relaylink.errors import ConfigurationError
from relaylink.scppm.config import (
    ENCODED_BLOCK_BITS,
    MAPPER_GRAY,
    MAPPER_NONE,
    ScppmConfig,
)

# Mother code generators, memory 2: g1 = 1 + D^2, g2 = g3 = 1 + D + D^2.
GENERATORS = ((1, 0, 1), (1, 1, 1), (1, 1, 1))


def interleave_index(j):
    """Output position of coded bit j under the quadratic permutation."""
    j = np.asarray(j, dtype=np.int64)
    return (11 * j + 210 * j * j) % ENCODED_BLOCK_BITS


_PERMUTATION = interleave_index(np.arange(ENCODED_BLOCK_BITS))
_INVERSE = np.empty_like(_PERMUTATION)
_INVERSE[_PERMUTATION] = np.arange(ENCODED_BLOCK_BITS)


def deinterleave_index(k):
    """Inverse of interleave_index on [0, 15120)."""
    return _INVERSE[np.asarray(k, dtype=np.int64)]


def interleave_bits(bits: np.ndarray) -> np.ndarray:
    out = np.empty_like(bits)
    out[_PERMUTATION] = bits
    return out


def deinterleave_bits(bits: np.ndarray) -> np.ndarray:
    return bits[_PERMUTATION]


def crc32_bits(bits: np.ndarray, polynomial: int, init: int, xorout: int) -> np.ndarray:
    """MSB-first bitwise CRC-32 over a bit array of any length."""
    register = init & 0xFFFFFFFF
    for bit in bits:
        top = (register >> 31) & 1
        register = (register << 1) & 0xFFFFFFFF
        if top ^ int(bit):
            register ^= polynomial
    register ^= xorout
    return np.array([(register >> (31 - i)) & 1 for i in range(32)], dtype=np.uint8)


def conv_encode(input_bits: np.ndarray) -> np.ndarray:
    """Rate-1/3 mother code output, (n, 3) array; final state must be zero."""
    u = np.asarray(input_bits, dtype=np.uint8)
    # Generator taps over (current bit, previous, before previous).
    s1 = np.concatenate([[0], u[:-1]])
    s2 = np.concatenate([[0, 0], u[:-2]])
    out = np.empty((u.size, 3), dtype=np.uint8)
    out[:, 0] = u ^ s2
    out[:, 1] = u ^ s1 ^ s2
    out[:, 2] = out[:, 1]
    return out


def puncture(mother: np.ndarray, pattern: tuple) -> np.ndarray:
    """Keep the pattern-selected mother outputs, cycling the pattern over steps."""
    n_steps = mother.shape[0]
    keep = np.array(pattern * (n_steps // len(pattern) + 1), dtype=bool)[:n_steps]
    return mother[keep].ravel()


def accumulate(bits: np.ndarray) -> np.ndarray:
    """Rate-1 accumulator 1/(1+D), initial state zero."""
    return np.bitwise_xor.accumulate(bits.astype(np.uint8))


def differential_decode(bits: np.ndarray) -> np.ndarray:
    """Inverse of accumulate."""
    out = np.asarray(bits, dtype=np.uint8).copy()
    out[1:] ^= out[:-1]
    return out


def gray_code(values: np.ndarray) -> np.ndarray:
    """Binary-reflected Gray code of each value."""
    return values ^ (values >> 1)


def symbol_map(cfg: ScppmConfig) -> np.ndarray:
    """Slot index for each m-bit accumulated group value (MSB first)."""
    values = np.arange(cfg.ppm_order, dtype=np.int64)
    if cfg.mapper == MAPPER_NONE:
        return values
    if cfg.mapper == MAPPER_GRAY:
        return gray_code(values)
    raise ConfigurationError(f"mapper {cfg.mapper!r} not available")


def bits_to_symbols(bits: np.ndarray, cfg: ScppmConfig) -> np.ndarray:
    """Slice accumulated bits into groups and map them to slot indices."""
    m = cfg.bits_per_symbol
    groups = bits.reshape(-1, m)
    weights = 1 << np.arange(m - 1, -1, -1)
    values = groups.astype(np.int64) @ weights
    return symbol_map(cfg)[values]


def encode(info_bits: np.ndarray, cfg: ScppmConfig) -> np.ndarray:
    """Encode one information block into PPM slot indices.

    Raises on wrong block length or on a higher-rate configuration whose
    puncturing pattern is not available from the code data file.
    """
    info = np.asarray(info_bits, dtype=np.uint8)
    if info.size != cfg.info_bits:
        raise ConfigurationError(
            f"rate {cfg.code_rate} expects {cfg.info_bits} information bits, "
            f"got {info.size}"
        )
    data = cfg.require_code_data()
    crc = crc32_bits(info, data.crc_polynomial, data.crc_init, data.crc_xorout)
    block = np.concatenate([info, crc, np.zeros(2, dtype=np.uint8)])
    coded = puncture(conv_encode(block), data.pattern_for(cfg.code_rate))
    if coded.size != ENCODED_BLOCK_BITS:
        raise ConfigurationError(
            f"punctured block is {coded.size} bits, expected {ENCODED_BLOCK_BITS}"
        )
    return bits_to_symbols(accumulate(interleave_bits(coded)), cfg)
