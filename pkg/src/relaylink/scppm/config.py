"""Coded-PPM configuration: block sizes, mappers, and the code data file.

The encoder always produces a 15120-bit coded block; the three code rates
differ only in how many information bits feed one block. Puncturing
patterns and CRC parameters live in a loadable data file because the
toolkit treats them as standardized inputs rather than derivations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from relaylink.datafiles import resolve
from relaylink.errors import ConfigurationError, DataCoverageError

ENCODED_BLOCK_BITS = 15120
CRC_BITS = 32
TERMINATION_BITS = 2

# info bits -> encoder input = info + CRC + termination
INFO_BLOCK_BITS = {"1/3": 5006, "1/2": 7526, "2/3": 10046}
INPUT_BLOCK_BITS = {"1/3": 5040, "1/2": 7560, "2/3": 10080}

MAPPER_NONE = "none"
MAPPER_GRAY = "gray"
MAPPER_ANTI_GRAY = "antigray"

CODE_DATA_FILENAME = "scppm_code.cfg"


@dataclass(frozen=True)
class CodeData:
    """CRC parameters and per-rate puncturing patterns from the data file."""

    crc_polynomial: int
    crc_init: int
    crc_xorout: int
    puncture_patterns: dict  # rate string -> tuple of 3-bit keep masks per step

    def pattern_for(self, code_rate: str) -> tuple:
        if code_rate == "1/3":
            return ((1, 1, 1),)
        if code_rate not in self.puncture_patterns:
            raise DataCoverageError(
                f"no puncturing pattern for rate {code_rate}; "
                "extend the code data file"
            )
        return self.puncture_patterns[code_rate]


def load_code_data(path: str | Path | None = None) -> CodeData:
    """Parse the key-value code data file; see the packaged copy for format."""
    try:
        resolved = resolve(CODE_DATA_FILENAME, path)
    except DataCoverageError:
        raise
    values = {}
    for lineno, raw in enumerate(resolved.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{resolved}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    try:
        patterns = {}
        for key, value in values.items():
            if key.startswith("puncture_"):
                rate = key[len("puncture_"):]
                steps = []
                for step in value.split(","):
                    step = step.strip()
                    if len(step) != 3 or set(step) - {"0", "1"}:
                        raise ConfigurationError(
                            f"{resolved}: bad puncture step {step!r} for {rate}"
                        )
                    steps.append(tuple(int(ch) for ch in step))
                patterns[rate] = tuple(steps)
        return CodeData(
            crc_polynomial=int(values["crc32_polynomial"], 0),
            crc_init=int(values["crc32_init"], 0),
            crc_xorout=int(values["crc32_xorout"], 0),
            puncture_patterns=patterns,
        )
    except KeyError as exc:
        raise ConfigurationError(f"{resolved}: missing key {exc}") from exc


@lru_cache(maxsize=1)
def _default_code_data() -> CodeData:
    return load_code_data()


@dataclass(frozen=True)
class ScppmConfig:
    """One codec configuration; immutable and reusable across frames."""

    ppm_order: int
    code_rate: str = "1/3"
    slot_time_s: float = 256e-9
    mapper: str = MAPPER_GRAY
    iterations: int = 25
    code_data: CodeData | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.ppm_order not in (4, 8, 16, 32, 64, 128, 256):
            raise ConfigurationError(f"unsupported PPM order {self.ppm_order}")
        if self.code_rate not in INFO_BLOCK_BITS:
            raise ConfigurationError(f"unsupported code rate {self.code_rate!r}")
        if self.mapper not in (MAPPER_NONE, MAPPER_GRAY, MAPPER_ANTI_GRAY):
            raise ConfigurationError(f"unknown mapper {self.mapper!r}")
        if self.mapper == MAPPER_ANTI_GRAY:
            raise ConfigurationError("anti-Gray mapping is stubbed but not implemented")
        if self.slot_time_s <= 0:
            raise ConfigurationError("slot_time_s must be positive")
        if self.iterations < 1:
            raise ConfigurationError("iterations must be >= 1")
        if ENCODED_BLOCK_BITS % self.bits_per_symbol:
            raise ConfigurationError("coded block not divisible by bits per symbol")

    @property
    def bits_per_symbol(self) -> int:
        return int(math.log2(self.ppm_order))

    @property
    def info_bits(self) -> int:
        return INFO_BLOCK_BITS[self.code_rate]

    @property
    def input_bits(self) -> int:
        return INPUT_BLOCK_BITS[self.code_rate]

    @property
    def n_symbols(self) -> int:
        return ENCODED_BLOCK_BITS // self.bits_per_symbol

    def with_code_data(self, data: CodeData) -> "ScppmConfig":
        return ScppmConfig(
            ppm_order=self.ppm_order,
            code_rate=self.code_rate,
            slot_time_s=self.slot_time_s,
            mapper=self.mapper,
            iterations=self.iterations,
            code_data=data,
        )

    def require_code_data(self) -> CodeData:
        return self.code_data if self.code_data is not None else _default_code_data()
