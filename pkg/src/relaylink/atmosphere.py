"""Table-driven atmospheric attenuation for space-to-ground paths.

Stands in for the full ITU-R propagation chain: attenuation values are
tabulated per (frequency, elevation, availability) and interpolated only
along frequency (linear in dB over log-frequency). Queries outside the
table's coverage raise; there is no silent extrapolation.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

from relaylink.errors import DataCoverageError, DomainError
from relaylink.quantities import non_negative, positive

CSV_HEADER = ["frequency_hz", "elevation_deg", "availability_pct", "attenuation_db"]

NEAREST = "nearest"
LOG_FREQUENCY = "log-frequency"


@dataclass(frozen=True)
class AttenuationTable:
    """Immutable attenuation lookup for one ground site."""

    site: str
    entries: tuple  # of (frequency_hz, elevation_deg, availability_pct, attenuation_db)
    interpolation: str = LOG_FREQUENCY

    def __post_init__(self):
        if self.interpolation not in (NEAREST, LOG_FREQUENCY):
            raise DomainError(f"unknown interpolation mode {self.interpolation!r}")
        seen = set()
        for f, el, av, att in self.entries:
            positive(f, "frequency_hz")
            non_negative(att, "attenuation_db")
            if not 0.0 < av < 100.0:
                raise DomainError(f"availability must be in (0, 100), got {av!r}")
            key = (f, el, av)
            if key in seen:
                raise DomainError(f"duplicate table entry for {key}")
            seen.add(key)
        _warn_on_shape_violations(self.site, self.entries)

    def attenuation_db(self, frequency_hz: float, elevation_deg: float,
                       availability_pct: float) -> float:
        """Attenuation in dB, exact on exact-match queries.

        Interpolates along frequency at fixed (elevation, availability);
        raises DataCoverageError when no matching rows bracket the query.
        """
        rows = [
            (f, att) for f, el, av, att in self.entries
            if el == elevation_deg and av == availability_pct
        ]
        for f, att in rows:
            if f == frequency_hz:
                return att
        if not rows:
            raise DataCoverageError(
                f"site {self.site!r}: no rows at elevation {elevation_deg} deg, "
                f"availability {availability_pct}%"
            )
        if self.interpolation == NEAREST:
            return min(rows, key=lambda r: abs(math.log(r[0] / frequency_hz)))[1]
        rows.sort()
        below = [r for r in rows if r[0] < frequency_hz]
        above = [r for r in rows if r[0] > frequency_hz]
        if not below or not above:
            raise DataCoverageError(
                f"site {self.site!r}: frequency {frequency_hz / 1e9:.3f} GHz outside "
                f"tabulated range at elevation {elevation_deg} deg, "
                f"availability {availability_pct}%"
            )
        (f_lo, a_lo), (f_hi, a_hi) = below[-1], above[0]
        t = math.log(frequency_hz / f_lo) / math.log(f_hi / f_lo)
        return a_lo + t * (a_hi - a_lo)


def _warn_on_shape_violations(site, entries):
    # Attenuation should not increase with elevation nor decrease with
    # availability wherever points are comparable.
    for f, el, av, att in entries:
        for f2, el2, av2, att2 in entries:
            if f2 == f and av2 == av and el2 > el and att2 > att + 1e-12:
                warnings.warn(
                    f"site {site!r}: attenuation increases with elevation at "
                    f"{f / 1e9:.3f} GHz ({el} -> {el2} deg)"
                )
            if f2 == f and el2 == el and av2 > av and att2 < att - 1e-12:
                warnings.warn(
                    f"site {site!r}: attenuation decreases with availability at "
                    f"{f / 1e9:.3f} GHz ({av} -> {av2}%)"
                )


def load_table(path: str | Path, site: str | None = None,
               interpolation: str = LOG_FREQUENCY) -> AttenuationTable:
    """Load an attenuation table from CSV with the documented header.

    Lines starting with '#' are comments.
    """
    path = Path(path)
    entries = []
    with path.open(newline="") as handle:
        reader = csv.reader(row for row in handle if not row.startswith("#"))
        header = next(reader)
        if [h.strip() for h in header] != CSV_HEADER:
            raise DomainError(
                f"{path}: header must be {','.join(CSV_HEADER)}, got {','.join(header)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                f, el, av, att = (float(cell) for cell in row)
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: {exc}") from exc
            entries.append((f, el, av, att))
    return AttenuationTable(
        site=site or path.stem, entries=tuple(entries), interpolation=interpolation
    )
