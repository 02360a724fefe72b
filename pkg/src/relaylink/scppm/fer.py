"""Monte Carlo frame error rate harness and required-flux search.

Frames are independent trials: random information bits, encode, Poisson
channel, decode, compare information bits. Each frame draws from its own
RNG stream seeded by (master seed, frame index), which makes results
deterministic for a given seed regardless of worker count or scheduling.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from relaylink.errors import NumericError
from relaylink.scppm.channel import poisson_channel
from relaylink.scppm.config import ScppmConfig
from relaylink.scppm.decoder import decode
from relaylink.scppm.encoder import encode

FER_CSV_HEADER = "flux_db_phe_ns,frames,frame_errors,fer,ci_low,ci_high"
THRESHOLD_CSV_HEADER = "M,R,Ts_ns,nb_phe_per_s,target_fer,ns_star_db"


@dataclass(frozen=True)
class FerPoint:
    """One simulated operating point with a Wilson 95% interval."""

    flux_db_phe_ns: float
    frames: int
    frame_errors: int

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames

    @property
    def confidence_interval(self) -> tuple[float, float]:
        return wilson_interval(self.frame_errors, self.frames)

    def csv_row(self) -> str:
        lo, hi = self.confidence_interval
        return (
            f"{self.flux_db_phe_ns:.4f},{self.frames},{self.frame_errors},"
            f"{self.fer:.6g},{lo:.6g},{hi:.6g}"
        )


def wilson_interval(errors: int, trials: int, z: float = 1.959964) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise NumericError("wilson_interval needs at least one trial")
    phat = errors / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(
        phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials)
    )
    return max(0.0, center - half), min(1.0, center + half)


def signal_per_slot(flux_db_phe_ns: float, cfg: ScppmConfig) -> float:
    """Mean signal photons in the pulsed slot for an average flux in dB phe/ns."""
    flux_phe_per_ns = 10.0 ** (flux_db_phe_ns / 10.0)
    return flux_phe_per_ns * cfg.ppm_order * cfg.slot_time_s * 1e9


def run_frame(cfg: ScppmConfig, ns: float, nb_per_slot: float,
              master_seed: int, frame_index: int) -> bool:
    """Simulate one frame; True when the decoded information bits differ."""
    rng = np.random.default_rng([master_seed, frame_index])
    info = rng.integers(0, 2, size=cfg.info_bits, dtype=np.uint8)
    symbols = encode(info, cfg)
    counts = poisson_channel(symbols, ns, nb_per_slot, cfg.ppm_order, rng)
    decoded, _ = decode(counts, ns, nb_per_slot, cfg)
    return not np.array_equal(decoded, info)


def _run_chunk(args) -> int:
    cfg, ns, nb_per_slot, master_seed, indices = args
    return sum(run_frame(cfg, ns, nb_per_slot, master_seed, i) for i in indices)


def fer_point(cfg: ScppmConfig, flux_db_phe_ns: float, nb_per_slot: float,
              frames: int, master_seed: int, workers: int = 1) -> FerPoint:
    """Measure the FER at one flux with ``frames`` independent frames."""
    ns = signal_per_slot(flux_db_phe_ns, cfg)
    indices = np.arange(frames)
    if workers <= 1:
        errors = _run_chunk((cfg, ns, nb_per_slot, master_seed, indices))
    else:
        chunks = np.array_split(indices, workers * 4)
        jobs = [(cfg, ns, nb_per_slot, master_seed, c) for c in chunks if c.size]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            errors = sum(pool.map(_run_chunk, jobs))
    return FerPoint(flux_db_phe_ns=flux_db_phe_ns, frames=frames, frame_errors=errors)


def fer_sweep(cfg: ScppmConfig, nb_per_slot: float, flux_grid_db,
              frames_per_point: int, master_seed: int,
              workers: int = 1) -> list[FerPoint]:
    """FER at each grid flux; per-point seeds derive from the master seed."""
    points = []
    for offset, flux in enumerate(flux_grid_db):
        points.append(
            fer_point(cfg, flux, nb_per_slot, frames_per_point,
                      master_seed + 1000003 * offset, workers)
        )
    return points


def required_flux(cfg: ScppmConfig, nb_per_slot: float, target_fer: float,
                  master_seed: int, frames_per_point: int = 2000,
                  coarse_frames: int | None = 300, coarse_above_db: float = 0.8,
                  bracket_db: tuple[float, float] = (-40.0, 0.0),
                  workers: int = 1) -> tuple[float, list[FerPoint]]:
    """Minimum flux in dB phe/ns meeting the FER target, by bisection.

    Bisects on the measured FER until the bracket is 0.1 dB wide and
    returns the upper edge (conservative). While the bracket is wider than
    ``coarse_above_db`` the cheaper ``coarse_frames`` count is used.
    Raises NumericError when the target is unreachable inside the bracket.
    """
    if not 0.0 < target_fer < 1.0:
        raise NumericError("target_fer must be in (0, 1)")
    lo, hi = bracket_db
    history: list[FerPoint] = []

    screen_frames = coarse_frames if coarse_frames is not None else frames_per_point
    top = fer_point(cfg, hi, nb_per_slot, screen_frames, master_seed, workers)
    history.append(top)
    if top.fer >= target_fer:
        raise NumericError(
            f"target FER {target_fer} not achievable at {hi} dB phe/ns"
        )
    step = 0
    while hi - lo > 0.1:
        mid = 0.5 * (lo + hi)
        frames = frames_per_point
        if coarse_frames is not None and hi - lo > coarse_above_db:
            frames = coarse_frames
        step += 1
        point = fer_point(cfg, mid, nb_per_slot, frames,
                          master_seed + 7919 * step, workers)
        history.append(point)
        if point.fer >= target_fer:
            lo = mid
        else:
            hi = mid
    return hi, history


def points_to_csv(points: list[FerPoint]) -> str:
    return "\n".join([FER_CSV_HEADER] + [p.csv_row() for p in points]) + "\n"


def load_threshold_cache(path: str | Path) -> dict[tuple, float]:
    """Threshold cache rows keyed (M, R, Ts_ns, nb_phe_per_s, target_fer)."""
    cache: dict[tuple, float] = {}
    path = Path(path)
    if not path.exists():
        return cache
    with path.open(newline="") as handle:
        reader = csv.reader(row for row in handle if not row.startswith("#"))
        header = next(reader, None)
        if header is None:
            return cache
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            order, rate, ts_ns, nb, target, ns_star = row
            key = (int(order), rate, float(ts_ns), float(nb), float(target))
            cache[key] = float(ns_star)
    return cache


def save_threshold_cache(path: str | Path, cache: dict[tuple, float]) -> None:
    lines = [THRESHOLD_CSV_HEADER]
    for (order, rate, ts_ns, nb, target), ns_star in sorted(cache.items()):
        lines.append(f"{order},{rate},{ts_ns:g},{nb:g},{target:g},{ns_star:.4f}")
    Path(path).write_text("\n".join(lines) + "\n")
