"""Synthetic partially synchronous traces.

Each process gets its own generator seeded with (seed, process number), so a
process's trace does not change when more processes are simulated. Local
timestamps are the true sample times; clock skew is applied at ingestion.
"""

import logging
from typing import IO, Iterable, List

import numpy as np

from ..models.simulation import SimConfig
from ..models.trace import TraceRecord

logger = logging.getLogger(__name__)

ACTIVE_ATOM = "active"
ASSEMBLY_ATOM = "at_assembly"


def process_names(n: int) -> List[str]:
    return [f"P{k}" for k in range(1, n + 1)]


def sample_phases(rng: np.random.Generator, mean: int, count: int, unit: int = 1) -> np.ndarray:
    """Exponential phase lengths rounded to the unit, at least one unit each."""
    raw = rng.exponential(mean, size=count)
    return np.maximum(unit, np.round(raw / unit).astype(np.int64) * unit)


def _sample_times(cfg: SimConfig) -> np.ndarray:
    return np.arange(0, cfg.duration + 1, cfg.sample_period, dtype=np.int64)


def _activity(cfg: SimConfig, k: int, times: np.ndarray) -> np.ndarray:
    rng = np.random.default_rng([cfg.seed, k])
    boundaries: List[int] = []
    elapsed = 0
    idle = True
    while elapsed <= cfg.duration:
        mean = cfg.mean_idle if idle else cfg.mean_active
        elapsed += int(sample_phases(rng, mean, 1, cfg.unit)[0])
        boundaries.append(elapsed)
        idle = not idle
    # phases alternate idle, active, idle, ...; odd phase index means active
    phase = np.searchsorted(np.asarray(boundaries), times, side="right")
    return phase % 2 == 1


def _process_trace(cfg: SimConfig, k: int) -> List[TraceRecord]:
    proc = f"P{k}"
    times = _sample_times(cfg)
    if cfg.profile == "gathering":
        assembly = cfg.assembly[k - 1]
        if assembly <= cfg.duration:
            times = np.union1d(times, [assembly])
        flags = times >= assembly
        atom = ASSEMBLY_ATOM
    else:
        flags = _activity(cfg, k, times)
        atom = ACTIVE_ATOM
    return [
        TraceRecord(proc=proc, index=i, ts=int(t), atoms={atom: bool(flag)})
        for i, (t, flag) in enumerate(zip(times, flags))
    ]


def generate_trace(cfg: SimConfig) -> List[TraceRecord]:
    """
    Generate all processes' records, interleaved by timestamp.

    Args:
        cfg: Simulation parameters

    Returns:
        Records ordered by (ts, process number, index)
    """
    records = []
    for k in range(1, cfg.n + 1):
        records.extend((r.ts, k, r.index, r) for r in _process_trace(cfg, k))
    records.sort(key=lambda item: item[:3])
    logger.info("simulated %d events for %d process(es)", len(records), cfg.n)
    return [item[3] for item in records]


def write_trace(records: Iterable[TraceRecord], stream: IO[str]) -> int:
    """Write records one JSON object per line; returns the number written."""
    count = 0
    for record in records:
        stream.write(record.model_dump_json(exclude_none=True) + "\n")
        count += 1
    return count
