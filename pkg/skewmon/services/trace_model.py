"""Events, local states and the definitely-before relation.

Times inside the monitor are integer ticks. Raw trace values are divided by
the configured quantum on the way in; anything that does not divide evenly is
rejected.
"""

import logging
import threading
from collections import deque
from typing import Deque, Optional, Tuple

from ..errors import QuantizationError, SequenceError, TraceFormatError, TraceValidityError
from ..models.trace import Event, Interval, LocalState, TraceRecord

logger = logging.getLogger(__name__)


class Quantizer:
    """Converts raw time values (ms by default) to integer ticks."""

    def __init__(self, unit: int = 1):
        if unit < 1:
            raise QuantizationError(f"time unit must be positive, got {unit}")
        self.unit = unit

    def ticks(self, value: int, what: str = "time value") -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise QuantizationError(f"{what} {value!r} is not an integer")
        if value % self.unit:
            raise QuantizationError(f"{what} {value} is not a multiple of the unit {self.unit}")
        return value // self.unit


def event_interval(local_ts: int, epsilon: int, unit: int = 1) -> Interval:
    """
    Global-time bounds of an event observed at local time `local_ts`.

    Args:
        local_ts: Local timestamp in raw units
        epsilon: Clock-skew bound in raw units
        unit: Time quantum

    Returns:
        [max(0, ts - eps), ts + eps] in ticks
    """
    quantizer = Quantizer(unit)
    ts = quantizer.ticks(local_ts, "timestamp")
    eps = quantizer.ticks(epsilon, "epsilon")
    if ts < 0:
        raise TraceFormatError(f"negative timestamp {local_ts}")
    if eps < 0:
        raise QuantizationError(f"negative epsilon {epsilon}")
    return Interval(lo=max(0, ts - eps), hi=ts + eps)


def definitely_before_events(e1: Event, e2: Event) -> bool:
    if e1.proc == e2.proc:
        return e1.interval.lo < e2.interval.lo
    return e1.interval.hi < e2.interval.lo


def definitely_before_states(s1: LocalState, s2: LocalState) -> bool:
    if s1.proc == s2.proc:
        return definitely_before_events(s1.le, s2.le)
    return definitely_before_events(s1.he, s2.le)


def state_intervals(state: LocalState) -> Tuple[Interval, Interval]:
    """Return (I_def, I_pos); I_def is empty (lo > hi) when the bounding events overlap."""
    i_def = Interval(lo=state.le.interval.hi, hi=state.he.interval.lo)
    i_pos = Interval(lo=state.le.interval.lo, hi=state.he.interval.hi)
    return i_def, i_pos


class ProcessStream:
    """
    Per-process ingestion state.

    Holds the last event (still opening a state) and a FIFO of closed local
    states. Single writer: callers serialize access through `lock`.
    """

    def __init__(self, proc: str, epsilon: int = 0, unit: int = 1):
        self.proc = proc
        self.quantizer = Quantizer(unit)
        self.epsilon = self.quantizer.ticks(epsilon, "epsilon")
        self.last_index = -1
        self.pending: Optional[Tuple[Event, dict]] = None
        self.completed: Deque[LocalState] = deque()
        self.lock = threading.Lock()

    def __repr__(self) -> str:
        return f"ProcessStream({self.proc!r}, last_index={self.last_index})"


def _record_interval(stream: ProcessStream, record: TraceRecord) -> Interval:
    quantizer = stream.quantizer
    if record.interval is None:
        ts = quantizer.ticks(record.ts, "timestamp")
        return Interval(lo=max(0, ts - stream.epsilon), hi=ts + stream.epsilon)
    lo, hi = (quantizer.ticks(v, "interval bound") for v in record.interval)
    if lo < 0 or lo > hi:
        raise TraceFormatError(
            f"{record.proc}#{record.index}: invalid explicit interval {list(record.interval)}"
        )
    return Interval(lo=lo, hi=hi)


def ingest_record(stream: ProcessStream, record: TraceRecord) -> Optional[LocalState]:
    """
    Register one event of `stream.proc`.

    Args:
        stream: The process's stream
        record: Next trace record of that process

    Returns:
        The local state closed by this event, or None for the first event

    Raises:
        SequenceError: index is not last index + 1
        TraceValidityError: event interval moves backwards
        TraceFormatError: wrong process, or negative timestamp
    """
    if record.proc != stream.proc:
        raise TraceFormatError(f"record of {record.proc} sent to stream {stream.proc}")
    if record.ts < 0:
        raise TraceFormatError(f"{record.proc}#{record.index}: negative timestamp {record.ts}")
    if record.index != stream.last_index + 1:
        raise SequenceError(
            f"{record.proc}: expected event index {stream.last_index + 1}, got {record.index}"
        )

    interval = _record_interval(stream, record)
    event = Event(
        proc=record.proc,
        index=record.index,
        local_ts=stream.quantizer.ticks(record.ts, "timestamp"),
        interval=interval,
    )

    closed = None
    if stream.pending is not None:
        previous, atoms = stream.pending
        if interval.lo < previous.interval.lo or interval.hi < previous.interval.hi:
            raise TraceValidityError(
                f"{record.proc}#{record.index}: interval {interval} goes back "
                f"from {previous.interval}"
            )
        closed = LocalState(proc=stream.proc, index=previous.index,
                            le=previous, he=event, atoms=atoms)
        stream.completed.append(closed)
        logger.debug("closed state %s", closed.label)

    stream.pending = (event, dict(record.atoms))
    stream.last_index = record.index
    return closed
