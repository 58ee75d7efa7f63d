"""Owns one ProcessStream per process and hands closed states to the lattice."""

import logging
import queue
import threading
from typing import Dict, Iterator, List

from ..models.trace import LocalState, TraceRecord
from .trace_model import ProcessStream, ingest_record

logger = logging.getLogger(__name__)


class StreamRegistry:
    """
    Process streams keyed by process id.

    Producers may call submit() concurrently, one producer per process. Each
    stream is guarded by its own lock; closed states are moved onto a single
    queue under the hand-off lock, so the consumer sees every process's
    states in index order.
    """

    def __init__(self, epsilon: int = 0, unit: int = 1):
        self.epsilon = epsilon
        self.unit = unit
        self.streams: Dict[str, ProcessStream] = {}
        self.processes: List[str] = []
        self.registry_lock = threading.Lock()
        self.handoff_lock = threading.Lock()
        self.ready: "queue.Queue[LocalState]" = queue.Queue()

    def stream(self, proc: str) -> ProcessStream:
        """Get or create the stream of `proc`."""
        with self.registry_lock:
            stream = self.streams.get(proc)
            if stream is None:
                stream = ProcessStream(proc, self.epsilon, self.unit)
                self.streams[proc] = stream
                self.processes.append(proc)
                logger.debug("registered process %s", proc)
            return stream

    def submit(self, record: TraceRecord) -> None:
        """Ingest one record; a closed state, if any, is queued for the consumer."""
        stream = self.stream(record.proc)
        with stream.lock:
            ingest_record(stream, record)
            with self.handoff_lock:
                while stream.completed:
                    self.ready.put(stream.completed.popleft())

    def drain(self) -> Iterator[LocalState]:
        """Yield queued states until the hand-off queue is empty."""
        while True:
            try:
                yield self.ready.get_nowait()
            except queue.Empty:
                return
