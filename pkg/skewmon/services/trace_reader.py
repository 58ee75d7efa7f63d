"""Line-delimited JSON trace input."""

import logging
import threading
from pathlib import Path
from typing import IO, Iterator, List, Optional

from pydantic import ValidationError
from watchfiles import watch

from ..errors import TraceFormatError
from ..models.trace import TraceRecord

logger = logging.getLogger(__name__)


def parse_record(line: str, line_no: int = 0) -> TraceRecord:
    try:
        return TraceRecord.model_validate_json(line)
    except ValidationError as e:
        first = e.errors()[0]
        if first["type"] == "json_invalid":
            raise TraceFormatError(f"line {line_no}: not valid JSON ({first['msg']})") from e
        where = ".".join(str(p) for p in first["loc"]) or "record"
        raise TraceFormatError(f"line {line_no}: {where}: {first['msg']}") from e


def read_trace(stream: IO[str]) -> Iterator[TraceRecord]:
    """Yield records in file order, skipping blank lines."""
    for line_no, line in enumerate(stream, start=1):
        if line.strip():
            yield parse_record(line, line_no)


def scan_processes(path: Path) -> List[str]:
    """Process ids of a trace file in order of first appearance."""
    seen: List[str] = []
    with open(path, encoding="utf-8") as stream:
        for record in read_trace(stream):
            if record.proc not in seen:
                seen.append(record.proc)
    return seen


def follow_trace(path: Path, stop_event: Optional[threading.Event] = None) -> Iterator[TraceRecord]:
    """
    Yield records of a file that keeps growing.

    Reads what is there, then waits for filesystem changes and yields the
    newly completed lines. Ends when stop_event is set.
    """
    stop_event = stop_event or threading.Event()
    line_no = 0
    partial = ""
    with open(path, encoding="utf-8") as stream:
        while True:
            chunk = stream.read()
            if chunk:
                lines = (partial + chunk).split("\n")
                partial = lines.pop()
                for line in lines:
                    line_no += 1
                    if line.strip():
                        yield parse_record(line, line_no)
            if stop_event.is_set():
                return
            for _ in watch(path, stop_event=stop_event, rust_timeout=500, yield_on_timeout=True):
                break
