"""Line-oriented persistence for execution logs.

The format is deliberately plain so traces diff well:

* line 1: ``#config`` followed by the run configuration as JSON,
* line 2: the field header,
* then one pipe-separated record per event, in GSN order.

Clock vectors are comma-joined inside their field; optional fields
(sender, receiver, send_gsn) are left empty when absent.  An empty log
persists as just the two header lines.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

from .clocks import BloomClock, VectorClock
from .simulation import EventRecord, ExecutionLog, ExperimentConfig, KINDS

_FIELDS = ("gsn", "pid", "kind", "event_index", "sender", "receiver", "send_gsn", "vector_ts", "bloom_ts")
_HEADER = "|".join(_FIELDS)
_CONFIG_PREFIX = "#config "


class TraceParseError(ValueError):
    """A trace file line could not be parsed; the message names the line number."""


def _format_event(event: EventRecord) -> str:
    def opt(value: int | None) -> str:
        return "" if value is None else str(value)

    return "|".join(
        (
            str(event.gsn),
            str(event.pid),
            event.kind,
            str(event.event_index),
            opt(event.sender),
            opt(event.receiver),
            opt(event.send_gsn),
            ",".join(map(str, event.vector_ts.counters)),
            ",".join(map(str, event.bloom_ts.counters)),
        )
    )


def persist_trace(log: ExecutionLog, path: str | Path) -> None:
    """Write the log to ``path``; ``load_trace`` reproduces an equal log."""
    lines = [_CONFIG_PREFIX + json.dumps(asdict(log.config), sort_keys=True), _HEADER]
    lines.extend(_format_event(event) for event in log.events)
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_event(line: str, lineno: int) -> EventRecord:
    parts = line.split("|")
    if len(parts) != len(_FIELDS):
        raise TraceParseError(f"line {lineno}: expected {len(_FIELDS)} fields, got {len(parts)}")

    def opt(text: str) -> int | None:
        return None if text == "" else int(text)

    try:
        kind = parts[2]
        if kind not in KINDS:
            raise ValueError(f"unknown event kind {kind!r}")
        return EventRecord(
            gsn=int(parts[0]),
            pid=int(parts[1]),
            kind=kind,
            event_index=int(parts[3]),
            sender=opt(parts[4]),
            receiver=opt(parts[5]),
            send_gsn=opt(parts[6]),
            vector_ts=VectorClock(tuple(int(c) for c in parts[7].split(","))),
            bloom_ts=BloomClock(tuple(int(c) for c in parts[8].split(","))),
        )
    except ValueError as exc:
        raise TraceParseError(f"line {lineno}: {exc}") from exc


def load_trace(path: str | Path) -> ExecutionLog:
    """Read a trace written by ``persist_trace``."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith(_CONFIG_PREFIX):
        raise TraceParseError("line 1: missing config line")
    try:
        config = ExperimentConfig(**json.loads(lines[0][len(_CONFIG_PREFIX):]))
    except (TypeError, ValueError) as exc:
        raise TraceParseError(f"line 1: bad config: {exc}") from exc
    if len(lines) < 2 or lines[1] != _HEADER:
        raise TraceParseError(f"line 2: expected header {_HEADER!r}")
    events = [_parse_event(line, lineno) for lineno, line in enumerate(lines[2:], start=3) if line]
    return ExecutionLog(config=config, events=tuple(events))
