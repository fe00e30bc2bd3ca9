"""Append-only event log: the single source of truth for every assertion.

Entries are (tick, seq, kind, data) with (tick, seq) strictly increasing.
Serialization is NDJSON with a fixed field order, so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Callable, Mapping


def jsonable(value):
    """Normalize payload values into deterministic JSON-friendly shapes."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: jsonable(getattr(value, f.name))
                for f in dataclasses.fields(value)}
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted(jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


@dataclass(frozen=True)
class Event:
    tick: int
    seq: int
    kind: str
    data: dict

    def to_line(self) -> str:
        record = {"tick": self.tick, "seq": self.seq, "kind": self.kind,
                  "data": self.data}
        return json.dumps(record, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_line(cls, line: str) -> "Event":
        record = json.loads(line)
        return cls(record["tick"], record["seq"], record["kind"], record["data"])


class EventLog:
    def __init__(self):
        self.entries: list[Event] = []
        self._subscribers: list[Callable[[Event], None]] = []

    def append(self, tick: int, kind: str, data: dict) -> Event:
        event = Event(tick, len(self.entries), kind, jsonable(data))
        self.entries.append(event)
        for subscriber in list(self._subscribers):
            subscriber(event)
        return event

    def subscribe(self, fn: Callable[[Event], None]) -> None:
        self._subscribers.append(fn)

    def unsubscribe(self, fn: Callable[[Event], None]) -> None:
        if fn in self._subscribers:
            self._subscribers.remove(fn)

    def since(self, seq: int) -> list[Event]:
        return [e for e in self.entries if e.seq > seq]

    def serialize(self) -> str:
        return "".join(e.to_line() + "\n" for e in self.entries)

    @classmethod
    def parse(cls, text: str) -> "EventLog":
        log = cls()
        for line in text.splitlines():
            if line:
                log.entries.append(Event.from_line(line))
        return log
