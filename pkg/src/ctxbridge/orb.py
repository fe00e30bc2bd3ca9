"""Simulated reflective object broker: named servants, invoke-by-name,
runtime interceptor chains, and the deterministic alarm generator.

Alarms come from a scenario-driven schedule (never randomness) and every one
is appended to the orb's persistent log in tick order.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .errors import (
    DuplicateInterceptor,
    DuplicateName,
    MalformedIor,
    TypeMismatch,
    UnknownInterceptor,
    UnknownMethod,
    UnknownObject,
)

SEVERITIES = ("normal", "critical")

# simple-type name -> accepted python type check
_TYPE_CHECKS: dict[str, Callable[[object], bool]] = {
    "string": lambda v: isinstance(v, str),
    "int": lambda v: isinstance(v, int) and not isinstance(v, bool),
    "float": lambda v: isinstance(v, float),
    "bool": lambda v: isinstance(v, bool),
    "unit": lambda v: v is None,
}


@dataclass(frozen=True)
class ObjectRef:
    ior: str


@dataclass(frozen=True)
class MethodSig:
    param_types: tuple[str, ...]
    return_type: str
    behavior_id: str


@dataclass
class Servant:
    name: str
    methods: dict[str, MethodSig]
    state: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Interceptor:
    interceptor_id: str
    action_id: str


@dataclass(frozen=True)
class Alarm:
    alarm_id: str
    source: str
    severity: str
    text: str
    timestamp: int


@dataclass
class InvocationContext:
    servant_name: str
    method: str
    args: tuple
    interceptor_id: str


class AlarmGenerator:
    """Deterministic schedule of alarms keyed by logical tick."""

    def __init__(self):
        self._schedule: dict[int, deque[tuple[str, str, str]]] = {}

    def schedule(self, tick: int, source: str, severity: str, text: str) -> None:
        if severity not in SEVERITIES:
            raise ValueError(f"bad severity {severity!r}")
        self._schedule.setdefault(tick, deque()).append((source, severity, text))

    def pop(self, tick: int) -> tuple[str, str, str] | None:
        pending = self._schedule.get(tick)
        if not pending:
            return None
        item = pending.popleft()
        if not pending:
            del self._schedule[tick]
        return item


def alarm_to_line(a: Alarm) -> str:
    return json.dumps({"alarm_id": a.alarm_id, "tick": a.timestamp,
                       "source": a.source, "severity": a.severity,
                       "text": a.text},
                      ensure_ascii=False, separators=(",", ":"))


BehaviorFn = Callable[["ReflectiveOrb", Servant, tuple], object]


class ReflectiveOrb:
    def __init__(self, platform_id: str = "orb1"):
        self.platform_id = platform_id
        self._servants: dict[str, Servant] = {}
        self._behaviors: dict[str, BehaviorFn] = {}
        self._actions: dict[str, Callable[[InvocationContext], None]] = {}
        self._interceptors: dict[str, Interceptor] = {}
        self.alarm_log: list[Alarm] = []
        self.alarm_listener: Callable[[Alarm], None] | None = None
        self.invocations: list[tuple[str, str]] = []
        self.last_invocation_trace: list[str] = []
        self._alarm_seq = 0

    # --- naming -----------------------------------------------------------------

    def bind(self, name: str, servant: Servant) -> ObjectRef:
        if name in self._servants:
            raise DuplicateName(name)
        self._servants[name] = servant
        return ObjectRef(f"IOR:{self.platform_id}/{name}")

    def lookup(self, name: str) -> Servant | None:
        return self._servants.get(name)

    def resolve(self, ior: str | ObjectRef) -> Servant:
        text = ior.ior if isinstance(ior, ObjectRef) else ior
        if not text.startswith("IOR:"):
            raise MalformedIor(text)
        rest = text[len("IOR:"):]
        if rest.count("/") != 1:
            raise MalformedIor(text)
        platform_id, name = rest.split("/")
        if not platform_id or not name:
            raise MalformedIor(text)
        if platform_id != self.platform_id or name not in self._servants:
            raise UnknownObject(text)
        return self._servants[name]

    # --- invocation ---------------------------------------------------------------

    def register_behavior(self, behavior_id: str, fn: BehaviorFn) -> None:
        self._behaviors[behavior_id] = fn

    def register_action(self, action_id: str,
                        fn: Callable[[InvocationContext], None]) -> None:
        self._actions[action_id] = fn

    def add_interceptor(self, interceptor: Interceptor) -> None:
        if interceptor.interceptor_id in self._interceptors:
            raise DuplicateInterceptor(interceptor.interceptor_id)
        if interceptor.action_id not in self._actions:
            raise KeyError(f"action {interceptor.action_id!r} not registered")
        self._interceptors[interceptor.interceptor_id] = interceptor

    def remove_interceptor(self, interceptor_id: str) -> None:
        if interceptor_id not in self._interceptors:
            raise UnknownInterceptor(interceptor_id)
        del self._interceptors[interceptor_id]

    def invoke(self, ref: str | ObjectRef, method: str, args: list | tuple):
        servant = self.resolve(ref)
        sig = servant.methods.get(method)
        if sig is None:
            raise UnknownMethod(method)
        args = tuple(args)
        if len(args) != len(sig.param_types):
            raise TypeMismatch(method, f"expected {len(sig.param_types)} args, "
                                       f"got {len(args)}")
        for i, (value, tname) in enumerate(zip(args, sig.param_types)):
            if not _TYPE_CHECKS[tname](value):
                raise TypeMismatch(f"{method}[{i}]", f"expected {tname}")
        trace = []
        for interceptor in self._interceptors.values():
            ctx = InvocationContext(servant.name, method, args,
                                    interceptor.interceptor_id)
            self._actions[interceptor.action_id](ctx)
            trace.append(interceptor.interceptor_id)
        self.last_invocation_trace = trace
        self.invocations.append((servant.name, method))
        return self._behaviors[sig.behavior_id](self, servant, args)

    # --- alarms ---------------------------------------------------------------

    def alarm_tick(self, generator: AlarmGenerator, tick: int) -> Alarm | None:
        item = generator.pop(tick)
        if item is None:
            return None
        source, severity, text = item
        self._alarm_seq += 1
        alarm = Alarm(f"a{self._alarm_seq}", source, severity, text, tick)
        self.alarm_log.append(alarm)
        if self.alarm_listener is not None:
            self.alarm_listener(alarm)
        return alarm

    def alarm_log_lines(self) -> list[str]:
        return [alarm_to_line(a) for a in self.alarm_log]

    def save_alarm_log(self, path: str | Path) -> None:
        lines = self.alarm_log_lines()
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""),
                              encoding="utf-8")
