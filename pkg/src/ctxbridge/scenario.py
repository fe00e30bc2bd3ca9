"""Line-oriented scenario DSL.

Grammar::

    # comment
    seed registry (builtin | <dir>)
    preload aspect id=... pointcut="execution(...)" advice=before:action[,kind:action...]
    preload aa id=...
    at <tick> <subject> [<instance>] <verb> <args...>

Subjects: profile, user, device, service, alarm, aspect, aa, expect.
``user``, ``device`` and ``service`` take an instance token before the verb.
Arguments are positional tokens or key=value pairs; double-quoted strings
support the escapes \\\\ \\" \\n \\t. Ticks must be non-decreasing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ScenarioSyntaxError

SUBJECTS = ("profile", "user", "device", "service", "alarm", "aspect", "aa",
            "expect")
SUBJECTS_WITH_INSTANCE = ("user", "device", "service")


@dataclass(frozen=True)
class Command:
    tick: int
    subject: str
    verb: str
    instance: str | None = None
    args: tuple[str, ...] = ()
    kwargs: tuple[tuple[str, str], ...] = ()
    line: int = 0

    def kv(self) -> dict[str, str]:
        return dict(self.kwargs)


@dataclass
class Scenario:
    seed: str | None = None  # "builtin" or a directory path
    preload: list[Command] = field(default_factory=list)
    entries: list[Command] = field(default_factory=list)

    @property
    def timeline(self) -> list[Command]:
        return [c for c in self.entries if c.subject != "expect"]

    @property
    def expectations(self) -> list[Command]:
        return [c for c in self.entries if c.subject == "expect"]


_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}


def tokenize(line: str, lineno: int) -> list[tuple[str, int]]:
    """Split into tokens; each is (text, eq_pos) where eq_pos is the index of
    the first '=' that appeared outside quotes, or -1. Quotes may start
    mid-token (after ``key=``); escapes are resolved inside them."""
    tokens: list[tuple[str, int]] = []
    buf: list[str] = []
    eq_pos = -1
    started = False
    in_quotes = False
    i = 0

    def flush():
        nonlocal buf, eq_pos, started
        tokens.append(("".join(buf), eq_pos))
        buf, eq_pos, started = [], -1, False

    while i < len(line):
        ch = line[i]
        if in_quotes:
            if ch == "\\":
                if i + 1 >= len(line) or line[i + 1] not in _ESCAPES:
                    raise ScenarioSyntaxError(lineno, f"bad escape at col {i + 1}")
                buf.append(_ESCAPES[line[i + 1]])
                i += 2
                continue
            if ch == '"':
                in_quotes = False
                i += 1
                continue
            buf.append(ch)
            i += 1
            continue
        if ch == '"':
            in_quotes = True
            started = True
            i += 1
            continue
        if ch.isspace():
            if started or buf:
                flush()
            i += 1
            continue
        if ch == "=" and eq_pos < 0:
            eq_pos = len(buf)
        started = True
        buf.append(ch)
        i += 1
    if in_quotes:
        raise ScenarioSyntaxError(lineno, "unterminated quote")
    if started or buf:
        flush()
    return tokens


def _is_key(text: str) -> bool:
    return bool(text) and text.replace("_", "a").isalnum()


def _split_args(tokens: list[tuple[str, int]], lineno: int
                ) -> tuple[tuple[str, ...], tuple[tuple[str, str], ...]]:
    positional: list[str] = []
    pairs: list[tuple[str, str]] = []
    for text, eq_pos in tokens:
        if eq_pos > 0 and _is_key(text[:eq_pos]):
            pairs.append((text[:eq_pos], text[eq_pos + 1:]))
        else:
            positional.append(text)
    return tuple(positional), tuple(pairs)


def _parse_command(tokens: list[tuple[str, int]], tick: int,
                   lineno: int) -> Command:
    if not tokens:
        raise ScenarioSyntaxError(lineno, "missing subject")
    subject = tokens[0][0]
    if subject not in SUBJECTS:
        raise ScenarioSyntaxError(lineno, f"unknown subject {subject!r}")
    rest = tokens[1:]
    instance = None
    if subject in SUBJECTS_WITH_INSTANCE:
        if len(rest) < 2:
            raise ScenarioSyntaxError(lineno, f"{subject} needs instance and verb")
        instance = rest[0][0]
        rest = rest[1:]
    if not rest:
        raise ScenarioSyntaxError(lineno, f"{subject} needs a verb")
    verb = rest[0][0]
    args, kwargs = _split_args(rest[1:], lineno)
    return Command(tick, subject, verb, instance, args, kwargs, lineno)


def parse_scenario(text: str) -> Scenario:
    scenario = Scenario()
    last_tick = 0
    saw_at = False
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = tokenize(line, lineno)
        head = tokens[0][0]
        if head == "seed":
            if len(tokens) != 3 or tokens[1][0] != "registry":
                raise ScenarioSyntaxError(lineno, "usage: seed registry <dir|builtin>")
            if saw_at:
                raise ScenarioSyntaxError(lineno, "seed must precede the timeline")
            scenario.seed = tokens[2][0]
        elif head == "preload":
            if saw_at:
                raise ScenarioSyntaxError(lineno, "preload must precede the timeline")
            if len(tokens) < 2 or tokens[1][0] not in ("aspect", "aa"):
                raise ScenarioSyntaxError(lineno, "usage: preload (aspect|aa) ...")
            subject = tokens[1][0]
            verb = "weave" if subject == "aspect" else "apply"
            args, kwargs = _split_args(tokens[2:], lineno)
            scenario.preload.append(
                Command(0, subject, verb, None, args, kwargs, lineno))
        elif head == "at":
            saw_at = True
            if len(tokens) < 2:
                raise ScenarioSyntaxError(lineno, "at needs a tick")
            try:
                tick = int(tokens[1][0])
            except ValueError:
                raise ScenarioSyntaxError(lineno,
                                          f"bad tick {tokens[1][0]!r}") from None
            if tick < last_tick:
                raise ScenarioSyntaxError(lineno,
                                          f"tick {tick} decreases from {last_tick}")
            last_tick = tick
            scenario.entries.append(_parse_command(tokens[2:], tick, lineno))
        else:
            raise ScenarioSyntaxError(lineno, f"unknown directive {head!r}")
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def generate_alarm_soak(seed: int, count: int = 200) -> str:
    """Deterministic soak scenario: alarms interleaved with power toggles,
    ending with both devices on so the queue drains."""
    rng = random.Random(seed)
    sources = ["pump-7", "boiler-2", "press-1", "fan-9"]
    lines = ["# generated alarm soak scenario", "seed registry builtin"]
    tick = 1
    for i in range(count):
        if rng.random() < 0.15:
            device = rng.choice(["pda", "tv"])
            on = rng.choice(["true", "false"])
            lines.append(f"at {tick} device {device} power on={on}")
            tick += 1
        severity = rng.choice(["normal", "critical"])
        source = rng.choice(sources)
        lines.append(f'at {tick} alarm inject source={source} '
                     f'severity={severity} text="alarm {i}"')
        tick += 1
    lines.append(f"at {tick} device pda power on=true")
    lines.append(f"at {tick + 1} device tv power on=true")
    lines.append(f"at {tick + 2} expect queue depth 0")
    return "\n".join(lines) + "\n"
