"""Runtime aspect engine.

Joinpoints are operation executions on a platform target. Pointcuts select
them with per-segment patterns (``*`` matches one segment, ``..`` matches any
argument list). Advices are named actions from a registry, so a woven aspect
is fully serializable and every dispatch is deterministic.

Dispatch order for the matching aspects, in weave order A1..An:

    before(A1) .. before(An)  ->  around(A1) .. around(An)  ->  body
    ->  after(An) .. after(A1)

An around action may veto, which skips the remaining arounds and the body and
yields a distinguished ``Vetoed`` result; after advices still observe it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from .contract import SIMPLE_TYPES, is_identifier
from .errors import (
    DuplicateAspect,
    PointcutSyntaxError,
    UnknownAction,
    UnknownAspect,
)

ADVICE_KINDS = ("before", "after", "around")


@dataclass(frozen=True)
class Joinpoint:
    platform_id: str
    target_path: str
    method: str
    phase: str = "execution"
    # Optional metadata; concrete return/arg patterns only match when present.
    return_type: str | None = None
    arg_types: tuple[str, ...] | None = None

    @property
    def path_segments(self) -> tuple[str, ...]:
        return tuple(self.target_path.split("."))


@dataclass(frozen=True)
class Pointcut:
    return_pattern: str
    path_pattern: tuple[str, ...]
    method_pattern: str
    args_pattern: str | tuple[str, ...] = ".."


@dataclass(frozen=True)
class Advice:
    kind: str
    action_id: str


@dataclass(frozen=True)
class Aspect:
    aspect_id: str
    pointcut: Pointcut
    advices: tuple[Advice, ...]


@dataclass(frozen=True)
class Vetoed:
    reason: str


_POINTCUT_RE = re.compile(
    r"\s*execution\s*\(\s*(\*|[A-Za-z_][A-Za-z0-9_-]*)\s*([^()]+?)\s*\(\s*(.*?)\s*\)\s*\)\s*\Z"
)


def parse_pointcut(text: str) -> Pointcut:
    """Parse ``execution(RET PATH.METHOD(ARGS))`` into a Pointcut."""
    m = _POINTCUT_RE.match(text)
    if not m:
        raise PointcutSyntaxError(f"cannot parse pointcut {text!r}")
    ret, dotted, args_text = m.groups()
    segments = [s.strip() for s in dotted.split(".")]
    if len(segments) < 2:
        raise PointcutSyntaxError("pointcut needs at least one path segment and a method")
    for seg in segments:
        if seg != "*" and not is_identifier(seg):
            raise PointcutSyntaxError(f"bad segment {seg!r} in {text!r}")
    if args_text == "..":
        args: str | tuple[str, ...] = ".."
    elif args_text == "":
        args = ()
    else:
        parts = tuple(p.strip() for p in args_text.split(","))
        for p in parts:
            if p not in SIMPLE_TYPES:
                raise PointcutSyntaxError(f"bad arg type {p!r} in {text!r}")
        args = parts
    return Pointcut(ret, tuple(segments[:-1]), segments[-1], args)


def render_pointcut(pc: Pointcut) -> str:
    args = pc.args_pattern if isinstance(pc.args_pattern, str) \
        else ", ".join(pc.args_pattern)
    path = ".".join(pc.path_pattern + (pc.method_pattern,))
    return f"execution({pc.return_pattern} {path}({args}))"


def matches(pc: Pointcut, jp: Joinpoint) -> bool:
    if jp.phase != "execution":
        return False
    segments = jp.path_segments
    if len(pc.path_pattern) != len(segments):
        return False
    for pattern, segment in zip(pc.path_pattern, segments):
        if pattern != "*" and pattern != segment:
            return False
    if pc.method_pattern != "*" and pc.method_pattern != jp.method:
        return False
    if pc.return_pattern != "*" and pc.return_pattern != jp.return_type:
        return False
    if pc.args_pattern != ".." and pc.args_pattern != jp.arg_types:
        return False
    return True


@dataclass
class AdviceContext:
    """Handed to every advice action when it fires."""

    joinpoint: Joinpoint
    args: tuple
    aspect_id: str
    kind: str
    result: object = None
    _veto_reason: str | None = None
    _emit: Callable[[str, str], None] | None = field(default=None, repr=False)

    def emit(self, text: str) -> None:
        if self._emit is not None:
            self._emit(self.aspect_id, text)

    def veto(self, reason: str) -> None:
        if self.kind != "around":
            raise ValueError("only around advice may veto")
        self._veto_reason = reason


ActionFn = Callable[[AdviceContext], None]


class Weaver:
    def __init__(self, emit_log: Callable[[str, str], None] | None = None):
        self._aspects: dict[str, Aspect] = {}
        self._actions: dict[str, ActionFn] = {}
        self._emit_log = emit_log

    def register_action(self, action_id: str, fn: ActionFn) -> None:
        self._actions[action_id] = fn

    def weave(self, aspect: Aspect) -> None:
        if aspect.aspect_id in self._aspects:
            raise DuplicateAspect(aspect.aspect_id)
        for advice in aspect.advices:
            if advice.kind not in ADVICE_KINDS:
                raise ValueError(f"bad advice kind {advice.kind!r}")
            if advice.action_id not in self._actions:
                raise UnknownAction(advice.action_id)
        self._aspects[aspect.aspect_id] = aspect

    def unweave(self, aspect_id: str) -> None:
        if aspect_id not in self._aspects:
            raise UnknownAspect(aspect_id)
        del self._aspects[aspect_id]

    def woven(self) -> tuple[Aspect, ...]:
        return tuple(self._aspects.values())

    def _run(self, aspect: Aspect, advice: Advice, jp: Joinpoint, args: tuple,
             result: object = None) -> AdviceContext:
        ctx = AdviceContext(jp, args, aspect.aspect_id, advice.kind,
                            result=result, _emit=self._emit_log)
        self._actions[advice.action_id](ctx)
        return ctx

    def dispatch(self, jp: Joinpoint, body: Callable, args: tuple = ()):
        """Run body at jp with all matching advice; returns (result, trace).

        The trace lists the aspect id of every advice occurrence that fired,
        in firing order. Body exceptions propagate immediately.
        """
        matched = [a for a in self._aspects.values() if matches(a.pointcut, jp)]
        trace: list[str] = []

        for aspect in matched:
            for advice in aspect.advices:
                if advice.kind == "before":
                    self._run(aspect, advice, jp, args)
                    trace.append(aspect.aspect_id)

        vetoed: Vetoed | None = None
        for aspect in matched:
            if vetoed is not None:
                break
            for advice in aspect.advices:
                if advice.kind != "around":
                    continue
                ctx = self._run(aspect, advice, jp, args)
                trace.append(aspect.aspect_id)
                if ctx._veto_reason is not None:
                    vetoed = Vetoed(ctx._veto_reason)
                    break

        result = vetoed if vetoed is not None else body(*args)

        for aspect in reversed(matched):
            for advice in reversed(aspect.advices):
                if advice.kind == "after":
                    self._run(aspect, advice, jp, args, result=result)
                    trace.append(aspect.aspect_id)

        return result, trace
