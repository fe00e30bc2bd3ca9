"""HMI plasticity engine.

Automatic rules (adaptivity) run in a fixed order, then per-profile manual
overrides (adaptability) win. The descriptor invariant vocal => display_mode
in {vocal, both} is restored last, so no emitted descriptor ever violates it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Mapping

from .errors import UnknownField
from .registry import Profile, RankedService

DISPLAY_MODES = ("visual", "vocal", "both")
OVERRIDABLE_FIELDS = ("theme_color", "vocal", "display_mode")

SEX_LABELS = {"F": "Miss", "M": "Mr", "unspecified": ""}

DEFAULT_PROMPT = "Do you want a service?"


@dataclass(frozen=True)
class Widget:
    kind: str  # text | button | list | prompt
    text: str
    service_id: str | None = None


@dataclass(frozen=True)
class PresentationDescriptor:
    theme_color: str
    vocal: bool
    display_mode: str
    title: str
    greeting: str
    widgets: tuple[Widget, ...] = ()


@dataclass(frozen=True)
class AdaptationRule:
    """One automatic rule; the axis tags are metadata for inspection only."""

    rule_id: str
    field: str
    value: object
    condition: Callable[[Profile, Mapping], bool]
    origin: str = "automatic"
    target: str = "user"        # user | environment | system
    means: str = "rendering"    # task-model | rendering | help
    temporal: str = "dynamic"   # static | dynamic


BUILTIN_RULES: tuple[AdaptationRule, ...] = (
    AdaptationRule("sex_theme_pink", "theme_color", "pink",
                   lambda p, ctx: p.sex == "F"),
    AdaptationRule("sex_theme_blue", "theme_color", "blue",
                   lambda p, ctx: p.sex == "M"),
    AdaptationRule("blind_vocal", "vocal", True,
                   lambda p, ctx: p.handicap == "blind"),
    AdaptationRule("blind_display", "display_mode", "both",
                   lambda p, ctx: p.handicap == "blind"),
)


def greeting(p: Profile) -> str:
    label = SEX_LABELS[p.sex]
    return f"Hello, {label} : {p.name} : {p.age}\n"


def title(p: Profile) -> str:
    return f"Profile_location_service: id ={p.id_profile}"


def adapt(p: Profile, context: Mapping | None = None,
          overrides: Mapping | None = None) -> PresentationDescriptor:
    context = context or {}
    overrides = overrides or {}
    values = {"theme_color": "neutral", "vocal": False, "display_mode": "visual"}
    for rule in BUILTIN_RULES:
        if rule.condition(p, context):
            values[rule.field] = rule.value
    for name, value in overrides.items():
        if name in values:
            values[name] = value
    if values["vocal"] and values["display_mode"] == "visual":
        values["display_mode"] = "both"
    return PresentationDescriptor(
        theme_color=values["theme_color"],
        vocal=bool(values["vocal"]),
        display_mode=values["display_mode"],
        title=title(p),
        greeting=greeting(p),
    )


def category_prompt(category: str | None) -> str:
    if category is None:
        return DEFAULT_PROMPT
    return f"Do you want to find a {category.lower()}"


def build_service_widgets(services: list[RankedService],
                          prompt: str) -> tuple[Widget, ...]:
    widgets = [Widget("prompt", prompt)]
    for ranked in services:
        label = f"{ranked.entry.service_name} — {ranked.distance_km:.2f} km"
        widgets.append(Widget("list", label, service_id=ranked.entry.id_service))
    return tuple(widgets)


def with_widgets(d: PresentationDescriptor,
                 widgets: tuple[Widget, ...]) -> PresentationDescriptor:
    return replace(d, widgets=widgets)


def descriptor_to_dict(d: PresentationDescriptor) -> dict:
    return {
        "theme_color": d.theme_color,
        "vocal": d.vocal,
        "display_mode": d.display_mode,
        "title": d.title,
        "greeting": d.greeting,
        "widgets": [
            {"kind": w.kind, "text": w.text, "service_id": w.service_id}
            for w in d.widgets
        ],
    }


class OverrideStore:
    """Per-profile manual overrides; a new identity never inherits another's."""

    def __init__(self):
        self._by_profile: dict[str, dict[str, object]] = {}
        self._set_at: dict[tuple[str, str], int] = {}

    def set(self, profile_id: str, fieldname: str, value, tick: int = 0) -> None:
        if fieldname not in OVERRIDABLE_FIELDS:
            raise UnknownField(fieldname)
        if fieldname == "vocal":
            value = _coerce_bool(value)
        if fieldname == "display_mode" and value not in DISPLAY_MODES:
            raise ValueError(f"bad display_mode {value!r}")
        self._by_profile.setdefault(profile_id, {})[fieldname] = value
        self._set_at[(profile_id, fieldname)] = tick

    def clear(self, profile_id: str, fieldname: str) -> None:
        if fieldname not in OVERRIDABLE_FIELDS:
            raise UnknownField(fieldname)
        self._by_profile.get(profile_id, {}).pop(fieldname, None)
        self._set_at.pop((profile_id, fieldname), None)

    def for_profile(self, profile_id: str) -> dict[str, object]:
        return dict(self._by_profile.get(profile_id, {}))


def _coerce_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    if value in ("true", "True"):
        return True
    if value in ("false", "False"):
        return False
    raise ValueError(f"bad boolean {value!r}")
