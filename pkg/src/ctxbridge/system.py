"""Composition root and command interpreter.

Everything mutable hangs off one System; every mutation enters through
``execute`` with a scenario Command, so scripted runs and the HTTP API share
a single code path and any live session can be replayed as a scenario.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import contract as contract_mod
from .adaptation import OverrideStore, descriptor_to_dict
from .assembly import AssemblyPlatform
from .errors import (
    ExpectationFailed,
    ScenarioSyntaxError,
    UnknownAA,
    UnknownService,
)
from .eventlog import EventLog, jsonable
from .fixtures import (
    ENTERPRISE_URL,
    alarm_display_aa,
    bind_enterprise_servant,
    builtin_registry,
    enterprise_contract,
    fresh_assembly,
    install_builtin_actions,
)
from .gateway import Gateway, services_payload
from .orb import AlarmGenerator, ReflectiveOrb
from .registry import LocationFix, Profile, Registry
from .scenario import Command, Scenario
from .weaver import Advice, Aspect, Weaver, parse_pointcut


class LogicalClock:
    def __init__(self):
        self.tick = 0

    def advance_to(self, tick: int) -> None:
        if tick < self.tick:
            raise ValueError(f"clock cannot move back to {tick}")
        self.tick = tick

    def next(self) -> int:
        self.tick += 1
        return self.tick


@dataclass
class ExpectFailure(Exception):
    what: str
    expected: str
    actual: str


class System:
    def __init__(self, seed: str | None = "builtin",
                 seed_base: str | Path | None = None):
        self.clock = LogicalClock()
        self.log = EventLog()
        self.registry = Registry()
        if seed == "builtin":
            self.registry = builtin_registry()
        elif seed:
            base = Path(seed_base) if seed_base else Path(".")
            self.registry.load_tables(base / seed)

        self.weaver = Weaver(emit_log=self._emit_advice_log)
        install_builtin_actions(self.weaver)

        self.orb = ReflectiveOrb("orb1")
        bind_enterprise_servant(self.orb)
        self.generator = AlarmGenerator()

        self.assembly = AssemblyPlatform(
            "assembly1",
            event_listener=lambda kind, data: self._emit(kind, **data))
        self.overrides = OverrideStore()
        self.gateway = Gateway(self.registry, self.weaver, self.orb,
                               self.assembly, self.overrides,
                               emit_event=self._emit)
        self.assembly.soap_invoker = self.gateway.invoke_endpoint

        stub = contract_mod.make_stub(enterprise_contract(), "orb1", "Enterprise")
        self.gateway.export_endpoint(stub, ENTERPRISE_URL)
        self.assembly.apply_aa(alarm_display_aa())
        self._aa_library = {"alarm_display": alarm_display_aa}

        self.current_user: str | None = None
        self.last_services = []
        self.last_descriptor = None

    # --- logging ------------------------------------------------------------

    def _emit(self, kind: str, **data) -> None:
        self.log.append(self.clock.tick, kind, data)

    def _emit_advice_log(self, aspect_id: str, text: str) -> None:
        self._emit("advice_log", aspect=aspect_id, text=text)

    # --- command dispatch -----------------------------------------------------

    def execute(self, cmd: Command) -> dict:
        handler = _HANDLERS.get((cmd.subject, cmd.verb))
        if handler is None:
            raise ScenarioSyntaxError(
                cmd.line, f"no handler for {cmd.subject} {cmd.verb}")
        return handler(self, cmd)

    # --- handlers ----------------------------------------------------------------

    def _profile_upsert(self, cmd: Command) -> dict:
        kv = cmd.kv()
        try:
            profile = Profile(
                id_profile=kv["id"],
                name=kv.get("name", ""),
                sex=kv.get("sex", "unspecified"),
                job=kv.get("job", ""),
                age=int(kv.get("age", "0")),
                handicap=kv.get("handicap", "none"),
                subscriptions=frozenset(
                    x for x in kv.get("subscriptions", "").split(",") if x),
            )
        except (KeyError, ValueError) as e:
            raise ScenarioSyntaxError(cmd.line, f"bad profile args: {e}") from None
        self.registry.upsert_profile(profile)
        self._emit("profile_upserted", user=profile.id_profile, name=profile.name)
        return {"id_profile": profile.id_profile}

    def _user_identify(self, cmd: Command) -> dict:
        fix = _fix_from(cmd)
        profile, descriptor, services = self.gateway.identify(cmd.instance, fix)
        self.current_user = cmd.instance
        self.last_descriptor = descriptor
        self.last_services = services
        return {
            "profile": jsonable(profile),
            "descriptor": descriptor_to_dict(descriptor),
            "services": services_payload(services),
        }

    def _user_request(self, cmd: Command) -> dict:
        kv = cmd.kv()
        category = kv.get("category")
        max_km = float(kv["max_km"]) if "max_km" in kv else None
        services, widgets = self.gateway.query_services(cmd.instance, category,
                                                        max_km)
        self.last_services = services
        return {
            "services": services_payload(services),
            "widgets": [jsonable(w) for w in widgets],
        }

    def _user_move(self, cmd: Command) -> dict:
        fix = _fix_from(cmd)
        pushed = self.gateway.move_user(cmd.instance, fix)
        if pushed is not None:
            self.last_services = pushed
        return {"pushed": pushed is not None,
                "services": services_payload(pushed or [])}

    def _user_select(self, cmd: Command) -> dict:
        service_id = cmd.kv().get("service") or (cmd.args[0] if cmd.args else "")
        entry = self.registry.services.get(service_id)
        if entry is None:
            raise UnknownService(service_id)
        self._emit("service_selected", user=cmd.instance,
                   service=entry.id_service, name=entry.service_name)
        return {"selected": entry.id_service}

    def _user_override(self, cmd: Command) -> dict:
        kv = cmd.kv()
        fieldname = kv.get("field") or (cmd.args[0] if cmd.args else "")
        value = kv.get("value") if "value" in kv else \
            (cmd.args[1] if len(cmd.args) > 1 else "")
        self.overrides.set(cmd.instance, fieldname, value, self.clock.tick)
        self._emit("override_set", user=cmd.instance, field=fieldname,
                   value=value)
        self._refresh_descriptor(cmd.instance)
        return {"field": fieldname, "value": value}

    def _user_clear_override(self, cmd: Command) -> dict:
        fieldname = cmd.kv().get("field") or (cmd.args[0] if cmd.args else "")
        self.overrides.clear(cmd.instance, fieldname)
        self._emit("override_cleared", user=cmd.instance, field=fieldname)
        self._refresh_descriptor(cmd.instance)
        return {"field": fieldname}

    def _refresh_descriptor(self, user_id: str) -> None:
        if self.current_user == user_id and user_id in self.gateway.user_locations:
            self.last_descriptor = self.gateway.refresh_descriptor(user_id)

    def _device_power(self, cmd: Command) -> dict:
        kv = cmd.kv()
        on = _parse_bool(kv.get("on", cmd.args[0] if cmd.args else ""), cmd.line)
        decisions = self.gateway.on_power_change(cmd.instance, on)
        return {"device": cmd.instance, "on": on,
                "flushed": [jsonable(d) for d in decisions]}

    def _service_available(self, cmd: Command) -> dict:
        value = cmd.kv().get("value", cmd.args[0] if cmd.args else "")
        available = _parse_bool(value, cmd.line)
        self.registry.set_availability(cmd.instance, available)
        self._emit("availability_changed", service=cmd.instance,
                   available=available)
        return {"service": cmd.instance, "available": available}

    def _alarm_inject(self, cmd: Command) -> dict:
        kv = cmd.kv()
        tick = self.clock.tick
        self.generator.schedule(tick, kv.get("source", "unknown"),
                                kv.get("severity", "normal"),
                                kv.get("text", ""))
        alarm = self.orb.alarm_tick(self.generator, tick)
        self._emit("alarm_injected", alarm_id=alarm.alarm_id,
                   source=alarm.source, severity=alarm.severity,
                   text=alarm.text)
        decision = self.gateway.route_alarm(alarm)
        return {"alarm_id": alarm.alarm_id, "route": decision.route,
                "path": list(decision.path)}

    def _aspect_weave(self, cmd: Command) -> dict:
        kv = cmd.kv()
        try:
            aspect_id = kv["id"]
            pointcut = parse_pointcut(kv["pointcut"])
            advices = []
            for spec in kv.get("advice", "").split(","):
                kind, _, action = spec.partition(":")
                advices.append(Advice(kind.strip(), action.strip()))
            if not advices:
                raise KeyError("advice")
        except KeyError as e:
            raise ScenarioSyntaxError(cmd.line, f"aspect weave needs {e}") from None
        self.weaver.weave(Aspect(aspect_id, pointcut, tuple(advices)))
        self._emit("aspect_woven", aspect=aspect_id)
        return {"aspect": aspect_id}

    def _aspect_unweave(self, cmd: Command) -> dict:
        aspect_id = cmd.kv().get("id", cmd.args[0] if cmd.args else "")
        self.weaver.unweave(aspect_id)
        self._emit("aspect_unwoven", aspect=aspect_id)
        return {"aspect": aspect_id}

    def _aa_apply(self, cmd: Command) -> dict:
        aa_id = cmd.kv().get("id", cmd.args[0] if cmd.args else "")
        factory = self._aa_library.get(aa_id)
        if factory is None:
            raise UnknownAA(aa_id)
        self.assembly.apply_aa(factory())
        self._emit("aa_applied", aa=aa_id)
        return {"aa": aa_id}

    def _aa_revert(self, cmd: Command) -> dict:
        aa_id = cmd.kv().get("id", cmd.args[0] if cmd.args else "")
        self.assembly.revert_aa(aa_id)
        self._emit("aa_reverted", aa=aa_id)
        return {"aa": aa_id}

    # --- expectations ---------------------------------------------------------

    def check(self, cmd: Command) -> None:
        checker = _CHECKERS.get(cmd.verb)
        if checker is None:
            raise ScenarioSyntaxError(cmd.line, f"unknown expectation {cmd.verb!r}")
        checker(self, cmd)

    def _expect_route(self, cmd: Command) -> None:
        # form: expect route last <ROUTE>
        expected = cmd.args[-1] if cmd.args else ""
        actual = self.gateway.decisions[-1].route if self.gateway.decisions else ""
        if actual != expected:
            raise ExpectFailure("route", expected, actual)

    def _expect_queue(self, cmd: Command) -> None:
        # form: expect queue depth <N>
        expected = cmd.args[-1] if cmd.args else "0"
        actual = str(len(self.gateway.alarm_queue))
        if actual != expected:
            raise ExpectFailure("queue depth", expected, actual)

    def _expect_greeting(self, cmd: Command) -> None:
        expected = cmd.args[0] if cmd.args else ""
        actual = self.last_descriptor.greeting if self.last_descriptor else ""
        if actual != expected:
            raise ExpectFailure("greeting", expected, actual)

    def _expect_title(self, cmd: Command) -> None:
        expected = cmd.args[0] if cmd.args else ""
        actual = self.last_descriptor.title if self.last_descriptor else ""
        if actual != expected:
            raise ExpectFailure("title", expected, actual)

    def _expect_theme(self, cmd: Command) -> None:
        expected = cmd.args[0] if cmd.args else ""
        actual = self.last_descriptor.theme_color if self.last_descriptor else ""
        if actual != expected:
            raise ExpectFailure("theme", expected, actual)

    def _expect_vocal(self, cmd: Command) -> None:
        expected = cmd.args[0] if cmd.args else "false"
        actual = "true" if (self.last_descriptor and self.last_descriptor.vocal) \
            else "false"
        if actual != expected:
            raise ExpectFailure("vocal", expected, actual)

    def _expect_categories(self, cmd: Command) -> None:
        expected = set(x for x in (cmd.args[0] if cmd.args else "").split(",") if x)
        actual = {r.entry.category for r in self.last_services}
        if actual != expected:
            raise ExpectFailure("categories", ",".join(sorted(expected)),
                                ",".join(sorted(actual)))

    def _expect_services(self, cmd: Command) -> None:
        expected = [x for x in (cmd.args[0] if cmd.args else "").split(",") if x]
        actual = [r.entry.service_name for r in self.last_services]
        if actual != expected:
            raise ExpectFailure("services", ",".join(expected), ",".join(actual))

    def _expect_log(self, cmd: Command) -> None:
        # form: expect log contains "<text>"
        needle = cmd.args[-1] if cmd.args else ""
        for event in self.log.entries:
            if _data_contains(event.data, needle):
                return
        raise ExpectFailure("log contains", needle, "<absent>")

    def _expect_tv(self, cmd: Command) -> None:
        self._expect_textbox("TV", cmd)

    def _expect_pda(self, cmd: Command) -> None:
        self._expect_textbox("PDA", cmd)

    def _expect_textbox(self, component_id: str, cmd: Command) -> None:
        # form: expect tv text "<text>"
        expected = cmd.args[-1] if cmd.args else ""
        comp = self.assembly.components.get(component_id)
        actual = comp.properties.get("text", "") if comp else "<missing>"
        if actual != expected:
            raise ExpectFailure(f"{component_id} text", expected, str(actual))

    # --- snapshots ---------------------------------------------------------------

    def snapshot(self) -> dict:
        return {
            "tick": self.clock.tick,
            "current_user": self.current_user,
            "devices": {"pda_on": self.gateway.devices.pda_on,
                        "tv_on": self.gateway.devices.tv_on},
            "queue_depth": len(self.gateway.alarm_queue),
            "descriptor": descriptor_to_dict(self.last_descriptor)
            if self.last_descriptor else None,
            "services": services_payload(self.last_services),
            "woven_aspects": [a.aspect_id for a in self.weaver.woven()],
            "adaptation_rules": _rules_payload(),
            "assembly": self.assembly.dump(),
            "alarm_log_depth": len(self.orb.alarm_log),
        }


def _data_contains(value, needle: str) -> bool:
    if isinstance(value, str):
        return needle in value
    if isinstance(value, dict):
        return any(_data_contains(v, needle) for v in value.values())
    if isinstance(value, list):
        return any(_data_contains(v, needle) for v in value)
    return False


def _parse_bool(text: str, line: int) -> bool:
    if text in ("true", "on", "1"):
        return True
    if text in ("false", "off", "0"):
        return False
    raise ScenarioSyntaxError(line, f"bad boolean {text!r}")


def _fix_from(cmd: Command) -> LocationFix:
    kv = cmd.kv()
    try:
        return LocationFix(f"fix-{cmd.instance}", float(kv["lon"]),
                           float(kv["lat"]))
    except (KeyError, ValueError) as e:
        raise ScenarioSyntaxError(cmd.line, f"bad location: {e}") from None


def _rules_payload() -> list[dict]:
    from .adaptation import BUILTIN_RULES
    return [
        {"rule_id": r.rule_id, "field": r.field, "origin": r.origin,
         "target": r.target, "means": r.means, "temporal": r.temporal}
        for r in BUILTIN_RULES
    ]


_HANDLERS = {
    ("profile", "upsert"): System._profile_upsert,
    ("user", "identify"): System._user_identify,
    ("user", "request"): System._user_request,
    ("user", "move"): System._user_move,
    ("user", "select"): System._user_select,
    ("user", "override"): System._user_override,
    ("user", "clear_override"): System._user_clear_override,
    ("device", "power"): System._device_power,
    ("service", "available"): System._service_available,
    ("alarm", "inject"): System._alarm_inject,
    ("aspect", "weave"): System._aspect_weave,
    ("aspect", "unweave"): System._aspect_unweave,
    ("aa", "apply"): System._aa_apply,
    ("aa", "revert"): System._aa_revert,
}

_CHECKERS = {
    "route": System._expect_route,
    "queue": System._expect_queue,
    "greeting": System._expect_greeting,
    "title": System._expect_title,
    "theme": System._expect_theme,
    "vocal": System._expect_vocal,
    "categories": System._expect_categories,
    "services": System._expect_services,
    "log": System._expect_log,
    "tv": System._expect_tv,
    "pda": System._expect_pda,
}


def build_system(scenario: Scenario, seed_base: str | Path | None = None
                 ) -> System:
    system = System(seed=scenario.seed, seed_base=seed_base)
    for cmd in scenario.preload:
        system.execute(cmd)
    return system


def run(scenario: Scenario, seed_base: str | Path | None = None) -> EventLog:
    """Execute commands in (tick, file order); raise on failed expectations."""
    system = build_system(scenario, seed_base)
    failures: list[tuple[int, str, str, str]] = []
    for cmd in scenario.entries:
        system.clock.advance_to(cmd.tick)
        if cmd.subject == "expect":
            try:
                system.check(cmd)
            except ExpectFailure as f:
                failures.append((cmd.tick, f.what, f.expected, f.actual))
        else:
            system.execute(cmd)
    if failures:
        raise ExpectationFailed(failures)
    return system.log
