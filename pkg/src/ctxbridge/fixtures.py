"""Canonical seed data: the demo town registry, the Enterprise servant, the
alarm-display assembly chain, and the built-in advice actions.

Coordinates sit around (lon 10.100, lat 36.800); everything except the
far-off Zitouna branch is inside the default 1 km radius of the user's
starting fix.
"""

from __future__ import annotations

from . import contract
from .assembly import AssemblyAspect, AssemblyPlatform, Link, make_component
from .orb import MethodSig, ReflectiveOrb, Servant
from .registry import LocationFix, Profile, Registry, ServiceEntry
from .weaver import Weaver

ENTERPRISE_CONTRACT_DOC = (
    '<contract name="Enterprise" ns="http://Ent">'
    '<operation name="AfficherNormal">'
    '<input message="AfficherNormalRequest" action="urn:AfficherNormal"/>'
    '<output message="AfficherNormalResponse" action="urn:AfficherNormalResponse"/>'
    '<returns type="string"/>'
    "</operation>"
    "</contract>"
)

ENTERPRISE_URL = "http://192.168.1.2:8080/Enterprise/services/EntImpl"

USER_FIX = LocationFix("loc-user", 10.100, 36.800)

PROVIDE_SERVICES_BANNER = "*****Provide available services please : *****"

BEFORE_SERVICE_POINTCUT = (
    "execution(* com.Android_Location_Profile_Service"
    ".Android_Profile_Service.onCreate(..))"
)


def enterprise_contract() -> contract.Contract:
    return contract.parse_contract(ENTERPRISE_CONTRACT_DOC)


def builtin_registry() -> Registry:
    reg = Registry()
    reg.upsert_profile(Profile(
        "1234", "Cherif_Sihem", "F", "Student", 20, "none",
        frozenset({"Bank", "library", "restaurant", "Assurance"})))
    reg.upsert_profile(Profile(
        "1235", "Karim_Mansour", "M", "Engineer", 34, "blind",
        frozenset({"Bank"})))

    loc = {
        "loc-biat": LocationFix("loc-biat", 10.104, 36.801),
        "loc-stb": LocationFix("loc-stb", 10.106, 36.803),
        "loc-bna": LocationFix("loc-bna", 10.108, 36.797),
        "loc-amen": LocationFix("loc-amen", 10.095, 36.800),
        "loc-attijari": LocationFix("loc-attijari", 10.103, 36.805),
        "loc-library": LocationFix("loc-library", 10.098, 36.803),
        "loc-gourmet": LocationFix("loc-gourmet", 10.101, 36.798),
        "loc-zitouna": LocationFix("loc-zitouna", 10.180, 36.800),
    }
    entries = [
        ServiceEntry("svc-biat", "BIAT", "Insurance agency", "Assurance",
                     loc["loc-biat"]),
        ServiceEntry("svc-stb", "STB", "Insurance agency", "Assurance",
                     loc["loc-stb"]),
        ServiceEntry("svc-bna", "BNA", "Insurance agency", "Assurance",
                     loc["loc-bna"]),
        ServiceEntry("svc-amen", "Amen_Bank", "Bank branch", "Bank",
                     loc["loc-amen"]),
        ServiceEntry("svc-attijari", "Attijari_Bank", "Bank branch", "Bank",
                     loc["loc-attijari"]),
        ServiceEntry("svc-zitouna", "Zitouna_Bank", "Bank branch (Marsa)", "Bank",
                     loc["loc-zitouna"]),
        ServiceEntry("svc-library", "Municipal_Library", "Public library",
                     "library", loc["loc-library"]),
        ServiceEntry("svc-gourmet", "Le_Gourmet", "Restaurant", "restaurant",
                     loc["loc-gourmet"]),
        ServiceEntry("svc-pasta", "Pasta_Casa", "Restaurant", "restaurant",
                     loc["loc-gourmet"]),
        ServiceEntry("BIAT-ATM", "BIAT-ATM", "Cash machine of BIAT", "ATM",
                     loc["loc-biat"]),
    ]
    for entry in entries:
        reg.upsert_service(entry)
    return reg


def bind_enterprise_servant(orb: ReflectiveOrb) -> str:
    """Bind the Enterprise servant and its behaviors; returns the IOR."""

    def status(orb_, servant, args):
        return f"status={servant.state['status']}; queue={servant.state['queue']}"

    def alarm_text(orb_, servant, args):
        for alarm in orb_.alarm_log:
            if alarm.alarm_id == args[0]:
                return alarm.text
        raise ValueError(f"no alarm {args[0]!r}")

    orb.register_behavior("enterprise_status", status)
    orb.register_behavior("enterprise_alarm_text", alarm_text)
    servant = Servant(
        name="Enterprise",
        methods={
            "AfficherNormal": MethodSig((), "string", "enterprise_status"),
            "AfficherAlarme": MethodSig(("string",), "string",
                                        "enterprise_alarm_text"),
        },
        state={"status": "normal", "queue": 0},
    )
    return orb.bind("Enterprise", servant).ior


def alarm_display_aa() -> AssemblyAspect:
    """The alarm-display chain: button -> proxy -> gate -> PDA/TV textboxes."""
    components = (
        make_component("button1", "Button"),
        make_component("enterprise31", "EnterpriseProxy",
                       endpoint=ENTERPRISE_URL, operation="AfficherNormal"),
        make_component("toggler1", "EventToggler",
                       target_component="radiobutton1", target_property="checked"),
        make_component("radiobutton1", "RadioButton", checked=True),
        make_component("PDA", "Textbox"),
        make_component("TV", "Textbox"),
    )
    links = (
        Link("button1", "click", "enterprise31", "invoke"),
        Link("enterprise31", "result", "radiobutton1", "route"),
        Link("radiobutton1", "when_checked", "PDA", "set_text"),
        Link("radiobutton1", "when_unchecked", "TV", "set_text"),
    )
    return AssemblyAspect("alarm_display", add_components=components,
                          add_links=links)


def install_builtin_actions(weaver: Weaver) -> None:
    def provide_services(ctx):
        ctx.emit(PROVIDE_SERVICES_BANNER)

    def log_call(ctx):
        ctx.emit(f"{ctx.kind} advice at {ctx.joinpoint.method}")

    def veto_request(ctx):
        ctx.veto("vetoed by aspect " + ctx.aspect_id)

    weaver.register_action("log_provide_services", provide_services)
    weaver.register_action("log_call", log_call)
    weaver.register_action("veto_request", veto_request)


def fresh_assembly(platform_id: str = "assembly1", soap_invoker=None,
                   event_listener=None) -> AssemblyPlatform:
    platform = AssemblyPlatform(platform_id, soap_invoker=soap_invoker,
                                event_listener=event_listener)
    platform.apply_aa(alarm_display_aa())
    return platform
