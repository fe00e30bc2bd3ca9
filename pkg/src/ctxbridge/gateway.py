"""The bridge between platforms and the alarm-routing state machine.

Cross-platform calls travel as encoded envelope bytes even in-process, so the
wire format is genuinely exercised on every hop. Routing follows the truth
table: normal alarms only reach the log; critical ones go to the PDA when it
is on, else to the TV through the assembly-platform chain, else into a FIFO
queue flushed on the next power-on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable

from . import envelope
from .adaptation import (
    OverrideStore,
    adapt,
    build_service_widgets,
    category_prompt,
    descriptor_to_dict,
    with_widgets,
)
from .assembly import AssemblyPlatform
from .contract import Contract, ProxyDescriptor, StubDescriptor, soap_action
from .errors import (
    DuplicateUrl,
    NoLocationFix,
    RemoteFault,
    RequestVetoed,
    TransportError,
    UnknownOperation,
    UnresolvableTarget,
)
from .orb import Alarm, ReflectiveOrb
from .registry import DEFAULT_RADIUS_KM, LocationFix, Registry
from .weaver import Joinpoint, Vetoed, Weaver

ROUTES = ("DB_ONLY", "PDA", "TV", "QUEUED")

# the Android-side HMI target the weaver sees for gateway-driven requests
HMI_TARGET_PATH = "com.Android_Location_Profile_Service.Android_Profile_Service"

IDENTIFY_STEPS = ("recv_location", "authenticate", "profile_loaded",
                  "hmi_adapted", "services_found", "services_sent")


@dataclass(frozen=True)
class Endpoint:
    url: str
    stub: StubDescriptor


@dataclass
class DeviceStates:
    pda_on: bool = True
    tv_on: bool = True


@dataclass(frozen=True)
class RoutingDecision:
    alarm_id: str
    route: str
    path: tuple[str, ...]


def services_payload(services) -> list[dict]:
    """Flat JSON shape for ranked services (API responses and stream events)."""
    return [
        {"id_service": r.entry.id_service,
         "service_name": r.entry.service_name,
         "category": r.entry.category,
         "distance_km": round(r.distance_km, 6),
         "lon": r.entry.location.longitude,
         "lat": r.entry.location.latitude}
        for r in services
    ]


@dataclass(frozen=True)
class TvChainConfig:
    """Component ids of the alarm-display chain on the assembly platform."""

    entry_component: str = "enterprise31"
    entry_event: str = "result"
    gate_component: str = "radiobutton1"
    gate_property: str = "checked"
    toggler_component: str = "toggler1"
    tv_component: str = "TV"
    pda_component: str = "PDA"


class Gateway:
    def __init__(self, registry: Registry, weaver: Weaver, orb: ReflectiveOrb,
                 assembly: AssemblyPlatform, overrides: OverrideStore,
                 emit_event: Callable[..., None] | None = None,
                 tv_chain: TvChainConfig = TvChainConfig()):
        self.registry = registry
        self.weaver = weaver
        self.orb = orb
        self.assembly = assembly
        self.overrides = overrides
        self.tv_chain = tv_chain
        self._emit = emit_event or (lambda kind, **data: None)
        self.endpoints: dict[str, Endpoint] = {}
        self.devices = DeviceStates()
        self.alarm_queue: deque[Alarm] = deque()
        self.pda_inbox: list[Alarm] = []
        self.decisions: list[RoutingDecision] = []
        self.user_locations: dict[str, LocationFix] = {}
        self._pushed: dict[str, tuple[str, ...]] = {}
        self._last_widgets: dict[str, tuple] = {}
        self._msg_seq = 0
        self.last_exchange: tuple[bytes, bytes] | None = None

    # --- bridge -----------------------------------------------------------------

    def _next_message_id(self) -> str:
        self._msg_seq += 1
        return f"m{self._msg_seq}"

    def export_endpoint(self, stub: StubDescriptor, url: str) -> Endpoint:
        if url in self.endpoints:
            raise DuplicateUrl(url)
        if stub.platform_id != self.orb.platform_id:
            raise UnresolvableTarget(f"unknown platform {stub.platform_id!r}")
        servant = self.orb.lookup(stub.target_path)
        if servant is None:
            raise UnresolvableTarget(f"no servant at {stub.target_path!r}")
        missing = [op.name for op in stub.contract.operations
                   if op.name not in servant.methods]
        if missing:
            raise UnresolvableTarget(f"servant lacks methods {missing}")
        endpoint = Endpoint(url, stub)
        self.endpoints[url] = endpoint
        return endpoint

    def handle_call_bytes(self, url: str, data: bytes) -> bytes:
        """Far side of the wire: decode, invoke on the platform, encode."""
        endpoint = self.endpoints.get(url)
        if endpoint is None:
            raise TransportError(f"no endpoint at {url!r}")
        request = envelope.decode(data)
        stub = endpoint.stub
        try:
            op = stub.contract.operation_named(request.op_name)
        except UnknownOperation as e:
            return envelope.encode(envelope.make_fault(
                request.message_id, "UnknownOperation", str(e),
                message_id=self._next_message_id()))
        ior = f"IOR:{stub.platform_id}/{stub.target_path}"
        try:
            value = self.orb.invoke(ior, op.name, [v for _, v in request.args])
        except Exception as e:
            return envelope.encode(envelope.make_fault(
                request.message_id, type(e).__name__, str(e),
                message_id=self._next_message_id()))
        args = (("result", value),) if op.returns != "unit" else ()
        response = envelope.Message(
            action=op.output_action,
            message_id=self._next_message_id(),
            correlation_id=request.message_id,
            kind="response",
            op_name=op.name,
            namespace=stub.contract.namespace,
            args=args,
        )
        return envelope.encode(response)

    def _call(self, url: str, c: Contract, op_name: str, args: list):
        if url not in self.endpoints:
            raise TransportError(f"no endpoint at {url!r}")
        op = c.operation_named(op_name)
        if len(args) != len(op.params):
            raise TransportError(f"{op_name} takes {len(op.params)} args, "
                                 f"got {len(args)}")
        message = envelope.Message(
            action=soap_action(c, op_name),
            message_id=self._next_message_id(),
            correlation_id="",
            kind="call",
            op_name=op_name,
            namespace=c.namespace,
            args=tuple((p[0], v) for p, v in zip(op.params, args)),
        )
        request_bytes = envelope.encode(message)
        response_bytes = self.handle_call_bytes(url, request_bytes)
        self.last_exchange = (request_bytes, response_bytes)
        response = envelope.decode(response_bytes)
        if response.kind == "fault":
            fault = dict(response.args)
            raise RemoteFault(fault["code"], fault["reason"])
        if op.returns == "unit":
            return None
        return response.args[0][1]

    def call_remote(self, proxy: ProxyDescriptor, op_name: str, args: list):
        return self._call(proxy.endpoint_url, proxy.contract, op_name, args)

    def invoke_endpoint(self, url: str, op_name: str, args: list):
        """Entry point for assembly SoapProxy components."""
        endpoint = self.endpoints.get(url)
        if endpoint is None:
            raise TransportError(f"no endpoint at {url!r}")
        return self._call(url, endpoint.stub.contract, op_name, args)

    def contract_document_for(self, url: str) -> Contract | None:
        endpoint = self.endpoints.get(url)
        return endpoint.stub.contract if endpoint else None

    # --- identification flow ------------------------------------------------------

    def identify(self, user_id: str, at: LocationFix):
        """Steps 1-6: location+id in, profile out, HMI adapted, services sent."""
        self._emit("recv_location", user=user_id,
                   lon=at.longitude, lat=at.latitude)
        self._emit("authenticate", user=user_id)
        profile = self.registry.authenticate(user_id)
        self._emit("profile_loaded", user=user_id, name=profile.name)
        self.user_locations[user_id] = at

        def build():
            descriptor = adapt(profile, {"location": at},
                               self.overrides.for_profile(user_id))
            self._emit("hmi_adapted", user=user_id,
                       descriptor=descriptor_to_dict(descriptor))
            services = self.registry.find_services(user_id, at, DEFAULT_RADIUS_KM)
            self._emit("services_found", user=user_id,
                       names=[r.entry.service_name for r in services])
            widgets = build_service_widgets(services, category_prompt(None))
            self._last_widgets[user_id] = widgets
            descriptor_full = with_widgets(descriptor, widgets)
            self._emit("services_sent", user=user_id, count=len(services),
                       services=services_payload(services), widgets=widgets)
            return profile, descriptor_full, services

        jp = Joinpoint("android1", HMI_TARGET_PATH, "onCreate")
        result, _trace = self.weaver.dispatch(jp, build)
        if isinstance(result, Vetoed):
            self._emit("request_vetoed", user=user_id, reason=result.reason)
            raise RequestVetoed(result.reason)
        self._pushed[user_id] = tuple(r.entry.id_service for r in result[2])
        return result

    def query_services(self, user_id: str, category: str | None = None,
                       max_km: float | None = None):
        self.registry.authenticate(user_id)
        at = self.user_locations.get(user_id)
        if at is None:
            raise NoLocationFix(user_id)
        radius = DEFAULT_RADIUS_KM if max_km is None else max_km

        def run():
            services = self.registry.find_services(user_id, at, radius, category)
            self._emit("services_queried", user=user_id,
                       category=category, max_km=radius,
                       names=[r.entry.service_name for r in services])
            widgets = build_service_widgets(services, category_prompt(category))
            self._last_widgets[user_id] = widgets
            self._emit("services_sent", user=user_id, count=len(services),
                       services=services_payload(services), widgets=widgets)
            return services, widgets

        jp = Joinpoint("android1", HMI_TARGET_PATH, "onRequest")
        result, _trace = self.weaver.dispatch(jp, run)
        if isinstance(result, Vetoed):
            self._emit("request_vetoed", user=user_id, reason=result.reason)
            raise RequestVetoed(result.reason)
        return result

    def move_user(self, user_id: str, at: LocationFix):
        """Location change; pushes a fresh result set when it differs."""
        self.registry.authenticate(user_id)
        self.user_locations[user_id] = at
        self._emit("location_changed", user=user_id,
                   lon=at.longitude, lat=at.latitude)
        services = self.registry.find_services(user_id, at, DEFAULT_RADIUS_KM)
        ids = tuple(r.entry.id_service for r in services)
        if ids != self._pushed.get(user_id):
            self._pushed[user_id] = ids
            self._emit("services_pushed", user=user_id,
                       names=[r.entry.service_name for r in services],
                       services=services_payload(services))
            return services
        return None

    def refresh_descriptor(self, user_id: str):
        profile = self.registry.authenticate(user_id)
        at = self.user_locations.get(user_id)
        descriptor = adapt(profile, {"location": at},
                           self.overrides.for_profile(user_id))
        descriptor = with_widgets(descriptor,
                                  self._last_widgets.get(user_id, ()))
        self._emit("hmi_adapted", user=user_id,
                   descriptor=descriptor_to_dict(descriptor))
        return descriptor

    # --- alarm routing ---------------------------------------------------------

    def route_alarm(self, alarm: Alarm, devices: DeviceStates | None = None
                    ) -> RoutingDecision:
        d = devices or self.devices
        if alarm.severity == "normal":
            decision = RoutingDecision(alarm.alarm_id, "DB_ONLY",
                                       (self.orb.platform_id, "db"))
        elif d.pda_on:
            decision = RoutingDecision(alarm.alarm_id, "PDA",
                                       (self.orb.platform_id, "gateway", "pda"))
            self.pda_inbox.append(alarm)
            self._emit("alarm_delivered", alarm_id=alarm.alarm_id,
                       device="pda", text=alarm.text)
        elif d.tv_on:
            decision = RoutingDecision(
                alarm.alarm_id, "TV",
                (self.orb.platform_id, "gateway", self.assembly.platform_id,
                 self.tv_chain.tv_component))
            self._deliver_tv(alarm)
        else:
            decision = RoutingDecision(alarm.alarm_id, "QUEUED",
                                       (self.orb.platform_id, "gateway", "queue"))
            self.alarm_queue.append(alarm)
            self._emit("alarm_queued", alarm_id=alarm.alarm_id,
                       depth=len(self.alarm_queue))
        self.decisions.append(decision)
        self._emit("alarm_routed", alarm_id=alarm.alarm_id,
                   route=decision.route, path=list(decision.path))
        return decision

    def _deliver_tv(self, alarm: Alarm) -> None:
        chain = self.tv_chain
        gate = self.assembly.components.get(chain.gate_component)
        entry_ok = chain.entry_component in self.assembly.components
        if gate is None or not entry_ok:
            self._emit("alarm_delivery_failed", alarm_id=alarm.alarm_id,
                       device="tv", reason="alarm display chain missing")
            return
        # the gate models "PDA is on"; flip it off before a TV delivery
        if gate.properties.get(chain.gate_property):
            self.assembly.invoke_input(chain.toggler_component, "trigger", None)
        self.assembly.emit(chain.entry_component, chain.entry_event, alarm.text)
        self._emit("alarm_delivered", alarm_id=alarm.alarm_id,
                   device="tv", text=alarm.text)

    def on_power_change(self, device: str, on: bool) -> list[RoutingDecision]:
        if device == "pda":
            self.devices.pda_on = on
        elif device == "tv":
            self.devices.tv_on = on
        else:
            raise ValueError(f"unknown device {device!r}")
        self._emit("device_power", device=device, on=on)
        decisions: list[RoutingDecision] = []
        if on:
            while self.alarm_queue:
                alarm = self.alarm_queue.popleft()
                self._emit("alarm_flushed", alarm_id=alarm.alarm_id,
                           depth=len(self.alarm_queue))
                decisions.append(self.route_alarm(alarm))
        return decisions
