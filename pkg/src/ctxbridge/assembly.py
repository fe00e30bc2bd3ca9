"""Simulated component-assembly platform with runtime reconfiguration.

Components expose input methods and output events; links wire an event to a
method. Emissions propagate synchronously, depth-first, in link-creation
order, with a per-emission visited-link set cutting cycles. Aspect assemblies
mutate the graph atomically and are revertible to the exact pre-apply state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from .errors import (
    ConflictingAA,
    DuplicateComponent,
    DuplicateLink,
    TransportError,
    UnknownAA,
    UnknownComponent,
    UnknownEndpoint,
    UnknownLink,
)


@dataclass
class Component:
    component_id: str
    kind: str
    properties: dict = field(default_factory=dict)
    input_methods: frozenset[str] = frozenset()
    output_events: frozenset[str] = frozenset()

    def clone(self) -> "Component":
        return Component(self.component_id, self.kind, dict(self.properties),
                         self.input_methods, self.output_events)


@dataclass(frozen=True)
class Link:
    src_component: str
    src_event: str
    dst_component: str
    dst_method: str


@dataclass(frozen=True)
class AssemblyAspect:
    aa_id: str
    add_components: tuple[Component, ...] = ()
    remove_components: tuple[str, ...] = ()
    add_links: tuple[Link, ...] = ()
    remove_links: tuple[Link, ...] = ()


# kind -> (input methods, output events, default properties)
KIND_SPECS: dict[str, tuple[frozenset, frozenset, dict]] = {
    "Button": (frozenset({"press"}), frozenset({"click"}), {}),
    "RadioButton": (frozenset({"set_checked", "route"}),
                    frozenset({"changed", "when_checked", "when_unchecked"}),
                    {"checked": False}),
    "Textbox": (frozenset({"set_text"}), frozenset({"text_changed"}), {"text": ""}),
    "EventToggler": (frozenset({"trigger"}), frozenset({"toggled"}),
                     {"target_component": "", "target_property": "checked"}),
    "SoapProxy": (frozenset({"invoke"}), frozenset({"result"}),
                  {"endpoint": "", "operation": ""}),
    "EnterpriseProxy": (frozenset({"invoke"}), frozenset({"result"}),
                        {"endpoint": "", "operation": ""}),
}


def make_component(component_id: str, kind: str, **properties) -> Component:
    """Build a component of a built-in kind with its standard port names."""
    if kind not in KIND_SPECS:
        raise ValueError(f"unknown built-in kind {kind!r}")
    inputs, outputs, defaults = KIND_SPECS[kind]
    props = dict(defaults)
    props.update(properties)
    return Component(component_id, kind, props, inputs, outputs)


class AssemblyPlatform:
    def __init__(self, platform_id: str = "assembly1",
                 soap_invoker: Callable[[str, str, list], object] | None = None,
                 event_listener: Callable[[str, dict], None] | None = None):
        self.platform_id = platform_id
        self.soap_invoker = soap_invoker
        self.event_listener = event_listener
        self.components: dict[str, Component] = {}
        self.links: list[Link] = []
        self.events: list[dict] = []
        self._aa_snapshots: dict[str, tuple[list[Component], list[Link]]] = {}

    # --- discovery ------------------------------------------------------------

    def _announce(self, kind: str, data: dict) -> None:
        self.events.append({"kind": kind, **data})
        if self.event_listener is not None:
            self.event_listener(kind, data)

    def register(self, c: Component) -> None:
        if c.component_id in self.components:
            raise DuplicateComponent(c.component_id)
        self.components[c.component_id] = c
        self._announce("component_arrived",
                       {"component": c.component_id, "component_kind": c.kind})

    def unregister(self, component_id: str) -> None:
        if component_id not in self.components:
            raise UnknownComponent(component_id)
        dropped = [l for l in self.links
                   if component_id in (l.src_component, l.dst_component)]
        self.links = [l for l in self.links if l not in dropped]
        del self.components[component_id]
        self._announce("component_departed",
                       {"component": component_id, "links_removed": len(dropped)})

    # --- links ----------------------------------------------------------------

    def _check_endpoint(self, component_id: str, port: str, direction: str,
                        missing_is_endpoint: bool = True) -> None:
        comp = self.components.get(component_id)
        if comp is None:
            if missing_is_endpoint:
                raise UnknownEndpoint(f"no component {component_id!r}")
            raise UnknownComponent(component_id)
        ports = comp.output_events if direction == "event" else comp.input_methods
        if port not in ports:
            raise UnknownEndpoint(f"{component_id!r} has no {direction} {port!r}")

    def connect(self, src: tuple[str, str], dst: tuple[str, str]) -> Link:
        self._check_endpoint(src[0], src[1], "event")
        self._check_endpoint(dst[0], dst[1], "method")
        link = Link(src[0], src[1], dst[0], dst[1])
        if link in self.links:
            raise DuplicateLink(str(link))
        self.links.append(link)
        return link

    def disconnect(self, link: Link) -> None:
        if link not in self.links:
            raise UnknownLink(str(link))
        self.links.remove(link)

    # --- emission -------------------------------------------------------------

    def emit(self, component_id: str, event: str, payload) -> list[Link]:
        """Inject an emission; returns the ordered list of links fired."""
        self._check_endpoint(component_id, event, "event",
                             missing_is_endpoint=False)
        trace: list[Link] = []
        self._propagate(component_id, event, payload, trace, set())
        return trace

    def invoke_input(self, component_id: str, method: str, payload) -> list[Link]:
        """Invoke an input method from outside (UPnP-style control point)."""
        self._check_endpoint(component_id, method, "method",
                             missing_is_endpoint=False)
        trace: list[Link] = []
        self._behave(self.components[component_id], method, payload, trace, set())
        return trace

    def _propagate(self, component_id: str, event: str, payload,
                   trace: list[Link], visited: set[Link]) -> None:
        for link in list(self.links):
            if (link.src_component != component_id or link.src_event != event
                    or link in visited):
                continue
            visited.add(link)
            trace.append(link)
            target = self.components.get(link.dst_component)
            if target is None:
                raise UnknownComponent(link.dst_component)
            self._behave(target, link.dst_method, payload, trace, visited)

    def _behave(self, comp: Component, method: str, payload,
                trace: list[Link], visited: set[Link]) -> None:
        kind = comp.kind
        if kind == "Textbox" and method == "set_text":
            comp.properties["text"] = payload
            self._propagate(comp.component_id, "text_changed", payload, trace, visited)
        elif kind == "Button" and method == "press":
            self._propagate(comp.component_id, "click", payload, trace, visited)
        elif kind == "RadioButton" and method == "set_checked":
            comp.properties["checked"] = bool(payload)
            self._propagate(comp.component_id, "changed", payload, trace, visited)
        elif kind == "RadioButton" and method == "route":
            event = "when_checked" if comp.properties.get("checked") else "when_unchecked"
            self._propagate(comp.component_id, event, payload, trace, visited)
        elif kind == "EventToggler" and method == "trigger":
            target = self.components.get(comp.properties.get("target_component", ""))
            if target is None:
                raise UnknownComponent(comp.properties.get("target_component", ""))
            prop = comp.properties.get("target_property", "checked")
            target.properties[prop] = not bool(target.properties.get(prop))
            self._propagate(comp.component_id, "toggled", payload, trace, visited)
        elif kind in ("SoapProxy", "EnterpriseProxy") and method == "invoke":
            if self.soap_invoker is None:
                raise TransportError("platform has no soap invoker configured")
            value = self.soap_invoker(comp.properties.get("endpoint", ""),
                                      comp.properties.get("operation", ""), [])
            self._propagate(comp.component_id, "result", value, trace, visited)
        # other (custom) kinds: methods are inert sinks

    # --- aspect assemblies ------------------------------------------------------

    def apply_aa(self, aa: AssemblyAspect) -> None:
        if aa.aa_id in self._aa_snapshots:
            raise ConflictingAA(f"aspect assembly {aa.aa_id!r} already applied")

        adds = {c.component_id for c in aa.add_components}
        if len(adds) != len(aa.add_components):
            raise ConflictingAA("duplicate component ids in add list")
        for cid in adds:
            if cid in self.components:
                raise ConflictingAA(f"component {cid!r} already present")
        for cid in aa.remove_components:
            if cid not in self.components:
                raise ConflictingAA(f"cannot remove missing component {cid!r}")
            if cid in adds:
                raise ConflictingAA(f"component {cid!r} both added and removed")
        for link in aa.remove_links:
            if link not in self.links:
                raise ConflictingAA(f"cannot remove missing link {link}")

        survivors = {cid for cid in self.components if cid not in aa.remove_components}
        final_ids = survivors | adds
        ports: dict[str, tuple[frozenset, frozenset]] = {}
        for cid in survivors:
            comp = self.components[cid]
            ports[cid] = (comp.output_events, comp.input_methods)
        for comp in aa.add_components:
            ports[comp.component_id] = (comp.output_events, comp.input_methods)

        kept_links = [l for l in self.links if l not in aa.remove_links
                      and l.src_component in survivors and l.dst_component in survivors]
        for link in aa.add_links:
            if link.src_component not in final_ids or link.dst_component not in final_ids:
                raise ConflictingAA(f"link {link} references a missing component")
            if link.src_event not in ports[link.src_component][0]:
                raise ConflictingAA(f"link {link} references a missing event")
            if link.dst_method not in ports[link.dst_component][1]:
                raise ConflictingAA(f"link {link} references a missing method")
            if link in kept_links:
                raise ConflictingAA(f"link {link} already present")
            kept_links.append(link)

        # validated: commit atomically, keeping a full snapshot for revert
        snapshot = ([c.clone() for c in self.components.values()], list(self.links))
        self._aa_snapshots[aa.aa_id] = snapshot

        departed = list(aa.remove_components)
        for cid in departed:
            del self.components[cid]
        for comp in aa.add_components:
            self.components[comp.component_id] = comp.clone()
        self.links = kept_links
        for cid in departed:
            self._announce("component_departed", {"component": cid, "links_removed": 0})
        for comp in aa.add_components:
            self._announce("component_arrived",
                           {"component": comp.component_id, "component_kind": comp.kind})

    def revert_aa(self, aa_id: str) -> None:
        """Restore the exact pre-apply snapshot (structure and properties)."""
        if aa_id not in self._aa_snapshots:
            raise UnknownAA(aa_id)
        components, links = self._aa_snapshots.pop(aa_id)
        old_ids = set(self.components)
        new_ids = {c.component_id for c in components}
        self.components = {c.component_id: c.clone() for c in components}
        self.links = list(links)
        for cid in sorted(old_ids - new_ids):
            self._announce("component_departed", {"component": cid, "links_removed": 0})
        for cid in sorted(new_ids - old_ids):
            self._announce("component_arrived",
                           {"component": cid,
                            "component_kind": self.components[cid].kind})

    # --- inspection -------------------------------------------------------------

    def structure(self):
        """Comparable structural value: components (in order) plus links."""
        comps = tuple(
            (c.component_id, c.kind,
             tuple(sorted(c.input_methods)), tuple(sorted(c.output_events)),
             tuple(sorted(c.properties.items())))
            for c in self.components.values()
        )
        return comps, tuple(self.links)

    def dump(self) -> str:
        lines = []
        for c in self.components.values():
            props = " ".join(f"{k}={json.dumps(v)}"
                             for k, v in sorted(c.properties.items()))
            lines.append(f"component {c.component_id} {c.kind}"
                         + (f" {props}" if props else ""))
        for l in self.links:
            lines.append(f"link {l.src_component}.{l.src_event}"
                         f" -> {l.dst_component}.{l.dst_method}")
        return "\n".join(lines) + ("\n" if lines else "")
