"""Interface contracts: the meeting point between platforms.

A contract document is a small XML dialect with a bit-exact canonical form;
``render_contract`` always emits that form and ``parse_contract`` accepts it
plus insignificant whitespace between elements. Proxy and stub descriptors are
thin value objects the gateway turns into live endpoints.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urlsplit

from . import xmlite
from .errors import (
    ContractSyntaxError,
    DuplicateOperation,
    InvalidEndpoint,
    MissingNamespace,
    UnknownOperation,
    UnresolvableTarget,
)

SIMPLE_TYPES = ("string", "int", "float", "bool", "unit")

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")


def is_identifier(s: str) -> bool:
    return bool(_IDENT_RE.match(s))


@dataclass(frozen=True)
class OperationDecl:
    name: str
    input_message: str
    output_message: str
    input_action: str
    output_action: str
    params: tuple[tuple[str, str], ...] = ()
    returns: str = "unit"


def operation(name: str, params: tuple[tuple[str, str], ...] = (),
              returns: str = "unit") -> OperationDecl:
    """Shorthand form: messages and actions derived from the operation name."""
    return OperationDecl(
        name=name,
        input_message=name + "Request",
        output_message=name + "Response",
        input_action="urn:" + name,
        output_action="urn:" + name + "Response",
        params=params,
        returns=returns,
    )


@dataclass(frozen=True)
class Contract:
    name: str
    namespace: str
    operations: tuple[OperationDecl, ...] = ()

    def operation_named(self, op_name: str) -> OperationDecl:
        for op in self.operations:
            if op.name == op_name:
                return op
        raise UnknownOperation(op_name)


@dataclass(frozen=True)
class ProxyDescriptor:
    contract: Contract
    endpoint_url: str


@dataclass(frozen=True)
class StubDescriptor:
    contract: Contract
    platform_id: str
    target_path: str


def _syntax_error(doc: str, offset: int, detail: str) -> ContractSyntaxError:
    line, col = xmlite.line_col(doc, offset)
    return ContractSyntaxError(line, col, detail)


def _require_attrs(doc: str, node: xmlite.Node, required: tuple[str, ...],
                   optional: tuple[str, ...] = ()):
    for attr in node.attrs:
        if attr not in required and attr not in optional:
            raise _syntax_error(doc, node.offset,
                                f"unexpected attribute {attr!r} on <{node.tag}>")
    for attr in required:
        if attr not in node.attrs:
            raise _syntax_error(doc, node.offset,
                                f"<{node.tag}> requires attribute {attr!r}")


def _parse_operation(doc: str, node: xmlite.Node) -> OperationDecl:
    _require_attrs(doc, node, ("name",))
    name = node.attrs["name"]
    if not is_identifier(name):
        raise _syntax_error(doc, node.offset, f"invalid operation name {name!r}")
    if node.text.strip():
        raise _syntax_error(doc, node.offset, "<operation> cannot carry text")

    decl = operation(name)
    input_message, input_action = decl.input_message, decl.input_action
    output_message, output_action = decl.output_message, decl.output_action
    params: list[tuple[str, str]] = []
    returns = "unit"

    # canonical child order: input? output? param* returns?
    stage = 0
    for child in node.children:
        if child.tag == "input" and stage < 1:
            stage = 1
            _require_attrs(doc, child, (), ("message", "action"))
            input_message = child.attrs.get("message", input_message)
            input_action = child.attrs.get("action", input_action)
        elif child.tag == "output" and stage < 2:
            stage = 2
            _require_attrs(doc, child, (), ("message", "action"))
            output_message = child.attrs.get("message", output_message)
            output_action = child.attrs.get("action", output_action)
        elif child.tag == "param" and stage < 4:
            stage = 3
            _require_attrs(doc, child, ("name", "type"))
            ptype = child.attrs["type"]
            if ptype not in SIMPLE_TYPES:
                raise _syntax_error(doc, child.offset, f"unknown type {ptype!r}")
            if not is_identifier(child.attrs["name"]):
                raise _syntax_error(doc, child.offset,
                                    f"invalid param name {child.attrs['name']!r}")
            params.append((child.attrs["name"], ptype))
        elif child.tag == "returns" and stage < 4:
            stage = 4
            _require_attrs(doc, child, ("type",))
            returns = child.attrs["type"]
            if returns not in SIMPLE_TYPES:
                raise _syntax_error(doc, child.offset, f"unknown type {returns!r}")
        else:
            raise _syntax_error(doc, child.offset,
                                f"unexpected <{child.tag}> in <operation>")
        if child.children or child.text.strip():
            raise _syntax_error(doc, child.offset,
                                f"<{child.tag}> must be empty")

    return OperationDecl(name, input_message, output_message,
                         input_action, output_action, tuple(params), returns)


def parse_contract(text: str) -> Contract:
    try:
        root = xmlite.parse_document(text)
    except xmlite.XmlError as e:
        raise _syntax_error(text, e.offset, e.detail) from None

    if root.tag != "contract":
        raise _syntax_error(text, root.offset, f"expected <contract>, got <{root.tag}>")
    for attr in root.attrs:
        if attr not in ("name", "ns"):
            raise _syntax_error(text, root.offset,
                                f"unexpected attribute {attr!r} on <contract>")
    if "name" not in root.attrs:
        raise _syntax_error(text, root.offset, "<contract> requires attribute 'name'")
    if not root.attrs.get("ns"):
        raise MissingNamespace(f"contract {root.attrs['name']!r} has no namespace")
    name = root.attrs["name"]
    if not is_identifier(name):
        raise _syntax_error(text, root.offset, f"invalid contract name {name!r}")
    if root.text.strip():
        raise _syntax_error(text, root.offset, "<contract> cannot carry text")

    ops: list[OperationDecl] = []
    seen: set[str] = set()
    for child in root.children:
        if child.tag != "operation":
            raise _syntax_error(text, child.offset,
                                f"unexpected <{child.tag}> in <contract>")
        op = _parse_operation(text, child)
        if op.name in seen:
            raise DuplicateOperation(op.name)
        seen.add(op.name)
        ops.append(op)

    return Contract(name, root.attrs["ns"], tuple(ops))


def render_contract(c: Contract) -> str:
    """Canonical form: fixed element and attribute order, no whitespace."""
    esc = xmlite.escape
    parts = [f'<contract name="{esc(c.name)}" ns="{esc(c.namespace)}">']
    for op in c.operations:
        parts.append(f'<operation name="{esc(op.name)}">')
        parts.append(f'<input message="{esc(op.input_message)}"'
                     f' action="{esc(op.input_action)}"/>')
        parts.append(f'<output message="{esc(op.output_message)}"'
                     f' action="{esc(op.output_action)}"/>')
        for pname, ptype in op.params:
            parts.append(f'<param name="{esc(pname)}" type="{ptype}"/>')
        parts.append(f'<returns type="{op.returns}"/>')
        parts.append("</operation>")
    parts.append("</contract>")
    return "".join(parts)


def soap_action(c: Contract, op_name: str) -> str:
    """Namespace concatenated with the operation name, no separator.

    That is deliberately how the bridged clients build the action header, so
    the wire format replicates it rather than inserting a slash.
    """
    c.operation_named(op_name)
    return c.namespace + op_name


def make_proxy(c: Contract, endpoint: str) -> ProxyDescriptor:
    parts = urlsplit(endpoint)
    try:
        port = parts.port
    except ValueError:
        raise InvalidEndpoint(f"bad port in {endpoint!r}") from None
    if not parts.scheme or not parts.hostname or port is None:
        raise InvalidEndpoint(f"endpoint {endpoint!r} must be scheme://host:port/path")
    if len(parts.path) < 2 or not parts.path.startswith("/"):
        raise InvalidEndpoint(f"endpoint {endpoint!r} has no path")
    return ProxyDescriptor(c, endpoint)


def make_stub(c: Contract, platform_id: str, target_path: str) -> StubDescriptor:
    if not is_identifier(platform_id):
        raise UnresolvableTarget(f"invalid platform id {platform_id!r}")
    segments = target_path.split(".")
    if not segments or not all(is_identifier(s) for s in segments):
        raise UnresolvableTarget(f"invalid target path {target_path!r}")
    return StubDescriptor(c, platform_id, target_path)
