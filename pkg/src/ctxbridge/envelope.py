"""Bit-exact codec for the wire envelope carrying every cross-platform message.

Canonical byte layout (UTF-8, no insignificant whitespace)::

    <Envelope><Header><Action>A</Action><MessageId>M</MessageId>
    <CorrelationId>C</CorrelationId></Header><Body kind="call">
    <op name="N" ns="NS"><arg name="x" type="string">v</arg></op></Body></Envelope>

Faults carry exactly two string args (code, reason) directly in the body and
no <op> element. Decoding tolerates whitespace between elements only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import xmlite
from .errors import MalformedEnvelope, TypeMismatch, UnknownKind

KINDS = ("call", "response", "fault", "event")

ArgValue = object  # str | int | float | bool | None
Args = tuple[tuple[str, ArgValue], ...]


@dataclass(frozen=True)
class Message:
    action: str
    message_id: str
    correlation_id: str
    kind: str
    op_name: str = ""
    namespace: str = ""
    args: Args = ()


def _wire_type(value: ArgValue) -> str:
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, int):
        return "int"
    if isinstance(value, float):
        return "float"
    if isinstance(value, str):
        return "string"
    if value is None:
        return "unit"
    raise ValueError(f"unsupported arg value {value!r}")


def _serialize(value: ArgValue) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("non-finite float is not encodable")
        return repr(value)
    if value is None:
        return ""
    return str(value)


def validate_message(m: Message) -> None:
    """Raise ValueError when m violates the envelope invariants."""
    if m.kind not in KINDS:
        raise ValueError(f"bad kind {m.kind!r}")
    if not m.message_id:
        raise ValueError("empty message_id")
    if m.kind in ("response", "fault") and not m.correlation_id:
        raise ValueError(f"{m.kind} requires a correlation_id")
    if m.kind == "fault":
        if m.op_name or m.namespace:
            raise ValueError("fault carries no operation")
        if (len(m.args) != 2 or m.args[0][0] != "code" or m.args[1][0] != "reason"
                or not all(isinstance(v, str) for _, v in m.args)):
            raise ValueError("fault args must be exactly (code, reason) strings")
    else:
        if not m.op_name:
            raise ValueError("empty op_name")
    for name, value in m.args:
        if not name:
            raise ValueError("empty arg name")
        _wire_type(value)


def encode(m: Message) -> bytes:
    validate_message(m)
    esc = xmlite.escape
    args = "".join(
        f'<arg name="{esc(name)}" type="{_wire_type(v)}">{esc(_serialize(v))}</arg>'
        for name, v in m.args
    )
    if m.kind == "fault":
        body = args
    else:
        body = f'<op name="{esc(m.op_name)}" ns="{esc(m.namespace)}">{args}</op>'
    doc = (
        "<Envelope><Header>"
        f"<Action>{esc(m.action)}</Action>"
        f"<MessageId>{esc(m.message_id)}</MessageId>"
        f"<CorrelationId>{esc(m.correlation_id)}</CorrelationId>"
        "</Header>"
        f'<Body kind="{m.kind}">{body}</Body>'
        "</Envelope>"
    )
    return doc.encode("utf-8")


def _text_leaf(node: xmlite.Node, tag: str) -> str:
    if node.tag != tag:
        raise MalformedEnvelope(node.offset, f"expected <{tag}>, got <{node.tag}>")
    if node.attrs:
        raise MalformedEnvelope(node.offset, f"<{tag}> takes no attributes")
    if node.children:
        raise MalformedEnvelope(node.offset, f"<{tag}> must be a text element")
    return node.text


def _parse_value(node: xmlite.Node, name: str, wire_type: str) -> ArgValue:
    text = node.text
    if wire_type == "string":
        return text
    if wire_type == "int":
        try:
            return int(text)
        except ValueError:
            raise TypeMismatch(name, f"bad int {text!r}") from None
    if wire_type == "float":
        try:
            value = float(text)
        except ValueError:
            raise TypeMismatch(name, f"bad float {text!r}") from None
        if not math.isfinite(value):
            raise TypeMismatch(name, f"non-finite float {text!r}")
        return value
    if wire_type == "bool":
        if text == "true":
            return True
        if text == "false":
            return False
        raise TypeMismatch(name, f"bad bool {text!r}")
    if wire_type == "unit":
        if text:
            raise TypeMismatch(name, "unit value must be empty")
        return None
    raise MalformedEnvelope(node.offset, f"unknown arg type {wire_type!r}")


def _parse_arg(node: xmlite.Node) -> tuple[str, ArgValue]:
    if node.tag != "arg":
        raise MalformedEnvelope(node.offset, f"expected <arg>, got <{node.tag}>")
    if set(node.attrs) != {"name", "type"}:
        raise MalformedEnvelope(node.offset, "<arg> requires exactly name and type")
    if node.children:
        raise MalformedEnvelope(node.offset, "<arg> must be a text element")
    name = node.attrs["name"]
    if not name:
        raise MalformedEnvelope(node.offset, "empty arg name")
    return name, _parse_value(node, name, node.attrs["type"])


def decode(b: bytes) -> Message:
    try:
        doc = b.decode("utf-8")
    except UnicodeDecodeError as e:
        raise MalformedEnvelope(e.start, "invalid utf-8") from None
    try:
        root = xmlite.parse_document(doc)
    except xmlite.XmlError as e:
        raise MalformedEnvelope(e.offset, e.detail) from None

    if root.tag != "Envelope" or root.attrs:
        raise MalformedEnvelope(root.offset, "document element must be <Envelope>")
    if len(root.children) != 2:
        raise MalformedEnvelope(root.offset, "<Envelope> needs Header then Body")
    header, body = root.children

    if header.tag != "Header" or header.attrs or len(header.children) != 3:
        raise MalformedEnvelope(header.offset,
                                "<Header> needs Action, MessageId, CorrelationId")
    action = _text_leaf(header.children[0], "Action")
    message_id = _text_leaf(header.children[1], "MessageId")
    correlation_id = _text_leaf(header.children[2], "CorrelationId")
    if not message_id:
        raise MalformedEnvelope(header.children[1].offset, "empty MessageId")

    if body.tag != "Body" or set(body.attrs) != {"kind"}:
        raise MalformedEnvelope(body.offset, '<Body kind="..."> required')
    kind = body.attrs["kind"]
    if kind not in KINDS:
        raise UnknownKind(kind)
    if kind in ("response", "fault") and not correlation_id:
        raise MalformedEnvelope(header.children[2].offset,
                                f"{kind} requires a correlation_id")

    if kind == "fault":
        if body.text.strip():
            raise MalformedEnvelope(body.offset, "fault body must hold args")
        args = tuple(_parse_arg(child) for child in body.children)
        m = Message(action, message_id, correlation_id, kind, "", "", args)
        try:
            validate_message(m)
        except ValueError as e:
            raise MalformedEnvelope(body.offset, str(e)) from None
        return m

    if len(body.children) != 1:
        raise MalformedEnvelope(body.offset, f"{kind} body must hold one <op>")
    op = body.children[0]
    if op.tag != "op" or set(op.attrs) != {"name", "ns"}:
        raise MalformedEnvelope(op.offset, '<op name="..." ns="..."> required')
    if not op.attrs["name"]:
        raise MalformedEnvelope(op.offset, "empty op name")
    if op.text.strip():
        raise MalformedEnvelope(op.offset, "<op> holds only <arg> elements")
    args = tuple(_parse_arg(child) for child in op.children)
    return Message(action, message_id, correlation_id, kind,
                   op.attrs["name"], op.attrs["ns"], args)


def make_fault(correlation_id: str, code: str, reason: str,
               message_id: str = "") -> Message:
    if not correlation_id:
        raise ValueError("make_fault requires a non-empty correlation_id")
    return Message(
        action="",
        message_id=message_id or correlation_id + "-fault",
        correlation_id=correlation_id,
        kind="fault",
        args=(("code", code), ("reason", reason)),
    )
