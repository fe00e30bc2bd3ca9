"""Tiny XML-like dialect shared by the contract and envelope grammars.

Supported surface: elements with double-quoted attributes, nested elements or
verbatim text content, self-closing tags, and the escape set & < > " (as
&amp; &lt; &gt; &quot;). No comments, processing instructions, CDATA, or mixed
content. Whitespace between elements is tolerated on input; text content is
taken verbatim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class XmlError(Exception):
    """Parse failure; carries the character offset where it happened."""

    def __init__(self, offset: int, detail: str):
        super().__init__(detail)
        self.offset = offset
        self.detail = detail


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*")
_ESCAPES = (("&", "&amp;"), ("<", "&lt;"), (">", "&gt;"), ('"', "&quot;"))
_ENTITIES = {"amp": "&", "lt": "<", "gt": ">", "quot": '"'}


def escape(s: str) -> str:
    for raw, ent in _ESCAPES:
        s = s.replace(raw, ent)
    return s


def line_col(doc: str, offset: int) -> tuple[int, int]:
    line = doc.count("\n", 0, offset) + 1
    col = offset - doc.rfind("\n", 0, offset)
    return line, col


@dataclass
class Node:
    tag: str
    attrs: dict[str, str]
    children: list["Node"] = field(default_factory=list)
    text: str = ""
    offset: int = 0


class Parser:
    def __init__(self, doc: str):
        self.doc = doc
        self.pos = 0

    def fail(self, detail: str, offset: int | None = None):
        raise XmlError(self.pos if offset is None else offset, detail)

    def _peek(self) -> str:
        return self.doc[self.pos] if self.pos < len(self.doc) else ""

    def _skip_ws(self):
        while self.pos < len(self.doc) and self.doc[self.pos].isspace():
            self.pos += 1

    def _expect(self, literal: str):
        if not self.doc.startswith(literal, self.pos):
            self.fail(f"expected {literal!r}")
        self.pos += len(literal)

    def _name(self) -> str:
        m = _NAME_RE.match(self.doc, self.pos)
        if not m:
            self.fail("expected a name")
        self.pos = m.end()
        return m.group(0)

    def _unescape(self, raw: str, base: int) -> str:
        out = []
        i = 0
        while i < len(raw):
            ch = raw[i]
            if ch == "&":
                end = raw.find(";", i + 1)
                if end < 0:
                    raise XmlError(base + i, "unterminated entity")
                ent = raw[i + 1 : end]
                if ent not in _ENTITIES:
                    raise XmlError(base + i, f"unknown entity &{ent};")
                out.append(_ENTITIES[ent])
                i = end + 1
            else:
                out.append(ch)
                i += 1
        return "".join(out)

    def _attrs(self) -> dict[str, str]:
        attrs: dict[str, str] = {}
        while True:
            start = self.pos
            self._skip_ws()
            ch = self._peek()
            if ch in (">", "/") or ch == "":
                return attrs
            if start == self.pos:
                self.fail("expected whitespace before attribute")
            name = self._name()
            self._skip_ws()
            self._expect("=")
            self._skip_ws()
            self._expect('"')
            vstart = self.pos
            end = self.doc.find('"', self.pos)
            if end < 0:
                self.fail("unterminated attribute value", vstart)
            raw = self.doc[self.pos : end]
            self.pos = end + 1
            if name in attrs:
                self.fail(f"duplicate attribute {name!r}", vstart)
            attrs[name] = self._unescape(raw, vstart)

    def element(self) -> Node:
        start = self.pos
        self._expect("<")
        tag = self._name()
        attrs = self._attrs()
        self._skip_ws()
        if self._peek() == "/":
            self._expect("/")
            self._expect(">")
            return Node(tag, attrs, offset=start)
        self._expect(">")
        node = Node(tag, attrs, offset=start)
        text_parts: list[str] = []
        while True:
            lt = self.doc.find("<", self.pos)
            if lt < 0:
                self.fail(f"unterminated element <{tag}>", start)
            chunk = self.doc[self.pos : lt]
            chunk_start = self.pos
            self.pos = lt
            if self.doc.startswith("</", self.pos):
                self.pos += 2
                close = self._name()
                if close != tag:
                    self.fail(f"mismatched closing tag </{close}> for <{tag}>")
                self._skip_ws()
                self._expect(">")
                if node.children:
                    if chunk.strip():
                        raise XmlError(chunk_start, "mixed text and elements")
                else:
                    text_parts.append(self._unescape(chunk, chunk_start))
                node.text = "".join(text_parts)
                return node
            # a child element begins; preceding text must be whitespace only
            if chunk.strip():
                raise XmlError(chunk_start, "mixed text and elements")
            node.children.append(self.element())

    def document(self) -> Node:
        self._skip_ws()
        if self._peek() != "<":
            self.fail("expected an element")
        node = self.element()
        self._skip_ws()
        if self.pos != len(self.doc):
            self.fail("trailing content after document element")
        return node


def parse_document(doc: str) -> Node:
    return Parser(doc).document()
