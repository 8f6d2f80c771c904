"""Bracket notation: a small recursive-descent parser and the printers.

Grammar (whitespace is ignored)::

    expr  := leaf | '[' expr ',' expr ']' | '(' expr ',' expr ')'
    leaf  := label | label '@' label        (the second form only with sites=True)
    label := [A-Za-z0-9_]+

A rooted tree is written ``expr@root``; an attached tree additionally puts a
site after every leaf and after the root, ``[[1@a,2@b],3@c]@4@d``.
"""

from __future__ import annotations

import json
import re
from typing import NamedTuple

from .diagram import Diagram, is_tree, to_bracket, decode_key

_LABEL = re.compile(r"[A-Za-z0-9_]+")
_CLOSE = {"[": "]", "(": ")"}


class Site(NamedTuple):
    component: str
    site: str


class ParseError(ValueError):
    def __init__(self, message: str, text: str, offset: int):
        line = text.count("\n", 0, offset) + 1
        column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        super().__init__(f"{message} at offset {offset} (line {line}, column {column})")
        self.offset = offset
        self.line = line
        self.column = column


class _Parser:
    def __init__(self, text: str, sites: bool = False):
        self.text = text
        self.pos = 0
        self.sites = sites

    def error(self, message: str):
        raise ParseError(message, self.text, self.pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            got = self.peek() or "end of input"
            self.error(f"expected {ch!r}, got {got!r}")
        self.pos += 1

    def label(self) -> str:
        self.skip()
        m = _LABEL.match(self.text, self.pos)
        if not m:
            got = self.peek() or "end of input"
            self.error(f"expected a label, got {got!r}")
        self.pos = m.end()
        return m.group()

    def leaf(self):
        lab = self.label()
        if self.sites:
            self.expect("@")
            return Site(lab, self.label())
        return lab

    def expr(self):
        ch = self.peek()
        if ch in _CLOSE:
            self.pos += 1
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect(_CLOSE[ch])
            return (left, right)
        return self.leaf()

    def end(self) -> None:
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")


def parse_bracket(text: str):
    """Parse a bracket expression into nested 2-tuples of labels."""
    if not text.strip():
        raise ParseError("empty input", text, 0)
    p = _Parser(text)
    out = p.expr()
    p.end()
    return out


def parse_rooted(text: str):
    """Parse ``expr@root`` into ``(bracket, root_label)``."""
    p = _Parser(text)
    body = p.expr()
    p.expect("@")
    root = p.label()
    p.end()
    return body, root


def parse_sited(text: str):
    """Parse ``expr@comp@site`` with sited leaves.

    Returns ``(bracket, root)`` where the leaves and the root are :class:`Site`.
    """
    p = _Parser(text, sites=True)
    body = p.expr()
    p.expect("@")
    root = p.leaf()
    p.end()
    return body, root


def format_bracket(b, open_: str = "[") -> str:
    close = _CLOSE[open_]
    if isinstance(b, Site):
        return f"{b.component}@{b.site}"
    if isinstance(b, tuple):
        return f"{open_}{format_bracket(b[0], open_)},{format_bracket(b[1], open_)}{close}"
    return str(b)


def format_diagram(d: Diagram) -> str:
    if is_tree(d):
        body, root = to_bracket(d)
        return f"{format_bracket(body)}@{root}"
    return json.dumps(diagram_to_json(d), separators=(",", ":"))


def format_key(key: bytes) -> str:
    return format_diagram(decode_key(key))


def format_element(e) -> str:
    if not e:
        return "0"
    parts = []
    for k, c in e:
        mark = " (mod 2)" if e.is_two_torsion(k) else ""
        parts.append(f"{c:+d} {format_key(k)}{mark}")
    return "\n".join(parts)


def diagram_to_json(d: Diagram) -> dict:
    return {
        "trivalent": [list(v) for v in d.trivalent],
        "univalent": [{"half": h, "label": lab} for h, lab in d.univalent],
        "edges": [list(e) for e in d.edges],
        "sign": d.sign,
    }


def diagram_from_json(obj: dict) -> Diagram:
    return Diagram(
        tuple(tuple(v) for v in obj["trivalent"]),
        tuple((u["half"], u["label"]) for u in obj["univalent"]),
        tuple(tuple(e) for e in obj["edges"]),
        obj.get("sign", 1),
    )
