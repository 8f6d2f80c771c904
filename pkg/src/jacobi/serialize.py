"""Reading and writing Elements as text lines or JSON.

Text form, one term per line::

    +1 [[1,2],3]@4
    -2 [1@1,2@1]@3@1          (attached: every leaf carries a site)
    +1 {"trivalent": ...}     (graphs use the diagram JSON)
    +1 [1,1]@2 (mod 2)

A lone ``0`` is the zero element.
"""

from __future__ import annotations

import json
import re

from .diagram import Diagram, tree_from_bracket
from .notation import (
    ParseError,
    Site,
    diagram_from_json,
    diagram_to_json,
    format_element,
    format_key,
    parse_rooted,
    parse_sited,
)
from .spaces import Element

_LINE = re.compile(r"\s*([+-]?\d+)\s+(.*?)(\s+\(mod 2\))?\s*\Z")


def _site_label(leaf) -> object:
    if isinstance(leaf, Site):
        return f"{leaf.component}@{leaf.site}"
    return (_site_label(leaf[0]), _site_label(leaf[1]))


def parse_diagram(text: str) -> Diagram:
    """A tree ``B@root``, a sited tree ``B@comp@site``, or diagram JSON."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return diagram_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad diagram JSON: {exc.msg}", text, exc.pos) from None
    if text.count("@") > 1:
        body, root = parse_sited(text)
        return tree_from_bracket(_site_label(body), _site_label(root))
    body, root = parse_rooted(text)
    return tree_from_bracket(body, root)


def parse_element(text: str) -> Element:
    out = Element()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.strip() == "0":
            continue
        m = _LINE.match(line)
        if not m:
            raise ParseError(f"line {lineno}: expected '<coefficient> <diagram>'", line, 0)
        out = out + Element.from_diagram(parse_diagram(m.group(2)), int(m.group(1)))
    return out


def element_to_json(e: Element) -> dict:
    from .diagram import decode_key

    return {
        "terms": [
            {
                "coeff": c,
                "diagram": diagram_to_json(decode_key(k)),
                "text": format_key(k),
                "two_torsion": e.is_two_torsion(k),
            }
            for k, c in e
        ]
    }


def element_from_json(obj) -> Element:
    terms = obj["terms"] if isinstance(obj, dict) else obj
    out = Element()
    for t in terms:
        if "diagram" in t:
            d = diagram_from_json(t["diagram"])
        else:
            d = parse_diagram(t["text"])
        out = out + Element.from_diagram(d, int(t.get("coeff", 1)))
    return out


def read_element(text: str) -> Element:
    """Accept either the JSON or the text form."""
    stripped = text.lstrip()
    if stripped.startswith("{") or re.match(r"\[\s*[{\]]", stripped):
        try:
            return element_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", text, exc.pos) from None
    return parse_element(text)


def format_element_text(e: Element) -> str:
    return format_element(e)
