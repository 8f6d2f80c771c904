"""Trees attached to a skeleton of directed segments and circles.

An attached tree is stored as a tree whose leaves are labelled by skeleton
components, together with the rank of every leaf among the leaves on the
same component.  For canonicalization the two are fused into site labels
``"<component>@<rank>"``; circles are additionally canonicalized under
rotation of their ranks.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .diagram import (
    FREE,
    TWO_TORSION,
    CanonicalDiagram,
    Diagram,
    StructuralError,
    canonicalize,
    decode_key,
    is_tree,
    tree_from_bracket,
    vassiliev_degree,
)
from .notation import ParseError, Site, format_bracket, parse_sited
from .spaces import Element, RelationSet, _relations_from

SEGMENT = "segment"
CIRCLE = "circle"
_KIND_CODES = {"s": SEGMENT, "c": CIRCLE}
_NAME = re.compile(r"[A-Za-z0-9_]+\Z")


@dataclass(frozen=True)
class Skeleton:
    components: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        comps = tuple((str(n), k) for n, k in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("a skeleton needs at least one component")
        names = [n for n, _ in comps]
        if len(set(names)) != len(names):
            raise ValueError("skeleton component names must be unique")
        for n, k in comps:
            if k not in (SEGMENT, CIRCLE):
                raise ValueError(f"unknown component kind {k!r}")
            if not _NAME.match(n):
                raise ValueError(f"bad component name {n!r}")

    @classmethod
    def segments(cls, names: Iterable) -> "Skeleton":
        return cls(tuple((str(n), SEGMENT) for n in names))

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.components]

    def kind(self, name: str) -> str:
        for n, k in self.components:
            if n == name:
                return k
        raise KeyError(f"no skeleton component {name!r}")

    def circles(self) -> list[str]:
        return [n for n, k in self.components if k == CIRCLE]


@dataclass(frozen=True)
class AttachedTree:
    """A tree with every leaf placed on a skeleton component.

    ``tree`` carries component names as leaf labels; ``ranks`` gives, per
    leaf half-edge, the 1-based order of that leaf along its component.
    """

    tree: Diagram
    ranks: tuple[tuple[int, int], ...]
    skeleton: Skeleton
    sign: int = 1

    def site_diagram(self) -> Diagram:
        rank = dict(self.ranks)
        uni = tuple((h, f"{lab}@{rank[h]}") for h, lab in self.tree.univalent)
        return Diagram(self.tree.trivalent, uni, self.tree.edges, self.sign)


def attach(tree: Diagram, positions: Mapping[int, object], skeleton: Skeleton, sign: int = 1) -> AttachedTree:
    """Attach the leaves of ``tree`` (labelled by component) at ``positions``.

    Positions are any mutually comparable values (rationals in practice);
    only their order along each component is kept.
    """
    if not is_tree(tree):
        raise StructuralError("attached generators must be trees")
    if vassiliev_degree(tree) < 1:
        raise StructuralError("attached trees have degree at least 1")
    by_comp: dict[str, list] = {}
    for h, comp in tree.univalent:
        skeleton.kind(comp)
        if h not in positions:
            raise StructuralError(f"leaf {h} is not attached")
        by_comp.setdefault(comp, []).append((positions[h], h))
    ranks = {}
    for comp, items in by_comp.items():
        pos = [p for p, _ in items]
        if len(set(pos)) != len(pos):
            raise StructuralError(f"duplicate positions on component {comp!r}")
        for r, (_, h) in enumerate(sorted(items), start=1):
            ranks[h] = r
    return AttachedTree(tree.with_sign(1), tuple(sorted(ranks.items())), skeleton, sign * tree.sign)


def _split(label: str) -> tuple[str, int]:
    comp, _, rank = label.rpartition("@")
    return comp, int(rank)


def canonicalize_sited(d: Diagram, skeleton: Skeleton | None = None) -> tuple[CanonicalDiagram, int]:
    """Canonicalize a site-labelled tree, modulo rotation on circle components."""
    circles = set(skeleton.circles()) if skeleton else set()
    counts: dict[str, int] = {}
    for _, lab in d.univalent:
        comp, _ = _split(lab)
        counts[comp] = counts.get(comp, 0) + 1
    rotating = sorted(c for c in counts if c in circles)
    best = None
    signs: set[int] = set()
    torsion = False
    for shifts in itertools.product(*(range(counts[c]) for c in rotating)):
        shift = dict(zip(rotating, shifts))

        def rotate(lab: str) -> str:
            comp, r = _split(lab)
            if comp in shift:
                r = (r - 1 + shift[comp]) % counts[comp] + 1
            return f"{comp}@{r}"

        c, s = canonicalize(d.relabel(rotate) if shift else d)
        if best is None or c.key < best.key:
            best, signs, torsion = c, {s}, c.two_torsion
        elif c.key == best.key:
            signs.add(s)
    if torsion or len(signs) > 1:
        return CanonicalDiagram(best.key, TWO_TORSION), 1
    return CanonicalDiagram(best.key, FREE), signs.pop()


def canonicalize_attached(t: AttachedTree) -> tuple[CanonicalDiagram, int]:
    return canonicalize_sited(t.site_diagram(), t.skeleton)


def attached_element(terms: Iterable[tuple[int, AttachedTree]]) -> Element:
    out = Element()
    for coeff, t in terms:
        c, s = canonicalize_attached(t)
        out = out + Element.from_canonical(c, coeff * s)
    return out


def pull_off(e: Element, skeleton: Skeleton | None = None) -> Element:
    """Forget the attachment order, keeping component names as labels."""

    def image(key: bytes) -> Element:
        d = decode_key(key).relabel(lambda lab: _split(lab)[0])
        return Element.from_diagram(d)

    return e.map_keys(image)


def attached_ihx_relations(basis: Sequence[bytes | CanonicalDiagram | AttachedTree],
                           skeleton: Skeleton | None = None) -> RelationSet:
    """IHX relators on attached trees, all attachment sites held fixed."""
    items = []
    for b in basis:
        if isinstance(b, AttachedTree):
            skeleton = skeleton or b.skeleton
            c, _ = canonicalize_attached(b)
            b = c
        key = b.key if isinstance(b, CanonicalDiagram) else b
        items.append((key, decode_key(key)))

    def canon(d: Diagram) -> Element:
        c, s = canonicalize_sited(d, skeleton)
        return Element.from_canonical(c, s)

    def torsion_of(key: bytes) -> bool:
        return canonicalize_sited(decode_key(key), skeleton)[0].two_torsion

    return _relations_from(items, canon, torsion_of)


# ---------------------------------------------------------------------------
# text form:  atree sign=+1 skel=(s:1,s:2) tree=[1@a,2@b]@2@c sites: 1:(a) 2:(b,c)

_ATREE = re.compile(
    r"\s*atree\s+sign=(?P<sign>[+-]?1)\s+skel=\((?P<skel>[^)]*)\)\s+tree=(?P<tree>\S+)"
    r"\s+sites:(?P<sites>.*)\Z",
    re.S,
)
_SITES = re.compile(r"\s*([A-Za-z0-9_]+)\s*:\s*\(([^)]*)\)")


def parse_atree(text: str) -> AttachedTree:
    m = _ATREE.match(text)
    if not m:
        raise ParseError("malformed attached-tree text", text, 0)
    comps = []
    for item in filter(None, (x.strip() for x in m["skel"].split(","))):
        code, _, name = item.partition(":")
        if code not in _KIND_CODES or not name:
            raise ParseError(f"bad skeleton item {item!r}", text, m.start("skel"))
        comps.append((name, _KIND_CODES[code]))
    skeleton = Skeleton(tuple(comps))
    order: dict[str, list[str]] = {}
    rest = m["sites"]
    pos = 0
    while rest[pos:].strip():
        sm = _SITES.match(rest, pos)
        if not sm:
            raise ParseError("bad site list", text, m.start("sites") + pos)
        order[sm[1]] = [s.strip() for s in sm[2].split(",") if s.strip()]
        pos = sm.end()
    body, root = parse_sited(m["tree"])
    return attach_sited(body, root, skeleton, order, int(m["sign"]))


def attach_sited(body, root: Site, skeleton: Skeleton, order: Mapping[str, Sequence[str]],
                 sign: int = 1) -> AttachedTree:
    """Build an attached tree from a sited bracket and per-component site orders."""

    def key(leaf):
        if isinstance(leaf, Site):
            return f"{leaf.component}@{leaf.site}"
        return (key(leaf[0]), key(leaf[1]))

    d = tree_from_bracket(key(body), key(root))
    positions = {}
    for h, lab in d.univalent:
        comp, _, site = lab.partition("@")
        sites = list(order.get(comp, ()))
        if site not in sites:
            raise StructuralError(f"site {site!r} is not listed on component {comp!r}")
        positions[h] = Fraction(sites.index(site) + 1)
    return attach(d.relabel(lambda lab: lab.partition("@")[0]), positions, skeleton, sign)


def format_atree(t: AttachedTree) -> str:
    from .diagram import to_bracket

    d = t.site_diagram().with_sign(1)
    body, root = to_bracket(d)
    skel = ",".join(f"{'s' if k == SEGMENT else 'c'}:{n}" for n, k in t.skeleton.components)
    used: dict[str, int] = {}
    for _, lab in d.univalent:
        comp, r = _split(lab)
        used[comp] = max(used.get(comp, 0), r)
    sites = " ".join(f"{c}:({','.join(f'p{r}' for r in range(1, used[c] + 1))})" for c in sorted(used))

    def sited(b):
        if isinstance(b, tuple):
            return (sited(b[0]), sited(b[1]))
        comp, r = _split(b)
        return Site(comp, f"p{r}")

    return (f"atree sign={t.sign:+d} skel=({skel}) "
            f"tree={format_bracket(sited(body))}@{format_bracket(sited(root))} sites: {sites}")


def attached_to_json(t: AttachedTree) -> dict:
    from .notation import diagram_to_json

    rank = dict(t.ranks)
    return {
        "skeleton": [{"name": n, "kind": k} for n, k in t.skeleton.components],
        "tree": diagram_to_json(t.tree),
        "attachments": [{"half": h, "component": lab, "position": rank[h]} for h, lab in t.tree.univalent],
        "sign": t.sign,
    }


def attached_from_json(obj: dict) -> AttachedTree:
    from .notation import diagram_from_json

    skel = Skeleton(tuple((c["name"], c["kind"]) for c in obj["skeleton"]))
    tree = diagram_from_json(obj["tree"])
    comp_of = dict(tree.univalent)
    positions = {}
    for a in obj["attachments"]:
        if comp_of.get(a["half"]) != a["component"]:
            raise StructuralError(f"attachment of half-edge {a['half']} disagrees with the tree label")
        positions[a["half"]] = Fraction(str(a["position"]))
    return attach(tree, positions, skel, obj.get("sign", 1))
