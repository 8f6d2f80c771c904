"""Combinatorial gropes: branch trees, caps, linking data and the maps to diagrams.

A grope component is stored in genus-one normal form: a root component name
and a list of signed branches.  Each branch is a binary bracket whose leaves
are tip ids; an internal node is one genus-one piece of a surface stage.  A
tip that lies below a higher-genus stage appears in several branches.

Two tip occurrences lie on the same surface stage when replacing their parent
nodes by a hole gives the same branch; siblings are dual tips of one piece.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, NamedTuple, Sequence

from .diagram import Diagram, StructuralError, check_degree, tree_from_bracket
from .notation import format_bracket, parse_bracket
from .skeleton import Skeleton, attach, attached_element
from .spaces import Element
from .tower import TowerEncoding, UnpairedPoint, sub_brackets


class GropeError(StructuralError):
    pass


# ---------------------------------------------------------------------------
# data


class Intersection(NamedTuple):
    component: str
    site: Fraction
    sign: int


@dataclass(frozen=True)
class CapData:
    intersections: tuple[Intersection, ...]

    def __post_init__(self) -> None:
        items = tuple(Intersection(str(c), Fraction(str(s)), int(e)) for c, s, e in self.intersections)
        for it in items:
            if it.sign not in (1, -1):
                raise GropeError(f"intersection sign must be +1 or -1, got {it.sign}")
            if not 0 < it.site < 1:
                raise GropeError(f"cap site {it.site} must lie strictly between 0 and 1")
        object.__setattr__(self, "intersections", items)

    @property
    def strict(self) -> bool:
        return len(self.intersections) == 1


class Tip(NamedTuple):
    id: str
    cap: CapData | None = None


@dataclass(frozen=True)
class LinkTable:
    """Symmetric tip-tip linking numbers and tip-component linking numbers."""

    tips: Mapping[frozenset, int] = field(default_factory=dict)
    comps: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        tips = {}
        for k, v in self.tips.items():
            k = frozenset(k)
            if len(k) != 2:
                raise GropeError("a tip cannot be linked with itself")
            if v:
                tips[k] = int(v)
        comps = {(str(t), str(x)): int(v) for (t, x), v in self.comps.items() if v}
        object.__setattr__(self, "tips", tips)
        object.__setattr__(self, "comps", comps)

    @classmethod
    def build(cls, tips: Iterable = (), comps: Iterable = ()) -> "LinkTable":
        t: dict = {}
        for a, b, v in tips:
            k = frozenset((str(a), str(b)))
            t[k] = t.get(k, 0) + int(v)
        c: dict = {}
        for a, x, v in comps:
            k = (str(a), str(x))
            c[k] = c.get(k, 0) + int(v)
        return cls(t, c)

    def tip(self, a: str, b: str) -> int:
        return self.tips.get(frozenset((a, b)), 0)

    def comp(self, t: str, x: str) -> int:
        return self.comps.get((t, x), 0)

    def row(self, t: str) -> dict:
        """Linking row of a tip: keys ``("x", comp)`` and ``("T", tip)``."""
        out = {("x", x): v for (s, x), v in self.comps.items() if s == t}
        for k, v in self.tips.items():
            if t in k:
                (other,) = k - {t}
                out[("T", other)] = v
        return out

    def with_rows(self, rows: Mapping[str, Mapping]) -> "LinkTable":
        """Replace the rows of the given tips; entries between two replaced tips use the first row."""
        tips = {k: v for k, v in self.tips.items() if not (k & rows.keys())}
        comps = {k: v for k, v in self.comps.items() if k[0] not in rows}
        for t, row in rows.items():
            for (kind, target), v in row.items():
                if kind == "x":
                    comps[(t, target)] = v
                else:
                    k = frozenset((t, target))
                    if target in rows and k in tips:
                        continue
                    tips[k] = v
        return LinkTable(tips, comps)

    def to_json(self) -> dict:
        return {
            "tips": [[*sorted(k), v] for k, v in sorted(self.tips.items(), key=lambda kv: sorted(kv[0]))],
            "comps": [[t, x, v] for (t, x), v in sorted(self.comps.items())],
        }


@dataclass(frozen=True)
class Branch:
    tree: object
    sign: int = 1

    def __post_init__(self) -> None:
        tree = self.tree
        if isinstance(tree, str):
            tree = parse_bracket(tree)
        object.__setattr__(self, "tree", _as_bracket(tree))
        if self.sign not in (1, -1):
            raise GropeError(f"branch sign must be +1 or -1, got {self.sign}")
        tips = self.tips()
        if len(set(tips)) != len(tips):
            raise GropeError(f"a tip occurs twice in branch {format_bracket(self.tree)}")

    def tips(self) -> list[str]:
        return _leaves(self.tree)

    @property
    def size(self) -> int:
        return len(_leaves(self.tree))


@dataclass(frozen=True)
class GropeTree:
    root: str
    branches: tuple[Branch, ...] = ()
    root_site: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "root", str(self.root))
        object.__setattr__(self, "branches", tuple(
            b if isinstance(b, Branch) else Branch(b) for b in self.branches))
        object.__setattr__(self, "root_site", Fraction(str(self.root_site)))

    def tips(self) -> list[str]:
        seen: dict[str, None] = {}
        for b in self.branches:
            for t in b.tips():
                seen.setdefault(t)
        return list(seen)


@dataclass(frozen=True)
class GropeEncoding:
    skeleton: Skeleton
    components: tuple[GropeTree, ...]
    links: LinkTable = field(default_factory=LinkTable)
    capped: bool = False
    caps: Mapping[str, CapData] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "caps", dict(self.caps))
        self.validate()

    def validate(self) -> None:
        names = set(self.skeleton.names)
        owner: dict[str, int] = {}
        for i, g in enumerate(self.components):
            if g.root not in names:
                raise GropeError(f"root {g.root!r} is not a skeleton component")
            for t in g.tips():
                if owner.setdefault(t, i) != i:
                    raise GropeError(f"tip {t!r} belongs to two grope components")
        for (t, x) in self.links.comps:
            if x not in names:
                raise GropeError(f"link target {x!r} is not a skeleton component")
        for t, cap in self.caps.items():
            if t not in owner:
                raise GropeError(f"cap given for unknown tip {t!r}")
            for it in cap.intersections:
                if it.component not in names:
                    raise GropeError(f"cap of {t!r} meets unknown component {it.component!r}")
        if self.capped:
            missing = [t for t in owner if t not in self.caps]
            if missing:
                raise GropeError(f"uncapped tips in a capped grope: {', '.join(sorted(missing))}")

    def tips(self) -> list[Tip]:
        return [Tip(t, self.caps.get(t)) for g in self.components for t in g.tips()]

    @property
    def grope_class(self) -> float:
        return min((grope_class(g) for g in self.components), default=math.inf)

    def replace(self, **kw) -> "GropeEncoding":
        fields = dict(skeleton=self.skeleton, components=self.components, links=self.links,
                      capped=self.capped, caps=self.caps)
        fields.update(kw)
        return GropeEncoding(**fields)


def _as_bracket(b):
    if isinstance(b, (list, tuple)):
        if len(b) != 2:
            raise GropeError(f"grope nodes have exactly two children, got {b!r}")
        return (_as_bracket(b[0]), _as_bracket(b[1]))
    return str(b)


def _is_node(b) -> bool:
    # labelled leaves are NamedTuples, so only a plain tuple is an internal node
    return type(b) is tuple


def _leaves(b) -> list:
    if _is_node(b):
        return _leaves(b[0]) + _leaves(b[1])
    return [b]


# ---------------------------------------------------------------------------
# stages


def _parent_contexts(b, hole="*") -> Iterable[tuple[str, str]]:
    """Yield ``(tip, context)`` where context is ``b`` with the tip's parent node cut out."""

    def walk(node, wrap):
        if not isinstance(node, tuple):
            return
        for child in node:
            if isinstance(child, tuple):
                yield from walk(child, _wrap_child(node, child, wrap))
            else:
                yield child, wrap(hole)

    yield from walk(b, lambda x: x)


def _wrap_child(node, child, wrap):
    if node[0] is child:
        return lambda x: wrap((x, node[1]))
    return lambda x: wrap((node[0], x))


def stage_keys(g: GropeTree) -> dict[str, set]:
    """Stage identifiers of every tip of ``g`` (one per branch the tip occurs in)."""
    out: dict[str, set] = {}
    for br in g.branches:
        if not isinstance(br.tree, tuple):
            continue
        for t, ctx in _parent_contexts(br.tree):
            out.setdefault(t, set()).add(json.dumps(ctx))
    return out


def same_stage(g: GropeTree, a: str, b: str) -> bool:
    keys = stage_keys(g)
    return bool(keys.get(a, set()) & keys.get(b, set()))


def top_stages(g: GropeTree) -> list[list[tuple[str, str]]]:
    """Surface stages with no higher stages, each as its list of dual tip pairs."""
    groups: dict[str, list] = {}
    for br in g.branches:
        for ctx, node in _nodes(br.tree):
            groups.setdefault(json.dumps(ctx), []).append(node)
    out = []
    for _, nodes in sorted(groups.items()):
        if all(not isinstance(c, tuple) for n in nodes for c in n):
            pairs: list = []
            for n in nodes:
                if n not in pairs:
                    pairs.append(n)
            out.append(pairs)
    return out


def _nodes(b, hole="*"):
    def walk(node, wrap):
        if isinstance(node, tuple):
            yield wrap(hole), node
            for child in node:
                if isinstance(child, tuple):
                    yield from walk(child, _wrap_child(node, child, wrap))

    yield from walk(b, lambda x: x)


# ---------------------------------------------------------------------------
# class and the capped map


def grope_class(g: GropeTree) -> float:
    """Least number of leaves of a branch; a genus-zero component has infinite class."""
    if not g.branches:
        return math.inf
    return min(b.size for b in g.branches)


def _tree_for(bracket, root: str, sign: int) -> Diagram:
    return tree_from_bracket(bracket, root, sign)


def psi_capped(G: GropeEncoding, n: int | None = None) -> Element:
    """Signed attached trees over branches and over one intersection per cap.

    With ``n`` given, only branches with ``n`` tips contribute.
    """
    if not G.capped:
        raise GropeError("psi_capped needs a capped grope")
    terms = []
    for g in G.components:
        for br in g.branches:
            if n is not None and br.size != n:
                continue
            tips = br.tips()
            for choice in product(*(G.caps[t].intersections for t in tips)):
                sign = br.sign * math.prod(c.sign for c in choice)
                sub = dict(zip(tips, (f"~{i}" for i in range(len(tips)))))
                d = _tree_for(_relabel(br.tree, sub), f"~{len(tips)}", 1)
                pos = {f"~{i}": (c.component, c.site) for i, c in enumerate(choice)}
                pos[f"~{len(tips)}"] = (g.root, g.root_site)
                halves = {h: pos[lab] for h, lab in d.univalent}
                tree = d.relabel(lambda lab: pos[lab][0])
                terms.append((sign, attach(tree, {h: p for h, (_, p) in halves.items()}, G.skeleton)))
    return attached_element(terms)


def _relabel(b, mapping):
    if _is_node(b):
        return (_relabel(b[0], mapping), _relabel(b[1], mapping))
    return mapping[b]


def induced_links(G: GropeEncoding) -> LinkTable:
    """Linking data of the tips of a capped grope: signed count of cap intersections."""
    comps: dict = {}
    for t, cap in G.caps.items():
        for it in cap.intersections:
            comps[(t, it.component)] = comps.get((t, it.component), 0) + it.sign
    return LinkTable({}, comps)


def uncap(G: GropeEncoding) -> GropeEncoding:
    return G.replace(links=induced_links(G), capped=False, caps={})


# ---------------------------------------------------------------------------
# the uncapped map


class Leaf(NamedTuple):
    tip: str
    target: str
    to_tip: bool


@dataclass(frozen=True)
class LabeledTree:
    """A branch tree whose leaves name a component or another tip.

    ``coefficient`` is the branch sign times the linking numbers of the
    component-labelled leaves; tip-labelled leaves are weighted on gluing.
    """

    tree: object
    root: str
    coefficient: int = 1


def bracket_expand(g: GropeTree, links: LinkTable, skeleton: Skeleton | None = None) -> list[LabeledTree]:
    """Expand every branch multilinearly in the linking rows of its tips.

    Tips on the same stage never label each other.
    """
    keys = stage_keys(g)
    out = []
    for br in g.branches:
        options = []
        for t in br.tips():
            opts = []
            for (kind, target), v in sorted(links.row(t).items()):
                if kind == "x":
                    opts.append((Leaf(t, target, False), v))
                elif not (keys.get(t, set()) & keys.get(target, set())):
                    opts.append((Leaf(t, target, True), 1))
            options.append(opts)
        by_tip = dict(zip(br.tips(), range(len(options))))
        for choice in product(*options):
            coeff = br.sign * math.prod(v for _, v in choice)
            leaves = {t: leaf for t, (leaf, _) in zip(by_tip, choice)}
            out.append(LabeledTree(_relabel(br.tree, leaves), g.root, coeff))
    return out


def matching_bracket(t: LabeledTree, links: LinkTable) -> Element:
    """Glue tip-labelled leaves in dual pairs; zero if they cannot all be paired."""
    leaves = _leaves(t.tree)
    by_tip = {leaf.tip: leaf for leaf in leaves}
    pairs = []
    coeff = t.coefficient
    for leaf in leaves:
        if not leaf.to_tip:
            continue
        mate = by_tip.get(leaf.target)
        if mate is None or not mate.to_tip or mate.target != leaf.tip:
            return Element()
        if leaf.tip < mate.tip:
            pairs.append((leaf.tip, mate.tip))
            coeff *= links.tip(leaf.tip, mate.tip)
    if coeff == 0:
        return Element()
    label = {leaf: (f"~{leaf.tip}" if leaf.to_tip else leaf.target) for leaf in leaves}
    d = tree_from_bracket(_relabel(t.tree, label), t.root)
    glued = _glue(d, pairs)
    if glued is None:
        return Element()
    return Element.from_diagram(glued, coeff)


def _glue(d: Diagram, pairs: Sequence[tuple[str, str]]) -> Diagram | None:
    """Join the neighbours of each leaf pair by an edge; None if a loop at a vertex appears."""
    half = {lab: h for h, lab in d.univalent}
    partner = dict(d.partner)
    owner = d.owner
    edges = {frozenset(e) for e in d.edges}
    drop = set()
    for a, b in pairs:
        ha, hb = half[f"~{a}"], half[f"~{b}"]
        pa, pb = partner[ha], partner[hb]
        edges -= {frozenset((ha, pa)), frozenset((hb, pb))}
        drop |= {ha, hb}
        partner[pa], partner[pb] = pb, pa
        edges.add(frozenset((pa, pb)))
    for e in edges:
        x, y = tuple(e)
        if owner[x] == owner[y]:
            return None
    uni = tuple((h, lab) for h, lab in d.univalent if h not in drop)
    return Diagram(d.trivalent, uni, tuple(tuple(sorted(e)) for e in sorted(edges, key=sorted)), d.sign)


def psi_uncapped(G: GropeEncoding, n: int | None = None) -> Element:
    """Sum of the matching brackets of every expanded branch tree."""
    if n is not None:
        check_degree(n)
        for g in G.components:
            if grope_class(g) < n:
                raise GropeError(f"component rooted at {g.root!r} has class {grope_class(g)} < {n}")
    links = induced_links(G) if G.capped else G.links
    out = Element()
    for g in G.components:
        for t in bracket_expand(g, links, G.skeleton):
            if n is not None and len(_leaves(t.tree)) != n:
                continue
            out = out + matching_bracket(t, links)
    return out


# ---------------------------------------------------------------------------
# symplectic basis changes on a top stage

# each family maps (i, j) to the new rows as combinations of old ones
_FAMILIES = {
    0: lambda a, b, i, j: {},
    1: lambda a, b, i, j: {a[i]: {a[i]: 1, b[i]: 1}},
    2: lambda a, b, i, j: {b[i]: {a[i]: 1, b[i]: 1}},
    3: lambda a, b, i, j: {a[i]: {a[i]: 1, a[j]: 1}, b[j]: {b[i]: -1, b[j]: 1}},
    4: lambda a, b, i, j: {a[i]: {a[i]: 1, b[j]: 1}, a[j]: {b[i]: 1, a[j]: 1}},
    5: lambda a, b, i, j: {b[i]: {b[i]: 1, a[j]: 1}, b[j]: {a[i]: 1, b[j]: 1}},
    6: lambda a, b, i, j: {b[i]: {b[i]: 1, b[j]: 1}, a[j]: {a[i]: -1, a[j]: 1}},
}
FAMILIES = tuple(sorted(_FAMILIES))


def symplectic_transform(g: GropeTree, links: LinkTable, stage: int, family: int,
                         i: int = 0, j: int | None = None) -> tuple[GropeTree, LinkTable]:
    """Change the tip basis of a top stage by one symplectic generator.

    ``stage`` indexes :func:`top_stages`; indices ``i`` and ``j`` are 0-based
    genus pieces.  Family 0 is the identity.
    """
    stages = top_stages(g)
    if not 0 <= stage < len(stages):
        raise GropeError(f"no top stage {stage}; this component has {len(stages)}")
    if family not in _FAMILIES:
        raise GropeError(f"unknown generator family {family}")
    pairs = stages[stage]
    m = len(pairs)
    if family == 0:
        return g, links
    if not 0 <= i < m:
        raise GropeError(f"index i={i} out of range for genus {m}")
    if family >= 3:
        if j is None or not 0 <= j < m or j == i:
            raise GropeError(f"family {family} needs an index j != i in range for genus {m}")
    alphas = [p[0] for p in pairs]
    betas = [p[1] for p in pairs]
    combos = _FAMILIES[family](alphas, betas, i, j)
    old = {t: links.row(t) for combo in combos.values() for t in combo}
    rows = {}
    for t, combo in combos.items():
        row: dict = {}
        for s, k in combo.items():
            for target, v in old[s].items():
                row[target] = row.get(target, 0) + k * v
        rows[t] = {target: v for target, v in row.items() if target[1] not in combos or target[0] == "x"}
    return g, links.with_rows(rows)


def add_linking_trivial_row(g: GropeTree, links: LinkTable, tip: str, row: Mapping, k: int = 1) -> LinkTable:
    """Add ``k`` times a row that links every component and other-stage tip trivially.

    The row may only have entries on tips of the same stage as ``tip``.
    """
    keys = stage_keys(g)
    for (kind, target), v in row.items():
        if v and (kind == "x" or not (keys.get(tip, set()) & keys.get(target, set()))):
            raise GropeError(f"row entry {kind}:{target} is not linking-trivial")
    new = dict(links.row(tip))
    for target, v in row.items():
        if target[1] != tip:
            new[target] = new.get(target, 0) + k * v
    return links.with_rows({tip: new})


# ---------------------------------------------------------------------------
# push-in


def push_in(G: GropeEncoding) -> TowerEncoding:
    """Turn a strictly capped grope into a tower with one point per branch."""
    if not G.capped:
        raise GropeError("push_in needs a capped grope")
    for t, cap in G.caps.items():
        if not cap.strict:
            raise GropeError(f"cap of tip {t!r} has {len(cap.intersections)} intersections; split it first")
    names = G.skeleton.names
    l = len(names)
    if sorted(names, key=lambda s: (len(s), s)) != [str(k) for k in range(1, l + 1)]:
        raise GropeError("push_in needs skeleton components named 1..l")
    points = []
    disks = set()
    for g in G.components:
        for br in g.branches:
            cap = {t: G.caps[t].intersections[0] for t in br.tips()}
            body = _relabel(br.tree, {t: c.component for t, c in cap.items()})
            sign = br.sign * math.prod(c.sign for c in cap.values())
            points.append(UnpairedPoint(g.root, body, sign))
            disks.update(sub_brackets(body))
    return TowerEncoding(l, frozenset(disks), tuple(points))


# ---------------------------------------------------------------------------
# built-in witnesses

_IHX_SHAPES = (
    (lambda a, b, c: ((a, b), c), 1),
    (lambda a, b, c: (a, (b, c)), -1),
    (lambda a, b, c: ((c, a), b), 1),
)
_HALF = Fraction(1, 2)


def _capped_ihx(n: int) -> GropeEncoding:
    """Three capped branches of class ``n`` whose trees form an IHX relator.

    Strands ``1..n+1``; the relator sits on strands 1, 2, 3, the remaining
    strands ``4..n`` are bracketed on in order, and strand ``n+1`` is the root.
    """
    if n < 3:
        raise GropeError("an IHX witness needs degree at least 3")
    check_degree(n)
    skel = Skeleton.segments(range(1, n + 2))
    branches, caps = [], {}
    for k, (shape, sign) in enumerate(_IHX_SHAPES, start=1):
        tips = {lab: f"t{k}_{lab}" for lab in map(str, range(1, n + 1))}
        tree = shape(tips["1"], tips["2"], tips["3"])
        for lab in map(str, range(4, n + 1)):
            tree = (tree, tips[lab])
        branches.append(Branch(tree, sign))
        for lab, t in tips.items():
            caps[t] = CapData(((lab, _HALF, 1),))
    comp = GropeTree(str(n + 1), tuple(branches))
    return GropeEncoding(skel, (comp,), LinkTable(), True, caps)


def _genihx_graph() -> GropeEncoding:
    """Uncapped witness whose image is an IHX relator among one-loop graphs.

    The I-tree ``[[1,e],2]`` with the cut edge ``e`` reattached below the
    root ``3``; each cut end is a tip, and the two ends of each branch form a
    Hopf pair.
    """
    skel = Skeleton.segments(["1", "2", "3"])
    branches = []
    comps, tips = [], []
    for k, (shape, sign) in enumerate(_IHX_SHAPES, start=1):
        a, e, c, f = (f"g{k}_{s}" for s in ("a", "e", "c", "f"))
        branches.append(Branch((shape(a, e, c), f), sign))
        comps += [(a, "1", 1), (c, "2", 1)]
        tips.append((e, f, 1))
    comp = GropeTree("3", tuple(branches))
    return GropeEncoding(skel, (comp,), LinkTable.build(tips, comps), False, {})


_KIND = re.compile(r"(construction-4\.1|theorem-3|theorem-genihx-graph|theorem-ihxn)(?:\((\d+)\))?\Z")


def builtin_witness(kind: str, n: int | None = None) -> GropeEncoding:
    m = _KIND.match(kind)
    if not m:
        raise GropeError(f"unknown witness {kind!r}")
    name, arg = m.group(1), m.group(2)
    if name in ("construction-4.1", "theorem-3"):
        return _capped_ihx(3)
    if name == "theorem-ihxn":
        return _capped_ihx(int(arg) if arg else (n or 3))
    return _genihx_graph()


BUILTIN_KINDS = ("construction-4.1", "theorem-3", "theorem-ihxn", "theorem-genihx-graph")


# ---------------------------------------------------------------------------
# JSON


def grope_to_json(G: GropeEncoding) -> dict:
    out = {
        "skeleton": [{"name": n, "kind": k} for n, k in G.skeleton.components],
        "components": [
            {
                "root": g.root,
                "root_site": str(g.root_site),
                "branches": [{"tree": format_bracket(b.tree), "sign": b.sign} for b in g.branches],
            }
            for g in G.components
        ],
        "links": G.links.to_json(),
        "capped": G.capped,
    }
    if G.caps:
        out["caps"] = {t: [[i.component, str(i.site), i.sign] for i in cap.intersections]
                       for t, cap in G.caps.items()}
    return out


def grope_from_json(obj: Mapping) -> GropeEncoding:
    try:
        skel_obj = obj["skeleton"]
        if skel_obj and isinstance(skel_obj[0], Mapping):
            skel = Skeleton(tuple((c["name"], c.get("kind", "segment")) for c in skel_obj))
        else:
            skel = Skeleton.segments(skel_obj)
        comps = []
        for c in obj["components"]:
            comp_sign = int(c.get("sign", 1))
            branches = []
            for b in c.get("branches", ()):
                if isinstance(b, Mapping):
                    branches.append(Branch(b["tree"], comp_sign * int(b.get("sign", 1))))
                else:
                    branches.append(Branch(b, comp_sign))
            comps.append(GropeTree(c["root"], tuple(branches), Fraction(str(c.get("root_site", 0)))))
        links_obj = obj.get("links", {})
        links = LinkTable.build(links_obj.get("tips", ()), links_obj.get("comps", ()))
        caps = {t: CapData(tuple(tuple(i) for i in items)) for t, items in obj.get("caps", {}).items()}
        return GropeEncoding(skel, tuple(comps), links, bool(obj.get("capped", False)), caps)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StructuralError):
            raise
        raise GropeError(f"malformed grope encoding: {exc}") from None
