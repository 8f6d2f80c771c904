"""Vertex-oriented unitrivalent diagrams and AS canonicalization.

A diagram is stored at the level of half-edges.  Every vertex is a record
of half-edge ids (a triple for trivalent vertices, whose order fixes the
cyclic orientation, or a single half-edge carrying a label for univalent
vertices) and every edge pairs two half-edges.

Canonical keys are computed by enumerating breadth-first traversals of the
unoriented graph.  Choices during a traversal are restricted by a colour
refinement of the half-edges, so only genuinely symmetric situations
branch.  The set of traversals realising the minimal code is exactly the
set of isomorphisms onto the orbit representative, which gives both the
AS sign and the two-torsion flag.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

FREE = "free"
TWO_TORSION = "two-torsion"

DEFAULT_MAX_DEGREE = 8


class StructuralError(ValueError):
    """Raised for malformed diagrams."""


class CapacityError(ValueError):
    """Raised when a computation exceeds the configured degree bound."""


def max_degree() -> int:
    value = os.environ.get("JDC_MAX_DEGREE")
    if value:
        try:
            return int(value)
        except ValueError:
            raise CapacityError(f"JDC_MAX_DEGREE must be an integer, got {value!r}")
    return DEFAULT_MAX_DEGREE


def check_degree(n: int) -> None:
    bound = max_degree()
    if n > bound:
        raise CapacityError(f"degree {n} exceeds the configured bound {bound}")


@dataclass(frozen=True)
class Diagram:
    trivalent: tuple[tuple[int, int, int], ...]
    univalent: tuple[tuple[int, str], ...]
    edges: tuple[tuple[int, int], ...]
    sign: int = 1
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        tri = tuple(tuple(int(h) for h in v) for v in self.trivalent)
        uni = tuple((int(h), str(lab)) for h, lab in self.univalent)
        edges = tuple(tuple(int(h) for h in e) for e in self.edges)
        object.__setattr__(self, "trivalent", tri)
        object.__setattr__(self, "univalent", uni)
        object.__setattr__(self, "edges", edges)
        if self.sign not in (1, -1):
            raise StructuralError(f"sign must be +1 or -1, got {self.sign}")
        self._validate()

    def _validate(self) -> None:
        owner: dict[int, int] = {}
        for i, v in enumerate(self.trivalent):
            if len(v) != 3:
                raise StructuralError(f"trivalent vertex {i} has {len(v)} half-edges")
            for h in v:
                if h < 0 or h in owner:
                    raise StructuralError(f"half-edge {h} is negative or repeated")
                owner[h] = i
        n_tri = len(self.trivalent)
        for j, (h, label) in enumerate(self.univalent):
            if h < 0 or h in owner:
                raise StructuralError(f"half-edge {h} is negative or repeated")
            if not label:
                raise StructuralError("univalent labels must be nonempty")
            owner[h] = n_tri + j
        if not self.univalent:
            raise StructuralError("a diagram needs at least one univalent vertex")
        partner: dict[int, int] = {}
        for e in self.edges:
            if len(e) != 2:
                raise StructuralError(f"edge {e} must join two half-edges")
            a, b = e
            for h in e:
                if h not in owner:
                    raise StructuralError(f"edge uses unknown half-edge {h}")
                if h in partner:
                    raise StructuralError(f"half-edge {h} lies on two edges")
            if a == b:
                raise StructuralError("an edge cannot join a half-edge to itself")
            if owner[a] == owner[b]:
                raise StructuralError("self-loop at a vertex (zero by AS)")
            partner[a], partner[b] = b, a
        if len(partner) != len(owner):
            missing = sorted(set(owner) - set(partner))
            raise StructuralError(f"half-edges {missing} lie on no edge")
        # connectivity over vertices
        n_vert = len(set(owner.values()))
        adj: dict[int, set[int]] = {}
        for a, b in self.edges:
            adj.setdefault(owner[a], set()).add(owner[b])
            adj.setdefault(owner[b], set()).add(owner[a])
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n_vert:
            raise StructuralError("diagram is disconnected")
        object.__setattr__(self, "_index", {"owner": owner, "partner": partner})

    # -- structure ----------------------------------------------------
    @property
    def partner(self) -> dict[int, int]:
        return self._index["partner"]

    @property
    def owner(self) -> dict[int, int]:
        return self._index["owner"]

    def vertex_of(self, h: int) -> tuple[int, ...]:
        v = self.owner[h]
        if v < len(self.trivalent):
            return self.trivalent[v]
        return (self.univalent[v - len(self.trivalent)][0],)

    def labels(self) -> list[str]:
        return sorted(label for _, label in self.univalent)

    def label_of(self) -> dict[int, str]:
        return dict(self.univalent)

    def half_edges(self) -> list[int]:
        return sorted(self.owner)

    def internal_edges(self) -> list[tuple[int, int]]:
        """Edges whose endpoints are both trivalent."""
        n_tri = len(self.trivalent)
        return [e for e in self.edges if self.owner[e[0]] < n_tri and self.owner[e[1]] < n_tri]

    def with_sign(self, sign: int) -> "Diagram":
        return Diagram(self.trivalent, self.univalent, self.edges, sign)

    def relabel(self, mapping) -> "Diagram":
        """Apply ``mapping`` (dict or callable) to the univalent labels."""
        f = mapping if callable(mapping) else mapping.__getitem__
        uni = tuple((h, f(lab)) for h, lab in self.univalent)
        return Diagram(self.trivalent, uni, self.edges, self.sign)

    def reverse_vertex(self, i: int) -> "Diagram":
        """Reverse the cyclic order at trivalent vertex ``i``."""
        tri = list(self.trivalent)
        a, b, c = tri[i]
        tri[i] = (a, c, b)
        return Diagram(tuple(tri), self.univalent, self.edges, self.sign)


def vassiliev_degree(d: Diagram) -> int:
    total = len(d.trivalent) + len(d.univalent)
    if total % 2:
        raise StructuralError("odd vertex count in a unitrivalent graph")
    return total // 2


def first_betti(d: Diagram) -> int:
    return len(d.edges) - (len(d.trivalent) + len(d.univalent)) + 1


def grope_degree(d: Diagram) -> int:
    return vassiliev_degree(d) + first_betti(d)


def is_tree(d: Diagram) -> bool:
    return first_betti(d) == 0


# ---------------------------------------------------------------------------
# construction helpers


def strut(a: str, b: str, sign: int = 1) -> Diagram:
    return Diagram((), ((0, str(a)), (1, str(b))), ((0, 1),), sign)


class _Builder:
    def __init__(self) -> None:
        self.next = 0
        self.tri: list[tuple[int, int, int]] = []
        self.uni: list[tuple[int, str]] = []
        self.edges: list[tuple[int, int]] = []

    def fresh(self) -> int:
        self.next += 1
        return self.next - 1

    def rooted(self, bracket) -> int:
        """Build a rooted subtree; return the half-edge pointing up from its top."""
        if isinstance(bracket, tuple):
            left, right = bracket
            hl, hr, up = self.fresh(), self.fresh(), self.fresh()
            self.tri.append((hl, hr, up))
            self.edges.append((hl, self.rooted(left)))
            self.edges.append((hr, self.rooted(right)))
            return up
        h = self.fresh()
        self.uni.append((h, str(bracket)))
        return h

    def build(self, sign: int = 1) -> Diagram:
        return Diagram(tuple(self.tri), tuple(self.uni), tuple(self.edges), sign)


def tree_from_bracket(bracket, root, sign: int = 1) -> Diagram:
    """Unrooted tree from a rooted bracket and the label of the root leaf.

    ``root`` may itself be a bracket, in which case the two rooted trees are
    joined along an edge.  Each pair ``(A, B)`` becomes a trivalent vertex with
    cyclic order (A, B, up-edge).
    """
    b = _Builder()
    top = b.rooted(bracket)
    other = b.rooted(root)
    b.edges.append((top, other))
    return b.build(sign)


def to_bracket(d: Diagram, root_half: int | None = None):
    """Inverse of :func:`tree_from_bracket` for trees.

    Returns ``(bracket, root_label)`` read off with the diagram's own vertex
    orientations, rooted at ``root_half`` (default: the univalent vertex with
    the least label, lowest half-edge on ties).
    """
    if not is_tree(d):
        raise StructuralError("bracket notation needs a tree")
    labels = d.label_of()
    if root_half is None:
        root_half = min(d.univalent, key=lambda u: (u[1], u[0]))[0]
    partner = d.partner

    def down(h):
        # h is a half-edge entering a vertex from above
        vert = d.vertex_of(h)
        if len(vert) == 1:
            return labels[h]
        i = vert.index(h)
        x, y = vert[(i + 1) % 3], vert[(i + 2) % 3]
        return (down(partner[x]), down(partner[y]))

    return down(partner[root_half]), labels[root_half]


# ---------------------------------------------------------------------------
# canonicalization


@dataclass(frozen=True, order=True)
class CanonicalDiagram:
    key: bytes
    parity: str = FREE

    @property
    def two_torsion(self) -> bool:
        return self.parity == TWO_TORSION

    def diagram(self) -> Diagram:
        return decode_key(self.key)


def _refine(d: Diagram) -> dict[int, int]:
    labels = d.label_of()
    partner = d.partner
    halves = d.half_edges()
    color = {h: (0, labels[h]) if h in labels else (1, "") for h in halves}
    color = _compress(color)
    n_classes = len(set(color.values()))
    while True:
        sig = {}
        for h in halves:
            mates = sorted(color[m] for m in d.vertex_of(h) if m != h)
            sig[h] = (color[h], color[partner[h]], tuple(mates))
        new = _compress(sig)
        k = len(set(new.values()))
        color = new
        if k == n_classes:
            return color
        n_classes = k


def _compress(sig: dict) -> dict[int, int]:
    ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
    return {h: ranks[s] for h, s in sig.items()}


def _traversals(d: Diagram, color: dict[int, int], start: int):
    """Yield every half-edge ordering reachable from ``start``."""
    partner = d.partner

    def extend(order: list[int], pos: dict[int, int], qi: int):
        while qi < len(order):
            h = order[qi]
            qi += 1
            p = partner[h]
            if p not in pos:
                pos[p] = len(order)
                order.append(p)
                mates = [m for m in d.vertex_of(p) if m != p]
                if mates:
                    a, b = sorted(mates, key=color.__getitem__)
                    if color[a] == color[b]:
                        for first, second in ((a, b), (b, a)):
                            o2, p2 = order[:], dict(pos)
                            p2[first] = len(o2)
                            o2.append(first)
                            p2[second] = len(o2)
                            o2.append(second)
                            yield from extend(o2, p2, qi)
                        return
                    pos[a] = len(order)
                    order.append(a)
                    pos[b] = len(order)
                    order.append(b)
        yield order

    order = [start]
    pos = {start: 0}
    mates = [m for m in d.vertex_of(start) if m != start]
    if not mates:
        yield from extend(order, pos, 0)
        return
    a, b = sorted(mates, key=color.__getitem__)
    pairs = [(a, b), (b, a)] if color[a] == color[b] else [(a, b)]
    for first, second in pairs:
        o2 = [start, first, second]
        p2 = {start: 0, first: 1, second: 2}
        yield from extend(o2, p2, 0)


def _code(d: Diagram, order: Sequence[int]) -> tuple:
    pos = {h: i for i, h in enumerate(order)}
    labels = d.label_of()
    out = []
    for h in order:
        p = pos[d.partner[h]]
        if h in labels:
            out.append((0, labels[h], p))
        else:
            m1, m2 = sorted(pos[m] for m in d.vertex_of(h) if m != h)
            out.append((1, "", p, m1, m2))
    return tuple(out)


def _perm_sign(triple: Sequence[int]) -> int:
    a, b, c = triple
    inversions = (a > b) + (a > c) + (b > c)
    return -1 if inversions % 2 else 1


def _orientation_sign(d: Diagram, order: Sequence[int]) -> int:
    pos = {h: i for i, h in enumerate(order)}
    s = 1
    for v in d.trivalent:
        s *= _perm_sign([pos[h] for h in v])
    return s


@lru_cache(maxsize=200_000)
def _canonical(d: Diagram) -> tuple[tuple, int, str]:
    color = _refine(d)
    counts: dict[int, int] = {}
    for c in color.values():
        counts[c] = counts.get(c, 0) + 1
    start_color = min(counts, key=lambda c: (counts[c], c))
    best = None
    signs: set[int] = set()
    for start in sorted(h for h, c in color.items() if c == start_color):
        for order in _traversals(d, color, start):
            code = _code(d, order)
            if best is None or code < best:
                best, signs = code, {_orientation_sign(d, order)}
            elif code == best:
                signs.add(_orientation_sign(d, order))
    parity = TWO_TORSION if len(signs) > 1 else FREE
    return best, min(signs) if parity == FREE else 1, parity


def canonicalize(d: Diagram) -> tuple[CanonicalDiagram, int]:
    """AS-orbit representative and the sign relating ``d`` to it.

    For two-torsion orbits the returned sign is +1 (it is only meaningful
    mod 2 there).
    """
    check_degree(vassiliev_degree(d))
    code, sign, parity = _canonical(d.with_sign(1))
    key = json.dumps(code, separators=(",", ":")).encode()
    return CanonicalDiagram(key, parity), sign * d.sign


@lru_cache(maxsize=100_000)
def decode_key(key: bytes) -> Diagram:
    code = json.loads(key.decode())
    tri, uni, edges = [], [], []
    seen = set()
    for i, entry in enumerate(code):
        p = entry[2]
        if (p, i) not in seen:
            edges.append((i, p))
            seen.add((i, p))
            seen.add((p, i))
        if entry[0] == 0:
            uni.append((i, entry[1]))
        elif i < entry[3]:
            tri.append((i, entry[3], entry[4]))
    return Diagram(tuple(tri), tuple(uni), tuple(edges))


def automorphism_signs(key: bytes) -> set[int]:
    """Orientation signs of the label-preserving automorphisms of a class."""
    d = decode_key(key)
    color = _refine(d)
    target = json.loads(key.decode())
    target = tuple(tuple(x) for x in target)
    out = set()
    for start in d.half_edges():
        for order in _traversals(d, color, start):
            if _code(d, order) == target:
                out.add(_orientation_sign(d, order))
    return out


@dataclass(frozen=True)
class GeometricForest:
    """Signed disjoint union of diagrams; terms are never combined."""

    terms: tuple[tuple[int, Diagram], ...] = ()

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def union(self, other: "GeometricForest | Iterable[tuple[int, Diagram]]") -> "GeometricForest":
        extra = other.terms if isinstance(other, GeometricForest) else tuple(other)
        return GeometricForest(self.terms + extra)

    def as_multiset(self) -> dict:
        """Multiset of (sign, canonical key) after folding AS signs into the sign."""
        out: dict = {}
        for s, d in self.terms:
            c, sign = canonicalize(d)
            item = (s * sign if c.parity == FREE else 1, c.key)
            out[item] = out.get(item, 0) + 1
        return out
