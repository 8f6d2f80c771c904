"""Random grope encodings shared by the property and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from jacobi.grope import Branch, CapData, GropeEncoding, GropeTree, LabeledTree, LinkTable, bracket_expand, matching_bracket
from jacobi.skeleton import Skeleton
from jacobi.spaces import Element


def random_shape(rng: random.Random, n: int):
    """A random rooted binary shape with ``n`` leaves (leaves are None)."""
    if n == 1:
        return None
    k = rng.randint(1, n - 1)
    return (random_shape(rng, k), random_shape(rng, n - k))


class _Ids:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.count = 0

    def __call__(self) -> str:
        self.count += 1
        return f"{self.prefix}{self.count}"


def _surface(rng, shape, ids, max_genus, top_genus):
    """Signed branch brackets of a surface stage of the given shape.

    Every genus piece gets its own higher stages, so tips under a stage of
    genus ``g`` occur in ``g`` times as many branches.  Each surface carries
    one orientation sign shared by all of its genus pieces.
    """
    if shape is None:
        return [(ids(), 1)]
    leafy = shape[0] is None and shape[1] is None
    genus = rng.randint(1, top_genus if leafy else max_genus)
    sign = rng.choice((1, -1))
    out = []
    for _ in range(genus):
        left = _surface(rng, shape[0], ids, max_genus, top_genus)
        right = _surface(rng, shape[1], ids, max_genus, top_genus)
        out += [((a, b), sign * sa * sb) for a, sa in left for b, sb in right]
    return out


def random_grope_tree(rng, root: str, n: int, prefix: str, max_genus=1, top_genus=3) -> GropeTree:
    shape = random_shape(rng, n)
    ids = _Ids(prefix)
    brackets = _surface(rng, shape, ids, max_genus, top_genus)
    return GropeTree(root, tuple(Branch(b, s) for b, s in brackets))


def random_uncapped(rng: random.Random, l: int = 4, max_class: int = 4, components: int = 1,
                    density: float = 0.35, tip_density: float = 0.15, max_genus: int = 1,
                    top_genus: int = 3) -> GropeEncoding:
    skel = Skeleton.segments(range(1, l + 1))
    comps = []
    for c in range(components):
        n = rng.randint(2, max_class)
        comps.append(random_grope_tree(rng, str(rng.randint(1, l)), n, f"c{c}t", max_genus, top_genus))
    tips = [t for g in comps for t in g.tips()]
    comp_links = []
    for t in tips:
        for x in skel.names:
            if rng.random() < density:
                comp_links.append((t, x, rng.choice((-2, -1, 1, 1, 2))))
    tip_links = []
    for i, a in enumerate(tips):
        for b in tips[i + 1:]:
            if rng.random() < tip_density:
                tip_links.append((a, b, rng.choice((-1, 1, 2))))
    return GropeEncoding(skel, tuple(comps), LinkTable.build(tip_links, comp_links), False, {})


def random_capped(rng: random.Random, l: int = 5, max_class: int = 4, strict: bool = True,
                  components: int = 1) -> GropeEncoding:
    """Capped encoding; each branch has at most one leaf per site on a strand."""
    skel = Skeleton.segments(range(1, l + 1))
    comps = []
    for c in range(components):
        n = rng.randint(2, max_class)
        comps.append(random_grope_tree(rng, str(rng.randint(1, l)), n, f"c{c}t", top_genus=2))
    caps = {}
    for g in comps:
        for t in g.tips():
            k = 1 if strict else rng.randint(1, 2)
            caps[t] = CapData(tuple(
                (str(rng.randint(1, l)), Fraction(rng.randint(1, 10**6), 10**6 + 1), rng.choice((1, -1)))
                for _ in range(k)))
    return GropeEncoding(skel, tuple(comps), LinkTable(), True, caps)


def predicted_torsion(G, g, a, b, doubled):
    """Sum of lk(doubled, x)^2 times the tree with both dual leaves on x."""
    out = Element()
    for br in g.branches:
        if a not in br.tips() or b not in br.tips():
            continue
        one = GropeTree(g.root, (br,))
        for (kind, x), v in G.links.row(doubled).items():
            if kind != "x":
                continue
            links = G.links.with_rows({a: {("x", x): 1}, b: {("x", x): 1}})
            for t in bracket_expand(one, links):
                out = out + matching_bracket(LabeledTree(t.tree, t.root, t.coefficient * v * v), links)
    return out
