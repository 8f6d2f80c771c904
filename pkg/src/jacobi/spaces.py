"""Groups of diagrams modulo AS, IHX relators, ranks and torsion."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .diagram import (
    CanonicalDiagram,
    Diagram,
    StructuralError,
    canonicalize,
    check_degree,
    decode_key,
    grope_degree,
    tree_from_bracket,
)
from .linalg import bareiss_rank, hermite_basis, reduce_vector, smith_invariants


class Element:
    """Finite integer combination of canonical diagrams.

    Coefficients on two-torsion classes are kept reduced mod 2.
    """

    __slots__ = ("_coeffs", "_torsion")

    def __init__(self, coeffs: dict[bytes, int] | None = None, torsion: Iterable[bytes] = ()):
        self._torsion = frozenset(torsion)
        self._coeffs: dict[bytes, int] = {}
        for k, c in (coeffs or {}).items():
            if k in self._torsion:
                c %= 2
            if c:
                self._coeffs[k] = c

    @classmethod
    def zero(cls) -> "Element":
        return cls()

    @classmethod
    def from_diagram(cls, d: Diagram, coeff: int = 1) -> "Element":
        c, sign = canonicalize(d)
        return cls.from_canonical(c, coeff * sign)

    @classmethod
    def from_canonical(cls, c: CanonicalDiagram, coeff: int = 1) -> "Element":
        return cls({c.key: coeff}, [c.key] if c.two_torsion else [])

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, Diagram]]) -> "Element":
        out = cls()
        for coeff, d in terms:
            out = out + cls.from_diagram(d, coeff)
        return out

    # -- access -------------------------------------------------------
    def items(self) -> list[tuple[bytes, int]]:
        return sorted(self._coeffs.items())

    def keys(self) -> list[bytes]:
        return sorted(self._coeffs)

    def coefficient(self, key: bytes) -> int:
        return self._coeffs.get(key, 0)

    def is_two_torsion(self, key: bytes) -> bool:
        return key in self._torsion

    @property
    def torsion_keys(self) -> frozenset:
        return self._torsion

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __iter__(self) -> Iterator[tuple[bytes, int]]:
        return iter(self.items())

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "Element") -> "Element":
        coeffs = dict(self._coeffs)
        for k, c in other._coeffs.items():
            coeffs[k] = coeffs.get(k, 0) + c
        return Element(coeffs, self._torsion | other._torsion)

    def __neg__(self) -> "Element":
        return self.scale(-1)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, k: int) -> "Element":
        return Element({key: k * c for key, c in self._coeffs.items()}, self._torsion)

    def __mul__(self, k: int) -> "Element":
        return self.scale(k)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self) -> str:
        from .notation import format_element

        return f"Element({format_element(self)!r})"

    def map_keys(self, f) -> "Element":
        """Linear extension of ``f: key -> Element``."""
        out = Element()
        for k, c in self._coeffs.items():
            out = out + f(k).scale(c)
        return out

    def without_torsion(self) -> "Element":
        """Image in the quotient that also kills the two-torsion classes."""
        return Element({k: c for k, c in self._coeffs.items() if k not in self._torsion})


def add(a: Element, b: Element) -> Element:
    return a + b


def scalar_mul(k: int, a: Element) -> Element:
    return a.scale(k)


# ---------------------------------------------------------------------------
# generators


def _insert(bracket, leaf) -> Iterator:
    yield (bracket, leaf)
    if isinstance(bracket, tuple):
        left, right = bracket
        for b in _insert(left, leaf):
            yield (b, right)
        for b in _insert(right, leaf):
            yield (left, b)


@lru_cache(maxsize=None)
def rooted_shapes(k: int) -> tuple:
    """All rooted binary trees on leaves 1..k (children unordered)."""
    shapes = [1]
    for leaf in range(2, k + 1):
        shapes = [s for b in shapes for s in _insert(b, leaf)]
    return tuple(shapes)


def _substitute(bracket, labels):
    if isinstance(bracket, tuple):
        return (_substitute(bracket[0], labels), _substitute(bracket[1], labels))
    return labels[bracket]


def trees_on(labels: Sequence[str]) -> list[Diagram]:
    """Every tree whose leaves carry ``labels`` (one leaf per entry)."""
    k = len(labels) - 1
    return [tree_from_bracket(_substitute(s, labels), labels[0]) for s in rooted_shapes(k)]


def _dedupe(diagrams: Iterable[Diagram]) -> list[CanonicalDiagram]:
    seen: dict[bytes, CanonicalDiagram] = {}
    for d in diagrams:
        c, _ = canonicalize(d)
        seen.setdefault(c.key, c)
    return [seen[k] for k in sorted(seen)]


def generate_trees(degree: int, labels: Sequence[str], mode: str = "repeats") -> list[CanonicalDiagram]:
    """AS classes of trees of Vassiliev degree ``degree`` with leaves in ``labels``.

    ``mode`` is ``"distinct"`` (each label at most once) or ``"repeats"``.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    check_degree(degree)
    alphabet = sorted(set(map(str, labels)))
    if not alphabet:
        raise ValueError("label alphabet is empty")
    n_leaves = degree + 1
    if mode == "distinct":
        choices = itertools.combinations(alphabet, n_leaves)
    elif mode == "repeats":
        choices = itertools.combinations_with_replacement(alphabet, n_leaves)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return _dedupe(d for labs in choices for d in trees_on(labs))


def _matchings(items: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, other in enumerate(rest):
        for m in _matchings(rest[:i] + rest[i + 1:]):
            yield [(first, other)] + m


@lru_cache(maxsize=None)
def _graph_shapes(n_tri: int, n_uni: int) -> tuple[Diagram, ...]:
    """Connected loop-free unitrivalent shapes with placeholder leaf labels."""
    if n_tri == 0:
        return (Diagram((), ((0, "*"), (1, "*")), ((0, 1),)),) if n_uni == 2 else ()
    tri = tuple((3 * i, 3 * i + 1, 3 * i + 2) for i in range(n_tri))
    halves = list(range(3 * n_tri))
    shapes = []
    for legs in itertools.combinations(halves, n_uni):
        leg_set = set(legs)
        rest = [h for h in halves if h not in leg_set]
        uni = tuple((3 * n_tri + j, "*") for j in range(n_uni))
        leg_edges = [(h, 3 * n_tri + j) for j, h in enumerate(legs)]
        for m in _matchings(rest):
            try:
                shapes.append(Diagram(tri, uni, tuple(leg_edges + m)))
            except StructuralError:
                continue
    return tuple(decode_key(c.key) for c in _dedupe(shapes))


def generate_graphs(degree: int, labels: Sequence[str]) -> list[CanonicalDiagram]:
    """AS classes of connected diagrams of grope degree ``degree``.

    A unitrivalent graph with t trivalent vertices has grope degree t + 1,
    so the enumeration runs over t = degree - 1 and every admissible leg count.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    check_degree(degree)
    alphabet = sorted(set(map(str, labels)))
    n_tri = degree - 1
    out = []
    for n_uni in range(1, n_tri + 3):
        if (n_uni + n_tri) % 2:
            continue
        for shape in _graph_shapes(n_tri, n_uni):
            for labs in itertools.product(alphabet, repeat=len(shape.univalent)):
                out.append(_label_legs(shape, labs))
    result = _dedupe(out)
    assert all(grope_degree(c.diagram()) == degree for c in result)
    return result


def _label_legs(shape: Diagram, labs: Sequence[str]) -> Diagram:
    uni = tuple((h, lab) for (h, _), lab in zip(shape.univalent, labs))
    return Diagram(shape.trivalent, uni, shape.edges)


# ---------------------------------------------------------------------------
# IHX


def _rotate(v: tuple[int, int, int], h: int, last: bool) -> tuple[int, int, int]:
    i = v.index(h)
    v = v[i:] + v[:i]  # h first
    return (v[1], v[2], v[0]) if last else v


def ihx_terms(d: Diagram, edge: tuple[int, int]) -> tuple[Diagram, Diagram | None, Diagram | None]:
    """The I, H and X diagrams at an internal edge.

    Around the edge the diagram reads as the rooted bracket [[a,b],c] with
    root d; H is [a,[b,c]] and X is [[c,a],b] on the same four strands, so the
    relator I - H + X is the Jacobi identity.  H or X is ``None`` when the
    reconnection creates a loop at a vertex (zero by AS).
    """
    h1, h2 = edge
    vi, wi = d.owner[h1], d.owner[h2]
    n_tri = len(d.trivalent)
    if vi >= n_tri or wi >= n_tri:
        raise StructuralError("IHX needs an edge between two trivalent vertices")
    a, b, _ = _rotate(d.trivalent[vi], h1, last=True)
    _, c, dd = _rotate(d.trivalent[wi], h2, last=False)

    def rebuild(v_new, w_new):
        tri = list(d.trivalent)
        tri[vi], tri[wi] = v_new, w_new
        try:
            return Diagram(tuple(tri), d.univalent, d.edges, d.sign)
        except StructuralError:
            return None

    H = rebuild((b, c, h1), (a, h2, dd))
    X = rebuild((c, a, h1), (h2, b, dd))
    return d, H, X


def ihx_relator(d: Diagram, edge: tuple[int, int], canon=None) -> Element:
    """The element I - H + X at ``edge``; ``canon`` overrides canonicalization."""
    to_element = canon or Element.from_diagram
    out = Element()
    for coeff, term in zip((1, -1, 1), ihx_terms(d, edge)):
        if term is not None:
            out = out + to_element(term).scale(coeff)
    return out


def _normalize_row(row: Element) -> Element:
    items = row.items()
    if items and items[0][1] < 0 and not row.is_two_torsion(items[0][0]):
        return -row
    return row


@dataclass
class RelationSet:
    rows: list[Element]
    basis: list[bytes]
    torsion: frozenset = frozenset()
    _hnf: list | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        keys = set(self.basis)
        for r in self.rows:
            keys.update(r.keys())
        self.basis = sorted(keys)
        self._index = {k: i for i, k in enumerate(self.basis)}

    def vector(self, e: Element) -> list[int]:
        v = [0] * len(self.basis)
        for k, c in e:
            if k not in self._index:
                raise KeyError("element has a term outside the ambient basis")
            v[self._index[k]] = c
        return v

    def element(self, v: Sequence[int]) -> Element:
        return Element({self.basis[i]: c for i, c in enumerate(v) if c}, self.torsion)

    def matrix(self) -> list[list[int]]:
        """Relation rows plus 2 * e_k for each two-torsion basis key."""
        rows = [self.vector(r) for r in self.rows]
        for k in sorted(self.torsion):
            if k in self._index:
                v = [0] * len(self.basis)
                v[self._index[k]] = 2
                rows.append(v)
        return rows

    def hermite(self) -> list[list[int]]:
        if self._hnf is None:
            self._hnf = hermite_basis(self.matrix())
        return self._hnf


def _relations_from(diagrams: Iterable[tuple[bytes, Diagram]], canon=None, torsion_of=None) -> RelationSet:
    rows: dict = {}
    basis = []
    torsion = set()
    for key, d in diagrams:
        basis.append(key)
        for edge in d.internal_edges():
            r = _normalize_row(ihx_relator(d, edge, canon))
            if r:
                rows[frozenset(r.items())] = r
                torsion |= r.torsion_keys
    if torsion_of:
        torsion |= {k for k in basis if torsion_of(k)}
    return RelationSet([rows[k] for k in sorted(rows, key=lambda s: sorted(s))], basis, frozenset(torsion))


def ihx_relations(basis: Sequence[CanonicalDiagram | bytes]) -> RelationSet:
    """IHX relators at every internal edge of every basis diagram."""
    cds = [b if isinstance(b, CanonicalDiagram) else CanonicalDiagram(b, _parity(b)) for b in basis]
    rs = _relations_from(((c.key, c.diagram()) for c in cds))
    rs.torsion = rs.torsion | {c.key for c in cds if c.two_torsion}
    return rs


def _parity(key: bytes) -> str:
    return canonicalize(decode_key(key))[0].parity


def ihx_closure(keys: Iterable[bytes]) -> list[CanonicalDiagram]:
    """Smallest set of classes containing ``keys`` and closed under IHX moves."""
    seen: dict[bytes, CanonicalDiagram] = {}
    queue = deque(keys)
    while queue:
        k = queue.popleft()
        if k in seen:
            continue
        d = decode_key(k)
        seen[k] = canonicalize(d)[0]
        for edge in d.internal_edges():
            for term in ihx_terms(d, edge)[1:]:
                if term is not None:
                    c, _ = canonicalize(term)
                    if c.key not in seen:
                        queue.append(c.key)
    return [seen[k] for k in sorted(seen)]


def empty_relations(basis: Sequence[CanonicalDiagram]) -> RelationSet:
    return RelationSet([], [c.key for c in basis], frozenset(c.key for c in basis if c.two_torsion))


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class SpaceReport:
    degree: int
    grading: str
    generators: int
    rank: int
    torsion: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "grading": self.grading,
            "generators": self.generators,
            "rank": self.rank,
            "torsion": list(self.torsion),
        }

    CSV_HEADER = ("degree", "grading", "generators", "rank", "torsion")

    def to_csv_row(self) -> list[str]:
        return [str(self.degree), self.grading, str(self.generators), str(self.rank),
                ";".join(map(str, self.torsion))]


def rank_and_torsion(basis: Sequence[CanonicalDiagram], relations: RelationSet,
                     degree: int = 0, grading: str = "vassiliev") -> SpaceReport:
    """Abelian group presented by the basis modulo the relation rows.

    Two-torsion basis classes enter as extra rows 2 * e_k, so their Z/2
    factors come out of the Smith form together with any IHX torsion.
    """
    mat = relations.matrix()
    invariants = smith_invariants(mat, len(relations.basis)) if mat else []
    rank = len(relations.basis) - len(invariants)
    torsion = tuple(sorted(x for x in invariants if x > 1))
    return SpaceReport(degree, grading, len(basis), rank, torsion)


def rank_by_elimination(relations: RelationSet) -> int:
    """Free rank via dense fraction-free elimination (independent of the Smith path)."""
    mat = relations.matrix()
    return len(relations.basis) - bareiss_rank(mat) if mat else len(relations.basis)


def reduce_mod(e: Element, relations: RelationSet) -> Element:
    """Canonical coset representative of ``e`` modulo the relation lattice."""
    if not e:
        return Element()
    v = relations.vector(e)
    return relations.element(reduce_vector(v, relations.hermite()))


def reduce_mod_ihx(e: Element) -> Element:
    """Reduce ``e`` against the IHX relators of the IHX-closure of its support."""
    if not e:
        return Element()
    rs = ihx_relations(ihx_closure(e.keys()))
    return reduce_mod(e, rs)


def space_report(degree: int, labels: Sequence[str], grading: str = "vassiliev",
                 distinct: bool = False, mod_ihx: bool = False) -> SpaceReport:
    if grading == "vassiliev":
        basis = generate_trees(degree, labels, "distinct" if distinct else "repeats")
    elif grading == "grope":
        basis = generate_graphs(degree, labels)
        if distinct:
            basis = [c for c in basis if len(set(c.diagram().labels())) == len(c.diagram().labels())]
    else:
        raise ValueError(f"unknown grading {grading!r}")
    rs = ihx_relations(basis) if mod_ihx else empty_relations(basis)
    return rank_and_torsion(basis, rs, degree, grading)
