"""Combinatorial Whitney towers and their intersection invariants.

A tower on ``l`` labelled boundary components is recorded by its Whitney
disks and its unpaired intersection points.  Disks and points are named by
brackets of component labels.  A point between sheets ``I`` and ``J``
contributes the tree obtained by joining the rooted trees of ``I`` and ``J``
along their roots.  A point between
``I`` and ``J`` has order ``order(I) + order(J) + 1``, which is the degree
of its tree; a tower whose lowest unpaired points have order ``n + 1`` has
order ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .diagram import Diagram, GeometricForest, StructuralError, tree_from_bracket
from .notation import format_bracket, parse_bracket
from .spaces import Element


def order(bracket) -> int:
    """Number of Whitney disks nested in ``bracket``; a base label has order 0."""
    if isinstance(bracket, tuple):
        return order(bracket[0]) + order(bracket[1]) + 1
    return 0


def labels_of(bracket) -> list[str]:
    if isinstance(bracket, tuple):
        return labels_of(bracket[0]) + labels_of(bracket[1])
    return [bracket]


def sub_brackets(bracket) -> list:
    """Every non-leaf sub-bracket, innermost first."""
    if not isinstance(bracket, tuple):
        return []
    return sub_brackets(bracket[0]) + sub_brackets(bracket[1]) + [bracket]


def _normalize(b):
    if isinstance(b, str):
        return parse_bracket(b) if b[:1] in "[(" else b
    if isinstance(b, (list, tuple)):
        if len(b) != 2:
            raise StructuralError(f"brackets pair exactly two sheets, got {b!r}")
        return (_normalize(b[0]), _normalize(b[1]))
    return str(b)


@dataclass(frozen=True)
class UnpairedPoint:
    a: object
    b: object
    sign: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _normalize(self.a))
        object.__setattr__(self, "b", _normalize(self.b))
        if self.sign not in (1, -1):
            raise StructuralError(f"point sign must be +1 or -1, got {self.sign}")

    @property
    def order(self) -> int:
        return order(self.a) + order(self.b) + 1


@dataclass(frozen=True)
class TowerEncoding:
    l: int
    disks: frozenset = field(default_factory=frozenset)
    points: tuple[UnpairedPoint, ...] = ()

    def __post_init__(self) -> None:
        disks = frozenset(_normalize(d) for d in self.disks)
        object.__setattr__(self, "disks", disks)
        object.__setattr__(self, "points", tuple(self.points))
        self.validate()

    @property
    def base(self) -> set[str]:
        return {str(i) for i in range(1, self.l + 1)}

    def _check_sheet(self, b) -> None:
        for lab in labels_of(b):
            if lab not in self.base:
                raise StructuralError(f"label {lab!r} is not a boundary component 1..{self.l}")
        for sub in sub_brackets(b):
            if sub not in self.disks:
                raise StructuralError(f"Whitney disk {format_bracket(sub)} is not in the tower")

    def validate(self) -> None:
        if self.l < 1:
            raise StructuralError("a tower needs at least one boundary component")
        for d in self.disks:
            if not isinstance(d, tuple):
                raise StructuralError(f"disk {d!r} must pair two sheets")
            self._check_sheet(d)
        for p in self.points:
            self._check_sheet(p.a)
            self._check_sheet(p.b)

    @property
    def order(self) -> float:
        """One less than the lowest point order (infinite for a clean tower)."""
        return min((p.order for p in self.points), default=float("inf")) - 1


def tree_of_point(p: UnpairedPoint) -> Diagram:
    return tree_from_bracket(p.a, p.b, p.sign)


def _check_orders(t: TowerEncoding, n: int | None) -> None:
    orders = {p.order for p in t.points}
    if n is not None:
        orders.add(n)
    if len(orders) > 1:
        raise StructuralError(f"unpaired points of mixed orders {sorted(orders)}")


def intersection_forest(t: TowerEncoding, n: int | None = None) -> GeometricForest:
    """Signed trees of the unpaired points, kept as a disjoint union.

    All points must have order ``n`` when it is given, and one common order otherwise.
    """
    _check_orders(t, n if t.points else None)
    return GeometricForest(tuple((p.sign, tree_of_point(p).with_sign(1)) for p in t.points))


def tau_hat(t: TowerEncoding, n: int | None = None) -> Element:
    """The forest summed into the tree group, where cancellation is allowed."""
    _check_orders(t, n if t.points else None)
    return Element.from_terms((1, tree_of_point(p)) for p in t.points)


def theorem1_witness() -> TowerEncoding:
    """An order-2 tower on four components whose invariant is an IHX relator."""
    pts = [
        UnpairedPoint("1", ("2", ("3", "4")), 1),
        UnpairedPoint("2", ("3", ("4", "1")), -1),
        UnpairedPoint("3", ("1", ("2", "4")), 1),
    ]
    disks = set()
    for p in pts:
        disks.update(sub_brackets(p.a))
        disks.update(sub_brackets(p.b))
    return TowerEncoding(4, frozenset(disks), tuple(pts))


def corollary_witness(a: str, b: str, c: str, d: str, l: int) -> TowerEncoding:
    """The three points whose trees form the IHX relator on leaves a, b, c about d."""
    pts = [
        UnpairedPoint(d, ((a, b), c), 1),
        UnpairedPoint(d, (a, (b, c)), -1),
        UnpairedPoint(d, ((c, a), b), 1),
    ]
    disks = set()
    for p in pts:
        disks.update(sub_brackets(p.b))
    return TowerEncoding(l, frozenset(disks), tuple(pts))


def _bracket_json(b):
    return format_bracket(b, "(")


def tower_to_json(t: TowerEncoding) -> dict:
    return {
        "l": t.l,
        "disks": sorted(_bracket_json(d) for d in t.disks),
        "points": [{"a": _bracket_json(p.a), "b": _bracket_json(p.b), "sign": p.sign} for p in t.points],
    }


def tower_from_json(obj: dict) -> TowerEncoding:
    try:
        pts = tuple(UnpairedPoint(p["a"], p["b"], p.get("sign", 1)) for p in obj["points"])
        return TowerEncoding(int(obj["l"]), frozenset(obj.get("disks", ())), pts)
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"malformed tower: {exc}") from None


def union(towers: Iterable[TowerEncoding]) -> TowerEncoding:
    towers = list(towers)
    l = max(t.l for t in towers)
    disks = frozenset().union(*(t.disks for t in towers))
    return TowerEncoding(l, disks, tuple(p for t in towers for p in t.points))
