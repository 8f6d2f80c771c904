"""Brute-force reference implementations used only by the tests.

None of these share code with the package's canonical-form, Smith form or
matching routines; they enumerate directly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from math import prod

from jacobi.diagram import Diagram

_PERMS3 = list(permutations(range(3)))


def _parity(p) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inv % 2 else 1


def isomorphism_signs(d: Diagram, e: Diagram) -> set[int]:
    """Orientation signs of every label-preserving isomorphism ``d -> e``.

    An isomorphism is a bijection of trivalent vertices plus, at each vertex,
    a bijection of its three half-edges; its sign is the product of the
    parities of those bijections read against the cyclic orders.
    """
    if len(d.trivalent) != len(e.trivalent) or sorted(d.labels()) != sorted(e.labels()):
        return set()
    n = len(d.trivalent)
    lab_d, lab_e = d.label_of(), e.label_of()
    pd, pe = d.partner, e.partner
    out = set()
    if n == 0:
        # struts: one edge between two labelled ends
        (a, b), = d.edges
        (c, f), = e.edges
        if sorted([lab_d[a], lab_d[b]]) == sorted([lab_e[c], lab_e[f]]):
            out.add(1)
        return out
    for vperm in permutations(range(n)):
        for rots in product(_PERMS3, repeat=n):
            f = {}
            for i, v in enumerate(d.trivalent):
                w = e.trivalent[vperm[i]]
                for k in range(3):
                    f[v[k]] = w[rots[i][k]]
            ok = True
            for h, lab in d.univalent:
                image = pe[f[pd[h]]]
                if lab_e.get(image) != lab:
                    ok = False
                    break
                f[h] = image
            if not ok:
                continue
            if all(pe[f[a]] == f[b] for a, b in d.edges):
                out.add(prod(_parity(r) for r in rots))
    return out


def automorphism_signs(d: Diagram) -> set[int]:
    return isomorphism_signs(d, d)


def equivalent(d: Diagram, e: Diagram) -> set[int]:
    """Relative AS signs ``s`` with ``e = s * d`` (including the stored signs)."""
    return {s * d.sign * e.sign for s in isomorphism_signs(d, e)}


def rank_over_q(rows) -> int:
    """Plain Gaussian elimination over the rationals."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                q = m[r][c] / m[rank][c]
                m[r] = [a - q * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def strut_pairs(l: int) -> int:
    """Unordered pairs with repetition from ``l`` labels."""
    return sum(1 for i in range(l) for j in range(i, l))


def _matchings(items):
    if not items:
        yield []
        return
    a = items[0]
    for k in range(1, len(items)):
        rest = items[1:k] + items[k + 1:]
        for m in _matchings(rest):
            yield [(a, items[k])] + m


def connected_graphs(n_tri: int, n_uni: int, label: str = "1") -> list[Diagram]:
    """All unitrivalent graphs with the given vertex counts, up to isomorphism.

    Enumerates every perfect matching of the half-edges and keeps one
    representative per isomorphism class (via :func:`isomorphism_signs`).
    """
    from jacobi.diagram import StructuralError

    tri = tuple((3 * i, 3 * i + 1, 3 * i + 2) for i in range(n_tri))
    uni = tuple((3 * n_tri + j, label) for j in range(n_uni))
    halves = list(range(3 * n_tri + n_uni))
    reps: list[Diagram] = []
    for m in _matchings(halves):
        try:
            d = Diagram(tri, uni, tuple(m))
        except StructuralError:
            continue
        if any(isomorphism_signs(d, r) for r in reps):
            continue
        reps.append(d)
    return reps


def rank_bareiss(rows: list[list[int]]) -> int:
    """Rank by dense fraction-free (Bareiss) elimination over the integers."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, len(m)):
            m[r] = [(p * m[r][c] - m[r][col] * m[rank][c]) // prev for c in range(ncols)]
        prev = p
        rank += 1
    return rank
