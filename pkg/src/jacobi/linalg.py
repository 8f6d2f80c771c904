"""Exact integer linear algebra on lists of Python ints.

Matrices are lists of rows.  Nothing here uses floating point, so
coefficient growth is harmless apart from speed.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def _copy(rows: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, r)) for r in rows]


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    m = _copy(rows)
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, n_rows):
            a = m[r][col]
            row = m[r]
            top = m[rank]
            # exact division is guaranteed by Sylvester's identity
            m[r] = [(p * row[c] - a * top[c]) // prev for c in range(n_cols)]
        prev = p
        rank += 1
        if rank == n_rows:
            break
    return rank


def smith_invariants(rows: Sequence[Sequence[int]], n_cols: int | None = None) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form, in divisibility order."""
    m = [r for r in _copy(rows) if any(r)]
    if not m:
        return []
    n_rows, n_cols = len(m), len(m[0]) if n_cols is None else n_cols
    diag: list[int] = []
    t = 0
    while t < min(n_rows, n_cols):
        # pivot on the smallest nonzero absolute value in the trailing block
        best = None
        for i in range(t, n_rows):
            for j in range(t, n_cols):
                v = m[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        m[t], m[i] = m[i], m[t]
        if j != t:
            for row in m:
                row[t], row[j] = row[j], row[t]
        while True:
            p = m[t][t]
            done = True
            for i in range(t + 1, n_rows):
                if m[i][t]:
                    q = m[i][t] // p
                    if q:
                        top = m[t]
                        m[i] = [a - q * b for a, b in zip(m[i], top)]
                    if m[i][t]:
                        done = False
            for j in range(t + 1, n_cols):
                if m[t][j]:
                    q = m[t][j] // p
                    if q:
                        for row in m:
                            row[j] -= q * row[t]
                    if m[t][j]:
                        done = False
            if done:
                # divisibility: fold a non-divisible entry into the pivot row
                bad = next(
                    (i for i in range(t + 1, n_rows) for j in range(t + 1, n_cols) if m[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                m[t] = [a + b for a, b in zip(m[t], m[bad])]
                continue
            # move the smallest remainder into the pivot position
            cand = [(abs(m[i][t]), i, t) for i in range(t, n_rows) if m[i][t]]
            cand += [(abs(m[t][j]), t, j) for j in range(t, n_cols) if m[t][j]]
            _, i, j = min(cand)
            m[t], m[i] = m[i], m[t]
            if j != t:
                for row in m:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(m[t][t]))
        t += 1
    return diag


def hermite_basis(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returned rows are in echelon form with positive pivots and entries above
    each pivot reduced into ``[0, pivot)``.  The result depends only on the
    lattice, so it gives canonical coset representatives via :func:`reduce_vector`.
    """
    m = [r for r in _copy(rows) if any(r)]
    if not m:
        return []
    n_cols = len(m[0])
    r = 0
    for col in range(n_cols):
        live = [i for i in range(r, len(m)) if m[i][col]]
        if not live:
            continue
        # Euclid on the column
        while len(live) > 1:
            live.sort(key=lambda i: abs(m[i][col]))
            piv = live[0]
            for i in live[1:]:
                q = m[i][col] // m[piv][col]
                m[i] = [a - q * b for a, b in zip(m[i], m[piv])]
            live = [i for i in live if m[i][col]]
        piv = live[0]
        m[r], m[piv] = m[piv], m[r]
        if m[r][col] < 0:
            m[r] = [-a for a in m[r]]
        p = m[r][col]
        for i in range(r):
            q = m[i][col] // p
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
        r += 1
        m = m[:r] + [row for row in m[r:] if any(row)]
    return m[:r]


def reduce_vector(v: Sequence[int], basis: Matrix) -> list[int]:
    """Canonical representative of ``v`` modulo the lattice of a Hermite basis."""
    v = list(v)
    for row in basis:
        col = next(j for j, a in enumerate(row) if a)
        q = v[col] // row[col]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return v
