"""Dense exact linear algebra over GaussRat, for desk-scale matrices."""

from __future__ import annotations

from typing import Sequence

from crtv.scalars import GaussRat, ZERO


def mat_rank(rows: Sequence[Sequence[GaussRat]]) -> int:
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = m[rank][col].inverse()
        m[rank] = [x * inv for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def solve_linear(rows: Sequence[Sequence[GaussRat]],
                 rhs: Sequence[GaussRat]) -> list[GaussRat] | None:
    """One exact solution of A x = b, or None when inconsistent.

    Free variables are set to zero.
    """
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    if not m:
        return []
    ncols = len(rows[0])
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = m[rank][col].inverse()
        m[rank] = [x * inv for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, len(m)):
        if m[i][ncols]:
            return None
    x = [ZERO] * ncols
    for row, col in enumerate(pivots):
        x[col] = m[row][ncols]
    return x
