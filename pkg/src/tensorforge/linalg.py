"""Exact linear algebra over any field whose elements support + - * / and == 0.

Matrices are lists of rows.  Nothing here rounds; there is no tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list


def _copy(rows: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in rows]


def _as_rows(m) -> list[list]:
    if hasattr(m, "tolist"):
        return m.tolist()
    return _copy(m)


def rank(m) -> int:
    """Rank by Gaussian elimination with full pivoting."""
    a = _as_rows(m)
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    live_rows = list(range(nrows))
    live_cols = list(range(ncols))
    r = 0
    while live_rows and live_cols:
        pivot = None
        for i in live_rows:
            row = a[i]
            for j in live_cols:
                if row[j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pi, pj = pivot
        live_rows.remove(pi)
        live_cols.remove(pj)
        prow = a[pi]
        inv = 1 / prow[pj] if not isinstance(prow[pj], int) else Fraction(1, prow[pj])
        for i in live_rows:
            f = a[i][pj]
            if f != 0:
                f = f * inv
                row = a[i]
                for j in live_cols:
                    if prow[j] != 0:
                        row[j] = row[j] - f * prow[j]
                row[pj] = 0
        r += 1
    return r


def rref(m) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    a = _as_rows(m)
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        lead = a[r][c]
        a[r] = [v / lead if not isinstance(v, int) else Fraction(v) / lead for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def nullspace(m, ncols: int | None = None, zero=Fraction(0), one=Fraction(1)) -> list[list]:
    """Basis of {x : m x = 0}; ``ncols`` is needed when m has no rows."""
    a = _as_rows(m)
    if not a:
        n = ncols or 0
        return [[one if i == j else zero for i in range(n)] for j in range(n)]
    n = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def left_nullspace(m, nrows: int | None = None, **kw) -> list[list]:
    a = _as_rows(m)
    if not a:
        return nullspace([], ncols=nrows or 0, **kw)
    return nullspace(transpose(a), **kw) if a[0] else nullspace([], ncols=len(a), **kw)


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def solve(m, b) -> list | None:
    """One solution of m x = b, or None if the system is inconsistent."""
    a = _as_rows(m)
    if not a:
        return None
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(red, pivots):
        x[pc] = row[n]
    return x


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def identity(n: int) -> list[list]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def det(m) -> Fraction:
    a = _as_rows(m)
    n = len(a)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        out *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * out
