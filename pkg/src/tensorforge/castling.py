"""Prehomogeneity of C^a1 x ... x C^ad under the product of general linear groups.

Decisions come from the N-invariant, reduction to the Castling-minimal
tuple, the finite-orbit list, and two elementary fallbacks (at most two
nontrivial factors; one factor at least the product of the others).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

DimTuple = tuple


def _check(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(a) for a in dims)
    if not dims:
        raise ValueError("need at least one dimension")
    if any(a < 1 for a in dims):
        raise ValueError(f"dimensions must be positive, got {dims}")
    return dims


def n_invariant(dims: Sequence[int]) -> int:
    """1 - d + sum a_i^2 - prod a_i."""
    dims = _check(dims)
    return 1 - len(dims) + sum(a * a for a in dims) - math.prod(dims)


def castling_transform(dims: Sequence[int], position: int) -> tuple[int, ...] | None:
    """Replace the entry at ``position`` (1-based) by prod(others) - entry; None if not positive."""
    dims = _check(dims)
    if not 1 <= position <= len(dims):
        raise IndexError(f"position {position} out of range 1..{len(dims)}")
    i = position - 1
    others = math.prod(dims[:i] + dims[i + 1 :])
    b = others - dims[i]
    if b < 1:
        return None
    return dims[:i] + (b,) + dims[i + 1 :]


def neighbours(dims: Sequence[int]) -> list[tuple[int, tuple[int, ...]]]:
    out = []
    for pos in range(1, len(dims) + 1):
        t = castling_transform(dims, pos)
        if t is not None:
            out.append((pos, t))
    return out


@dataclass(frozen=True)
class Step:
    position: int
    before: tuple
    after: tuple


def minimal_element(dims: Sequence[int]) -> tuple[tuple[int, ...], list[Step]]:
    """Apply product-decreasing transforms until none is left; return sorted result and trace."""
    cur = _check(dims)
    trace: list[Step] = []
    while True:
        p = math.prod(cur)
        down = [(pos, t) for pos, t in neighbours(cur) if math.prod(t) < p]
        if not down:
            return tuple(sorted(cur)), trace
        pos, nxt = down[0]
        trace.append(Step(pos, cur, nxt))
        cur = nxt


def bfs_minimum(dims: Sequence[int], limit: int | None = None) -> tuple[int, ...]:
    """Brute force: smallest-product tuple in the Castling class, searched up to ``limit``."""
    start = tuple(sorted(_check(dims)))
    limit = limit if limit is not None else math.prod(start)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for _, t in neighbours(cur):
            key = tuple(sorted(t))
            if key not in seen and math.prod(key) <= limit:
                seen.add(key)
                queue.append(key)
    return min(seen, key=lambda t: (math.prod(t), t))


def _finite_orbits(dims: tuple[int, ...]) -> tuple[bool, str]:
    big = sorted(a for a in dims if a > 1)
    if len(big) <= 2:
        return True, "at most two factors exceed 1: matrix pencil case"
    if len(big) == 3:
        a, b, c = big
        if (a, b) == (2, 2):
            return True, "finite orbits: (2,2,n)"
        if (a, b) == (2, 3) and c >= 3:
            return True, "finite orbits: (2,3,n)"
    return False, "not in the finite-orbit list"


def _n_rule(n: int, minimal: tuple[int, ...]) -> tuple[bool | None, str]:
    if n <= -1:
        return False, "N <= -1"
    if n in (0, 1):
        return True, "N in {0, 1}"
    if n >= 3:
        return True, "N >= 3"
    d = len(minimal)
    if d >= 4 and all(b >= 2 for b in minimal[-4:]):
        return True, "N = 2, minimal tuple has d >= 4 with four entries >= 2"
    if d >= 3 and all(b == 1 for b in minimal[:-3]) and minimal[-3] == 2 and minimal[-2] == minimal[-1]:
        k = minimal[-1]
        return k <= 3, f"N = 2, minimal tuple (1,...,1,2,{k},{k})"
    return None, "unclassified-by-theorem"


@dataclass(frozen=True)
class CastlingReport:
    input: tuple
    N: int
    minimal: tuple
    trace: list = field(default_factory=list)
    prehomogeneous: bool | None = None
    finite_orbits: bool = False
    rule: str = ""


def classify(dims: Sequence[int]) -> CastlingReport:
    dims = _check(dims)
    canon = tuple(sorted(dims))
    n = n_invariant(canon)
    minimal, trace = minimal_element(dims)
    finite, finite_rule = _finite_orbits(canon)
    if finite:
        return CastlingReport(dims, n, minimal, trace, True, True, finite_rule)
    if canon[-1] >= math.prod(canon[:-1]):
        return CastlingReport(dims, n, minimal, trace, True, False, "one factor at least the product of the others")
    verdict, rule = _n_rule(n, minimal)
    return CastlingReport(dims, n, minimal, trace, verdict, False, rule)
