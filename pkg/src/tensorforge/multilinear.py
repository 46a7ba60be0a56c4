"""Flattenings, multilinear rank, restrictions, Kronecker products, symmetrization.

Legs are numbered from 1, as in the mathematics; array axes from 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .tensor import Decomposition, StructuralError, Tensor, Term, tensor_from_terms

MultilinearRank = tuple


def _leg_axis(t: Tensor, leg: int) -> int:
    if not 1 <= leg <= t.order:
        raise StructuralError(f"leg {leg} out of range 1..{t.order}")
    return leg - 1


def flattening(t: Tensor, leg: int) -> np.ndarray:
    """a_leg x (product of the other legs) matrix, columns row-major over the rest."""
    ax = _leg_axis(t, leg)
    moved = np.moveaxis(t.data, ax, 0)
    return moved.reshape(t.shape[ax], -1)


def multilinear_rank(t: Tensor) -> MultilinearRank:
    if t.kind == "epspoly":
        raise TypeError("multilinear rank needs a field: rational or cyclotomic entries")
    return tuple(linalg.rank(flattening(t, k)) for k in range(1, t.order + 1))


@dataclass(frozen=True)
class RankOneCheck:
    status: str  # "rank-one", "not-rank-one" or "zero"
    factors: tuple | None = None

    def __bool__(self):
        return self.status == "rank-one"


def _first_nonzero(v) -> int:
    return next(i for i, x in enumerate(v) if x != 0)


def is_rank_one(t: Tensor) -> RankOneCheck:
    """Decide rank one and return normalized factors v_1, ..., v_d on success.

    Every factor but the last has its first nonzero coordinate equal to 1.
    """
    if t.is_zero():
        return RankOneCheck("zero")
    if any(r != 1 for r in multilinear_rank(t)):
        return RankOneCheck("not-rank-one")
    pivot = next(idx for idx, _ in t.nonzero())
    factors = []
    for ax in range(t.order):
        sl = list(pivot)
        sl[ax] = slice(None)
        factors.append(list(t.data[tuple(sl)]))
    for ax in range(t.order - 1):
        lead = factors[ax][_first_nonzero(factors[ax])]
        factors[ax] = [x / lead for x in factors[ax]]
    # the pivot entry equals the product of the factors' pivot coordinates
    scale = 1
    for ax in range(t.order - 1):
        scale = scale * factors[ax][pivot[ax]]
    last = factors[-1]
    factors[-1] = [x / scale for x in last]
    factors = tuple(tuple(v) for v in factors)
    rebuilt = tensor_from_terms(t.shape, Decomposition(t.shape, (Term(Fraction(1), factors),)))
    if rebuilt != t:  # pragma: no cover - multilinear rank (1,...,1) forces equality
        raise AssertionError("rank-one reconstruction failed")
    return RankOneCheck("rank-one", factors)


def apply_restriction(maps: Sequence, t: Tensor) -> Tensor:
    """(alpha_1 x ... x alpha_d)(t); the i-th map is a b_i x a_i matrix."""
    if len(maps) != t.order:
        raise StructuralError(f"{len(maps)} maps for an order-{t.order} tensor")
    data = t.data
    for ax, m in enumerate(maps):
        mat = np.array(m, dtype=object)
        if mat.ndim != 2 or mat.shape[1] != t.shape[ax]:
            raise StructuralError(f"map {ax + 1} has shape {mat.shape}, needs {t.shape[ax]} columns")
        data = np.moveaxis(np.tensordot(mat, data, axes=(1, ax)), 0, ax)
    return Tensor(data, t.kind)


def kronecker(t1: Tensor, t2: Tensor) -> Tensor:
    """Kronecker product; leg k pairs (i, j) into i * b_k + j."""
    if t1.order != t2.order:
        raise StructuralError(f"order mismatch {t1.order} vs {t2.order}")
    if t1.kind != t2.kind:
        raise TypeError(f"scalar kind mismatch {t1.kind} vs {t2.kind}")
    d = t1.order
    big = np.multiply.outer(t1.data, t2.data)
    perm = [x for k in range(d) for x in (k, d + k)]
    shape = tuple(a * b for a, b in zip(t1.shape, t2.shape))
    return Tensor(big.transpose(perm).reshape(shape), t1.kind)


def kron_vectors(u: Sequence, v: Sequence) -> tuple:
    return tuple(a * b for a in u for b in v)


def kronecker_decomposition(d1: Decomposition, d2: Decomposition) -> Decomposition:
    """Termwise Kronecker product: r1 * r2 terms for the Kronecker product tensor."""
    if len(d1.shape) != len(d2.shape):
        raise StructuralError("order mismatch")
    shape = tuple(a * b for a, b in zip(d1.shape, d2.shape))
    terms = tuple(
        Term(s.coeff * t.coeff, tuple(kron_vectors(u, v) for u, v in zip(s.vectors, t.vectors)))
        for s in d1.terms
        for t in d2.terms
    )
    return Decomposition(shape, terms)


def relabel_decomposition(d: Decomposition, perms: Sequence[Sequence[int]]) -> Decomposition:
    """Move coordinate i of leg k to position perms[k][i]."""
    terms = []
    for term in d.terms:
        vecs = []
        for v, p in zip(term.vectors, perms):
            out = [None] * len(v)
            for i, x in enumerate(v):
                out[p[i]] = x
            vecs.append(tuple(out))
        terms.append(Term(term.coeff, tuple(vecs)))
    return Decomposition(d.shape, tuple(terms))


def permute_legs(t: Tensor, perms: Sequence[Sequence[int]]) -> Tensor:
    """Relabel basis vectors leg by leg: index i of leg k goes to perms[k][i]."""
    data = t.data
    for ax, p in enumerate(perms):
        inverse = np.argsort(np.asarray(p))
        data = np.take(data, inverse, axis=ax)
    return Tensor(data, t.kind)


def symmetrize(t: Tensor) -> Tensor:
    """Average of the tensor over all permutations of its legs."""
    if len(set(t.shape)) != 1:
        raise StructuralError(f"symmetrize needs a cubical shape, got {t.shape}")
    perms = list(itertools.permutations(range(t.order)))
    acc = sum((np.transpose(t.data, p) for p in perms[1:]), t.data.copy())
    inv = Fraction(1, math.factorial(t.order))
    return Tensor(acc * inv, t.kind)


def is_symmetric(t: Tensor) -> bool:
    return len(set(t.shape)) == 1 and symmetrize(t) == t
