"""Orbits of GL2 x GL2 x GL2 on 2x2x2 tensors.

Multilinear rank separates every orbit except the two with full multilinear
rank; there the hyperdeterminant decides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from . import linalg
from .multilinear import is_rank_one, multilinear_rank
from .tensor import Decomposition, StructuralError, Tensor, Term, tensor_from_terms

LABELS = ("Zero", "RankOne", "Z1", "Z2", "Z3", "GenericRank2", "Wclass")

_PARTIAL = {(1, 2, 2): "Z1", (2, 1, 2): "Z2", (2, 2, 1): "Z3"}


def _check(t: Tensor) -> None:
    if t.shape != (2, 2, 2):
        raise StructuralError(f"expected shape (2, 2, 2), got {t.shape}")
    if t.kind != "rational":
        raise TypeError("2x2x2 classification works over the rationals")


def hyperdeterminant(t: Tensor) -> Fraction:
    """Cayley's degree-4 invariant of a 2x2x2 tensor."""
    _check(t)
    a = {(i, j, k): t.data[i, j, k] for i in (0, 1) for j in (0, 1) for k in (0, 1)}
    t000, t001, t010, t011 = a[0, 0, 0], a[0, 0, 1], a[0, 1, 0], a[0, 1, 1]
    t100, t101, t110, t111 = a[1, 0, 0], a[1, 0, 1], a[1, 1, 0], a[1, 1, 1]
    squares = (t000 * t111) ** 2 + (t001 * t110) ** 2 + (t010 * t101) ** 2 + (t011 * t100) ** 2
    pairs = (
        t000 * t001 * t110 * t111
        + t000 * t010 * t101 * t111
        + t000 * t011 * t100 * t111
        + t001 * t010 * t101 * t110
        + t001 * t011 * t110 * t100
        + t010 * t011 * t101 * t100
    )
    cross = t000 * t011 * t101 * t110 + t001 * t010 * t100 * t111
    return Fraction(squares - 2 * pairs + 4 * cross)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = isqrt(x.numerator), isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def _slices(t: Tensor, leg: int) -> tuple[np.ndarray, np.ndarray]:
    ax = leg - 1
    return np.take(t.data, 0, axis=ax), np.take(t.data, 1, axis=ax)


def _det2(m) -> Fraction:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def det_form(t: Tensor, leg: int = 1) -> tuple[Fraction, Fraction, Fraction]:
    """(q, r, s) with det(x0 A + x1 B) = q x0^2 + r x0 x1 + s x1^2 for the two slices A, B."""
    A, B = _slices(t, leg)
    q, s = _det2(A), _det2(B)
    r = _det2(A + B) - q - s
    return Fraction(q), Fraction(r), Fraction(s)


@dataclass(frozen=True)
class PencilReport:
    leg: int
    degenerate: bool
    discriminant: Fraction
    tangency: str  # transverse, tangent, contained-in-Q, point-off-Q, point-on-Q, empty
    form: tuple[Fraction, Fraction, Fraction]


def pencil_report(t: Tensor, leg: int) -> PencilReport:
    """How the pencil of slices along ``leg`` meets the quadric of singular 2x2 matrices."""
    _check(t)
    if leg not in (1, 2, 3):
        raise StructuralError("leg must be 1, 2 or 3")
    q, r, s = det_form(t, leg)
    disc = r * r - 4 * q * s
    A, B = _slices(t, leg)
    flat_rank = linalg.rank([list(A.flat), list(B.flat)])
    if flat_rank == 0:
        return PencilReport(leg, True, disc, "empty", (q, r, s))
    if flat_rank == 1:
        point = A if any(x != 0 for x in A.flat) else B
        tangency = "point-off-Q" if _det2(point) != 0 else "point-on-Q"
        return PencilReport(leg, True, disc, tangency, (q, r, s))
    if q == 0 and r == 0 and s == 0:
        tangency = "contained-in-Q"
    elif disc != 0:
        tangency = "transverse"
    else:
        tangency = "tangent"
    return PencilReport(leg, False, disc, tangency, (q, r, s))


@dataclass(frozen=True)
class Orbit222Class:
    label: str
    multilinear_rank: tuple
    complex_rank: int
    real_rank: int
    det: Fraction
    discriminant: Fraction | None = None
    decomposition: Decomposition | None = None
    pencils: tuple = field(default=())


def _binary_roots(q, r, s, root) -> list[tuple[Fraction, Fraction]]:
    """Projective roots (x0 : x1) of q x0^2 + r x0 x1 + s x1^2 given sqrt(disc)."""
    if q != 0:
        return [((-r + root) / (2 * q), Fraction(1)), ((-r - root) / (2 * q), Fraction(1))]
    # q = 0: x1 (r x0 + s x1) with r != 0 because the discriminant is nonzero
    return [(Fraction(1), Fraction(0)), (-s, r)]


def rank_two_decomposition(t: Tensor) -> Decomposition | None:
    """Two rank-one terms summing to t, when Det(t) is a nonzero rational square."""
    _check(t)
    q, r, s = det_form(t, 1)
    disc = r * r - 4 * q * s
    root = _rational_sqrt(disc) if disc != 0 else None
    if root is None:
        return None
    A, B = _slices(t, 1)
    mats = []
    for x0, x1 in _binary_roots(q, r, s, root):
        m = A * x0 + B * x1
        mats.append(Tensor(m))
    # each singular member of the pencil is a multiple of one rank-one slice
    ys = [is_rank_one(m) for m in mats]
    if not all(ys):
        return None
    cols = [[y.factors[0][i] * y.factors[1][j] for i in (0, 1) for j in (0, 1)] for y in ys]
    system = linalg.transpose(cols)
    xs = []
    for sl in (A, B):
        sol = linalg.solve(system, list(sl.flat))
        if sol is None:
            return None
        xs.append(sol)
    terms = []
    for rho, y in enumerate(ys):
        x = (xs[0][rho], xs[1][rho])
        terms.append(Term(Fraction(1), (x, y.factors[0], y.factors[1])))
    d = Decomposition((2, 2, 2), tuple(terms))
    if tensor_from_terms((2, 2, 2), d) != t:  # pragma: no cover - algebra guarantees this
        return None
    return d


def classify_222(t: Tensor) -> Orbit222Class:
    _check(t)
    mlr = multilinear_rank(t)
    det = hyperdeterminant(t)
    pencils = tuple(pencil_report(t, leg) for leg in (1, 2, 3))
    if mlr == (0, 0, 0):
        return Orbit222Class("Zero", mlr, 0, 0, det, pencils=pencils)
    if mlr == (1, 1, 1):
        cert = is_rank_one(t)
        d = Decomposition((2, 2, 2), (Term(Fraction(1), cert.factors),))
        return Orbit222Class("RankOne", mlr, 1, 1, det, decomposition=d, pencils=pencils)
    if mlr in _PARTIAL:
        return Orbit222Class(_PARTIAL[mlr], mlr, 2, 2, det, pencils=pencils)
    q, r, s = det_form(t, 1)
    disc = r * r - 4 * q * s
    if det != 0:
        real = 2 if det > 0 else 3
        return Orbit222Class(
            "GenericRank2", mlr, 2, real, det, discriminant=disc,
            decomposition=rank_two_decomposition(t), pencils=pencils,
        )
    return Orbit222Class("Wclass", mlr, 3, 3, det, discriminant=disc, pencils=pencils)


def real_rank_222(t: Tensor) -> int:
    """Rank over the reals; for full multilinear rank it is read off the sign of Det."""
    return classify_222(t).real_rank


# representatives of the seven orbits of C^2 x C^2 x C^2 (including zero)
def representatives() -> dict[str, Tensor]:
    def make(entries):
        return Tensor.from_entries((2, 2, 2), {idx: 1 for idx in entries})

    return {
        "Zero": make([]),
        "RankOne": make([(0, 0, 0)]),
        "Z1": make([(0, 0, 0), (0, 1, 1)]),
        "Z2": make([(0, 0, 0), (1, 0, 1)]),
        "Z3": make([(0, 0, 0), (1, 1, 0)]),
        "GenericRank2": make([(0, 0, 0), (1, 1, 1)]),
        "Wclass": make([(0, 0, 1), (0, 1, 0), (1, 0, 0)]),
    }
